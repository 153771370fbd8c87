// Command-line front end for the surrokit shared library. Everything
// numerical goes through the C API in surrokit.h; this file only adds
// argument parsing, CSV/SVG emission for its own outputs, and run
// manifests for byte-identical replay.

#include <surrokit.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct cli_error {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw cli_error{code, msg}; }

void check(srk_status st) {
    if (st == SRK_OK) return;
    fail(st == SRK_ERR_INPUT ? kExitInput : kExitNumeric, srk_last_error());
}

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_vector(const std::string& csv_list, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(csv_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            fail(kExitInput, what + ": cannot parse '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) fail(kExitInput, what + ": empty list");
    return out;
}

// RAII wrappers over the C handles.
template <typename T, void (*Free)(T*)>
struct handle {
    T* ptr = nullptr;
    handle() = default;
    explicit handle(T* p) : ptr(p) {}
    ~handle() { if (ptr) Free(ptr); }
    handle(const handle&) = delete;
    handle& operator=(const handle&) = delete;
    T** out() { return &ptr; }
    operator T*() const { return ptr; }
};
using space_h = handle<srk_space, srk_space_free>;
using design_h = handle<srk_design, srk_design_free>;
using base_h = handle<srk_base, srk_base_free>;
using model_h = handle<srk_model, srk_model_free>;

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(kExitInput, "cannot write '" + path + "'");
    out << body;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    write_text(path, os.str());
}

// Minimal polyline chart; enough for ROC curves and scans.
void write_svg(const std::string& path, const std::vector<double>& xs,
               const std::vector<std::vector<double>>& series,
               const std::vector<std::string>& colors, const std::string& title) {
    const int W = 640, H = 480, M = 50;
    double xmin = xs.front(), xmax = xs.back();
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& s : series)
        for (double v : s) {
            if (std::isfinite(v)) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    if (!(ymax > ymin)) { ymax = ymin + 1.0; }
    if (!(xmax > xmin)) { xmax = xmin + 1.0; }
    auto px = [&](double x) { return M + (W - 2 * M) * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return H - M - (H - 2 * M) * (y - ymin) / (ymax - ymin); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
       << "</text>\n"
       << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\""
       << H - 2 * M << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % colors.size()]
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(series[k][i])) continue;
            os << px(xs[i]) << ',' << py(series[k][i]) << ' ';
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    write_text(path, os.str());
}

// ---------------------------------------------------------------------
// Manifests

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_manifest(const std::string& command, const std::vector<std::string>& argv,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    if (outputs.empty() || argv.empty()) return; // replays skip manifests
    json j;
    j["tool"] = "surrokit";
    j["version"] = srk_version();
    j["command"] = command;
    j["argv"] = argv;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["timestamp"] = iso_timestamp();
    write_text(outputs.front() + ".manifest.json", j.dump(1) + "\n");
}

// ---------------------------------------------------------------------
// Shared option blocks

struct TestbedOpts {
    int pre = 1, post = 1, mesh_nodes = 20;
    double instability_scale = 25.0, failure_rate = 0.004, failure_offset = 400.0;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        srk_testbed_config def;
        srk_testbed_config_default(&def);
        pre = def.preprocessor_version;
        post = def.postprocessor_version;
        mesh_nodes = def.mesh_nodes;
        instability_scale = def.instability_scale;
        failure_rate = def.failure_rate;
        failure_offset = def.failure_offset;
        cmd->add_option("--pre", pre, "preprocessor version (1 unstable, 2 corrected)");
        cmd->add_option("--post", post, "postprocessor version (1 keeps W1 rows, 2 drops)");
        cmd->add_option("--mesh-nodes", mesh_nodes, "axial mesh node count");
        cmd->add_option("--instability-scale", instability_scale, "instability amplitude");
        cmd->add_option("--failure-rate", failure_rate, "silent failure probability");
        cmd->add_option("--failure-offset", failure_offset, "failure corruption offset");
        cmd->add_option("--manager-seed", seed, "code manager seed");
    }
    srk_testbed_config config() const {
        srk_testbed_config c;
        srk_testbed_config_default(&c);
        c.preprocessor_version = pre;
        c.postprocessor_version = post;
        c.mesh_nodes = mesh_nodes;
        c.instability_scale = instability_scale;
        c.failure_rate = failure_rate;
        c.failure_offset = failure_offset;
        c.seed = seed;
        return c;
    }
};

void load_space(const std::string& path, space_h& space) {
    if (path.empty())
        check(srk_space_default(space.out()));
    else
        check(srk_space_load_csv(path.c_str(), space.out()));
}

// A base fitted without an explicit space uses the built-in study domain
// when the column names match it, and the data range otherwise.
void resolve_fit_space(base_h& base, const std::string& space_path) {
    if (!space_path.empty()) {
        space_h space;
        check(srk_space_load_csv(space_path.c_str(), space.out()));
        check(srk_base_set_space(base, space));
        return;
    }
    space_h def;
    check(srk_space_default(def.out()));
    if (srk_space_dim(def) != srk_base_dim(base)) return;
    for (int j = 0; j < srk_base_dim(base); ++j)
        if (std::string(srk_base_column_name(base, j)) != srk_space_name(def, j)) return;
    check(srk_base_set_space(base, def));
}

std::vector<double> base_normalized_row(const srk_base* base, const srk_space* space, int i) {
    const int d = srk_base_dim(base);
    std::vector<double> x(d), u(d);
    check(srk_base_get(base, i, x.data(), nullptr));
    for (int j = 0; j < d; ++j) {
        double lo = 0.0, hi = 1.0;
        check(srk_space_bounds(space, j, &lo, &hi));
        u[j] = hi > lo ? (x[j] - lo) / (hi - lo) : 0.0;
    }
    return u;
}

// ---------------------------------------------------------------------
// Subcommand implementations

int cmd_design(const std::vector<std::string>& argv, const std::string& space_path, int n,
               std::uint64_t seed, int sweeps, const std::string& filter,
               const std::string& out) {
    space_h space;
    load_space(space_path, space);
    design_h design;
    check(srk_design_lhs_maximin(space, n, seed, sweeps, design.out()));

    bool geometry = filter == "pin-geometry";
    if (filter == "auto") {
        space_h def;
        check(srk_space_default(def.out()));
        geometry = srk_space_dim(def) == srk_space_dim(space);
        for (int j = 0; geometry && j < srk_space_dim(space); ++j)
            geometry = std::string(srk_space_name(space, j)) == srk_space_name(def, j);
    }
    if (geometry) {
        design_h filtered;
        check(srk_design_filter_geometry(design, filtered.out()));
        const int removed = srk_design_rows(design) - srk_design_rows(filtered);
        std::swap(design.ptr, filtered.ptr);
        std::cout << "design: " << srk_design_rows(design) << " rows (" << removed
                  << " removed by pin-geometry filter)\n";
    } else {
        std::cout << "design: " << srk_design_rows(design) << " rows\n";
    }
    check(srk_design_save_csv(design, out.c_str()));
    write_manifest("design", argv, space_path.empty() ? std::vector<std::string>{}
                                                      : std::vector<std::string>{space_path},
                   {out});
    return 0;
}

int cmd_run(const std::vector<std::string>& argv, const std::string& space_path,
            const TestbedOpts& tb, const std::string& design_path, const std::string& out) {
    space_h space;
    load_space(space_path, space);
    design_h design;
    check(srk_design_load_csv(space, design_path.c_str(), design.out()));
    const auto cfg = tb.config();
    base_h base;
    check(srk_testbed_run(space, &cfg, design, base.out()));
    check(srk_base_save_csv(base, out.c_str()));
    int flagged = 0;
    for (int i = 0; i < srk_base_size(base); ++i)
        if (srk_base_warnings(base, i)[0] != '\0') ++flagged;
    std::cout << "ran " << srk_design_rows(design) << " points; base has "
              << srk_base_size(base) << " rows, " << flagged << " carrying warnings\n";
    std::vector<std::string> inputs = {design_path};
    if (!space_path.empty()) inputs.push_back(space_path);
    write_manifest("run", argv, inputs, {out});
    return 0;
}

int cmd_fit(const std::vector<std::string>& argv, const std::string& method,
            const std::string& base_path, const std::string& space_path,
            const srk_kriging_config& kc, const srk_kernel_config& kr,
            const srk_mlp_config& mc, const std::vector<int>& widths,
            const std::string& out) {
    base_h base;
    check(srk_base_load_csv(base_path.c_str(), base.out()));
    resolve_fit_space(base, space_path);

    model_h model;
    if (method == "kriging") {
        check(srk_fit_kriging(base, &kc, model.out()));
    } else if (method == "kernel") {
        check(srk_fit_kernel(base, &kr, model.out()));
    } else if (method == "mlp") {
        srk_mlp_config c = mc;
        if (!widths.empty()) {
            c.widths = widths.data();
            c.n_widths = static_cast<int>(widths.size());
        }
        check(srk_fit_mlp(base, &c, model.out()));
    } else {
        fail(kExitInput, "unknown method '" + method + "' (kriging|kernel|mlp)");
    }
    check(srk_model_save(model, out.c_str()));

    std::vector<char> buf(8192);
    check(srk_model_summary(model, buf.data(), buf.size()));
    std::cout << buf.data();
    write_text(out + ".summary.txt", buf.data());

    std::vector<std::string> inputs = {base_path};
    if (!space_path.empty()) inputs.push_back(space_path);
    write_manifest("fit", argv, inputs, {out, out + ".summary.txt"});
    return 0;
}

int cmd_diagnose(const std::vector<std::string>& argv, const std::string& model_path,
                 const std::string& test_path, const std::string& prefix) {
    model_h model;
    check(srk_model_load(model_path.c_str(), model.out()));
    base_h test;
    check(srk_base_load_csv(test_path.c_str(), test.out()));

    srk_report rep{};
    check(srk_diagnose(model, test, &rep));

    std::ostringstream txt;
    txt << "method: " << srk_model_method(model) << "\n"
        << "test points: " << srk_base_size(test) << "\n"
        << "sd_output: " << fmt_double(rep.sd_output) << "\n"
        << "RMSE: " << fmt_double(rep.rmse) << "\n"
        << "Q2: " << fmt_double(rep.q2) << "\n"
        << "q_0.90: " << fmt_double(rep.q90) << "\n"
        << "q_0.95: " << fmt_double(rep.q95) << "\n";
    if (rep.has_cir) txt << "CIR: " << fmt_double(rep.cir) << "\n";
    txt << "rmse_hat: " << fmt_double(rep.rmse_hat) << "\n"
        << "q2_hat: " << fmt_double(rep.q2_hat) << "\n";
    write_text(prefix + "report.txt", txt.str());
    std::cout << txt.str();

    std::vector<std::vector<std::string>> rows = {
        {"rmse", fmt_double(rep.rmse)},
        {"q2", fmt_double(rep.q2)},
        {"q_0.90", fmt_double(rep.q90)},
        {"q_0.95", fmt_double(rep.q95)},
        {"cir", rep.has_cir ? fmt_double(rep.cir) : ""},
        {"sd_output", fmt_double(rep.sd_output)},
        {"rmse_hat", fmt_double(rep.rmse_hat)},
        {"q2_hat", fmt_double(rep.q2_hat)},
    };
    write_csv(prefix + "report.csv", {"metric", "value"}, rows);

    const int d = srk_base_dim(test);
    std::vector<std::vector<std::string>> pv;
    std::vector<double> x(d);
    for (int i = 0; i < srk_base_size(test); ++i) {
        double y = 0.0, mean = 0.0, sd = 0.0;
        check(srk_base_get(test, i, x.data(), &y));
        check(srk_model_predict(model, x.data(), d, &mean, &sd));
        pv.push_back({std::to_string(i), fmt_double(y), fmt_double(mean), fmt_double(sd)});
    }
    write_csv(prefix + "pred_vs_true.csv", {"row", "observed", "predicted", "sd"}, pv);

    write_manifest("diagnose", argv, {model_path, test_path},
                   {prefix + "report.txt", prefix + "report.csv",
                    prefix + "pred_vs_true.csv"});
    return 0;
}

int cmd_outliers(const std::vector<std::string>& argv, const std::string& model_path,
                 const std::string& base_path, int top_k, const std::string& out) {
    model_h model;
    check(srk_model_load(model_path.c_str(), model.out()));
    base_h base;
    check(srk_base_load_csv(base_path.c_str(), base.out()));
    const int n = srk_model_train_size(model);
    if (srk_base_size(base) != n)
        fail(kExitInput, "base has " + std::to_string(srk_base_size(base)) +
                             " rows but the model was fitted on " + std::to_string(n));

    std::vector<int> idx(n);
    std::vector<double> z(n);
    check(srk_outliers(model, idx.data(), z.data()));

    const int d = srk_base_dim(base);
    const int k = top_k > 0 ? std::min(top_k, n) : n;
    std::vector<std::string> header = {"rank", "row", "normalized_error", "output"};
    for (int j = 0; j < d; ++j) header.push_back(srk_base_column_name(base, j));
    std::vector<std::vector<std::string>> rows;
    std::vector<double> x(d);
    for (int r = 0; r < k; ++r) {
        double y = 0.0;
        check(srk_base_get(base, idx[r], x.data(), &y));
        std::vector<std::string> row = {std::to_string(r + 1), std::to_string(idx[r]),
                                        fmt_double(z[r]), fmt_double(y)};
        for (int j = 0; j < d; ++j) row.push_back(fmt_double(x[j]));
        rows.push_back(std::move(row));
    }
    write_csv(out, header, rows);
    std::cout << "top normalized errors:";
    for (int r = 0; r < std::min(5, k); ++r) std::cout << " " << fmt_double(z[r]);
    std::cout << "\n";
    write_manifest("outliers", argv, {model_path, base_path}, {out});
    return 0;
}

int cmd_scan(const std::vector<std::string>& argv, const std::string& space_path,
             const TestbedOpts& tb, const std::string& a_str, const std::string& b_str,
             int count, const std::string& model_path, const std::string& out, bool svg) {
    space_h space;
    load_space(space_path, space);
    const int d = srk_space_dim(space);
    const auto a = parse_vector(a_str, "--a");
    const auto b = parse_vector(b_str, "--b");
    if (static_cast<int>(a.size()) != d || static_cast<int>(b.size()) != d)
        fail(kExitInput, "--a/--b must have " + std::to_string(d) + " coordinates");

    design_h design;
    check(srk_design_segment(space, a.data(), b.data(), d, count, design.out()));
    const auto cfg = tb.config();
    base_h base;
    check(srk_testbed_run(space, &cfg, design, base.out()));

    model_h model;
    if (!model_path.empty()) check(srk_model_load(model_path.c_str(), model.out()));

    double ab2 = 0.0;
    for (int j = 0; j < d; ++j) ab2 += (b[j] - a[j]) * (b[j] - a[j]);

    std::vector<std::string> header = {"t"};
    for (int j = 0; j < d; ++j) header.push_back(srk_space_name(space, j));
    header.push_back("output");
    header.push_back("warnings");
    if (model.ptr) {
        header.push_back("pred_mean");
        header.push_back("pred_lo95");
        header.push_back("pred_hi95");
    }

    std::vector<std::vector<std::string>> rows;
    std::vector<double> ts, ys, means;
    std::vector<double> x(d);
    for (int i = 0; i < srk_base_size(base); ++i) {
        double y = 0.0;
        check(srk_base_get(base, i, x.data(), &y));
        const auto u = base_normalized_row(base, space, i);
        double t = 0.0;
        for (int j = 0; j < d; ++j) t += (u[j] - a[j]) * (b[j] - a[j]);
        t /= ab2;
        std::vector<std::string> row = {fmt_double(t)};
        for (int j = 0; j < d; ++j) row.push_back(fmt_double(x[j]));
        row.push_back(fmt_double(y));
        row.push_back(srk_base_warnings(base, i));
        ts.push_back(t);
        ys.push_back(y);
        if (model.ptr) {
            double mean = 0.0, sd = 0.0;
            check(srk_model_predict(model, x.data(), d, &mean, &sd));
            row.push_back(fmt_double(mean));
            row.push_back(fmt_double(mean - 1.96 * sd));
            row.push_back(fmt_double(mean + 1.96 * sd));
            means.push_back(mean);
        }
        rows.push_back(std::move(row));
    }
    write_csv(out, header, rows);

    std::vector<std::string> outputs = {out};
    if (svg) {
        std::vector<std::vector<double>> series = {ys};
        std::vector<std::string> colors = {"black", "steelblue"};
        if (!means.empty()) series.push_back(means);
        write_svg(out + ".svg", ts, series, colors, "code response along segment");
        outputs.push_back(out + ".svg");
    }
    std::cout << "scan: " << rows.size() << " points written\n";
    std::vector<std::string> inputs;
    if (!space_path.empty()) inputs.push_back(space_path);
    if (!model_path.empty()) inputs.push_back(model_path);
    write_manifest("scan", argv, inputs, outputs);
    return 0;
}

int cmd_roc(const std::vector<std::string>& argv, const std::string& model_path,
            const std::string& test_path, double threshold, const std::string& out,
            bool svg) {
    model_h model;
    check(srk_model_load(model_path.c_str(), model.out()));
    base_h test;
    check(srk_base_load_csv(test_path.c_str(), test.out()));

    std::vector<double> taus(402), fprs(402), tprs(402);
    int n_points = 0;
    double auc = 0.0;
    check(srk_roc(model, test, threshold, 0, 0, 0, taus.data(), fprs.data(), tprs.data(),
                  &n_points, &auc));

    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < n_points; ++i)
        rows.push_back({fmt_double(taus[i]), fmt_double(fprs[i]), fmt_double(tprs[i])});
    write_csv(out, {"tau", "false_unsafe_rate", "true_unsafe_rate"}, rows);

    char line[64];
    std::snprintf(line, sizeof(line), "AUC: %.4f\n", auc);
    std::cout << line;

    std::vector<std::string> outputs = {out};
    if (svg) {
        std::vector<double> xs(fprs.begin(), fprs.begin() + n_points);
        std::vector<double> ys(tprs.begin(), tprs.begin() + n_points);
        write_svg(out + ".svg", xs, {ys}, {"firebrick"}, "ROC");
        outputs.push_back(out + ".svg");
    }
    write_manifest("roc", argv, {model_path, test_path}, outputs);
    return 0;
}

int run_command(const std::vector<std::string>& argv, bool with_manifest);

int cmd_verify(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) fail(kExitInput, "cannot open manifest '" + manifest_path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(kExitInput, std::string("manifest parse error: ") + e.what());
    }
    const auto argv = j.at("argv").get<std::vector<std::string>>();
    const auto outputs = j.at("outputs").get<std::vector<std::string>>();

    const fs::path tmp =
        fs::temp_directory_path() /
        ("surrokit-verify-" + std::to_string(std::chrono::steady_clock::now()
                                                 .time_since_epoch()
                                                 .count()));
    fs::create_directories(tmp);

    std::vector<std::string> new_argv;
    std::vector<std::pair<std::string, std::string>> mapping;
    for (const auto& tok : argv) {
        std::string replaced = tok;
        for (const auto& o : outputs) {
            if (tok == o) {
                replaced = (tmp / fs::path(o).filename()).string();
                mapping.emplace_back(o, replaced);
            }
        }
        new_argv.push_back(replaced);
    }

    const int rc = run_command(new_argv, false);
    if (rc != 0) {
        fs::remove_all(tmp);
        fail(kExitNumeric, "replay exited with code " + std::to_string(rc));
    }

    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return f ? s.str() : std::string("\x01unreadable");
    };
    bool all_ok = true;
    for (const auto& [orig, fresh] : mapping) {
        const bool same = slurp(orig) == slurp(fresh);
        std::cout << (same ? "ok   " : "DIFF ") << orig << "\n";
        all_ok = all_ok && same;
    }
    fs::remove_all(tmp);
    if (!all_ok) fail(kExitNumeric, "verification found differing outputs");
    std::cout << "verified " << mapping.size() << " outputs\n";
    return 0;
}

// ---------------------------------------------------------------------

int run_command(const std::vector<std::string>& argv, bool with_manifest) {
    CLI::App app{"surrokit - surrogate metamodeling toolkit"};
    app.require_subcommand(1);

    // design
    auto* design = app.add_subcommand("design", "generate an LHS-maximin design");
    std::string d_space, d_filter = "auto", d_out = "design.csv";
    int d_n = 100, d_sweeps = 10;
    std::uint64_t d_seed = 0;
    design->add_option("--space", d_space, "space CSV (name,min,max); default built-in");
    design->add_option("--n", d_n, "number of points")->required();
    design->add_option("--seed", d_seed, "RNG seed");
    design->add_option("--sweeps", d_sweeps, "maximin improvement sweeps");
    design->add_option("--filter", d_filter, "auto|pin-geometry|none");
    design->add_option("--out", d_out, "output CSV")->required();

    // run
    auto* runc = app.add_subcommand("run", "run the code manager on a design");
    std::string r_space, r_design, r_out = "base.csv";
    TestbedOpts r_tb;
    runc->add_option("--space", r_space, "space CSV; default built-in");
    runc->add_option("--design", r_design, "design CSV")->required();
    runc->add_option("--out", r_out, "output base CSV")->required();
    r_tb.attach(runc);

    // fit
    auto* fit = app.add_subcommand("fit", "fit a metamodel to a learning base");
    std::string f_method, f_base, f_space, f_out = "model.json";
    fit->add_option("--method", f_method, "kriging|kernel|mlp")->required();
    fit->add_option("--base", f_base, "learning base CSV")->required();
    fit->add_option("--space", f_space, "space CSV for normalization bounds");
    fit->add_option("--out", f_out, "output model file")->required();
    srk_kriging_config kc;
    srk_kriging_config_default(&kc);
    srk_kernel_config kr;
    srk_kernel_config_default(&kr);
    srk_mlp_config mc;
    srk_mlp_config_default(&mc);
    std::vector<int> f_widths;
    fit->add_option("--seed", kc.seed, "fit seed (kriging, mlp)");
    fit->add_option("--subsample", kc.subsample_size, "kriging step-1 subsample size");
    fit->add_option("--restarts", kc.restarts, "optimizer restarts (kriging, mlp)");
    fit->add_option("--max-evals", kc.max_evals, "kriging optimizer budget per restart");
    fit->add_option("--m", kr.m, "kernel smoothness order");
    fit->add_option("--lambda", kr.lambda, "kernel ridge parameter (<0: GCV)");
    fit->add_flag("--classical-gcv", kr.classical_gcv, "use the squared GCV variant");
    fit->add_option("--epochs", mc.epochs, "mlp training epochs");
    fit->add_option("--batch-size", mc.batch_size, "mlp minibatch size");
    fit->add_option("--learning-rate", mc.learning_rate, "mlp learning rate");
    fit->add_option("--widths", f_widths, "mlp candidate hidden widths");

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "evaluate a model on a test base");
    std::string g_model, g_test, g_prefix = "diag_";
    diag->add_option("--model", g_model, "model file")->required();
    diag->add_option("--test", g_test, "test base CSV")->required();
    diag->add_option("--out-prefix", g_prefix, "output file prefix");

    // outliers
    auto* outl = app.add_subcommand("outliers", "rank learning-base outliers");
    std::string o_model, o_base, o_out = "outliers.csv";
    int o_topk = 0;
    outl->add_option("--model", o_model, "model file")->required();
    outl->add_option("--base", o_base, "learning base CSV (same rows the model saw)")
        ->required();
    outl->add_option("--top-k", o_topk, "rows to keep (0 = all)");
    outl->add_option("--out", o_out, "ranking CSV")->required();

    // scan
    auto* scan = app.add_subcommand("scan", "run the manager along a segment");
    std::string s_space, s_a, s_b, s_model, s_out = "scan.csv";
    int s_count = 97;
    bool s_svg = false;
    TestbedOpts s_tb;
    scan->add_option("--space", s_space, "space CSV; default built-in");
    scan->add_option("--a", s_a, "segment start, normalized coords, comma-separated")
        ->required();
    scan->add_option("--b", s_b, "segment end, normalized coords")->required();
    scan->add_option("--count", s_count, "points along the segment");
    scan->add_option("--model", s_model, "optional model file for prediction bands");
    scan->add_option("--out", s_out, "scan CSV")->required();
    scan->add_flag("--svg", s_svg, "also write an SVG chart");
    s_tb.attach(scan);

    // roc
    auto* rocc = app.add_subcommand("roc", "safety-classifier ROC and AUC");
    std::string c_model, c_test, c_out = "roc.csv";
    double c_threshold = 300.0;
    bool c_svg = false;
    rocc->add_option("--model", c_model, "model file")->required();
    rocc->add_option("--test", c_test, "test base CSV")->required();
    rocc->add_option("--threshold", c_threshold, "viability threshold");
    rocc->add_option("--out", c_out, "ROC CSV")->required();
    rocc->add_flag("--svg", c_svg, "also write an SVG chart");

    // verify
    auto* ver = app.add_subcommand("verify", "replay a manifest and diff its outputs");
    std::string v_manifest;
    ver->add_option("manifest", v_manifest, "manifest JSON path")->required();

    std::vector<const char*> cargv = {"surrokit"};
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            (void)app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return kExitInput;
    }

    const auto man = with_manifest ? argv : std::vector<std::string>{};
    if (design->parsed())
        return cmd_design(man, d_space, d_n, d_seed, d_sweeps, d_filter, d_out);
    if (runc->parsed()) return cmd_run(man, r_space, r_tb, r_design, r_out);
    if (fit->parsed())
        return cmd_fit(man, f_method, f_base, f_space, kc, kr, mc, f_widths, f_out);
    if (diag->parsed()) return cmd_diagnose(man, g_model, g_test, g_prefix);
    if (outl->parsed()) return cmd_outliers(man, o_model, o_base, o_topk, o_out);
    if (scan->parsed())
        return cmd_scan(man, s_space, s_tb, s_a, s_b, s_count, s_model, s_out, s_svg);
    if (rocc->parsed()) return cmd_roc(man, c_model, c_test, c_threshold, c_out, c_svg);
    if (ver->parsed()) return cmd_verify(v_manifest);
    return kExitInput;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_command(args, true);
    } catch (const cli_error& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
