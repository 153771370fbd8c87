// Acceptance suite: every release criterion in one binary, one PASS/FAIL
// line each. Tolerances are pinned here, not configurable. Exit code is
// the number of failed criteria.

#include "diagnostics.hpp"
#include "doe.hpp"
#include "kernelreg.hpp"
#include "kriging.hpp"
#include "learning_base.hpp"
#include "model_io.hpp"
#include "neuralnet.hpp"
#include "stats.hpp"
#include "support/oracles.hpp"
#include "testbed.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

using namespace surrokit;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s] %-28s %s\n", number, pass ? "PASS" : "FAIL", name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

covariance::CovarianceParams make_params(int d, double ell, double alpha, double sigma2) {
    covariance::CovarianceParams p;
    p.ell.ell = Eigen::VectorXd::Constant(d, ell);
    p.alpha = alpha;
    p.sigma2 = sigma2;
    return p;
}

// ------------------------------------------------------------------
// Shared testbed study: ten paired v1/v2 bases from the same designs,
// with the manager seed screened so each v1 learning base carries
// exactly two silent failures.

struct Trial {
    LearningBase learn_v1, test_v1, learn_v2, test_v2;
    std::uint64_t design_seed = 0, manager_seed = 0;
};

struct Study {
    std::vector<Trial> trials;
    std::vector<model::FittedModel> krig_v1, krig_v2, kern_v1, kern_v2, mlp_v1, mlp_v2;
};

constexpr int kLearnN = 800;
constexpr int kTestN = 400;
constexpr int kTrials = 10;

// Study noise level: at scale 40 the residual v2 instability is about 8%
// of the output spread, the same noise-to-signal regime as the studied
// code, where a common irreducible floor keeps the three methods within
// comparable range of each other.
constexpr double kStudyInstabilityScale = 40.0;

kriging::KrigingConfig accept_kriging_config(std::uint64_t seed) {
    kriging::KrigingConfig cfg;
    cfg.subsample_size = 240;
    cfg.restarts = 2;
    cfg.max_evals = 500;
    cfg.seed = seed;
    return cfg;
}

neuralnet::MlpConfig accept_mlp_config(std::uint64_t seed) {
    neuralnet::MlpConfig cfg;
    cfg.seed = seed;
    cfg.restarts = 3;
    cfg.epochs = 3000;
    cfg.learning_rate = 0.015;
    return cfg;
}

const std::vector<int> kMlpWidths = {8, 16};

int count_failures(const LearningBase& base) {
    int k = 0;
    for (const auto& w : base.warnings)
        if (!w.empty()) ++k;
    return k;
}

Trial build_trial(std::uint64_t design_seed) {
    const auto space = doe::InputSpace::default_pin_study();
    const auto learn_design = doe::feasibility_filter(
        doe::lhs_maximin(space, kLearnN, design_seed, 2), doe::pin_geometry_feasible);
    const auto test_design = doe::feasibility_filter(
        doe::lhs_maximin(space, kTestN, stats::splitmix64(design_seed ^ 0xbeef), 2),
        doe::pin_geometry_feasible);

    testbed::CodeManagerConfig v1;
    v1.instability_scale = kStudyInstabilityScale;
    Trial t;
    t.design_seed = design_seed;
    // Screen the manager seed until exactly two failures land in the
    // learning base (the outlier-detection scenario under study).
    for (std::uint64_t m = design_seed * 1000;; ++m) {
        v1.seed = m;
        const auto candidate = testbed::run_design(space, v1, learn_design);
        if (count_failures(candidate) == 2) {
            t.learn_v1 = candidate;
            t.manager_seed = m;
            break;
        }
    }
    t.test_v1 = testbed::run_design(space, v1, test_design);

    testbed::CodeManagerConfig v2 = v1;
    v2.preprocessor_version = 2;
    v2.postprocessor_version = 2;
    t.learn_v2 = testbed::run_design(space, v2, learn_design);
    t.test_v2 = testbed::run_design(space, v2, test_design);
    return t;
}

Study& study() {
    static std::optional<Study> s;
    if (s) return *s;
    s.emplace();
    for (int k = 0; k < kTrials; ++k) {
        std::printf("  [study] trial %d/%d: building bases and fitting models...\n", k + 1,
                    kTrials);
        std::fflush(stdout);
        Trial t = build_trial(101 + k);
        const std::uint64_t fs = 7000 + k;
        s->krig_v1.push_back(model::fit_kriging(t.learn_v1, accept_kriging_config(fs)));
        s->krig_v2.push_back(model::fit_kriging(t.learn_v2, accept_kriging_config(fs)));
        s->kern_v1.push_back(model::fit_kernel(t.learn_v1, {}));
        s->kern_v2.push_back(model::fit_kernel(t.learn_v2, {}));
        s->mlp_v1.push_back(model::fit_mlp(t.learn_v1, kMlpWidths, accept_mlp_config(fs)));
        s->mlp_v2.push_back(model::fit_mlp(t.learn_v2, kMlpWidths, accept_mlp_config(fs)));
        s->trials.push_back(std::move(t));
    }
    return *s;
}

double test_rmse(const model::FittedModel& m, const LearningBase& test) {
    Eigen::VectorXd pred(test.n());
    for (int i = 0; i < test.n(); ++i) pred[i] = m.predict(test.X.row(i)).mean;
    return diagnostics::rmse(pred, test.y);
}

double test_auc(const model::FittedModel& m, const LearningBase& test) {
    Eigen::VectorXd pred(test.n()), sds(test.n());
    for (int i = 0; i < test.n(); ++i) {
        const auto p = m.predict(test.X.row(i));
        pred[i] = p.mean;
        sds[i] = p.sd;
    }
    return diagnostics::roc(pred, sds, test.y, diagnostics::default_tau_grid()).auc;
}

// ------------------------------------------------------------------

void criterion_1_loo_oracle() {
    double worst = 0.0;
    bool pass = true;
    for (int k = 0; k < 20; ++k) {
        const int n = 10 + (k * 7) % 41;     // up to 50
        const int d = 1 + k % 5;
        const auto X = oracles::random_design(n, d, 3000 + k);
        const auto y = oracles::random_vector(n, 3100 + k, 2.0);
        const double ell = 0.25 + 0.05 * (k % 7);
        const double alpha = (k % 3 == 0) ? 0.0 : 0.03 * (k % 4 + 1);
        const double sigma2 = 0.5 + 0.25 * (k % 5);

        const auto m = kriging::fit_with_params(X, y, make_params(d, ell, alpha, sigma2));
        const auto [errors, variances] = m.loo_errors();
        const auto refit = oracles::kriging_refit_loo(
            X, y, Eigen::VectorXd::Constant(d, ell), alpha, sigma2);
        const double scale_e = std::max(1.0, refit.errors.cwiseAbs().maxCoeff());
        const double scale_v = std::max(1.0, refit.variances.cwiseAbs().maxCoeff());
        worst = std::max(worst, (errors - refit.errors).cwiseAbs().maxCoeff() / scale_e);
        worst = std::max(worst,
                         (variances - refit.variances).cwiseAbs().maxCoeff() / scale_v);

        kernelreg::KernelConfig kc;
        kc.lambda = 1e-4 * (1 + k % 5);
        const auto km = kernelreg::fit(X, y, kc);
        const Eigen::VectorXd kern_loo = km.loo_errors();
        const Eigen::VectorXd kern_refit = oracles::kernel_refit_loo(X, y, 2, kc.lambda);
        const double scale_k = std::max(1.0, kern_refit.cwiseAbs().maxCoeff());
        worst = std::max(worst, (kern_loo - kern_refit).cwiseAbs().maxCoeff() / scale_k);
    }
    pass = worst < 1e-6;
    report(1, "LOO oracle equivalence", pass,
           "max relative deviation " + std::to_string(worst) + " over 20 instances");
}

void criterion_2_profile_identity() {
    double worst = 0.0;
    for (int inst = 0; inst < 5; ++inst) {
        const int n = 12 + 6 * inst;
        const int d = 1 + inst % 3;
        const auto X = oracles::random_design(n, d, 4000 + inst);
        const auto y = oracles::random_vector(n, 4100 + inst);
        const double alpha_tilde = 0.01 * (inst + 1);
        const Eigen::VectorXd ell = Eigen::VectorXd::Constant(d, 0.3 + 0.1 * inst);
        covariance::LengthScales ls;
        ls.ell = ell;
        const auto prof = kriging::make_profile(X, y, ls, alpha_tilde);
        for (int k = 0; k < 20; ++k) {
            const double alpha = 1e-6 * std::pow(10.0, 6.5 * k / 19.0);
            const double dense = oracles::dense_nll(X, y, ell, alpha);
            const double rel = std::abs(prof.value(alpha) - dense) /
                               std::max(1.0, std::abs(dense));
            worst = std::max(worst, rel);
        }
    }
    report(2, "SVD profile identity", worst < 1e-6,
           "max relative deviation " + std::to_string(worst) + " over 5x20 points");
}

void criterion_3_interpolation() {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const int n = 8 + 4 * k;
        // d >= 2 keeps the lambda = 0 Gram systems numerically regular;
        // one-dimensional interpolation at n ~ 40 is singular at machine
        // precision and outside the toolkit's use envelope.
        const int d = 2 + k % 4;
        const auto X = oracles::random_design(n, d, 5000 + k);
        const auto y = oracles::random_vector(n, 5100 + k, 3.0);
        const double scale = 1e-5 * y.norm();

        const auto gm = kriging::fit_with_params(X, y, make_params(d, 0.4, 0.0, 1.0));
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(gm.predict(X.row(i)).mean - y[i]) / scale);

        kernelreg::KernelConfig kc;
        kc.lambda = 0.0;
        const auto km = kernelreg::fit(X, y, kc);
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(km.predict(X.row(i)) - y[i]) / scale);
    }
    report(3, "zero-nugget interpolation", worst < 1.0,
           "worst deviation " + std::to_string(worst) + " in units of 1e-5 ||y||");
}

void criterion_4_calibration() {
    const auto p = make_params(3, 0.4, 0.05, 9.0);
    int covered = 0, total = 0;
    for (int s = 0; s < 5; ++s) {
        const auto Xall = oracles::random_design(2300, 3, 6000 + s);
        const auto yall = oracles::sample_gp(Xall, p, 6100 + s);
        const auto m = kriging::fit_with_params(Xall.topRows(300), yall.head(300), p);
        Eigen::VectorXd means(2000), sds(2000);
        for (int i = 0; i < 2000; ++i) {
            const auto pr = m.predict(Xall.row(300 + i));
            means[i] = pr.mean;
            sds[i] = std::sqrt(pr.variance);
        }
        const Eigen::VectorXd truth = yall.tail(2000);
        for (int i = 0; i < 2000; ++i)
            if (std::abs(means[i] - truth[i]) <= diagnostics::kDefaultCirZ * sds[i])
                ++covered;
        total += 2000;
    }
    const double cir = static_cast<double>(covered) / total;
    report(4, "90% interval calibration", cir >= 0.87 && cir <= 0.93,
           "pooled CIR " + std::to_string(cir) + " over 5 seeds x 2000 points");
}

void criterion_5_nugget_recovery() {
    std::string detail;
    bool pass = true;
    for (double alpha_star : {0.01, 0.05, 0.1}) {
        int hits = 0;
        for (int s = 0; s < 10; ++s) {
            const auto X = oracles::random_design(400, 3, 7000 + s);
            const auto y = oracles::sample_gp(X, make_params(3, 0.3, alpha_star, 4.0),
                                              7100 + 97 * s + static_cast<int>(1e4 * alpha_star));
            kriging::KrigingConfig cfg;
            cfg.subsample_size = 200;
            cfg.restarts = 3;
            cfg.max_evals = 300;
            cfg.seed = 7200 + s;
            const auto m = kriging::fit(X, y, cfg);
            const double a = m.params().alpha;
            if (a >= alpha_star / 3.0 && a <= 3.0 * alpha_star) ++hits;
        }
        detail += "alpha*=" + std::to_string(alpha_star) + ": " + std::to_string(hits) +
                  "/10  ";
        pass = pass && hits >= 8;
    }
    report(5, "nugget recovery", pass, detail);
}

void criterion_6_instability_quantification() {
    auto& s = study();
    const double scale = kStudyInstabilityScale;
    int hits = 0;
    std::string detail = "delta_hat v1/v2: ";
    for (int k = 0; k < kTrials; ++k) {
        const double d1 = std::get<kriging::KrigingModel>(s.krig_v1[k].impl)
                              .params().nugget_sd();
        const double d2 = std::get<kriging::KrigingModel>(s.krig_v2[k].impl)
                              .params().nugget_sd();
        const bool ok = d1 >= 0.5 * scale && d1 <= 2.0 * scale && d2 < d1;
        if (ok) ++hits;
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.1f/%.1f%s ", d1, d2, ok ? "" : "!");
        detail += buf;
    }
    report(6, "instability quantification", hits >= 8,
           detail + "(" + std::to_string(hits) + "/10)");
}

void criterion_7_outlier_detection() {
    auto& s = study();
    int hits = 0;
    std::string detail;
    for (int k = 0; k < kTrials; ++k) {
        std::vector<int> failure_rows;
        const auto& base = s.trials[k].learn_v1;
        for (int i = 0; i < base.n(); ++i)
            if (!base.warnings[i].empty()) failure_rows.push_back(i);

        auto top2_hits = [&](const model::FittedModel& m) {
            const Eigen::VectorXd errors = m.learning_errors();
            const auto ranking = m.method == model::Method::kriging
                ? diagnostics::normalized_errors(errors, m.learning_error_sds())
                : diagnostics::normalized_errors(errors, m.rmse_hat);
            int found = 0;
            for (int r = 0; r < 2; ++r)
                for (int f : failure_rows)
                    if (ranking.indices[r] == f) ++found;
            return found == 2;
        };
        const bool ok = top2_hits(s.krig_v1[k]) && top2_hits(s.kern_v1[k]) &&
                        top2_hits(s.mlp_v1[k]);
        if (ok) ++hits;
        detail += ok ? "+" : "-";
    }
    report(7, "outlier detection", hits >= 9,
           "all-three-models top-2 per seed: " + detail + " (" + std::to_string(hits) +
               "/10)");
}

void criterion_8_method_ordering() {
    auto& s = study();
    int hits = 0;
    std::string detail;
    for (int k = 0; k < kTrials; ++k) {
        const double rk = test_rmse(s.krig_v2[k], s.trials[k].test_v2);
        const double rm = test_rmse(s.mlp_v2[k], s.trials[k].test_v2);
        const double rx = test_rmse(s.kern_v2[k], s.trials[k].test_v2);
        const bool ok = rk <= rm && rm <= 1.3 * rk && rx > rm && rx > rk;
        if (ok) ++hits;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "[%.1f,%.1f,%.1f]%s", rk, rm, rx, ok ? "" : "!");
        detail += buf;
    }
    report(8, "method ordering", hits >= 7,
           "kriging/mlp/kernel RMSE " + detail + " (" + std::to_string(hits) + "/10)");
}

void criterion_9_rmse_estimate_fidelity() {
    auto& s = study();
    int hits_k = 0, hits_x = 0, hits_m = 0;
    for (int k = 0; k < kTrials; ++k) {
        const double rk = test_rmse(s.krig_v2[k], s.trials[k].test_v2);
        const double rx = test_rmse(s.kern_v2[k], s.trials[k].test_v2);
        const double rm = test_rmse(s.mlp_v2[k], s.trials[k].test_v2);
        if (std::abs(s.krig_v2[k].rmse_hat - rk) / rk < 0.15) ++hits_k;
        if (std::abs(s.kern_v2[k].rmse_hat - rx) / rx < 0.15) ++hits_x;
        if (s.mlp_v2[k].rmse_hat <= rm) ++hits_m;
    }
    const bool pass = hits_k >= 8 && hits_x >= 8 && hits_m >= 8;
    report(9, "rmse_hat fidelity", pass,
           "kriging " + std::to_string(hits_k) + "/10, kernel " + std::to_string(hits_x) +
               "/10, mlp optimism " + std::to_string(hits_m) + "/10");
}

void criterion_10_roc_sanity() {
    // Separated predictions reach AUC 1.
    const int n = 400;
    Eigen::VectorXd truth(n), pred(n);
    for (int i = 0; i < n; ++i) {
        truth[i] = i < 120 ? 150.0 : 450.0;
        pred[i] = i < 120 ? 220.0 : 390.0;
    }
    const auto sep = diagnostics::roc(pred, Eigen::VectorXd::Constant(n, 30.0), truth,
                                      diagnostics::default_tau_grid());
    const bool sep_ok = std::abs(sep.auc - 1.0) < 1e-12;

    // Permuted labels sit near one half.
    const int np = 1000;
    Eigen::VectorXd t2(np), p2(np);
    std::mt19937_64 rng(stats::splitmix64(424242));
    for (int i = 0; i < np; ++i) {
        t2[i] = stats::hash_to_unit(rng()) < 0.35 ? 200.0 : 420.0;
        p2[i] = 260.0 + 90.0 * stats::hash_to_unit(rng());
    }
    const auto perm = diagnostics::roc(p2, Eigen::VectorXd::Constant(np, 40.0), t2,
                                       diagnostics::default_tau_grid());
    const bool perm_ok = std::abs(perm.auc - 0.5) <= 0.05;

    // Updated manager classifies at least as well as the original.
    auto& s = study();
    int hits = 0;
    for (int k = 0; k < kTrials; ++k) {
        const double a1 = test_auc(s.krig_v1[k], s.trials[k].test_v1);
        const double a2 = test_auc(s.krig_v2[k], s.trials[k].test_v2);
        if (a2 >= a1) ++hits;
    }
    report(10, "ROC sanity", sep_ok && perm_ok && hits >= 8,
           "separated AUC " + std::to_string(sep.auc) + ", permuted " +
               std::to_string(perm.auc) + ", v2>=v1 in " + std::to_string(hits) + "/10");
}

void criterion_11_gradient_check() {
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 1 + trial % 5;
        const int width = 2 + trial;
        const auto X = oracles::random_design(15, d, 8000 + trial);
        const auto y = oracles::random_vector(15, 8100 + trial);
        std::vector<int> rows(15);
        std::iota(rows.begin(), rows.end(), 0);
        neuralnet::Net net;
        net.W1 = 0.8 * Eigen::MatrixXd::Random(width, d);
        net.b1 = 0.4 * Eigen::VectorXd::Random(width);
        net.w2 = 0.9 * Eigen::VectorXd::Random(width);
        net.b2 = -0.2;
        neuralnet::NetGrad g;
        neuralnet::loss_and_grad(net, X, y, rows, g);

        auto fd_check = [&](double* param, double analytic) {
            neuralnet::NetGrad scratch;
            const double h = 1e-6, save = *param;
            *param = save + h;
            const double up = neuralnet::loss_and_grad(net, X, y, rows, scratch);
            *param = save - h;
            const double dn = neuralnet::loss_and_grad(net, X, y, rows, scratch);
            *param = save;
            const double fd = (up - dn) / (2 * h);
            worst = std::max(worst, std::abs(fd - analytic) / std::max(1.0, std::abs(fd)));
        };
        for (int i = 0; i < width; ++i) {
            for (int j = 0; j < d; ++j) fd_check(&net.W1(i, j), g.W1(i, j));
            fd_check(&net.b1[i], g.b1[i]);
            fd_check(&net.w2[i], g.w2[i]);
        }
        fd_check(&net.b2, g.b2);
    }
    report(11, "MLP gradient check", worst < 1e-5,
           "max relative deviation " + std::to_string(worst));
}

void criterion_12_segment_scan_contrast() {
    const auto space = doe::InputSpace::default_pin_study();
    int passed = 0;
    std::string detail;
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        testbed::CodeManagerConfig v1;
        v1.seed = seed;
        v1.failure_rate = 0.0;
        testbed::CodeManagerConfig v2 = v1;
        v2.preprocessor_version = 2;

        Eigen::VectorXd a = Eigen::VectorXd::Constant(11, 0.45);
        Eigen::VectorXd b = a;
        a[6] = 0.22;
        b[6] = 0.58; // seven node boundaries on the way
        const auto [scan, ts] = doe::segment_scan(space, a, b, 97);
        double j1 = 0.0, j2 = 0.0;
        double prev1 = 0.0, prev2 = 0.0;
        for (int i = 0; i < 97; ++i) {
            const double y1 = testbed::run(space, v1, scan.rows.row(i)).y;
            const double y2 = testbed::run(space, v2, scan.rows.row(i)).y;
            if (i) {
                j1 = std::max(j1, std::abs(y1 - prev1));
                j2 = std::max(j2, std::abs(y2 - prev2));
            }
            prev1 = y1;
            prev2 = y2;
        }
        if (j2 <= 0.5 * j1) ++passed;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f ", j2 / j1);
        detail += buf;
    }
    report(12, "segment-scan contrast", passed == 5, "v2/v1 jump ratios " + detail);
}

} // namespace

int main() {
    std::printf("surrokit acceptance suite\n");
    criterion_1_loo_oracle();
    criterion_2_profile_identity();
    criterion_3_interpolation();
    criterion_4_calibration();
    criterion_5_nugget_recovery();
    criterion_11_gradient_check();
    criterion_12_segment_scan_contrast();
    // Testbed study criteria share ten fitted trials.
    criterion_6_instability_quantification();
    criterion_7_outlier_detection();
    criterion_8_method_ordering();
    criterion_9_rmse_estimate_fidelity();
    criterion_10_roc_sanity();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
