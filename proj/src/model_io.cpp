#include "model_io.hpp"

#include "diagnostics.hpp"
#include "errors.hpp"
#include "stats.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace surrokit::model {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "surrokit-model";
constexpr int kVersion = 1;

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i)));
    return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

Eigen::MatrixXd mat_from_json(const json& a) {
    if (a.empty()) return {};
    Eigen::MatrixXd m(a.size(), a[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = vec_from_json(a[i]);
    return m;
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

void compute_estimates(FittedModel& m) {
    m.sd_learn = stats::stddev(m.train_outputs());
    const Eigen::VectorXd errors = m.learning_errors();
    m.rmse_hat = std::sqrt(errors.squaredNorm() / static_cast<double>(errors.size()));
    m.q2_hat = m.sd_learn > 0.0 ? diagnostics::q2(m.rmse_hat, m.sd_learn)
                                : (m.rmse_hat == 0.0 ? 1.0 : 0.0);
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::kriging: return "kriging";
        case Method::kernel: return "kernel";
        case Method::mlp: return "mlp";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "kriging") return Method::kriging;
    if (name == "kernel") return Method::kernel;
    if (name == "mlp") return Method::mlp;
    throw input_error("unknown model method '" + name + "'");
}

int FittedModel::train_size() const {
    switch (method) {
        case Method::kriging: return std::get<kriging::KrigingModel>(impl).n();
        case Method::kernel: return std::get<kernelreg::KernelModel>(impl).n();
        case Method::mlp: return static_cast<int>(train_y_.size());
    }
    return 0;
}

Eigen::VectorXd FittedModel::normalize_point(const Eigen::VectorXd& x) const {
    if (x.size() != lo.size()) throw input_error("model predict: dimension mismatch");
    Eigen::VectorXd u(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double span = hi[j] - lo[j];
        u[j] = span > 0.0 ? (x[j] - lo[j]) / span : 0.0;
    }
    return u;
}

PredictOut FittedModel::predict(const Eigen::VectorXd& x_physical) const {
    const Eigen::VectorXd u = normalize_point(x_physical);
    PredictOut out;
    switch (method) {
        case Method::kriging: {
            const auto& m = std::get<kriging::KrigingModel>(impl);
            const auto p = m.predict(u);
            out.mean = p.mean;
            out.sd = std::sqrt(p.variance);
            out.extrapolated = p.extrapolated;
            break;
        }
        case Method::kernel: {
            const auto& m = std::get<kernelreg::KernelModel>(impl);
            out.mean = m.predict(u);
            out.sd = rmse_hat;
            out.extrapolated = (u.array() < -0.1).any() || (u.array() > 1.1).any();
            break;
        }
        case Method::mlp: {
            const auto& m = std::get<neuralnet::MlpModel>(impl);
            out.mean = m.forward(u);
            out.sd = rmse_hat;
            out.extrapolated = (u.array() < -0.1).any() || (u.array() > 1.1).any();
            break;
        }
    }
    return out;
}

const Eigen::VectorXd& FittedModel::train_outputs() const {
    switch (method) {
        case Method::kriging: return std::get<kriging::KrigingModel>(impl).y();
        case Method::kernel: return std::get<kernelreg::KernelModel>(impl).y();
        case Method::mlp: return train_y_;
    }
    throw numeric_error("unreachable");
}

Eigen::VectorXd FittedModel::learning_errors() const {
    switch (method) {
        case Method::kriging: {
            // loo errors are observed-minus-predicted; rankings use the
            // prediction-minus-observed convention.
            return -std::get<kriging::KrigingModel>(impl).loo_errors().first;
        }
        case Method::kernel:
            return -std::get<kernelreg::KernelModel>(impl).loo_errors();
        case Method::mlp: {
            const auto& m = std::get<neuralnet::MlpModel>(impl);
            Eigen::VectorXd e(train_X_.rows());
            for (Eigen::Index i = 0; i < train_X_.rows(); ++i)
                e[i] = m.forward(train_X_.row(i)) - train_y_[i];
            return e;
        }
    }
    throw numeric_error("unreachable");
}

Eigen::VectorXd FittedModel::learning_error_sds() const {
    if (method != Method::kriging)
        throw input_error("per-point error sds exist for kriging models only");
    return std::get<kriging::KrigingModel>(impl).loo_errors().second.cwiseSqrt();
}

std::string FittedModel::summary() const {
    std::ostringstream os;
    os << "method: " << method_name(method) << "\n";
    os << "n: " << train_size() << "  d: " << dim() << "\n";
    switch (method) {
        case Method::kriging: {
            const auto& m = std::get<kriging::KrigingModel>(impl);
            const auto& p = m.params();
            os << "sigma_hat: " << fmt(std::sqrt(p.sigma2)) << "\n";
            os << "ell_hat:";
            for (Eigen::Index i = 0; i < p.ell.ell.size(); ++i)
                os << " " << fmt(p.ell.ell[i], 3);
            os << "\n";
            os << "alpha_hat: " << fmt(p.alpha) << "\n";
            os << "delta_hat: " << fmt(p.nugget_sd()) << "\n";
            if (m.warning()) os << "warning: optimizer reported no progress\n";
            break;
        }
        case Method::kernel: {
            const auto& m = std::get<kernelreg::KernelModel>(impl);
            os << "lambda: " << fmt(m.lambda()) << "\n";
            os << "m: " << m.kernel().m << "\n";
            break;
        }
        case Method::mlp: {
            const auto& m = std::get<neuralnet::MlpModel>(impl);
            os << "hidden_width: " << m.hidden_width << "\n";
            if (!m.widths_tried.empty()) {
                os << "width_rmse:";
                for (std::size_t i = 0; i < m.widths_tried.size(); ++i)
                    os << " " << m.widths_tried[i] << ":" << fmt(m.width_scores[i]);
                os << "\n";
            }
            os << "restart_holdout_rmse:";
            for (double s : m.restart_scores) os << " " << fmt(s);
            os << "\n";
            break;
        }
    }
    os << "rmse_hat: " << fmt(rmse_hat) << "\n";
    os << "q2_hat: " << fmt(q2_hat) << "\n";
    return os.str();
}

FittedModel fit_kriging(const LearningBase& base, const kriging::KrigingConfig& cfg) {
    base.validate();
    FittedModel out;
    out.method = Method::kriging;
    out.names = base.names;
    out.lo = base.lo;
    out.hi = base.hi;
    out.impl = kriging::fit(base.normalized(), base.y, cfg);
    compute_estimates(out);
    return out;
}

FittedModel fit_kernel(const LearningBase& base, const kernelreg::KernelConfig& cfg) {
    base.validate();
    FittedModel out;
    out.method = Method::kernel;
    out.names = base.names;
    out.lo = base.lo;
    out.hi = base.hi;
    out.impl = kernelreg::fit(base.normalized(), base.y, cfg);
    compute_estimates(out);
    return out;
}

FittedModel fit_mlp(const LearningBase& base, const std::vector<int>& widths,
                    const neuralnet::MlpConfig& cfg) {
    base.validate();
    FittedModel out;
    out.method = Method::mlp;
    out.names = base.names;
    out.lo = base.lo;
    out.hi = base.hi;
    out.train_X_ = base.normalized();
    out.train_y_ = base.y;
    out.impl = widths.size() == 1 ? neuralnet::train(out.train_X_, base.y, widths[0], cfg)
                                  : neuralnet::select_width(out.train_X_, base.y, widths, cfg);
    compute_estimates(out);
    return out;
}

diagnostics::DiagnosticsReport diagnose_model(const FittedModel& model,
                                              const LearningBase& test) {
    test.validate();
    const int nt = test.n();
    if (nt < 1) throw input_error("diagnose: empty test base");
    if (test.dim() != model.dim()) throw input_error("diagnose: dimension mismatch");
    Eigen::VectorXd means(nt), sds(nt);
    for (int i = 0; i < nt; ++i) {
        const auto p = model.predict(test.X.row(i));
        means[i] = p.mean;
        sds[i] = p.sd;
    }
    diagnostics::DiagnosticsReport rep;
    rep.sd_output = stats::stddev(test.y);
    rep.rmse = diagnostics::rmse(means, test.y);
    rep.q2 = diagnostics::q2(rep.rmse, rep.sd_output);
    const Eigen::VectorXd err = means - test.y;
    rep.q_quantiles[0.9] = diagnostics::error_quantile(err, 0.9);
    rep.q_quantiles[0.95] = diagnostics::error_quantile(err, 0.95);
    if (model.method == Method::kriging)
        rep.cir = diagnostics::cir(means, sds, test.y);
    rep.rmse_hat = model.rmse_hat;
    rep.q2_hat = model.q2_hat;
    rep.sd_learn = model.sd_learn;
    return rep;
}

void save_model(const FittedModel& model, const std::string& path) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["method"] = method_name(model.method);
    j["names"] = model.names;
    j["lo"] = vec_to_json(model.lo);
    j["hi"] = vec_to_json(model.hi);
    switch (model.method) {
        case Method::kriging: {
            const auto& m = std::get<kriging::KrigingModel>(model.impl);
            j["X"] = mat_to_json(m.X());
            j["y"] = vec_to_json(m.y());
            j["params"] = {{"sigma2", m.params().sigma2},
                           {"ell", vec_to_json(m.params().ell.ell)},
                           {"alpha", m.params().alpha}};
            break;
        }
        case Method::kernel: {
            const auto& m = std::get<kernelreg::KernelModel>(model.impl);
            j["X"] = mat_to_json(m.X());
            j["y"] = vec_to_json(m.y());
            j["params"] = {{"lambda", m.lambda()}, {"m", m.kernel().m}};
            break;
        }
        case Method::mlp: {
            const auto& m = std::get<neuralnet::MlpModel>(model.impl);
            j["X"] = mat_to_json(model.train_X_);
            j["y"] = vec_to_json(model.train_y_);
            j["params"] = {{"hidden_width", m.hidden_width},
                           {"W1", mat_to_json(m.net.W1)},
                           {"b1", vec_to_json(m.net.b1)},
                           {"w2", vec_to_json(m.net.w2)},
                           {"b2", m.net.b2},
                           {"in_mean", vec_to_json(m.in_scaler.mean)},
                           {"in_scale", vec_to_json(m.in_scaler.scale)},
                           {"out_mean", m.out_mean},
                           {"out_scale", m.out_scale},
                           {"widths_tried", m.widths_tried},
                           {"width_scores", m.width_scores},
                           {"restart_scores", m.restart_scores}};
            break;
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write model file '" + path + "'");
    out << j.dump(1) << "\n";
}

FittedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open model file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw input_error("model file '" + path + "': " + e.what());
    }
    if (!j.contains("format") || j["format"] != kFormat)
        throw input_error("model file '" + path + "': not a surrokit model");
    if (!j.contains("version") || j["version"].get<int>() != kVersion)
        throw input_error("model file '" + path + "': unsupported version");

    FittedModel model;
    try {
        model.method = method_from_name(j["method"].get<std::string>());
        model.names = j["names"].get<std::vector<std::string>>();
        model.lo = vec_from_json(j["lo"]);
        model.hi = vec_from_json(j["hi"]);
        const Eigen::MatrixXd X = mat_from_json(j["X"]);
        const Eigen::VectorXd y = vec_from_json(j["y"]);
        const json& p = j["params"];
        switch (model.method) {
            case Method::kriging: {
                covariance::CovarianceParams params;
                params.sigma2 = p["sigma2"].get<double>();
                params.ell.ell = vec_from_json(p["ell"]);
                params.alpha = p["alpha"].get<double>();
                model.impl = kriging::fit_with_params(X, y, params);
                break;
            }
            case Method::kernel: {
                kernelreg::KernelConfig cfg;
                cfg.lambda = p["lambda"].get<double>();
                cfg.m = p["m"].get<int>();
                model.impl = kernelreg::fit(X, y, cfg);
                break;
            }
            case Method::mlp: {
                neuralnet::MlpModel m;
                m.hidden_width = p["hidden_width"].get<int>();
                m.net.W1 = mat_from_json(p["W1"]);
                m.net.b1 = vec_from_json(p["b1"]);
                m.net.w2 = vec_from_json(p["w2"]);
                m.net.b2 = p["b2"].get<double>();
                m.in_scaler.mean = vec_from_json(p["in_mean"]);
                m.in_scaler.scale = vec_from_json(p["in_scale"]);
                m.out_mean = p["out_mean"].get<double>();
                m.out_scale = p["out_scale"].get<double>();
                m.widths_tried = p["widths_tried"].get<std::vector<int>>();
                m.width_scores = p["width_scores"].get<std::vector<double>>();
                m.restart_scores = p["restart_scores"].get<std::vector<double>>();
                model.train_X_ = X;
                model.train_y_ = y;
                model.impl = std::move(m);
                break;
            }
        }
    } catch (const json::exception& e) {
        throw input_error("model file '" + path + "': " + e.what());
    }
    compute_estimates(model);
    return model;
}

} // namespace surrokit::model
