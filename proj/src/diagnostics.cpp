#include "diagnostics.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace surrokit::diagnostics {

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
    if (pred.size() != truth.size()) throw input_error("rmse: length mismatch");
    if (pred.size() == 0) throw input_error("rmse: empty vectors");
    return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

double q2(double rmse_value, double sd_output) {
    if (!(sd_output > 0.0)) throw input_error("q2: sd_output must be positive");
    return 1.0 - (rmse_value * rmse_value) / (sd_output * sd_output);
}

std::pair<double, double> estimated_criteria(const Eigen::VectorXd& errors, double sd_learn) {
    if (errors.size() == 0) throw input_error("estimated_criteria: empty errors");
    const double rmse_hat = std::sqrt(errors.squaredNorm() / static_cast<double>(errors.size()));
    return {rmse_hat, q2(rmse_hat, sd_learn)};
}

double error_quantile(const Eigen::VectorXd& errors, double gamma) {
    if (errors.size() == 0) throw input_error("error_quantile: empty errors");
    if (!(gamma > 0.0 && gamma < 1.0)) throw input_error("error_quantile: gamma outside (0,1)");
    std::vector<double> a(errors.size());
    for (Eigen::Index i = 0; i < errors.size(); ++i) a[i] = std::abs(errors[i]);
    std::sort(a.begin(), a.end());
    const auto n = static_cast<double>(a.size());
    auto k = static_cast<std::size_t>(std::ceil(gamma * n));
    k = std::clamp<std::size_t>(k, 1, a.size());
    return a[k - 1];
}

double cir(const Eigen::VectorXd& pred_means, const Eigen::VectorXd& pred_sds,
           const Eigen::VectorXd& truth, double z) {
    const Eigen::Index n = pred_means.size();
    if (pred_sds.size() != n || truth.size() != n) throw input_error("cir: length mismatch");
    if (n == 0) throw input_error("cir: empty input");
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(pred_means[i] - truth[i]) <= z * pred_sds[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(n);
}

namespace {
OutlierRanking rank(const Eigen::VectorXd& normalized) {
    OutlierRanking out;
    out.normalized_errors = normalized;
    out.indices.resize(normalized.size());
    std::iota(out.indices.begin(), out.indices.end(), 0);
    std::stable_sort(out.indices.begin(), out.indices.end(), [&](int a, int b) {
        return std::abs(normalized[a]) > std::abs(normalized[b]);
    });
    return out;
}
} // namespace

OutlierRanking normalized_errors(const Eigen::VectorXd& errors,
                                 const Eigen::VectorXd& per_point_sds) {
    if (errors.size() != per_point_sds.size())
        throw input_error("normalized_errors: length mismatch");
    Eigen::VectorXd z(errors.size());
    for (Eigen::Index i = 0; i < errors.size(); ++i) {
        if (!(per_point_sds[i] > 0.0))
            throw input_error("normalized_errors: zero denominator at index " +
                              std::to_string(i));
        z[i] = errors[i] / per_point_sds[i];
    }
    return rank(z);
}

OutlierRanking normalized_errors(const Eigen::VectorXd& errors, double rmse_hat) {
    if (!(rmse_hat > 0.0)) throw input_error("normalized_errors: zero denominator");
    return rank(errors / rmse_hat);
}

Classification classify(double pred_mean, double pred_sd, double tau, double threshold) {
    if (pred_sd < 0.0) throw input_error("classify: negative sd");
    const double score = pred_sd > 0.0 ? pred_mean - tau * pred_sd : pred_mean;
    return score < threshold ? Classification::unsafe : Classification::viable;
}

std::vector<double> default_tau_grid() {
    std::vector<double> g;
    g.reserve(402);
    g.push_back(-std::numeric_limits<double>::infinity());
    for (int i = 0; i < 400; ++i)
        g.push_back(-10.0 + 20.0 * static_cast<double>(i) / 399.0);
    g.push_back(std::numeric_limits<double>::infinity());
    return g;
}

RocCurve roc(const Eigen::VectorXd& preds, const Eigen::VectorXd& sds,
             const Eigen::VectorXd& trues, const std::vector<double>& tau_grid,
             double threshold) {
    const Eigen::Index n = preds.size();
    if (sds.size() != n || trues.size() != n) throw input_error("roc: length mismatch");
    if (tau_grid.empty()) throw input_error("roc: empty tau grid");

    Eigen::Index n_unsafe = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (trues[i] <= threshold) ++n_unsafe;
    const Eigen::Index n_viable = n - n_unsafe;
    if (n_unsafe == 0 || n_viable == 0)
        throw input_error("roc: degenerate labels (need both unsafe and viable points)");

    RocCurve curve;
    curve.taus = tau_grid;
    std::sort(curve.taus.begin(), curve.taus.end());
    curve.fpr.reserve(curve.taus.size());
    curve.tpr.reserve(curve.taus.size());
    for (double tau : curve.taus) {
        Eigen::Index tu = 0, fu = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (classify(preds[i], sds[i], tau, threshold) != Classification::unsafe) continue;
            if (trues[i] <= threshold) ++tu;
            else ++fu;
        }
        curve.tpr.push_back(static_cast<double>(tu) / static_cast<double>(n_unsafe));
        curve.fpr.push_back(static_cast<double>(fu) / static_cast<double>(n_viable));
    }

    // Trapezoid on the polyline augmented with (0,0) and (1,1).
    double auc = 0.0, px = 0.0, py = 0.0;
    for (std::size_t k = 0; k < curve.fpr.size(); ++k) {
        auc += (curve.fpr[k] - px) * (curve.tpr[k] + py) / 2.0;
        px = curve.fpr[k];
        py = curve.tpr[k];
    }
    auc += (1.0 - px) * (1.0 + py) / 2.0;
    curve.auc = auc;
    return curve;
}

} // namespace surrokit::diagnostics
