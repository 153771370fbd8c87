#ifndef SURROKIT_DIAGNOSTICS_HPP
#define SURROKIT_DIAGNOSTICS_HPP

#include <Eigen/Core>
#include <map>
#include <optional>
#include <vector>

namespace surrokit::diagnostics {

constexpr double kDefaultCirZ = 1.6449;
constexpr double kDefaultThreshold = 300.0;

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

// Relative efficiency 1 - rmse^2 / sd^2.
double q2(double rmse_value, double sd_output);

// Learning-base (rmse_hat, q2_hat) from LOO errors (Kriging, kernel) or
// in-sample residuals (MLP).
std::pair<double, double> estimated_criteria(const Eigen::VectorXd& errors, double sd_learn);

// Empirical quantile of |errors|: order statistic ceil(gamma n), 1-based.
double error_quantile(const Eigen::VectorXd& errors, double gamma);

// Fraction of |pred - true| <= z sd.
double cir(const Eigen::VectorXd& pred_means, const Eigen::VectorXd& pred_sds,
           const Eigen::VectorXd& truth, double z = kDefaultCirZ);

struct OutlierRanking {
    std::vector<int> indices;           // by |normalized error| descending, ties by index
    Eigen::VectorXd normalized_errors;  // in original point order
};

// errors follow the prediction-minus-observed sign convention.
// Per-point denominator (Kriging: LOO predictive sd).
OutlierRanking normalized_errors(const Eigen::VectorXd& errors,
                                 const Eigen::VectorXd& per_point_sds);
// Constant denominator (MLP, kernel: rmse_hat); the mean square of the
// normalized errors is then 1 by construction.
OutlierRanking normalized_errors(const Eigen::VectorXd& errors, double rmse_hat);

enum class Classification { viable, unsafe };

// Unsafe iff mean - tau sd < threshold (strictly); equality stays viable.
Classification classify(double pred_mean, double pred_sd, double tau,
                        double threshold = kDefaultThreshold);

struct RocCurve {
    std::vector<double> taus;   // ascending, with -inf/+inf sentinels
    std::vector<double> fpr;    // false-unsafe rate per tau
    std::vector<double> tpr;    // true-unsafe rate per tau
    double auc = 0.0;
};

// 400 points spanning [-10,10] plus the two infinite sentinels.
std::vector<double> default_tau_grid();

// Labels derive from the truth: unsafe iff true <= threshold. AUC by
// trapezoid on the polyline augmented with (0,0) and (1,1).
RocCurve roc(const Eigen::VectorXd& preds, const Eigen::VectorXd& sds,
             const Eigen::VectorXd& trues, const std::vector<double>& tau_grid,
             double threshold = kDefaultThreshold);

struct DiagnosticsReport {
    double rmse = 0.0;
    double q2 = 0.0;
    std::map<double, double> q_quantiles;
    std::optional<double> cir;      // Kriging only
    double sd_output = 0.0;         // test base
    double rmse_hat = 0.0;          // learning-base estimate
    double q2_hat = 0.0;
    double sd_learn = 0.0;
};

} // namespace surrokit::diagnostics

#endif
