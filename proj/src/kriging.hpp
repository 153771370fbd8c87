#ifndef SURROKIT_KRIGING_HPP
#define SURROKIT_KRIGING_HPP

#include "covariance.hpp"

#include <Eigen/Cholesky>
#include <cstdint>
#include <optional>
#include <utility>

namespace surrokit::kriging {

struct KrigingConfig {
    int subsample_size = 1000;  // step-1 subsample; capped at n
    int restarts = 5;           // independent optimizer starts
    int max_evals = 600;        // objective-evaluation budget per restart
    std::uint64_t seed = 0;
    double ell_min = covariance::LengthScales::kEllMin;
    double ell_max = covariance::LengthScales::kEllMax;
    double alpha_max = 10.0;
    int profile_grid = 200;     // log-spaced alpha candidates in step 2
};

struct Step1Result {
    covariance::LengthScales ell;
    double alpha_tilde = 0.0;
    double objective = 0.0;
    bool warning = false;       // optimizer made no progress on any restart
};

// Step-2 profile of the likelihood in alpha at fixed length scales,
// built from one eigendecomposition of the step-1 correlation matrix.
struct LikelihoodProfile {
    Eigen::VectorXd s;          // eigenvalues, descending
    Eigen::VectorXd v;          // U^T y
    double alpha_tilde = 0.0;

    // Smallest admissible alpha: candidates must keep s_n + alpha - alpha_tilde > 0.
    double lower_bound() const { return alpha_tilde - s[s.size() - 1]; }
    double value(double alpha) const;
};

// Profiled-likelihood objective: log((1/n) y^T R^{-1} y) + (1/n) log|R|.
double neg_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const covariance::LengthScales& ell, double alpha);

// Step 1: maximum-likelihood (ell, alpha) on a seeded subsample, by
// multi-start simplex search in log coordinates.
Step1Result fit_step1(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const KrigingConfig& cfg);

LikelihoodProfile make_profile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const covariance::LengthScales& ell, double alpha_tilde);

// Step 2: minimize the alpha profile over a log-spaced grid refined by
// golden section. Returns the raw minimizer (no snap-to-zero).
double profile_nugget(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const covariance::LengthScales& ell_hat, double alpha_tilde,
                      const KrigingConfig& cfg = {});

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
    bool extrapolated = false;  // some coordinate fell outside [-0.1, 1.1]
};

class KrigingModel {
public:
    KrigingModel() = default;

    const Eigen::MatrixXd& X() const { return X_; }
    const Eigen::VectorXd& y() const { return y_; }
    const covariance::CovarianceParams& params() const { return params_; }
    bool warning() const { return warning_; }
    bool degenerate() const { return degenerate_; }
    int n() const { return static_cast<int>(X_.rows()); }
    int dim() const { return static_cast<int>(X_.cols()); }

    Prediction predict(const Eigen::VectorXd& x) const;

    // Closed-form leave-one-out: (errors, variances) with
    // errors_i = y_i - yhat_{-i} and variances_i = sigma2 / (R^{-1})_ii.
    std::pair<Eigen::VectorXd, Eigen::VectorXd> loo_errors() const;

    // Residual of R w = y under the stored factorization; model invariant
    // requires it below 1e-6 ||y||.
    double weights_residual() const;

    friend KrigingModel fit(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                            const KrigingConfig&);
    friend KrigingModel fit_with_params(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                                        const covariance::CovarianceParams&);

private:
    void finalize();

    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    covariance::CovarianceParams params_;
    Eigen::LLT<Eigen::MatrixXd> factor_;
    double jitter_ = 0.0;
    Eigen::VectorXd alpha_weights_;            // R^{-1} y
    mutable std::optional<Eigen::VectorXd> loo_cache_; // diag(R^{-1})
    bool warning_ = false;
    bool degenerate_ = false;                  // y identically zero
};

// Full two-step fit: subsampled (ell, alpha) search, whole-base nugget
// profiling, then sigma2 = (1/n) y^T R^{-1} y. alpha below 1e-7 snaps to 0.
KrigingModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const KrigingConfig& cfg = {});

// Plug-in model at fixed covariance parameters (no estimation).
KrigingModel fit_with_params(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const covariance::CovarianceParams& params);

// Central interval mean +/- z sd at the given coverage level.
std::pair<double, double> confidence_interval(const Prediction& pred, double level);

} // namespace surrokit::kriging

#endif
