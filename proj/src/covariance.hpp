#ifndef SURROKIT_COVARIANCE_HPP
#define SURROKIT_COVARIANCE_HPP

#include <Eigen/Core>

namespace surrokit::covariance {

// Per-dimension correlation lengths for inputs normalized to [0,1]^d.
struct LengthScales {
    Eigen::VectorXd ell;

    static constexpr double kEllMin = 1e-3;
    static constexpr double kEllMax = 100.0;

    int dim() const { return static_cast<int>(ell.size()); }
};

// (sigma2, ell, alpha) with alpha the nugget variance relative to sigma2.
struct CovarianceParams {
    double sigma2 = 1.0;
    LengthScales ell;
    double alpha = 0.0;

    double nugget_variance() const { return sigma2 * alpha; }
    double nugget_sd() const;
};

// Correlation-form matrix: unit-plus-alpha diagonal, Matern 3/2 off the
// diagonal, alpha added wherever two rows are bitwise equal.
struct CorrelationMatrix {
    Eigen::MatrixXd entries;
    double jitter = 0.0;        // added to the diagonal before factorization
    bool has_duplicates = false;
};

// Matern 3/2 correlation of a lag vector h under anisotropic scaling:
// (1 + sqrt(6)|h|_ell) exp(-sqrt(6)|h|_ell), |h|_ell^2 = sum h_i^2/ell_i^2.
double matern32(const Eigen::VectorXd& h, const LengthScales& ell);

// Scalar form, r = |h|_ell >= 0.
double matern32_scaled(double r);

// n x n correlation matrix of the design rows (rows normalized to [0,1]^d).
// Exact row equality triggers the alpha indicator. A jitter of 1e-10 is
// recorded when alpha < 1e-8 or duplicate rows are present, since the
// matrix is otherwise (near-)singular.
CorrelationMatrix assemble_correlation(const Eigen::MatrixXd& X, const LengthScales& ell,
                                       double alpha);

inline CorrelationMatrix assemble_correlation(const Eigen::MatrixXd& X,
                                              const CovarianceParams& p) {
    return assemble_correlation(X, p.ell, p.alpha);
}

// Correlation vector between a prediction point and every design row,
// including the alpha indicator at exact matches.
Eigen::VectorXd cross_correlation(const Eigen::MatrixXd& X, const Eigen::VectorXd& x,
                                  const LengthScales& ell, double alpha);

inline Eigen::VectorXd cross_correlation(const Eigen::MatrixXd& X, const Eigen::VectorXd& x,
                                         const CovarianceParams& p) {
    return cross_correlation(X, x, p.ell, p.alpha);
}

} // namespace surrokit::covariance

#endif
