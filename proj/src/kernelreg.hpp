#ifndef SURROKIT_KERNELREG_HPP
#define SURROKIT_KERNELREG_HPP

#include <Eigen/Core>

namespace surrokit::kernelreg {

// Sobolev-space kernel built from Bernoulli polynomials; m is the
// smoothness order. Inputs must lie in [0,1].
struct BernoulliKernel {
    int m = 2;
};

struct KernelConfig {
    int m = 2;
    double lambda = -1.0;       // < 0 selects by GCV
    bool classical_gcv = false; // squared-norm-over-squared-trace variant
    int grid_size = 100;
    double lambda_min = 1e-10;
    double lambda_max = 10.0;
};

// Bernoulli polynomial B_l(x), closed forms up to degree 8.
double bernoulli_poly(int l, double x);

// One-dimensional kernel:
// sum_{l=0}^m B_l(x)B_l(y)/(l!)^2 + (-1)^{m+1}/(2m)! B_{2m}(|x-y|).
double kernel_1d(double x, double y, int m);

// Tensor-product kernel over [0,1]^d.
double kernel_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int m);

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& X, int m);

// Regularity parameter by generalized cross validation over a log grid:
// argmin ||R_lambda^{-1} y|| / Trace(R_lambda^{-1}) as printed, or the
// classical squared variant (same minimizer path up to a monotone map).
// One eigendecomposition of K makes each grid value O(n). Ties break to
// the smallest lambda.
double gcv_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int m,
                  const Eigen::VectorXd& lambda_grid, bool classical = false);

// Criterion value at one lambda, given the eigendecomposition pieces
// (eigenvalues of K and Q^T y). Exposed for the dense-oracle identity tests.
double gcv_criterion(const Eigen::VectorXd& eigenvalues, const Eigen::VectorXd& qty,
                     double n_lambda, bool classical = false);

Eigen::VectorXd default_lambda_grid(const KernelConfig& cfg = {});

class KernelModel {
public:
    KernelModel() = default;

    const Eigen::MatrixXd& X() const { return X_; }
    const Eigen::VectorXd& y() const { return y_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double lambda() const { return lambda_; }
    const BernoulliKernel& kernel() const { return kernel_; }
    int n() const { return static_cast<int>(X_.rows()); }
    int dim() const { return static_cast<int>(X_.cols()); }

    double predict(const Eigen::VectorXd& x) const;

    // Closed-form leave-one-out errors y_i - yhat_{-i}.
    Eigen::VectorXd loo_errors() const;

    double weights_residual() const;

    friend KernelModel fit(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                           const KernelConfig&);

private:
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    Eigen::VectorXd weights_;   // (K + n lambda I)^{-1} y
    double lambda_ = 0.0;
    BernoulliKernel kernel_;
};

// Solve (K + n lambda I) w = y, selecting lambda by GCV when unset.
KernelModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                const KernelConfig& cfg = {});

} // namespace surrokit::kernelreg

#endif
