#include "kernelreg.hpp"

#include "errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace surrokit::kernelreg {

namespace {

constexpr double kDomainTol = 1e-9;

void check_unit_range(const Eigen::VectorXd& x, const char* who) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x[i] >= -kDomainTol && x[i] <= 1.0 + kDomainTol))
            throw input_error(std::string(who) + ": coordinate " + std::to_string(i + 1) +
                              " outside [0,1]");
}

const double kFactorialSq[5] = {1.0, 1.0, 4.0, 36.0, 576.0}; // (l!)^2, l = 0..4
const double kFactorial2m[5] = {1.0, 2.0, 24.0, 720.0, 40320.0}; // (2m)!, m = 0..4

} // namespace

double bernoulli_poly(int l, double x) {
    switch (l) {
        case 0: return 1.0;
        case 1: return x - 0.5;
        case 2: return (x - 1.0) * x + 1.0 / 6.0;
        case 3: return ((x - 1.5) * x + 0.5) * x;
        case 4: return ((x - 2.0) * x + 1.0) * x * x - 1.0 / 30.0;
        case 5: return (((x - 2.5) * x + 5.0 / 3.0) * x * x - 1.0 / 6.0) * x;
        case 6: return (((x - 3.0) * x + 2.5) * x * x - 0.5) * x * x + 1.0 / 42.0;
        case 7: return ((((x - 3.5) * x + 3.5) * x * x - 7.0 / 6.0) * x * x + 1.0 / 6.0) * x;
        case 8: return ((((x - 4.0) * x + 14.0 / 3.0) * x * x - 7.0 / 3.0) * x * x +
                        2.0 / 3.0) * x * x - 1.0 / 30.0;
        default:
            throw input_error("bernoulli_poly: degree " + std::to_string(l) +
                              " outside supported range 0..8");
    }
}

double kernel_1d(double x, double y, int m) {
    if (m < 1 || m > 4) throw input_error("kernel_1d: m must lie in 1..4");
    if (!(x >= -kDomainTol && x <= 1.0 + kDomainTol) ||
        !(y >= -kDomainTol && y <= 1.0 + kDomainTol))
        throw input_error("kernel_1d: inputs must lie in [0,1]");
    double s = 0.0;
    for (int l = 0; l <= m; ++l)
        s += bernoulli_poly(l, x) * bernoulli_poly(l, y) / kFactorialSq[l];
    const double sign = (m % 2 == 0) ? -1.0 : 1.0; // (-1)^{m+1}
    s += sign / kFactorial2m[m] * bernoulli_poly(2 * m, std::abs(x - y));
    return s;
}

double kernel_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int m) {
    if (x.size() != y.size()) throw input_error("kernel_product: dimension mismatch");
    double p = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        p *= kernel_1d(x[i], y[i], m);
    return p;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& X, int m) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        check_unit_range(X.row(i), "gram_matrix");
        for (Eigen::Index j = i; j < n; ++j) {
            double p = 1.0;
            for (Eigen::Index k = 0; k < X.cols(); ++k)
                p *= kernel_1d(X(i, k), X(j, k), m);
            K(i, j) = p;
            K(j, i) = p;
        }
    }
    return K;
}

double gcv_criterion(const Eigen::VectorXd& eigenvalues, const Eigen::VectorXd& qty,
                     double n_lambda, bool classical) {
    double norm2 = 0.0, trace = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double den = eigenvalues[i] + n_lambda;
        norm2 += (qty[i] / den) * (qty[i] / den);
        trace += 1.0 / den;
    }
    const double n = static_cast<double>(eigenvalues.size());
    return classical ? n * norm2 / (trace * trace) : std::sqrt(norm2) / trace;
}

Eigen::VectorXd default_lambda_grid(const KernelConfig& cfg) {
    const int m = std::max(2, cfg.grid_size);
    Eigen::VectorXd g(m);
    const double la = std::log(cfg.lambda_min), lb = std::log(cfg.lambda_max);
    for (int i = 0; i < m; ++i)
        g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (m - 1));
    return g;
}

double gcv_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int m,
                  const Eigen::VectorXd& lambda_grid, bool classical) {
    if (lambda_grid.size() == 0) throw input_error("gcv_select: empty lambda grid");
    const Eigen::MatrixXd K = gram_matrix(X, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    if (es.info() != Eigen::Success)
        throw numeric_error("gcv_select: eigendecomposition failed");
    const Eigen::VectorXd qty = es.eigenvectors().transpose() * y;
    const double n = static_cast<double>(X.rows());

    // Ascending scan keeps the smallest lambda on ties.
    std::vector<double> grid(lambda_grid.data(), lambda_grid.data() + lambda_grid.size());
    std::sort(grid.begin(), grid.end());
    double best_lambda = grid[0];
    double best_v = std::numeric_limits<double>::infinity();
    for (double lambda : grid) {
        if (!(lambda > 0.0)) throw input_error("gcv_select: lambda grid must be positive");
        const double v = gcv_criterion(es.eigenvalues(), qty, n * lambda, classical);
        if (v < best_v) {
            best_v = v;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

KernelModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KernelConfig& cfg) {
    if (X.rows() < 1) throw input_error("kernel fit: empty design");
    if (X.rows() != y.size()) throw input_error("kernel fit: X/y size mismatch");

    KernelModel mdl;
    mdl.X_ = X;
    mdl.y_ = y;
    mdl.kernel_.m = cfg.m;
    mdl.lambda_ = cfg.lambda >= 0.0
        ? cfg.lambda
        : gcv_select(X, y, cfg.m, default_lambda_grid(cfg), cfg.classical_gcv);

    Eigen::MatrixXd R = gram_matrix(X, cfg.m);
    R.diagonal().array() += static_cast<double>(X.rows()) * mdl.lambda_;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(R);
    mdl.weights_ = ldlt.solve(y);
    // Iterative refinement; at lambda = 0 the Gram matrix can be badly
    // conditioned even when the interpolation problem is solvable.
    double residual = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 3 && mdl.weights_.allFinite(); ++step) {
        const Eigen::VectorXd r = y - R * mdl.weights_;
        residual = r.norm();
        if (residual <= 1e-9 * std::max(1.0, y.norm())) break;
        mdl.weights_ += ldlt.solve(r);
    }
    if (mdl.weights_.allFinite()) residual = (R * mdl.weights_ - y).norm();
    if (!(residual <= 1e-6 * std::max(1.0, y.norm())))
        throw numeric_error("kernel fit: system is singular at lambda=" +
                            std::to_string(mdl.lambda_) +
                            (mdl.lambda_ == 0.0 ? "; duplicate rows require lambda > 0" : ""));
    return mdl;
}

double KernelModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != X_.cols()) throw input_error("kernel predict: dimension mismatch");
    check_unit_range(x, "kernel predict");
    double s = 0.0;
    for (Eigen::Index i = 0; i < X_.rows(); ++i)
        s += kernel_product(X_.row(i), x, kernel_.m) * weights_[i];
    return s;
}

Eigen::VectorXd KernelModel::loo_errors() const {
    const Eigen::Index n = X_.rows();
    Eigen::MatrixXd R = gram_matrix(X_, kernel_.m);
    R.diagonal().array() += static_cast<double>(n) * lambda_;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(R);
    if (ldlt.info() != Eigen::Success)
        throw numeric_error("kernel loo: factorization failed");
    const Eigen::MatrixXd Rinv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd e(n);
    for (Eigen::Index i = 0; i < n; ++i)
        e[i] = weights_[i] / Rinv(i, i);
    return e;
}

double KernelModel::weights_residual() const {
    Eigen::MatrixXd R = gram_matrix(X_, kernel_.m);
    R.diagonal().array() += static_cast<double>(X_.rows()) * lambda_;
    return (R * weights_ - y_).norm();
}

} // namespace surrokit::kernelreg
