#include "covariance.hpp"

#include "errors.hpp"

#include <cmath>

namespace surrokit::covariance {

namespace {
const double kSqrt6 = std::sqrt(6.0);

void check_lengths(const LengthScales& ell) {
    if (ell.ell.size() == 0) throw input_error("matern32: empty length scales");
    for (Eigen::Index i = 0; i < ell.ell.size(); ++i)
        if (!(ell.ell[i] > 0.0))
            throw input_error("matern32: nonpositive length scale at dimension " +
                              std::to_string(i + 1));
}
} // namespace

double CovarianceParams::nugget_sd() const { return std::sqrt(sigma2 * alpha); }

double matern32_scaled(double r) {
    const double s = kSqrt6 * r;
    return (1.0 + s) * std::exp(-s);
}

double matern32(const Eigen::VectorXd& h, const LengthScales& ell) {
    check_lengths(ell);
    if (h.size() != ell.ell.size())
        throw input_error("matern32: lag/length-scale dimension mismatch");
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        const double t = h[i] / ell.ell[i];
        r2 += t * t;
    }
    return matern32_scaled(std::sqrt(r2));
}

CorrelationMatrix assemble_correlation(const Eigen::MatrixXd& X, const LengthScales& ell,
                                       double alpha) {
    check_lengths(ell);
    if (X.cols() != ell.ell.size())
        throw input_error("assemble_correlation: design/length-scale dimension mismatch");
    if (!X.allFinite()) throw input_error("assemble_correlation: non-finite design entry");
    if (alpha < 0.0) throw input_error("assemble_correlation: negative alpha");

    const Eigen::Index n = X.rows(), d = X.cols();
    CorrelationMatrix out;
    out.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.entries(i, i) = 1.0 + alpha;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double r2 = 0.0;
            bool equal = true;
            for (Eigen::Index k = 0; k < d; ++k) {
                const double diff = X(i, k) - X(j, k);
                if (diff != 0.0) equal = false;
                const double t = diff / ell.ell[k];
                r2 += t * t;
            }
            double v = matern32_scaled(std::sqrt(r2));
            if (equal) {
                v += alpha;
                out.has_duplicates = true;
            }
            out.entries(i, j) = v;
            out.entries(j, i) = v;
        }
    }
    if (alpha < 1e-8 || out.has_duplicates) out.jitter = 1e-10;
    return out;
}

Eigen::VectorXd cross_correlation(const Eigen::MatrixXd& X, const Eigen::VectorXd& x,
                                  const LengthScales& ell, double alpha) {
    check_lengths(ell);
    if (X.cols() != x.size() || x.size() != ell.ell.size())
        throw input_error("cross_correlation: dimension mismatch");
    if (!x.allFinite()) throw input_error("cross_correlation: non-finite point");

    const Eigen::Index n = X.rows(), d = X.cols();
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double r2 = 0.0;
        bool equal = true;
        for (Eigen::Index k = 0; k < d; ++k) {
            const double diff = x[k] - X(i, k);
            if (diff != 0.0) equal = false;
            const double t = diff / ell.ell[k];
            r2 += t * t;
        }
        r[i] = matern32_scaled(std::sqrt(r2)) + (equal ? alpha : 0.0);
    }
    return r;
}

} // namespace surrokit::covariance
