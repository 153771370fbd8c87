#include "kriging.hpp"

#include "errors.hpp"
#include "nelder_mead.hpp"
#include "stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

namespace surrokit::kriging {

namespace {

constexpr double kAlphaSnap = 1e-7;   // profiled alpha below this becomes exactly 0
constexpr double kDegenerateVar = 1e-30;

std::string describe_params(const covariance::LengthScales& ell, double alpha) {
    std::ostringstream os;
    os << "ell=(";
    for (Eigen::Index i = 0; i < ell.ell.size(); ++i)
        os << (i ? "," : "") << ell.ell[i];
    os << "), alpha=" << alpha;
    return os.str();
}

Eigen::LLT<Eigen::MatrixXd> factorize(const covariance::CorrelationMatrix& R,
                                      const covariance::LengthScales& ell, double alpha) {
    Eigen::MatrixXd M = R.entries;
    if (R.jitter > 0.0) M.diagonal().array() += R.jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw numeric_error("kriging: correlation matrix factorization failed at " +
                            describe_params(ell, alpha));
    return llt;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// Uniform subsample of {0..n-1} without replacement, seeded.
std::vector<Eigen::Index> subsample_indices(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
    std::vector<Eigen::Index> idx(n);
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::mt19937_64 rng(stats::splitmix64(seed ^ 0x517cc1b727220a95ULL));
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto j = i + static_cast<Eigen::Index>(
            stats::hash_to_unit(rng()) * static_cast<double>(n - i));
        std::swap(idx[i], idx[std::min(j, n - 1)]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace

double neg_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const covariance::LengthScales& ell, double alpha) {
    if (X.rows() != y.size()) throw input_error("neg_log_likelihood: X/y size mismatch");
    if (X.rows() < 1) throw input_error("neg_log_likelihood: empty design");
    const auto R = covariance::assemble_correlation(X, ell, alpha);
    const auto llt = factorize(R, ell, alpha);
    const Eigen::VectorXd w = llt.solve(y);
    const double n = static_cast<double>(X.rows());
    const double quad = y.dot(w) / n;
    if (quad <= 0.0)
        return quad == 0.0 ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    return std::log(quad) + log_det(llt) / n;
}

double LikelihoodProfile::value(double alpha) const {
    const double shift = alpha - alpha_tilde;
    const Eigen::Index n = s.size();
    double quad = 0.0, ld = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double si = s[i] + shift;
        if (!(si > 0.0))
            throw input_error("likelihood profile: alpha violates positivity");
        quad += v[i] * v[i] / si;
        ld += std::log(si);
    }
    quad /= static_cast<double>(n);
    if (quad <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(quad) + ld / static_cast<double>(n);
}

LikelihoodProfile make_profile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const covariance::LengthScales& ell, double alpha_tilde) {
    const auto R = covariance::assemble_correlation(X, ell, alpha_tilde);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R.entries);
    if (es.info() != Eigen::Success)
        throw numeric_error("kriging: eigendecomposition failed at " +
                            describe_params(ell, alpha_tilde));
    LikelihoodProfile prof;
    prof.alpha_tilde = alpha_tilde;
    prof.s = es.eigenvalues().reverse();
    prof.v = (es.eigenvectors().transpose() * y).reverse();
    return prof;
}

Step1Result fit_step1(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const KrigingConfig& cfg) {
    const Eigen::Index n = X.rows(), d = X.cols();
    if (n < 1 || d < 1) throw input_error("fit_step1: empty design");
    if (y.size() != n) throw input_error("fit_step1: X/y size mismatch");
    const Eigen::Index k = std::min<Eigen::Index>(n, std::max(1, cfg.subsample_size));

    Eigen::MatrixXd Xs;
    Eigen::VectorXd ys;
    if (k == n) {
        Xs = X;
        ys = y;
    } else {
        const auto idx = subsample_indices(n, k, cfg.seed);
        Xs.resize(k, d);
        ys.resize(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            Xs.row(i) = X.row(idx[i]);
            ys[i] = y[idx[i]];
        }
    }

    // Optimize in z = (log ell_1..d, log(alpha + eps)).
    const double eps = 1e-8;
    Eigen::VectorXd lo(d + 1), hi(d + 1);
    lo.head(d).setConstant(std::log(cfg.ell_min));
    hi.head(d).setConstant(std::log(cfg.ell_max));
    lo[d] = std::log(eps);
    hi[d] = std::log(cfg.alpha_max + eps);

    auto objective = [&](const Eigen::VectorXd& z) {
        covariance::LengthScales ell;
        ell.ell = z.head(d).array().exp();
        const double alpha = std::max(0.0, std::exp(z[d]) - eps);
        try {
            return neg_log_likelihood(Xs, ys, ell, alpha);
        } catch (const numeric_error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    optimize::NelderMeadOptions nm;
    nm.max_evals = cfg.max_evals;

    std::mt19937_64 rng(stats::splitmix64(cfg.seed));
    auto uniform = [&](double a, double b) { return a + (b - a) * stats::hash_to_unit(rng()); };

    // Start points drawn up front so the result does not depend on
    // scheduling; restarts then run concurrently (no shared state) and
    // reduce by objective with index tie-break.
    const int restarts = std::max(1, cfg.restarts);
    std::vector<Eigen::VectorXd> starts(restarts);
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd z0(d + 1);
        if (r == 0) {
            // Deterministic center start: ell = 0.5, alpha = 0.01.
            z0.head(d).setConstant(std::log(0.5));
            z0[d] = std::log(0.01 + eps);
        } else {
            for (Eigen::Index i = 0; i < d; ++i) z0[i] = uniform(lo[i], hi[i]);
            z0[d] = uniform(lo[d], hi[d]);
        }
        starts[r] = z0;
    }

    std::vector<std::future<optimize::NelderMeadResult>> tasks;
    tasks.reserve(restarts);
    for (int r = 0; r < restarts; ++r)
        tasks.push_back(std::async(std::launch::async, [&, r] {
            return optimize::nelder_mead_box(objective, starts[r], lo, hi, nm);
        }));

    Step1Result best;
    best.objective = std::numeric_limits<double>::infinity();
    bool any_progress = false;
    for (auto& task : tasks) {
        const auto res = task.get();
        if (!res.no_progress) any_progress = true;
        if (res.f < best.objective) {
            best.objective = res.f;
            best.ell.ell = res.x.head(d).array().exp();
            best.alpha_tilde = std::max(0.0, std::exp(res.x[d]) - eps);
        }
    }
    if (!std::isfinite(best.objective)) {
        // All restarts failed to evaluate (e.g. y == 0 gives -inf quad term);
        // fall back to the center point with a warning.
        best.ell.ell = Eigen::VectorXd::Constant(d, 0.5);
        best.alpha_tilde = 0.0;
        best.warning = true;
        return best;
    }
    best.warning = !any_progress;
    return best;
}

double profile_nugget(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const covariance::LengthScales& ell_hat, double alpha_tilde,
                      const KrigingConfig& cfg) {
    const auto prof = make_profile(X, y, ell_hat, alpha_tilde);
    const double floor = std::max(1e-8, prof.lower_bound() + 1e-8);
    const double ceil = cfg.alpha_max;
    if (!(floor < ceil))
        throw input_error("profile_nugget: no admissible alpha candidate below alpha_max");

    const int m = std::max(2, cfg.profile_grid);
    const double lf = std::log(floor), lc = std::log(ceil);
    int best_i = 0;
    double best_v = std::numeric_limits<double>::infinity();
    std::vector<double> grid(m);
    for (int i = 0; i < m; ++i) {
        grid[i] = std::exp(lf + (lc - lf) * static_cast<double>(i) / (m - 1));
        const double v = prof.value(grid[i]);
        if (v < best_v) {
            best_v = v;
            best_i = i;
        }
    }

    // Golden-section refinement between the neighbours of the best grid point,
    // in log space.
    double a = std::log(grid[std::max(0, best_i - 1)]);
    double b = std::log(grid[std::min(m - 1, best_i + 1)]);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), dpt = a + gr * (b - a);
    double fc = prof.value(std::exp(c)), fd = prof.value(std::exp(dpt));
    for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
        if (fc < fd) {
            b = dpt; dpt = c; fd = fc;
            c = b - gr * (b - a);
            fc = prof.value(std::exp(c));
        } else {
            a = c; c = dpt; fc = fd;
            dpt = a + gr * (b - a);
            fd = prof.value(std::exp(dpt));
        }
    }
    const double refined = std::exp((a + b) / 2);
    return prof.value(refined) < best_v ? refined : grid[best_i];
}

void KrigingModel::finalize() {
    const auto R = covariance::assemble_correlation(X_, params_.ell, params_.alpha);
    jitter_ = R.jitter;
    factor_ = factorize(R, params_.ell, params_.alpha);
    alpha_weights_ = factor_.solve(y_);
    loo_cache_.reset();
}

KrigingModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KrigingConfig& cfg) {
    if (X.rows() < 2) throw input_error("kriging fit: need at least 2 points");
    if (X.rows() != y.size()) throw input_error("kriging fit: X/y size mismatch");

    const auto step1 = fit_step1(X, y, cfg);
    double alpha_hat = profile_nugget(X, y, step1.ell, step1.alpha_tilde, cfg);
    if (alpha_hat < kAlphaSnap) alpha_hat = 0.0;

    KrigingModel m;
    m.X_ = X;
    m.y_ = y;
    m.params_.ell = step1.ell;
    m.params_.alpha = alpha_hat;
    m.params_.sigma2 = 1.0;
    m.warning_ = step1.warning;
    m.finalize();
    const double sigma2 = y.dot(m.alpha_weights_) / static_cast<double>(X.rows());
    if (sigma2 < kDegenerateVar) {
        m.degenerate_ = true;
        m.params_.sigma2 = 0.0;
        m.warning_ = true;
    } else {
        m.params_.sigma2 = sigma2;
    }
    return m;
}

KrigingModel fit_with_params(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const covariance::CovarianceParams& params) {
    if (X.rows() < 1) throw input_error("kriging fit_with_params: empty design");
    if (X.rows() != y.size()) throw input_error("kriging fit_with_params: X/y size mismatch");
    if (!(params.sigma2 >= 0.0)) throw input_error("kriging fit_with_params: sigma2 < 0");
    KrigingModel m;
    m.X_ = X;
    m.y_ = y;
    m.params_ = params;
    m.degenerate_ = params.sigma2 < kDegenerateVar;
    m.finalize();
    return m;
}

Prediction KrigingModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != X_.cols()) throw input_error("kriging predict: dimension mismatch");
    Prediction p;
    p.extrapolated = (x.array() < -0.1).any() || (x.array() > 1.1).any();
    if (degenerate_) return p;
    const Eigen::VectorXd r = covariance::cross_correlation(X_, x, params_.ell, params_.alpha);
    p.mean = r.dot(alpha_weights_);
    const double q = r.dot(factor_.solve(r));
    p.variance = std::max(0.0, params_.sigma2 * (1.0 + params_.alpha - q));
    return p;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> KrigingModel::loo_errors() const {
    const Eigen::Index n = X_.rows();
    if (!loo_cache_) {
        const Eigen::MatrixXd Rinv = factor_.solve(Eigen::MatrixXd::Identity(n, n));
        loo_cache_ = Rinv.diagonal();
    }
    Eigen::VectorXd errors(n), variances(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        errors[i] = alpha_weights_[i] / (*loo_cache_)[i];
        variances[i] = params_.sigma2 / (*loo_cache_)[i];
    }
    return {errors, variances};
}

double KrigingModel::weights_residual() const {
    Eigen::MatrixXd R = covariance::assemble_correlation(X_, params_.ell, params_.alpha).entries;
    R.diagonal().array() += jitter_;
    return (R * alpha_weights_ - y_).norm();
}

std::pair<double, double> confidence_interval(const Prediction& pred, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw input_error("confidence_interval: level must lie in (0,1)");
    const double z = stats::normal_quantile((1.0 + level) / 2.0);
    const double half = z * std::sqrt(pred.variance);
    return {pred.mean - half, pred.mean + half};
}

} // namespace surrokit::kriging
