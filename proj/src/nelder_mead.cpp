#include "nelder_mead.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace surrokit::optimize {

namespace {
Eigen::VectorXd clamp_box(Eigen::VectorXd x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] = std::min(hi[i], std::max(lo[i], x[i]));
    return x;
}
} // namespace

NelderMeadResult nelder_mead_box(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi,
                                 const NelderMeadOptions& opts) {
    const Eigen::Index n = x0.size();
    if (n == 0) throw input_error("nelder_mead_box: empty start point");
    if (lo.size() != n || hi.size() != n)
        throw input_error("nelder_mead_box: bound dimension mismatch");

    NelderMeadResult res;
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    // Initial simplex: x0 plus one displaced vertex per coordinate.
    std::vector<Eigen::VectorXd> pts(n + 1);
    std::vector<double> vals(n + 1);
    pts[0] = clamp_box(x0, lo, hi);
    vals[0] = eval(pts[0]);
    const double f_start = vals[0];
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd p = pts[0];
        double step = opts.init_step * std::max(1.0, std::abs(p[i]));
        p[i] += (p[i] + step <= hi[i]) ? step : -step;
        pts[i + 1] = clamp_box(p, lo, hi);
        vals[i + 1] = eval(pts[i + 1]);
    }

    const double rho = 1.0, chi = 2.0, gamma = 0.5, sigma = 0.5;
    std::vector<int> order(n + 1);

    while (evals < opts.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        const int best = order[0], worst = order[n], second_worst = order[n - 1];

        double spread_f = vals[worst] - vals[best];
        double spread_x = 0.0;
        for (int k = 1; k <= n; ++k)
            spread_x = std::max(spread_x, (pts[order[k]] - pts[best]).cwiseAbs().maxCoeff());
        if ((std::isfinite(spread_f) && spread_f <= opts.f_tol) && spread_x <= opts.x_tol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int k = 0; k <= n; ++k)
            if (k != worst) centroid += pts[k];
        centroid /= static_cast<double>(n);

        Eigen::VectorXd xr = clamp_box(centroid + rho * (centroid - pts[worst]), lo, hi);
        double fr = eval(xr);

        if (fr < vals[best]) {
            Eigen::VectorXd xe = clamp_box(centroid + chi * (xr - centroid), lo, hi);
            double fe = eval(xe);
            if (fe < fr) { pts[worst] = xe; vals[worst] = fe; }
            else         { pts[worst] = xr; vals[worst] = fr; }
        } else if (fr < vals[second_worst]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            const bool outside = fr < vals[worst];
            Eigen::VectorXd xc = outside
                ? clamp_box(centroid + gamma * (xr - centroid), lo, hi)
                : clamp_box(centroid - gamma * (centroid - pts[worst]), lo, hi);
            double fc = eval(xc);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (int k = 0; k <= n; ++k) {
                    if (k == best) continue;
                    pts[k] = clamp_box(pts[best] + sigma * (pts[k] - pts[best]), lo, hi);
                    vals[k] = eval(pts[k]);
                    if (evals >= opts.max_evals) break;
                }
            }
        }
    }

    int ib = 0;
    for (int k = 1; k <= n; ++k)
        if (vals[k] < vals[ib]) ib = k;
    res.x = pts[ib];
    res.f = vals[ib];
    res.evals = evals;
    res.no_progress = !(res.f < f_start - opts.f_tol);
    return res;
}

} // namespace surrokit::optimize
