#ifndef SURROKIT_NELDER_MEAD_HPP
#define SURROKIT_NELDER_MEAD_HPP

#include <Eigen/Core>
#include <functional>

namespace surrokit::optimize {

struct NelderMeadOptions {
    int max_evals = 600;
    double f_tol = 1e-8;    // absolute spread of simplex values
    double x_tol = 1e-7;    // max coordinate spread of the simplex
    double init_step = 0.4; // initial simplex edge, per coordinate
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
    // True when the run never improved on the starting point by more
    // than f_tol; callers use it as a non-progress signal.
    bool no_progress = false;
};

// Downhill simplex restricted to the box [lo, hi]; candidate points are
// projected onto the box before evaluation. The objective may signal a
// failed evaluation by returning +inf.
NelderMeadResult nelder_mead_box(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi,
                                 const NelderMeadOptions& opts = {});

} // namespace surrokit::optimize

#endif
