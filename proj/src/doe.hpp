#ifndef SURROKIT_DOE_HPP
#define SURROKIT_DOE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace surrokit::doe {

// Hyper-rectangular input domain in physical units.
struct InputSpace {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    std::vector<std::string> names;

    int dim() const { return static_cast<int>(lo.size()); }
    void validate() const;

    Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;
    Eigen::VectorXd denormalize(const Eigen::VectorXd& u) const;
    Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& X) const;
    Eigen::MatrixXd denormalize_rows(const Eigen::MatrixXd& U) const;

    // The 11-parameter fuel-pin study domain used by the testbed.
    static InputSpace default_pin_study();
};

InputSpace load_space_csv(const std::string& path);
void save_space_csv(const InputSpace& space, const std::string& path);

struct Design {
    Eigen::MatrixXd rows;        // physical units
    Eigen::MatrixXd normalized;  // (rows - lo) / (hi - lo), in [0,1]^d
    std::uint64_t seed = 0;
    std::vector<std::string> names;

    int n() const { return static_cast<int>(rows.rows()); }
    int dim() const { return static_cast<int>(rows.cols()); }
};

// Latin hypercube with stochastic maximin improvement: random column-pair
// swaps kept when they increase the minimum pairwise distance (Euclidean,
// normalized space). The Latin property is preserved by construction.
Design lhs_maximin(const InputSpace& space, int n, std::uint64_t seed, int sweeps = 10);

using RowPredicate = std::function<bool(const Eigen::VectorXd& physical_row)>;

// Keeps rows where the predicate holds; removed count reported if asked.
Design feasibility_filter(const Design& design, const RowPredicate& predicate,
                          int* removed = nullptr);

// Default pin-geometry feasibility: the clad must enclose hole, gap and
// clad walls, i.e. x4 > x3 + 2 x5 + 2 x6 (1-based coordinates).
bool pin_geometry_feasible(const Eigen::VectorXd& row);

// Evenly spaced points a + t (b - a), t = 0, 1/(count-1), ..., 1, with a
// and b in normalized coordinates. Returns the design and the t values.
std::pair<Design, Eigen::VectorXd> segment_scan(const InputSpace& space,
                                                const Eigen::VectorXd& a,
                                                const Eigen::VectorXd& b, int count);

void save_design_csv(const Design& design, const std::string& path);
Design load_design_csv(const InputSpace& space, const std::string& path);

} // namespace surrokit::doe

#endif
