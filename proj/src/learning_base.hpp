#ifndef SURROKIT_LEARNING_BASE_HPP
#define SURROKIT_LEARNING_BASE_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

namespace surrokit {

// Paired design matrix and scalar outputs plus the normalization bounds
// every fit shares. Bounds come from the generating input space when the
// base was produced by the testbed, or from the data min/max when loaded
// from a bare CSV.
struct LearningBase {
    Eigen::MatrixXd X;              // physical units, n x d
    Eigen::VectorXd y;
    Eigen::VectorXd lo, hi;         // normalization metadata
    std::vector<std::string> names; // d column labels
    std::vector<std::string> warnings; // per row, ';'-joined codes, may be empty

    int n() const { return static_cast<int>(X.rows()); }
    int dim() const { return static_cast<int>(X.cols()); }

    // (x - lo)/(hi - lo) per column; a zero-span column maps to 0.
    Eigen::MatrixXd normalized() const;
    Eigen::VectorXd normalize_point(const Eigen::VectorXd& x) const;

    void validate() const;

    // Recompute lo/hi as the column-wise data range.
    void rebound_from_data();
};

// Base CSV: input columns, output, warnings, status. Rows whose status is
// not "ok" are skipped on load.
void save_base_csv(const LearningBase& base, const std::string& path);
LearningBase load_base_csv(const std::string& path);

} // namespace surrokit

#endif
