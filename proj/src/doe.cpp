#include "doe.hpp"

#include "csv.hpp"
#include "errors.hpp"
#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace surrokit::doe {

void InputSpace::validate() const {
    if (lo.size() == 0) throw input_error("input space: empty");
    if (lo.size() != hi.size() || names.size() != static_cast<std::size_t>(lo.size()))
        throw input_error("input space: inconsistent field sizes");
    for (int i = 0; i < dim(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
            throw input_error("input space: non-finite bound for '" + names[i] + "'");
        if (!(lo[i] < hi[i]))
            throw input_error("input space: min >= max for '" + names[i] + "'");
    }
}

Eigen::VectorXd InputSpace::normalize(const Eigen::VectorXd& x) const {
    if (x.size() != lo.size()) throw input_error("normalize: dimension mismatch");
    return (x - lo).cwiseQuotient(hi - lo);
}

Eigen::VectorXd InputSpace::denormalize(const Eigen::VectorXd& u) const {
    if (u.size() != lo.size()) throw input_error("denormalize: dimension mismatch");
    return lo + u.cwiseProduct(hi - lo);
}

Eigen::MatrixXd InputSpace::normalize_rows(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd U(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) U.row(i) = normalize(X.row(i));
    return U;
}

Eigen::MatrixXd InputSpace::denormalize_rows(const Eigen::MatrixXd& U) const {
    Eigen::MatrixXd X(U.rows(), U.cols());
    for (Eigen::Index i = 0; i < U.rows(); ++i) X.row(i) = denormalize(U.row(i));
    return X;
}

InputSpace InputSpace::default_pin_study() {
    InputSpace s;
    s.names = {"cycle_length_efpd", "plutonium_content_pct", "hole_diameter_mm",
               "clad_external_diameter_mm", "fuel_clad_gap_mm", "clad_thickness_mm",
               "pin_height_mm", "average_pin_power_w_cm", "axial_form_factor",
               "power_shift", "expansion_volume_cm3"};
    s.lo.resize(11);
    s.hi.resize(11);
    s.lo << 360, 10, 0.125, 6.2, 0.1, 0.5, 60, 150, 1.0, 0.8, 32;
    s.hi << 440, 30, 3.0, 12.8, 0.2, 0.6, 160, 440, 1.6, 1.2, 94;
    return s;
}

InputSpace load_space_csv(const std::string& path) {
    const auto t = csv::read(path);
    const int cname = t.column("name"), cmin = t.column("min"), cmax = t.column("max");
    if (cname < 0 || cmin < 0 || cmax < 0)
        throw input_error("space file '" + path + "': header must contain name,min,max");
    InputSpace s;
    s.lo.resize(static_cast<Eigen::Index>(t.rows.size()));
    s.hi.resize(static_cast<Eigen::Index>(t.rows.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        s.names.push_back(r[cname]);
        s.lo[static_cast<Eigen::Index>(i)] =
            csv::parse_double(r[cmin], "space file field 'min' for '" + r[cname] + "'");
        s.hi[static_cast<Eigen::Index>(i)] =
            csv::parse_double(r[cmax], "space file field 'max' for '" + r[cname] + "'");
    }
    s.validate();
    return s;
}

void save_space_csv(const InputSpace& space, const std::string& path) {
    space.validate();
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < space.dim(); ++i)
        rows.push_back({space.names[i], csv::format_double(space.lo[i]),
                        csv::format_double(space.hi[i])});
    csv::write(path, {"name", "min", "max"}, rows);
}

namespace {

double min_pairwise_distance(const Eigen::MatrixXd& U) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < U.rows(); ++i)
        for (Eigen::Index j = i + 1; j < U.rows(); ++j)
            best = std::min(best, (U.row(i) - U.row(j)).squaredNorm());
    return best;
}

} // namespace

Design lhs_maximin(const InputSpace& space, int n, std::uint64_t seed, int sweeps) {
    space.validate();
    if (n < 2) throw input_error("lhs_maximin: need n >= 2");
    const int d = space.dim();
    std::mt19937_64 rng(stats::splitmix64(seed));
    auto unit = [&]() { return stats::hash_to_unit(rng()); };

    // One point per stratum per dimension, jittered within the stratum.
    Eigen::MatrixXd U(n, d);
    std::vector<int> perm(n);
    for (int j = 0; j < d; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[static_cast<int>(unit() * (i + 1))]);
        for (int i = 0; i < n; ++i)
            U(i, j) = (perm[i] + unit()) / static_cast<double>(n);
    }

    // Swap acceptance bookkeeping: the squared pairwise distance matrix,
    // the current minimum, and how many pairs achieve it. A proposal can
    // only raise the minimum when every minimal pair involves one of the
    // two swapped rows, which keeps the accept test O(n).
    Eigen::MatrixXd dist2(n, n);
    double cur_min = std::numeric_limits<double>::infinity();
    long cnt_min = 0;
    auto rescan = [&]() {
        cur_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) cur_min = std::min(cur_min, dist2(i, j));
        cnt_min = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (dist2(i, j) == cur_min) ++cnt_min;
    };
    for (int i = 0; i < n; ++i) {
        dist2(i, i) = std::numeric_limits<double>::infinity();
        for (int j = i + 1; j < n; ++j) {
            const double v = (U.row(i) - U.row(j)).squaredNorm();
            dist2(i, j) = v;
            dist2(j, i) = v;
        }
    }
    rescan();

    Eigen::VectorXd new1(n), new2(n);
    const long iterations = static_cast<long>(std::max(0, sweeps)) * n;
    for (long it = 0; it < iterations; ++it) {
        const int col = static_cast<int>(unit() * d);
        const int r1 = static_cast<int>(unit() * n);
        int r2 = static_cast<int>(unit() * (n - 1));
        if (r2 >= r1) ++r2;

        long inv_old_at_min = 0;
        for (int k = 0; k < n; ++k) {
            if (k != r1 && dist2(r1, k) == cur_min) ++inv_old_at_min;
            if (k != r2 && k != r1 && dist2(r2, k) == cur_min) ++inv_old_at_min;
        }
        if (cnt_min > inv_old_at_min) continue; // a minimal pair stays untouched

        std::swap(U(r1, col), U(r2, col));
        double new_inv_min = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            new1[k] = (k == r1) ? std::numeric_limits<double>::infinity()
                                : (U.row(r1) - U.row(k)).squaredNorm();
            new2[k] = (k == r2) ? std::numeric_limits<double>::infinity()
                                : (U.row(r2) - U.row(k)).squaredNorm();
            if (k != r1) new_inv_min = std::min(new_inv_min, new1[k]);
            if (k != r2 && k != r1) new_inv_min = std::min(new_inv_min, new2[k]);
        }
        if (new_inv_min > cur_min) {
            dist2.row(r1) = new1;
            dist2.col(r1) = new1;
            dist2.row(r2) = new2;
            dist2.col(r2) = new2;
            dist2(r1, r2) = dist2(r2, r1) = new1[r2];
            rescan();
        } else {
            std::swap(U(r1, col), U(r2, col));
        }
    }

    Design dgn;
    dgn.normalized = U;
    dgn.rows = space.denormalize_rows(U);
    dgn.seed = seed;
    dgn.names = space.names;
    return dgn;
}

Design feasibility_filter(const Design& design, const RowPredicate& predicate, int* removed) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < design.rows.rows(); ++i)
        if (predicate(design.rows.row(i))) keep.push_back(i);
    Design out;
    out.seed = design.seed;
    out.names = design.names;
    out.rows.resize(static_cast<Eigen::Index>(keep.size()), design.rows.cols());
    out.normalized.resize(static_cast<Eigen::Index>(keep.size()), design.rows.cols());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.rows.row(static_cast<Eigen::Index>(k)) = design.rows.row(keep[k]);
        out.normalized.row(static_cast<Eigen::Index>(k)) = design.normalized.row(keep[k]);
    }
    if (removed) *removed = design.n() - out.n();
    return out;
}

bool pin_geometry_feasible(const Eigen::VectorXd& row) {
    if (row.size() < 6) throw input_error("pin_geometry_feasible: needs at least 6 columns");
    return row[3] > row[2] + 2.0 * row[4] + 2.0 * row[5];
}

std::pair<Design, Eigen::VectorXd> segment_scan(const InputSpace& space,
                                                const Eigen::VectorXd& a,
                                                const Eigen::VectorXd& b, int count) {
    space.validate();
    if (a.size() != space.dim() || b.size() != space.dim())
        throw input_error("segment_scan: endpoint dimension mismatch");
    if (count < 2) throw input_error("segment_scan: need count >= 2");
    if ((a - b).norm() == 0.0) throw input_error("segment_scan: endpoints coincide");
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] < 0.0 || a[i] > 1.0 || b[i] < 0.0 || b[i] > 1.0)
            throw input_error("segment_scan: endpoints must lie in [0,1]^d");

    Design dgn;
    dgn.names = space.names;
    dgn.normalized.resize(count, space.dim());
    Eigen::VectorXd ts(count);
    for (int k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(count - 1);
        ts[k] = t;
        dgn.normalized.row(k) = a + t * (b - a);
    }
    dgn.rows = space.denormalize_rows(dgn.normalized);
    return {dgn, ts};
}

void save_design_csv(const Design& design, const std::string& path) {
    std::vector<std::string> header = {"row"};
    header.insert(header.end(), design.names.begin(), design.names.end());
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < design.n(); ++i) {
        std::vector<std::string> r = {std::to_string(i)};
        for (int j = 0; j < design.dim(); ++j)
            r.push_back(csv::format_double(design.rows(i, j)));
        rows.push_back(std::move(r));
    }
    csv::write(path, header, rows);
}

Design load_design_csv(const InputSpace& space, const std::string& path) {
    const auto t = csv::read(path);
    std::size_t offset = (!t.header.empty() && t.header[0] == "row") ? 1 : 0;
    if (t.header.size() - offset != static_cast<std::size_t>(space.dim()))
        throw input_error("design file '" + path + "': expected " +
                          std::to_string(space.dim()) + " parameter columns");
    Design dgn;
    dgn.names = space.names;
    dgn.rows.resize(static_cast<Eigen::Index>(t.rows.size()), space.dim());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (int j = 0; j < space.dim(); ++j)
            dgn.rows(static_cast<Eigen::Index>(i), j) = csv::parse_double(
                t.rows[i][offset + j], "design file column '" + t.header[offset + j] + "'");
    dgn.normalized = space.normalize_rows(dgn.rows);
    return dgn;
}

} // namespace surrokit::doe
