#include "testbed.hpp"

#include "errors.hpp"
#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace surrokit::testbed {

namespace {

std::uint64_t double_bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof(b));
    return b;
}

int coarse_bucket(double u, int levels) {
    const int b = static_cast<int>(u * levels);
    return std::clamp(b, 0, levels - 1);
}

// Deterministic noise in [-1,-0.5] U [0.5,1]: sign and magnitude from the
// cell hash. Keeping the magnitude off zero makes node-boundary jumps
// visible in scans.
double hash_noise(std::uint64_t seed, int node, int b_power, int b_form, int b_hole) {
    std::uint64_t h = stats::splitmix64(seed ^ 0xc2b2ae3d27d4eb4fULL);
    h = stats::hash_combine(h, static_cast<std::uint64_t>(node));
    h = stats::hash_combine(h, static_cast<std::uint64_t>(b_power));
    h = stats::hash_combine(h, static_cast<std::uint64_t>(b_form));
    h = stats::hash_combine(h, static_cast<std::uint64_t>(b_hole));
    const double sign = stats::hash_to_unit(h) < 0.5 ? -1.0 : 1.0;
    const double mag = 0.5 + 0.5 * stats::hash_to_unit(stats::splitmix64(h));
    return sign * mag;
}

} // namespace

void CodeManagerConfig::validate() const {
    if (preprocessor_version != 1 && preprocessor_version != 2)
        throw input_error("code manager: preprocessor version must be 1 or 2");
    if (postprocessor_version != 1 && postprocessor_version != 2)
        throw input_error("code manager: postprocessor version must be 1 or 2");
    if (mesh_nodes < 1) throw input_error("code manager: mesh_nodes must be positive");
    if (instability_scale < 0.0 || failure_offset < 0.0)
        throw input_error("code manager: scales must be nonnegative");
    if (failure_rate < 0.0 || failure_rate > 1.0)
        throw input_error("code manager: failure_rate outside [0,1]");
}

bool RunRecord::failed() const {
    return std::find(warnings.begin(), warnings.end(), kFailureWarning) != warnings.end();
}

double smooth_response(const Eigen::VectorXd& u) {
    if (u.size() != 11) throw input_error("smooth_response: expects 11 coordinates");
    // Indices (0-based): 0 cycle, 1 plutonium, 2 hole diameter, 3 clad
    // diameter, 4 gap, 5 clad thickness, 6 pin height (unused), 7 average
    // power, 8 axial form factor, 9 power shift, 10 expansion volume (unused).
    const double bump = std::exp(-((u[7] - 0.35) * (u[7] - 0.35) +
                                   (u[2] - 0.70) * (u[2] - 0.70) +
                                   (u[8] - 0.50) * (u[8] - 0.50)) /
                                 0.14);
    return 615.0
         - 920.0 * (u[7] - 0.5)
         - 215.0 * (u[8] - 0.5) * (0.55 + u[7])
         - 150.0 * (u[9] - 0.5) * (0.45 + u[7])
         + 185.0 * std::tanh(2.4 * (u[2] - 0.45))
         - 260.0 * (u[3] - 0.2) * (u[3] - 0.2)
         - 120.0 * std::tanh(2.8 * (u[7] - u[2]))
         + 90.0 * bump
         + 34.0 * (u[0] - 0.5)
         + 26.0 * (u[1] - 0.5)
         - 22.0 * (u[4] - 0.5)
         + 18.0 * (u[5] - 0.5);
}

int mesh_node(double u_height, int mesh_nodes) {
    return std::clamp(static_cast<int>(u_height * mesh_nodes), 0, mesh_nodes - 1);
}

double instability_term(const CodeManagerConfig& cfg, const Eigen::VectorXd& u) {
    if (u.size() != 11) throw input_error("instability_term: expects 11 coordinates");
    const int node = mesh_node(u[6], cfg.mesh_nodes);
    const double noise = hash_noise(cfg.seed, node, coarse_bucket(u[7], 6),
                                    coarse_bucket(u[8], 6), coarse_bucket(u[2], 6));
    const double amplitude =
        cfg.preprocessor_version == 1 ? cfg.instability_scale : 0.3 * cfg.instability_scale;
    return amplitude * noise;
}

RunRecord run(const doe::InputSpace& space, const CodeManagerConfig& cfg,
              const Eigen::VectorXd& x_physical) {
    cfg.validate();
    space.validate();
    if (x_physical.size() != space.dim()) throw input_error("testbed run: dimension mismatch");
    for (int j = 0; j < space.dim(); ++j) {
        const double tol = 1e-9 * (space.hi[j] - space.lo[j]);
        if (x_physical[j] < space.lo[j] - tol || x_physical[j] > space.hi[j] + tol)
            throw input_error("testbed run: '" + space.names[j] + "' out of bounds");
    }

    const Eigen::VectorXd u = space.normalize(x_physical);
    RunRecord rec;
    rec.x = x_physical;
    rec.y = smooth_response(u) + instability_term(cfg, u);

    // Failure trigger hashes the exact input bits, so reruns of the same
    // x reproduce the failure.
    std::uint64_t h = stats::splitmix64(cfg.seed ^ 0xa0761d6478bd642fULL);
    for (int j = 0; j < space.dim(); ++j) h = stats::hash_combine(h, double_bits(x_physical[j]));
    if (stats::hash_to_unit(h) < cfg.failure_rate) {
        const double sign = stats::hash_to_unit(stats::splitmix64(h)) < 0.5 ? -1.0 : 1.0;
        rec.y += sign * cfg.failure_offset;
        rec.warnings.push_back(kFailureWarning);
    }
    return rec;
}

LearningBase run_design(const doe::InputSpace& space, const CodeManagerConfig& cfg,
                        const doe::Design& design) {
    cfg.validate();
    std::vector<RunRecord> records;
    records.reserve(design.n());
    for (int i = 0; i < design.n(); ++i)
        records.push_back(run(space, cfg, design.rows.row(i)));

    std::vector<int> keep;
    for (int i = 0; i < design.n(); ++i)
        if (cfg.postprocessor_version == 1 || !records[i].failed()) keep.push_back(i);

    LearningBase base;
    base.names = space.names;
    base.lo = space.lo;
    base.hi = space.hi;
    base.X.resize(static_cast<Eigen::Index>(keep.size()), space.dim());
    base.y.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const auto& rec = records[keep[k]];
        base.X.row(static_cast<Eigen::Index>(k)) = rec.x;
        base.y[static_cast<Eigen::Index>(k)] = rec.y;
        std::string w;
        for (std::size_t a = 0; a < rec.warnings.size(); ++a)
            w += (a ? ";" : "") + rec.warnings[a];
        base.warnings.push_back(w);
    }
    base.validate();
    return base;
}

std::pair<LearningBase, LearningBase> build_bases(const doe::InputSpace& space,
                                                  const CodeManagerConfig& cfg, int n_learn,
                                                  int n_test, std::uint64_t seed, int sweeps) {
    const auto learn_design = doe::feasibility_filter(
        doe::lhs_maximin(space, n_learn, seed, sweeps), doe::pin_geometry_feasible);
    const auto test_design = doe::feasibility_filter(
        doe::lhs_maximin(space, n_test, stats::splitmix64(seed ^ 0x94d049bb133111ebULL),
                         sweeps),
        doe::pin_geometry_feasible);
    return {run_design(space, cfg, learn_design), run_design(space, cfg, test_design)};
}

} // namespace surrokit::testbed
