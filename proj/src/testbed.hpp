#ifndef SURROKIT_TESTBED_HPP
#define SURROKIT_TESTBED_HPP

#include "doe.hpp"
#include "learning_base.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace surrokit::testbed {

// Synthetic code manager: a smooth 11-parameter response plus a
// mesh-discretization instability tied to the pin-height coordinate
// (preprocessor v1; v2 reduces it to 0.3x) and hash-triggered silent
// failures flagged W1 (postprocessor v1 keeps them in bases, v2 drops).
struct CodeManagerConfig {
    int preprocessor_version = 1;   // 1 or 2
    int postprocessor_version = 1;  // 1 or 2
    int mesh_nodes = 20;
    double instability_scale = 25.0;  // output units
    double failure_rate = 0.004;
    double failure_offset = 400.0;    // output units
    std::uint64_t seed = 0;

    void validate() const;
};

inline constexpr const char* kFailureWarning = "W1";

// Default study sizes for full-scale bases.
inline constexpr int kDefaultLearnSize = 3807;
inline constexpr int kDefaultTestSize = 1613;

struct RunRecord {
    Eigen::VectorXd x;  // physical units
    double y = 0.0;
    std::vector<std::string> warnings;

    bool failed() const;
};

// Deterministic smooth part of the response on normalized inputs. By
// construction it does not depend on coordinates 7 (pin height) and 11
// (expansion volume); the dominant effects sit on coordinates 8, 9, 10
// (power map) and 3, 4 (geometry). Exact formula in the implementation.
double smooth_response(const Eigen::VectorXd& u);

// Mesh node index the v1 preprocessor assigns to a pin height.
int mesh_node(double u_height, int mesh_nodes);

// Instability term alone (no smooth part, no failures), for paired tests.
double instability_term(const CodeManagerConfig& cfg, const Eigen::VectorXd& u);

RunRecord run(const doe::InputSpace& space, const CodeManagerConfig& cfg,
              const Eigen::VectorXd& x_physical);

// Runs every design row through the manager and applies the configured
// postprocessor: v1 keeps W1 rows (warning recorded), v2 drops them.
LearningBase run_design(const doe::InputSpace& space, const CodeManagerConfig& cfg,
                        const doe::Design& design);

// LHS-maximin learning/test designs, geometry-filtered, run through the
// manager. Counts can shrink under postprocessor v2.
std::pair<LearningBase, LearningBase> build_bases(const doe::InputSpace& space,
                                                  const CodeManagerConfig& cfg, int n_learn,
                                                  int n_test, std::uint64_t seed,
                                                  int sweeps = 5);

} // namespace surrokit::testbed

#endif
