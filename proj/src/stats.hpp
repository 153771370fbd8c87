#ifndef SURROKIT_STATS_HPP
#define SURROKIT_STATS_HPP

#include <Eigen/Core>
#include <cstdint>

namespace surrokit::stats {

// Quantile of the standard normal distribution, p in (0,1).
// Accurate to ~1e-15 relative (rational approximation plus one Halley step).
double normal_quantile(double p);

// Population standard deviation (divisor n).
double stddev(const Eigen::VectorXd& v);

double mean(const Eigen::VectorXd& v);

// splitmix64 hash step; bit-exact on every platform.
std::uint64_t splitmix64(std::uint64_t x);

// Combine a hash state with another value.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Map a 64-bit hash to [0,1).
inline double hash_to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace surrokit::stats

#endif
