#ifndef SURROKIT_ERRORS_HPP
#define SURROKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace surrokit {

// Bad caller input: shapes, ranges, malformed files, unknown fields.
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown: failed factorization, non-finite intermediate,
// degenerate problem that cannot be solved as posed.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace surrokit

#endif
