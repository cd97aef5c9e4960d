#pragma once
#include <stdexcept>
#include <string>

namespace leastangle {

// Bad caller input: malformed files, violated preconditions, dimension
// mismatches. The CLI maps this to exit code 2.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The numerics could not deliver: rank deficiency, separation,
// non-convergence. The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw input_error(what);
}

} // namespace detail
} // namespace leastangle
