#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace critlog {

// Extended precision is required: ball minimizers with small |theta| live at
// amplitudes far below the double-precision range.
using real = long double;

inline constexpr real pi = 3.141592653589793238462643383279502884L;

/// Raised when an argument violates a documented precondition.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative method fails to meet its contract.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Radial profile on the nodes r_0..r_{M-1} of a RadialGrid. The Dirichlet
 * value at r_M = R is implied and never stored.
 */
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::size_t size, real fill = 0) : values_(size, fill) {}
    explicit GridFunction(std::vector<real> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    real& operator[](std::size_t i) { return values_[i]; }
    real operator[](std::size_t i) const { return values_[i]; }

    std::span<real> values() { return values_; }
    std::span<const real> values() const { return values_; }
    const std::vector<real>& vector() const { return values_; }

    bool all_finite() const;
    bool all_positive() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(real factor);

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    std::vector<real> values_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(real factor, GridFunction u);

/// u += factor * v.
void axpy(GridFunction& u, real factor, const GridFunction& v);

}  // namespace critlog
