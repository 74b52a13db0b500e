#pragma once

#include "critlog/types.hpp"

#include <cmath>

namespace critlog::detail {

// Symmetric tridiagonal solve (Thomas algorithm, no pivoting). `off[i]`
// couples unknowns i and i+1.
inline std::vector<real> solve_tridiagonal(std::span<const real> diag, std::span<const real> off,
                                           std::span<const real> rhs) {
    const std::size_t n = diag.size();
    std::vector<real> c(n), x(n);
    real pivot = diag[0];
    if (pivot == 0) throw convergence_error("tridiagonal solve: zero pivot at row 0");
    c[0] = n > 1 ? off[0] / pivot : 0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - off[i - 1] * c[i - 1];
        if (pivot == 0 || !std::isfinite(pivot))
            throw convergence_error("tridiagonal solve: singular pivot at row " + std::to_string(i));
        c[i] = i + 1 < n ? off[i] / pivot : 0;
        x[i] = (rhs[i] - off[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

}  // namespace critlog::detail
