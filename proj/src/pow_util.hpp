#pragma once

#include <cmath>

namespace driftflux::detail {

// Fast paths for the exponents that dominate the hot loops (gamma = 2,
// theta = 1/2 and friends); falls back to std::pow otherwise.
inline double pow_fast(double x, double e) {
    if (e == 2.0) return x * x;
    if (e == 1.0) return x;
    if (e == 0.5) return std::sqrt(x);
    if (e == 1.5) return x * std::sqrt(x);
    if (e == 3.0) return x * x * x;
    if (e == 2.5) return x * x * std::sqrt(x);
    return std::pow(x, e);
}

}  // namespace driftflux::detail
