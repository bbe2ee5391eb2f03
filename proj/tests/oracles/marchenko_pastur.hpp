#pragma once

// Closed-form Marchenko-Pastur law for Q = X X^T, X M x N with entry variance
// 1/N, c = M/N <= 1.

#include <cmath>
#include <complex>

namespace oracle {

inline std::complex<double> mp_stieltjes(double c, std::complex<double> z)
{
    const auto disc = std::sqrt((z - 1.0 - c) * (z - 1.0 - c) - 4.0 * c);
    const auto r1 = (1.0 - c - z + disc) / (2.0 * c * z);
    const auto r2 = (1.0 - c - z - disc) / (2.0 * c * z);
    // Both roots solve the quadratic; the transform is the one in C+.
    return r1.imag() > r2.imag() ? r1 : r2;
}

inline double mp_density(double c, double x)
{
    const double a = (1 - std::sqrt(c)) * (1 - std::sqrt(c));
    const double b = (1 + std::sqrt(c)) * (1 + std::sqrt(c));
    if (x <= a || x >= b) {
        return 0.0;
    }
    return std::sqrt((b - x) * (x - a)) / (2.0 * M_PI * c * x);
}

} // namespace oracle
