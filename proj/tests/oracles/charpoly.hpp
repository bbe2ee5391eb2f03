#pragma once

// Largest eigenvalue of a symmetric 3x3 matrix by bisection on its
// characteristic polynomial.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

inline double largest_root_3x3(const Eigen::Matrix3d& A)
{
    const double tr = A.trace();
    const double m2 = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) + A(0, 0) * A(2, 2) -
                      A(0, 2) * A(2, 0) + A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
    const double det = A.determinant();
    auto p = [&](double x) { return ((x - tr) * x + m2) * x - det; };

    // Gershgorin: every eigenvalue lies in [-R, R]; p > 0 above the largest.
    double R = 0.0;
    for (int i = 0; i < 3; ++i) {
        R = std::max(R, std::abs(A(i, 0)) + std::abs(A(i, 1)) + std::abs(A(i, 2)));
    }
    R += 1.0;
    const int grid = 100000;
    const double h = 2.0 * R / grid;
    double hi = R;
    double lo = R - h;
    while (lo > -R && p(lo) > 0.0) {
        hi = lo;
        lo -= h;
    }
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) {
            break;
        }
        (p(m) > 0.0 ? hi : lo) = m;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle
