#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace spectraledge {

struct AiryValue {
    double ai;
    double aip; // derivative
};

namespace detail {

using ld = long double;

constexpr ld kAi0 = 0.355028053887817239260063186004183176L;
constexpr ld kAip0 = -0.258819403792806798405183560189203963L;

// |x| <= 3: power series about 0.
inline std::array<ld, 2> airy_maclaurin(ld x)
{
    if (x == 0) {
        return {kAi0, kAip0};
    }
    const ld x3 = x * x * x;
    ld f = 1, fp = 0, g = x, gp = 1;
    ld tf = 1, tg = x;
    for (int k = 0; k < 200; ++k) {
        // f = sum a_k x^{3k}, g = sum b_k x^{3k+1}
        tf *= x3 / static_cast<ld>((3 * k + 2) * (3 * k + 3));
        tg *= x3 / static_cast<ld>((3 * k + 3) * (3 * k + 4));
        f += tf;
        g += tg;
        fp += tf * static_cast<ld>(3 * k + 3) / x;
        gp += tg * static_cast<ld>(3 * k + 4) / x;
        if (std::fabs(tf) + std::fabs(tg) < 1e-22L * (std::fabs(f) + std::fabs(g))) {
            break;
        }
    }
    return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

// |x| >= 8: asymptotic expansions truncated at the smallest term.
inline std::array<ld, 2> airy_asymptotic(ld x)
{
    const ld pi = std::numbers::pi_v<ld>;
    const ld ax = std::fabs(x);
    const ld zeta = 2 * ax * std::sqrt(ax) / 3;
    const ld q = std::sqrt(std::sqrt(ax));
    const ld iz = 1 / zeta;
    if (x > 0) {
        ld su = 1, sv = 1, u = 1, zk = 1, term = 1;
        for (int k = 1; k < 60; ++k) {
            u *= static_cast<ld>((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) /
                 (216.0L * k * (2 * k - 1));
            zk *= iz;
            const ld v = -static_cast<ld>(6 * k + 1) / (6 * k - 1) * u;
            const ld t = u * zk;
            if (t > term) {
                break;
            }
            term = t;
            const ld sgn = (k % 2) ? -1.0L : 1.0L;
            su += sgn * t;
            sv += sgn * v * zk;
        }
        const ld e = std::exp(-zeta) / (2 * std::sqrt(pi));
        return {e / q * su, -e * q * sv};
    }
    // Oscillatory side: even/odd split of the same coefficients.
    ld pu = 0, qu = 0, pv = 0, qv = 0, u = 1, zk = 1, term = 2;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            u *= static_cast<ld>((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) /
                 (216.0L * k * (2 * k - 1));
        }
        const ld v = k == 0 ? 1.0L : -static_cast<ld>(6 * k + 1) / (6 * k - 1) * u;
        if (k > 0) {
            zk *= iz;
        }
        const ld t = u * zk;
        if (t > term) {
            break;
        }
        term = t;
        const ld sgn = ((k / 2) % 2) ? -1.0L : 1.0L;
        if (k % 2 == 0) {
            pu += sgn * t;
            pv += sgn * v * zk;
        } else {
            qu += sgn * t;
            qv += sgn * v * zk;
        }
    }
    const ld ph = zeta + pi / 4;
    const ld s = std::sin(ph);
    const ld c = std::cos(ph);
    const ld r = 1 / std::sqrt(pi);
    return {r / q * (s * pu - c * qu), -r * q * (c * pv + s * qv)};
}

// Taylor expansion of y'' = x y about x0 evaluated at x0 + h.
inline std::array<ld, 2> airy_taylor(ld x0, ld y, ld yp, ld h)
{
    ld am1 = 0, a0 = y, a1 = yp;
    ld val = a0 + a1 * h;
    ld der = a1;
    ld hp = h; // h^{n+1}
    for (int n = 0; n < 80; ++n) {
        // a_{n+2} = (x0 a_n + a_{n-1}) / ((n+1)(n+2))
        const ld a2 = (x0 * a0 + am1) / static_cast<ld>((n + 1) * (n + 2));
        const ld hn1 = hp;
        const ld hn2 = hp * h;
        val += a2 * hn2;
        der += static_cast<ld>(n + 2) * a2 * hn1;
        hp = hn2;
        am1 = a0;
        a0 = a1;
        a1 = a2;
        if (n > 6 && std::fabs(a2 * hn2) < 1e-24L * (std::fabs(val) + 1e-300L) &&
            std::fabs(a1 * hn2) < 1e-24L * (std::fabs(val) + 1e-300L)) {
            break;
        }
    }
    return {val, der};
}

constexpr ld kAnchorStep = 0.25L;
constexpr int kAnchors = 21; // 3, 3.25, ..., 8

/// Anchor values on 3 <= |x| <= 8. The positive side is filled right to left
/// from the asymptotic values at 8, where Ai is the growing solution; the
/// negative side is stepped outward from the series at -3.
struct AiryAnchors {
    std::array<std::array<ld, 2>, kAnchors> pos{};
    std::array<std::array<ld, 2>, kAnchors> neg{};

    AiryAnchors()
    {
        pos[kAnchors - 1] = airy_asymptotic(8.0L);
        for (int k = kAnchors - 1; k > 0; --k) {
            const ld x0 = 3 + kAnchorStep * k;
            pos[k - 1] = airy_taylor(x0, pos[k][0], pos[k][1], -kAnchorStep);
        }
        neg[0] = airy_maclaurin(-3.0L);
        for (int k = 0; k + 1 < kAnchors; ++k) {
            const ld x0 = -3 - kAnchorStep * k;
            neg[k + 1] = airy_taylor(x0, neg[k][0], neg[k][1], -kAnchorStep);
        }
    }
};

inline const AiryAnchors& airy_anchors()
{
    static const AiryAnchors anchors;
    return anchors;
}

/// No range check. Arguments above 40 underflow to zero for kernel assembly.
inline AiryValue airy_unchecked(double xd)
{
    const ld x = xd;
    std::array<ld, 2> r{};
    if (x > 40) {
        return {0.0, 0.0};
    }
    if (std::fabs(x) <= 3) {
        r = airy_maclaurin(x);
    } else if (std::fabs(x) >= 8) {
        r = airy_asymptotic(x);
    } else {
        const auto& A = airy_anchors();
        const ld ax = std::fabs(x);
        const int k = static_cast<int>(std::lround((ax - 3) / kAnchorStep));
        const ld x0 = 3 + kAnchorStep * k;
        if (x > 0) {
            r = airy_taylor(x0, A.pos[k][0], A.pos[k][1], x - x0);
        } else {
            r = airy_taylor(-x0, A.neg[k][0], A.neg[k][1], x + x0);
        }
    }
    return {static_cast<double>(r[0]), static_cast<double>(r[1])};
}

} // namespace detail

/// Ai and Ai' on [-20, 40].
inline AiryValue airy(double x)
{
    if (!(x >= -20.0 && x <= 40.0)) {
        throw Error(ErrorKind::DomainError, "airy argument outside [-20, 40]");
    }
    return detail::airy_unchecked(x);
}

inline double airy_ai(double x) { return airy(x).ai; }

} // namespace spectraledge
