#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "error.hpp"
#include "spectrum.hpp"

namespace spectraledge {

/// Squared signal values in working precision. The flow module builds these
/// directly in extended precision; everything else goes through from_model().
template <class Real>
struct Signal {
    std::vector<Real> d_sq; // non-increasing
    int M = 0;
    int N = 0;

    Real c() const { return static_cast<Real>(M) / static_cast<Real>(N); }
    Real max_d_sq() const { return d_sq.front(); }

    static Signal from_model(const SpectrumModel& model, Real decay = Real(1))
    {
        Signal s;
        s.M = model.M();
        s.N = model.N();
        s.d_sq.reserve(static_cast<std::size_t>(s.M));
        for (double d : model.d()) {
            const Real dr = static_cast<Real>(d);
            s.d_sq.push_back(decay * dr * dr);
        }
        return s;
    }
};

template <class Real>
struct PhiValues {
    Real f;         // (1/M) sum 1/(d_i^2 - w)
    Real f_prime;   // (1/M) sum 1/(d_i^2 - w)^2
    Real phi;       // w(1 - c f)^2 + (1 - c)(1 - c f)
    Real phi_prime; // (1 - c f)^2 - 2 c w (1 - c f) f' - c(1 - c) f'
};

template <class Real>
struct EdgeResiduals {
    Real b_relation = 0;    // (1 - c f(xi_r)) - 1/b
    Real edge_relation = 0; // xi_r - (lambda_r b^2 - (1-c) b)
    Real first_order = 0;   // (1/N) sum b(lambda_r b^2 + xi_r)/(d^2 - xi_r)^2 - 1
    Real R1 = 0;            // rescaled first-order relation, LHS - 1
    Real R2 = 0;            // rescaled scaling relation, LHS - RHS
    Real xi_btb = 0;        // xi - b * tb_resc
    Real rescaled_xi = 0;   // xi - (E_+ b^2 - gamma0 (1-c) b)
};

/// Rightmost-edge data. Fields after `h` are filled by gamma0().
template <class Real>
struct BasicEdgeSolution {
    Real xi_r = 0;
    Real lambda_r = 0;
    Real b = 0;
    Real tb = 0;
    Real h = 0;

    Real gamma0 = std::numeric_limits<Real>::quiet_NaN();
    Real E_plus = std::numeric_limits<Real>::quiet_NaN();
    Real xi = std::numeric_limits<Real>::quiet_NaN();
    Real tb_resc = std::numeric_limits<Real>::quiet_NaN();
    Real h_resc = std::numeric_limits<Real>::quiet_NaN();
    Real A = std::numeric_limits<Real>::quiet_NaN();
    Real B = std::numeric_limits<Real>::quiet_NaN();

    /// All roots of phi' found right of d_1^2, ascending. xi_r is the last.
    std::vector<Real> critical_points;
    /// Two critical points within 1e-6 relative distance of each other.
    bool near_degenerate = false;

    EdgeResiduals<Real> residuals;

    bool has_scaling() const { return !std::isnan(static_cast<double>(gamma0)); }
};

using EdgeSolution = BasicEdgeSolution<double>;

template <class Real>
PhiValues<Real> phi_family(const Signal<Real>& sig, Real w)
{
    Real f = 0;
    Real fp = 0;
    for (const Real d2 : sig.d_sq) {
        const Real diff = d2 - w;
        if (diff == Real(0)) {
            throw Error(ErrorKind::PoleError, "w coincides with a squared signal value");
        }
        const Real inv = Real(1) / diff;
        f += inv;
        fp += inv * inv;
    }
    f /= static_cast<Real>(sig.M);
    fp /= static_cast<Real>(sig.M);
    const Real c = sig.c();
    const Real g = Real(1) - c * f;
    PhiValues<Real> out;
    out.f = f;
    out.f_prime = fp;
    out.phi = w * g * g + (Real(1) - c) * g;
    out.phi_prime = g * g - Real(2) * c * w * g * fp - c * (Real(1) - c) * fp;
    return out;
}

inline PhiValues<double> phi_family(const SpectrumModel& model, double w)
{
    return phi_family(Signal<double>::from_model(model), w);
}

namespace detail {

template <class Real>
Real phi_prime_at(const Signal<Real>& sig, Real w)
{
    return phi_family(sig, w).phi_prime;
}

/// Bisect until the bracket cannot shrink further in Real.
template <class Real>
Real bisect_root(const Signal<Real>& sig, Real lo, Real hi)
{
    Real flo = phi_prime_at(sig, lo);
    for (int k = 0; k < 400; ++k) {
        const Real mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const Real fm = phi_prime_at(sig, mid);
        if (fm == Real(0)) {
            return mid;
        }
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2;
}

} // namespace detail

/// Largest critical point of phi right of d_1^2 and the edge data derived
/// from it. phi' -> -inf as w decreases to d_1^2 and is positive for large w,
/// so the scan expands w_max until the last grid value is positive.
template <class Real>
BasicEdgeSolution<Real> find_edge(const Signal<Real>& sig)
{
    using std::sqrt;
    using std::log;
    using std::exp;
    const Real d1 = sig.max_d_sq();
    const Real c = sig.c();
    const Real offset_min = std::max(Real(1e-8), Real(1e-14) * d1);
    Real w_max = Real(4) * (d1 + Real(1)) * (Real(1) + sqrt(c)) * (Real(1) + sqrt(c));
    constexpr int grid = 4000;

    std::vector<Real> roots;
    for (int expansion = 0; expansion <= 10; ++expansion, w_max *= Real(2)) {
        roots.clear();
        const Real log_lo = log(offset_min);
        const Real log_hi = log(w_max - d1);
        Real prev_w = d1 + offset_min;
        Real prev_v = detail::phi_prime_at(sig, prev_w);
        for (int k = 1; k <= grid; ++k) {
            const Real w = d1 + exp(log_lo + (log_hi - log_lo) * static_cast<Real>(k) / grid);
            const Real v = detail::phi_prime_at(sig, w);
            if (v == Real(0)) {
                roots.push_back(w);
            } else if ((prev_v < 0) != (v < 0) && prev_v != Real(0)) {
                roots.push_back(detail::bisect_root(sig, prev_w, w));
            }
            prev_w = w;
            prev_v = v;
        }
        if (prev_v > 0 && !roots.empty()) {
            break;
        }
        roots.clear();
    }
    if (roots.empty()) {
        throw Error(ErrorKind::EdgeNotFound,
                    "no sign change of phi' right of d_1^2 (pathological spectrum?)");
    }

    BasicEdgeSolution<Real> e;
    e.critical_points = roots;
    for (std::size_t k = 1; k < roots.size(); ++k) {
        using std::abs;
        if (abs(roots[k] - roots[k - 1]) <= Real(1e-6) * abs(roots[k])) {
            e.near_degenerate = true;
        }
    }
    e.xi_r = roots.back();
    const auto pv = phi_family(sig, e.xi_r);
    const Real g = Real(1) - c * pv.f;
    if (!(g > 0)) {
        throw Error(ErrorKind::EdgeNotFound, "critical point violates 1 - c f > 0");
    }
    e.lambda_r = pv.phi;
    e.b = Real(1) / g;
    e.tb = e.lambda_r * e.b - (Real(1) - c);
    e.h = e.lambda_r * e.b + e.tb;

    Real first = 0;
    for (const Real d2 : sig.d_sq) {
        const Real diff = d2 - e.xi_r;
        first += e.b * (e.lambda_r * e.b * e.b + e.xi_r) / (diff * diff);
    }
    e.residuals.b_relation = g - Real(1) / e.b;
    e.residuals.edge_relation = e.xi_r - (e.lambda_r * e.b * e.b - (Real(1) - c) * e.b);
    e.residuals.first_order = first / static_cast<Real>(sig.N) - Real(1);
    return e;
}

inline EdgeSolution find_edge(const SpectrumModel& model)
{
    return find_edge(Signal<double>::from_model(model));
}

/// Scaling constant: gamma0 = (A/B)^{1/3} with
///   A = (1/N) sum b^2/(d^2-xi_r)^2,
///   B = -1/b^3 - (1/N) sum (2 lambda_r b - (1-c))^2/(d^2-xi_r)^3
///       - (1/N) sum lambda_r/(d^2-xi_r)^2,
/// then the rescaled edge quantities and their consistency residuals.
template <class Real>
BasicEdgeSolution<Real> gamma0(const Signal<Real>& sig, BasicEdgeSolution<Real> e)
{
    using std::abs;
    using std::cbrt;
    const Real c = sig.c();
    const Real n = static_cast<Real>(sig.N);
    const Real one_c = Real(1) - c;
    Real sa = 0;
    Real s3 = 0;
    Real s2 = 0;
    const Real k = Real(2) * e.lambda_r * e.b - one_c;
    for (const Real d2 : sig.d_sq) {
        const Real diff = d2 - e.xi_r;
        const Real inv2 = Real(1) / (diff * diff);
        sa += e.b * e.b * inv2;
        s3 += k * k * inv2 / diff;
        s2 += e.lambda_r * inv2;
    }
    e.A = sa / n;
    e.B = -Real(1) / (e.b * e.b * e.b) - s3 / n - s2 / n;
    if (!(e.A > 0) || !(e.B > 0)) {
        throw DegenerateScaling(static_cast<double>(e.A), static_cast<double>(e.B));
    }
    const Real g = cbrt(e.A / e.B);
    e.gamma0 = g;
    e.E_plus = g * e.lambda_r;
    e.xi = g * e.xi_r;
    e.tb_resc = e.E_plus * e.b - g * one_c;
    e.h_resc = e.E_plus * e.b + e.tb_resc;

    Real r1 = 0;
    Real lhs2 = 0;
    Real rhs3 = 0;
    Real rhs2 = 0;
    const Real kr = Real(2) * e.E_plus * e.b - g * one_c;
    for (const Real d2 : sig.d_sq) {
        const Real diff = g * d2 - e.xi;
        const Real inv2 = Real(1) / (diff * diff);
        r1 += g * e.b * (e.E_plus * e.b * e.b + e.xi) * inv2;
        lhs2 += e.b * e.b * inv2;
        rhs3 += kr * kr * inv2 / diff;
        rhs2 += e.E_plus * inv2;
    }
    const Real lhs = lhs2 / (g * g * n);
    const Real rhs = -Real(1) / (g * e.b * e.b * e.b) - rhs3 / n - rhs2 / n;
    e.residuals.R1 = r1 / n - Real(1);
    e.residuals.R2 = lhs - rhs;
    e.residuals.xi_btb = e.xi - e.b * e.tb_resc;
    e.residuals.rescaled_xi = e.xi - (e.E_plus * e.b * e.b - g * one_c * e.b);

    const Real scale2 = std::max(Real(1), abs(lhs));
    if (abs(e.residuals.R1) > Real(1e-10) || abs(e.residuals.R2) > Real(1e-10) * scale2) {
        throw Error(ErrorKind::NumericError, "rescaled edge relations not satisfied to 1e-10");
    }
    return e;
}

inline EdgeSolution gamma0(const SpectrumModel& model, const EdgeSolution& edge)
{
    return gamma0(Signal<double>::from_model(model), edge);
}

/// find_edge followed by gamma0.
template <class Real>
BasicEdgeSolution<Real> solve_edge(const Signal<Real>& sig)
{
    return gamma0(sig, find_edge(sig));
}

inline EdgeSolution solve_edge(const SpectrumModel& model)
{
    return solve_edge(Signal<double>::from_model(model));
}

} // namespace spectraledge
