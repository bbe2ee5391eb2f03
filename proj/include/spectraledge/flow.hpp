#pragma once

#include <cmath>

#include "edge.hpp"
#include "error.hpp"
#include "spectrum.hpp"

namespace spectraledge {

/// Edge data of the interpolated model d_i(t) = e^{-t/2} d_i. Computed in
/// `Real` so finite differences along t resolve the second-order term.
template <class Real = long double>
struct FlowState {
    Real t = 0;
    Signal<Real> signal;
    BasicEdgeSolution<Real> edge;

    /// Double-precision copy of the interpolated model.
    SpectrumModel model_t() const
    {
        std::vector<double> d;
        d.reserve(signal.d_sq.size());
        for (const Real v : signal.d_sq) {
            d.push_back(static_cast<double>(std::sqrt(v)));
        }
        return SpectrumModel(std::move(d), signal.N);
    }
};

namespace detail {

template <class Real>
FlowState<Real> flow_state_unchecked(const SpectrumModel& model, Real t)
{
    using std::exp;
    FlowState<Real> st;
    st.t = t;
    st.signal = Signal<Real>::from_model(model, exp(-t));
    st.edge = solve_edge(st.signal);
    return st;
}

} // namespace detail

template <class Real = long double>
FlowState<Real> flow_state(const SpectrumModel& model, Real t)
{
    if (!(t >= Real(0)) || !std::isfinite(static_cast<double>(t))) {
        throw Error(ErrorKind::InvalidArgument, "flow time must be finite and >= 0");
    }
    return detail::flow_state_unchecked(model, t);
}

/// t = infinity: the pure-noise edge for aspect ratio c.
template <class Real = long double>
BasicEdgeSolution<Real> flow_limit(Real c)
{
    using std::cbrt;
    using std::pow;
    using std::sqrt;
    const Real rc = sqrt(c);
    BasicEdgeSolution<Real> e;
    e.xi_r = rc;
    e.lambda_r = (1 + rc) * (1 + rc);
    e.b = 1 / (1 + rc);
    e.tb = e.lambda_r * e.b - (1 - c);
    e.h = e.lambda_r * e.b + e.tb;
    e.gamma0 = pow(1 + rc, Real(-4) / 3) * pow(c, Real(1) / 6);
    e.E_plus = e.gamma0 * e.lambda_r;
    e.xi = e.gamma0 * e.xi_r;
    e.tb_resc = e.E_plus * e.b - e.gamma0 * (1 - c);
    e.h_resc = e.E_plus * e.b + e.tb_resc;
    e.critical_points = {e.xi_r};
    return e;
}

/// (1/N) sum_a 1/(gamma d_a^2 - xi)^k at a state.
template <class Real>
Real varphi(const Signal<Real>& sig, const BasicEdgeSolution<Real>& e, int k)
{
    Real acc = 0;
    for (const Real d2 : sig.d_sq) {
        const Real D = e.gamma0 * d2 - e.xi;
        if (D == Real(0)) {
            throw Error(ErrorKind::PoleError, "xi coincides with gamma d_a^2");
        }
        Real p = 1;
        for (int j = 0; j < k; ++j) {
            p *= D;
        }
        acc += 1 / p;
    }
    return acc / static_cast<Real>(sig.N);
}

/// Time derivatives of the flow quantities from their closed forms.
template <class Real>
struct FlowRates {
    Real b = 0;
    Real gamma = 0;
    Real E_plus = 0;
    Real xi = 0;
    Real h = 0;
};

template <class Real>
FlowRates<Real> analytic_rates(const Signal<Real>& sig, const BasicEdgeSolution<Real>& e)
{
    const Real g = e.gamma0;
    const Real E = e.E_plus;
    const Real b = e.b;
    const Real tb = e.tb_resc;
    const Real h = e.h_resc;
    const Real phi4 = varphi(sig, e, 4);
    const Real h2 = h * h;
    const Real h3 = h2 * h;
    const Real h4 = h3 * h;
    const Real g3 = g * g * g;

    FlowRates<Real> r;
    r.b = g * g * E + b * (b - 1);
    r.gamma = g3 * g3 * h4 * E * phi4 -
              g3 * g * h3 *
                  (4 * E * E / (g * h4) + 2 * g * E * E * E / (b * b * h4) +
                   2 * g * E * E / (b * b * b * h3) - 2 * b * tb / (g3 * h4) +
                   g * E / (h2 * b * b * b * b) + 1 / (g3 * h3));
    r.E_plus = -(E * b + tb) + E + (E / g) * r.gamma;
    r.xi = (b * tb / g) * r.gamma + h * r.b + E * b * b - h * b * b;
    r.h = 2 * E * b - 2 * h * b + 2 * E * r.b + (h / g) * r.gamma;
    return r;
}

template <class Real>
struct FlowCheck {
    Real t = 0;
    Real step = 0;
    FlowRates<Real> analytic;
    FlowRates<Real> finite_difference;
    FlowRates<Real> residual; // absolute |FD - analytic|
};

/// Central differences of the recomputed edge state against the closed-form
/// rates. Near t = 0 the stencil reaches t - step < 0, which is still a valid
/// (slightly amplified) signal.
template <class Real = long double>
FlowCheck<Real> flow_derivative_check(const SpectrumModel& model, Real t, Real step = Real(1e-4))
{
    using std::abs;
    if (!(step > Real(0))) {
        throw Error(ErrorKind::InvalidArgument, "step must be positive");
    }
    const auto mid = flow_state(model, t);
    const auto up = detail::flow_state_unchecked(model, t + step);
    const auto dn = detail::flow_state_unchecked(model, t - step);
    const Real inv = 1 / (2 * step);

    FlowCheck<Real> out;
    out.t = t;
    out.step = step;
    out.analytic = analytic_rates(mid.signal, mid.edge);
    auto& fd = out.finite_difference;
    fd.b = (up.edge.b - dn.edge.b) * inv;
    fd.gamma = (up.edge.gamma0 - dn.edge.gamma0) * inv;
    fd.E_plus = (up.edge.E_plus - dn.edge.E_plus) * inv;
    fd.xi = (up.edge.xi - dn.edge.xi) * inv;
    fd.h = (up.edge.h_resc - dn.edge.h_resc) * inv;
    const auto& an = out.analytic;
    out.residual = {abs(fd.b - an.b), abs(fd.gamma - an.gamma), abs(fd.E_plus - an.E_plus),
                    abs(fd.xi - an.xi), abs(fd.h - an.h)};
    return out;
}

} // namespace spectraledge
