#pragma once

#include <cmath>
#include <map>
#include <string>

#include "flow.hpp"

namespace spectraledge {

/// Deterministic edge functionals of a flow state, all by direct summation
/// with D_a = gamma d_a^2 - xi.
template <class Real = long double>
struct EdgeFunctionals {
    Real varphi1 = 0, varphi2 = 0, varphi3 = 0, varphi4 = 0, varphi6 = 0;
    Real psi2 = 0, psi3 = 0;
    Real varpi2 = 0;
    Real Phi1 = 0, Phi2 = 0;
    Real theta4 = 0;        // definitional sum
    Real theta4_closed = 0; // closed form in terms of varphi4
    Real gamma_dot = 0;
    Real C0 = 0, C1 = 0, C2 = 0, C3 = 0;
};

template <class Real>
EdgeFunctionals<Real> edge_functionals(const Signal<Real>& sig, const BasicEdgeSolution<Real>& e)
{
    const Real g = e.gamma0;
    const Real E = e.E_plus;
    const Real b = e.b;
    const Real tb = e.tb_resc;
    const Real h = e.h_resc;
    const Real c = sig.c();
    const Real one_c = 1 - c;
    const Real g2 = g * g;
    const Real g3 = g2 * g;
    const Real b2 = b * b;
    const Real b3 = b2 * b;
    const Real b4 = b3 * b;
    const Real h2 = h * h;
    const Real h4 = h2 * h2;

    EdgeFunctionals<Real> F;
    Real p[7] = {0, 0, 0, 0, 0, 0, 0};
    Real q2 = 0, q3 = 0, v2 = 0, P1 = 0, P2 = 0, th = 0;
    for (const Real d2 : sig.d_sq) {
        const Real D = g * d2 - e.xi;
        if (D == Real(0)) {
            throw Error(ErrorKind::PoleError, "xi coincides with gamma d_a^2");
        }
        const Real i1 = 1 / D;
        const Real i2 = i1 * i1;
        const Real i3 = i2 * i1;
        const Real i4 = i2 * i2;
        p[1] += i1;
        p[2] += i2;
        p[3] += i3;
        p[4] += i4;
        p[6] += i4 * i2;
        q2 += g * d2 * i2;
        q3 += g * d2 * i3;
        v2 += tb * tb * i2;
        P1 += (g3 * d2 * tb + 2 * g3 * d2 * b * E + g2 * b3 * E * E) * i3;
        P2 += (g3 * d2 * b * E * E + 2 * g3 * d2 * tb * E + g2 * tb * tb * tb) * i3;
        const Real u = g * d2 + E * b2;
        const Real v = g * E * d2 + tb * tb;
        th += (g3 * E * E * u * u + 2 * g3 * g * d2 * E * h2 + g3 * v * v) * i4;
    }
    const Real n = static_cast<Real>(sig.N);
    F.varphi1 = p[1] / n;
    F.varphi2 = p[2] / n;
    F.varphi3 = p[3] / n;
    F.varphi4 = p[4] / n;
    F.varphi6 = p[6] / n;
    F.psi2 = q2 / n;
    F.psi3 = q3 / n;
    F.varpi2 = v2 / n + one_c / b2;
    F.Phi1 = P1 / n;
    F.Phi2 = P2 / n - g2 * one_c / b3;
    F.theta4 = th / n + g3 * one_c / b4;
    F.theta4_closed = g3 * h4 * F.varphi4 - 4 * E / h - 4 * g2 * E / b3 -
                      2 * g2 * E * E / (b2 * h) + g3 * one_c / b4;

    const Real gd = analytic_rates(sig, e).gamma;
    F.gamma_dot = gd;
    const Real cm = (b - 1) / g;
    const Real k = b * tb - g2 * E * E;
    F.C0 = (h / (g * E) - 1 / g) * (b - gd / g);
    F.C1 = 2 * tb * b / (g * E) - 2 * g * E - 2 * tb * gd / (g2 * E);
    F.C2 = 2 * b2 * k / (g2 * E * h) - g * cm - g3 * one_c / b3 - 2 * b * k / (g3 * E * h) * gd +
           g2 * one_c / b3 * gd;
    F.C3 = (g3 * h4 * tb * F.varphi4 / E - 3 * tb / h - 3 * g2 * tb / b3 -
            3 * g2 * E * tb / (b2 * h) - (E * b2 + g2 * E * E) / (b * h) +
            h * g3 * one_c / (E * b4) - g3 * one_c / b4) *
               (b - gd / g) +
           gd * g3 * cm * one_c / b4;
    return F;
}

template <class Real>
EdgeFunctionals<Real> edge_functionals(const FlowState<Real>& st)
{
    return edge_functionals(st.signal, st.edge);
}

/// Absolute residuals of the exact edge identities, keyed by name.
///   phi2, psi2, phi3, varpi2, Phi1, Phi2  closed forms of the functionals
///   imcancel            C3 - (C1 gamma/2) theta4 minus the reduced P expression
///   theta4              definitional sum vs closed form
///   R1, R2              rescaled edge relations
///   imcancel_expanded   informational: the fully expanded form of the same
///                       cancellation as printed in the source derivation
template <class Real>
std::map<std::string, Real> identity_residuals(const Signal<Real>& sig,
                                               const BasicEdgeSolution<Real>& e)
{
    using std::abs;
    const auto F = edge_functionals(sig, e);
    const Real g = e.gamma0;
    const Real E = e.E_plus;
    const Real b = e.b;
    const Real tb = e.tb_resc;
    const Real h = e.h_resc;
    const Real one_c = 1 - sig.c();
    const Real g2 = g * g;
    const Real g3 = g2 * g;
    const Real b2 = b * b;
    const Real b3 = b2 * b;
    const Real h2 = h * h;
    const Real h3 = h2 * h;
    const Real gd = F.gamma_dot;
    const Real cm = (b - 1) / g;

    std::map<std::string, Real> r;
    r["phi2"] = abs(F.varphi2 - 1 / (g * b2 * h));
    r["psi2"] = abs(F.psi2 - (1 / g - E * b2 * F.varphi2));
    r["phi3"] = abs(F.varphi3 + (1 / (g3 * h3) + 1 / (g * b3 * h2) + E / (g * b2 * h3)));
    r["varpi2"] = abs(F.varpi2 - E * E * b2 * F.varphi2);
    r["Phi1"] = abs(F.Phi1 + b3 * F.varphi2);
    r["Phi2"] = abs(F.Phi2 + tb * b2 * F.varphi2);
    r["theta4"] = abs(F.theta4 - F.theta4_closed);

    const Real P = -g * cm - g3 * one_c / b3 + 2 * b * E / (g * h) * gd + g2 * one_c / b3 * gd;
    const Real Q = F.C3 - F.C1 * g / 2 * F.theta4;
    r["imcancel"] = abs(Q - P);

    const Real Qx = (tb / h + g2 * tb / b3 + g2 * E * tb / (b2 * h) - E * b / h -
                     g2 * E * E / (b * h)) *
                        (b - gd / g) -
                    g2 * E * tb / (b * h) + g3 * h * one_c / (E * b3) - g3 * one_c / b3 +
                    g3 * g2 * h2 * h2 * E * F.varphi4 - 4 * g2 * E * E / h -
                    4 * g2 * g2 * E * E / b3 - 3 * g2 * g2 * E * E * E / (b2 * h) +
                    g * E * tb / (b2 * h) * gd;
    r["imcancel_expanded"] = abs(Qx - P);

    r["R1"] = abs(e.residuals.R1);
    r["R2"] = abs(e.residuals.R2);
    return r;
}

template <class Real>
std::map<std::string, Real> identity_residuals(const FlowState<Real>& st)
{
    return identity_residuals(st.signal, st.edge);
}

} // namespace spectraledge
