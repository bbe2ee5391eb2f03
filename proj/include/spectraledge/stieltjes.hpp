#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "error.hpp"
#include "spectrum.hpp"

namespace spectraledge {

using cplx = std::complex<double>;

/// Stieltjes transform of the deterministic equivalent of Q = YY^* at one
/// spectral parameter, with the companion transforms derived from it.
struct StieltjesValue {
    cplx z;         // point actually evaluated (real inputs get +i*real_axis_eta)
    cplx s;         // transform of F^Q
    cplx s_tilde;   // -(1-c)/z + c s, transform for Y^*Y
    cplx b;         // 1 + c s
    cplx tb;        // z b - (1-c)
    cplx w;         // z b^2 - (1-c) b
    double residual = 0.0;
    int iterations = 0;
};

struct StieltjesOptions {
    double damping = 0.5;
    double tolerance = 1e-12;
    int max_iterations = 100000;
    /// Fixed-point sweeps per continuation step before switching to Newton.
    int fixed_point_budget = 100;
    double continuation_factor = 0.7;
    double real_axis_eta = 1e-9;
};

namespace detail {

/// Right-hand side of the self-consistent equation and its derivative in s.
struct StieltjesMap {
    const SpectrumModel& model;
    cplx z;

    cplx operator()(cplx s) const
    {
        const double c = model.c();
        const cplx b = 1.0 + c * s;
        cplx acc = 0.0;
        for (int i = 0; i < model.M(); ++i) {
            acc += 1.0 / (model.d_sq(i) / b - z * b + (1.0 - c));
        }
        return acc / static_cast<double>(model.M());
    }

    cplx derivative(cplx s) const
    {
        const double c = model.c();
        const cplx b = 1.0 + c * s;
        cplx acc = 0.0;
        for (int i = 0; i < model.M(); ++i) {
            const cplx den = model.d_sq(i) / b - z * b + (1.0 - c);
            const cplx dden = -c * model.d_sq(i) / (b * b) - z * c;
            acc -= dden / (den * den);
        }
        return acc / static_cast<double>(model.M());
    }
};

inline bool on_branch(cplx z, cplx s)
{
    const double slack = 1e-10;
    return s.imag() >= -slack * std::max(1.0, std::abs(s)) &&
           (z * s).imag() >= -slack * std::max(1.0, std::abs(z * s));
}

/// Solve at fixed z starting from `s`. Returns false (leaving `s` untouched)
/// when neither the damped iteration nor Newton lands on the admissible branch.
inline bool solve_at(const SpectrumModel& model, cplx z, cplx& s, const StieltjesOptions& opt,
                     int& iterations, double& residual)
{
    const StieltjesMap map{model, z};
    cplx cur = s;
    for (int k = 0; k < opt.fixed_point_budget; ++k) {
        const cplx next = (1.0 - opt.damping) * cur + opt.damping * map(cur);
        ++iterations;
        const double step = std::abs(next - cur);
        cur = next;
        if (!std::isfinite(cur.real()) || !std::isfinite(cur.imag())) {
            break;
        }
        if (step < opt.tolerance * std::max(1.0, std::abs(cur))) {
            residual = std::abs(cur - map(cur));
            if (on_branch(z, cur)) {
                s = cur;
                return true;
            }
            break;
        }
    }
    // Stalled: Newton on F(s) = s - T(s), started from the better of the two.
    cur = std::isfinite(std::abs(cur)) ? cur : s;
    for (int k = 0; k < 60; ++k) {
        const cplx f = cur - map(cur);
        const cplx df = 1.0 - map.derivative(cur);
        const cplx delta = f / df;
        cur -= delta;
        ++iterations;
        if (!std::isfinite(cur.real()) || !std::isfinite(cur.imag())) {
            return false;
        }
        if (std::abs(delta) < opt.tolerance * std::max(1.0, std::abs(cur))) {
            residual = std::abs(cur - map(cur));
            if (!on_branch(z, cur)) {
                return false;
            }
            s = cur;
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Solves s = (1/M) sum_i [d_i^2/(1+c s) - z(1+c s) + (1-c)]^{-1} on the
/// branch with Im s >= 0, Im(z s) >= 0. The branch is tracked by continuation
/// in eta from the resolvent-decay regime s ~ -1/z. Real z is evaluated at
/// z + i*real_axis_eta.
inline StieltjesValue solve_stieltjes(const SpectrumModel& model, cplx z,
                                      const StieltjesOptions& opt = {})
{
    if (z == cplx(0.0, 0.0)) {
        throw Error(ErrorKind::DomainError, "z = 0 is excluded");
    }
    if (z.imag() < 0.0) {
        throw Error(ErrorKind::DomainError, "z must lie in the closed upper half plane");
    }
    const double E = z.real();
    const double eta_target = z.imag() > 0.0 ? z.imag() : opt.real_axis_eta;
    const double eta0 = std::max({10.0, 2.0 * std::abs(z), eta_target});

    cplx s = -1.0 / cplx(E, eta0);
    int iterations = 0;
    double residual = 0.0;
    double eta = eta0;
    if (!detail::solve_at(model, cplx(E, eta), s, opt, iterations, residual)) {
        throw SolverFailure("no convergence at continuation start", residual);
    }

    double factor = opt.continuation_factor;
    while (eta > eta_target) {
        const double next_eta = std::max(eta * factor, eta_target);
        cplx trial = s;
        if (detail::solve_at(model, cplx(E, next_eta), trial, opt, iterations, residual)) {
            s = trial;
            eta = next_eta;
            factor = std::max(opt.continuation_factor, factor * factor);
        } else {
            factor = std::sqrt(factor); // closer to 1: shorter continuation step
            if (1.0 - factor < 1e-6) {
                throw SolverFailure("continuation step collapsed", residual);
            }
        }
        if (iterations > opt.max_iterations) {
            throw SolverFailure("iteration budget exhausted", residual);
        }
    }

    const double c = model.c();
    StieltjesValue v;
    v.z = cplx(E, eta_target);
    v.s = s;
    v.s_tilde = -(1.0 - c) / v.z + c * s;
    v.b = 1.0 + c * s;
    v.tb = v.z * v.b - (1.0 - c);
    v.w = v.z * v.b * v.b - (1.0 - c) * v.b;
    v.residual = residual;
    v.iterations = iterations;
    return v;
}

/// Residual of the self-consistent equation written for s_tilde:
/// s_t = -(1-c)/z + (1/N) sum_i [d_i^2/(1+s_t+(1-c)/z) - z(1+s_t)]^{-1}.
inline double companion_residual(const SpectrumModel& model, const StieltjesValue& v)
{
    const double c = model.c();
    const cplx b = 1.0 + v.s_tilde + (1.0 - c) / v.z;
    cplx acc = 0.0;
    for (int i = 0; i < model.M(); ++i) {
        acc += 1.0 / (model.d_sq(i) / b - v.z * (1.0 + v.s_tilde));
    }
    const cplx rhs = -(1.0 - c) / v.z + acc / static_cast<double>(model.N());
    return std::abs(v.s_tilde - rhs);
}

/// rho_0(E) = Im s(E)/pi, the density of the limiting spectral distribution.
inline double density(const SpectrumModel& model, double E, const StieltjesOptions& opt = {})
{
    if (E == 0.0) {
        throw Error(ErrorKind::DomainError, "density is defined for E != 0");
    }
    const auto v = solve_stieltjes(model, cplx(E, 0.0), opt);
    return std::max(0.0, v.s.imag() / std::numbers::pi);
}

} // namespace spectraledge
