#pragma once

// Tracy-Widom F1 through the Hastings-McLeod solution of q'' = s q + 2 q^3,
// integrated backward from s0 = 8 where q ~ Ai. Test-only; shares no code
// with the library evaluator.

#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

struct PainleveSample {
    double s;
    double F1;
    double f1;
};

/// state: q, q', I1 = int_s^inf q, I2 = int_s^inf q^2, I3 = int_s^inf (x - s) q^2
using PState = std::array<double, 5>;

inline PState hastings_mcleod_start(double s0)
{
    using boost::math::airy_ai;
    using boost::math::airy_ai_prime;
    const double a = airy_ai(s0);
    const double ap = airy_ai_prime(s0);
    const double i1 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double x) { return airy_ai(x); }, s0, 60.0, 15, 1e-15);
    return {a, ap, i1, ap * ap - s0 * a * a, (2 * s0 * s0 * a * a - 2 * s0 * ap * ap - a * ap) / 3};
}

/// Values at each requested point; `points` must be sorted descending and <= 8.
inline std::vector<PainleveSample> painleve_f1(const std::vector<double>& points, double s0 = 8.0)
{
    namespace ode = boost::numeric::odeint;
    auto rhs = [](const PState& y, PState& dy, double s) {
        dy[0] = y[1];
        dy[1] = s * y[0] + 2 * y[0] * y[0] * y[0];
        dy[2] = -y[0];
        dy[3] = -y[0] * y[0];
        dy[4] = -y[3];
    };
    PState y = hastings_mcleod_start(s0);
    std::vector<PainleveSample> out;
    auto stepper = ode::make_controlled(1e-15, 1e-14, ode::runge_kutta_fehlberg78<PState>());
    double s = s0;
    for (double target : points) {
        if (target < s) {
            ode::integrate_adaptive(stepper, rhs, y, s, target, -1e-3);
            s = target;
        }
        const double F = std::exp(-0.5 * y[2] - 0.5 * y[4]);
        out.push_back({target, F, 0.5 * F * (y[0] + y[3])});
    }
    return out;
}

} // namespace oracle
