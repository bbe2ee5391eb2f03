#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "airy.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace spectraledge {

struct TWEvaluation {
    double s;
    double F1;
    double f1;
};

/// Gauss-Legendre nodes and weights on (0, 1).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n)
    {
        nodes.resize(static_cast<std::size_t>(n));
        weights.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < (n + 1) / 2; ++i) {
            long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
            long double dp = 0;
            for (int it = 0; it < 100; ++it) {
                long double p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                const long double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-19L) {
                    break;
                }
            }
            const long double w = 2 / ((1 - x * x) * dp * dp);
            const auto lo = static_cast<std::size_t>(i);
            const auto hi = static_cast<std::size_t>(n - 1 - i);
            nodes[lo] = static_cast<double>((1 - x) / 2);
            nodes[hi] = static_cast<double>((1 + x) / 2);
            weights[lo] = weights[hi] = static_cast<double>(w / 2);
        }
    }
};

/// F_1(s) = det(I - K_s), K_s(x, y) = Ai(x + y + s) on (0, inf), discretized
/// by Nystrom with x = -2 log u, u in (0, 1).
class TracyWidom1 {
public:
    static constexpr double kMin = -12.0;
    static constexpr double kMax = 8.0;

    explicit TracyWidom1(int nodes = 64) : n_(nodes)
    {
        const GaussLegendre gl(nodes);
        x_.resize(nodes);
        sw_.resize(nodes);
        for (int i = 0; i < nodes; ++i) {
            const double u = gl.nodes[static_cast<std::size_t>(i)];
            x_[i] = -2.0 * std::log(u);
            sw_[i] = std::sqrt(2.0 / u * gl.weights[static_cast<std::size_t>(i)]);
        }
    }

    int nodes() const { return n_; }

    double cdf(double s) const { return evaluate(s, false).F1; }
    double pdf(double s) const { return evaluate(s, true).f1; }

    /// F_1 and, if requested, f_1 = -F_1 tr((I - K)^{-1} dK/ds).
    TWEvaluation evaluate(double s, bool with_pdf = true) const
    {
        check_range(s);
        Eigen::MatrixXd I_K(n_, n_);
        Eigen::MatrixXd dK(with_pdf ? n_ : 0, with_pdf ? n_ : 0);
        for (int i = 0; i < n_; ++i) {
            for (int j = i; j < n_; ++j) {
                const auto a = detail::airy_unchecked(x_[i] + x_[j] + s);
                const double wij = sw_[i] * sw_[j];
                I_K(i, j) = I_K(j, i) = (i == j ? 1.0 : 0.0) - wij * a.ai;
                if (with_pdf) {
                    dK(i, j) = dK(j, i) = wij * a.aip;
                }
            }
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(I_K);
        const double det = lu.determinant();
        TWEvaluation out{s, std::clamp(det, 0.0, 1.0), 0.0};
        if (with_pdf) {
            const double tr = lu.solve(dK).trace();
            out.f1 = std::max(0.0, -det * tr);
        }
        return out;
    }

private:
    static void check_range(double s)
    {
        if (!(s >= kMin && s <= kMax)) {
            throw Error(ErrorKind::DomainError, "Tracy-Widom argument outside [-12, 8]");
        }
    }

    int n_;
    Eigen::VectorXd x_;
    Eigen::VectorXd sw_;
};

inline const TracyWidom1& default_tw1()
{
    static const TracyWidom1 tw(64);
    return tw;
}

inline double f1_cdf(double s) { return default_tw1().cdf(s); }
inline double f1_pdf(double s) { return default_tw1().pdf(s); }

/// F_1 extended by 0 below -12 and 1 above 8, for goodness-of-fit use.
inline double f1_cdf_total(double s)
{
    if (s < TracyWidom1::kMin) {
        return 0.0;
    }
    if (s > TracyWidom1::kMax) {
        return 1.0;
    }
    return f1_cdf(s);
}

/// Rows s = from, from + step, ... up to `to` (inclusive within step/2).
inline std::vector<TWEvaluation> f1_table(double from, double to, double step, unsigned threads = 1)
{
    if (!(step > 0.0) || !(to >= from)) {
        throw Error(ErrorKind::InvalidArgument, "table needs step > 0 and to >= from");
    }
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 0.5)) + 1;
    std::vector<TWEvaluation> rows(count);
    parallel_for(count, threads, [&](std::size_t i) {
        rows[i] = default_tw1().evaluate(from + static_cast<double>(i) * step, true);
    });
    return rows;
}

/// Mean and variance of the density by composite Gauss-Legendre on [lo, hi].
struct TWMoments {
    double mass;
    double mean;
    double variance;
};

inline TWMoments f1_moments(double lo = -12.0, double hi = 8.0, int panels = 80)
{
    const GaussLegendre gl(16);
    const double width = (hi - lo) / panels;
    double m0 = 0, m1 = 0, m2 = 0;
    for (int p = 0; p < panels; ++p) {
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            const double s = lo + width * (p + gl.nodes[k]);
            const double w = width * gl.weights[k] * f1_pdf(s);
            m0 += w;
            m1 += w * s;
            m2 += w * s * s;
        }
    }
    const double mean = m1 / m0;
    return {m0, mean, m2 / m0 - mean * mean};
}

} // namespace spectraledge
