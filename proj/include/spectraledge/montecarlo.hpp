#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "edge.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "spectrum.hpp"
#include "tracy_widom.hpp"

namespace spectraledge {

using Matrix = Eigen::MatrixXd;

/// Y = R + X with R = diag(d) in the leading M columns and X iid with
/// variance 1/N. Entry (i, j) uses stream index i*N + j.
inline Matrix sample_matrix(const SpectrumModel& model, NoiseDist dist, std::uint64_t seed,
                            std::uint64_t trial)
{
    const int M = model.M();
    const int N = model.N();
    const NoiseStream noise(seed, trial, dist);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    Matrix Y(M, N);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < N; ++j) {
            const auto idx = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(N) +
                             static_cast<std::uint64_t>(j);
            Y(i, j) = scale * noise(idx);
        }
        Y(i, i) += model.d()[static_cast<std::size_t>(i)];
    }
    return Y;
}

/// Largest eigenvalue of Y Y^T: symmetric eigensolver for M <= 400, squared
/// top singular value above that.
inline double largest_eigenvalue(const Matrix& Y)
{
    if (Y.size() == 0) {
        throw Error(ErrorKind::InvalidArgument, "empty matrix");
    }
    if (Y.rows() <= 400) {
        const Matrix Q = Y * Y.transpose();
        const Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw Error(ErrorKind::NumericError, "symmetric eigensolver failed");
        }
        return std::max(0.0, es.eigenvalues()(Y.rows() - 1));
    }
    const Eigen::BDCSVD<Matrix> svd(Y);
    if (svd.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericError, "SVD failed");
    }
    const double s = svd.singularValues()(0);
    return s * s;
}

/// sup_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|) over the sorted sample.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    if (samples.empty()) {
        throw Error(ErrorKind::InvalidArgument, "KS distance of an empty sample");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max({d, std::fabs(static_cast<double>(i + 1) / n - F),
                      std::fabs(static_cast<double>(i) / n - F)});
    }
    return d;
}

struct EnsembleResult {
    std::vector<double> mu1;    // largest eigenvalue of (R+X)(R+X)^T
    std::vector<double> thetas; // gamma0 N^{2/3} (mu1 - lambda_r)
    int n_trials = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double variance = std::numeric_limits<double>::quiet_NaN();
    double ks_distance = std::numeric_limits<double>::quiet_NaN();
    bool statistics_defined = false;
    std::uint64_t seed = 0;
    NoiseDist noise_dist = NoiseDist::Gaussian;
    double lambda_r = 0.0;
    double gamma0 = 0.0;
};

/// Sample mean and unbiased variance of the thetas plus KS distance to F_1.
inline void summarize(EnsembleResult& r)
{
    r.n_trials = static_cast<int>(r.thetas.size());
    r.statistics_defined = r.n_trials >= 2;
    if (r.n_trials == 0) {
        return;
    }
    double m = 0.0;
    for (double t : r.thetas) {
        m += t;
    }
    m /= r.n_trials;
    double v = 0.0;
    for (double t : r.thetas) {
        v += (t - m) * (t - m);
    }
    r.mean = m;
    r.variance = r.n_trials >= 2 ? v / (r.n_trials - 1) : std::numeric_limits<double>::quiet_NaN();
    r.ks_distance = ks_distance(r.thetas, f1_cdf_total);
}

/// With `rescale`, each matrix is sqrt(gamma0) (R + X) and theta is formed as
/// N^{2/3}(mu - E_+); otherwise theta = gamma0 N^{2/3}(mu1 - lambda_r).
inline EnsembleResult run_ensemble(const SpectrumModel& model, int n_trials, NoiseDist dist,
                                   std::uint64_t seed, bool rescale = false, unsigned threads = 1)
{
    if (n_trials < 0) {
        throw Error(ErrorKind::InvalidArgument, "n_trials must be >= 0");
    }
    const auto edge = solve_edge(model);
    EnsembleResult r;
    r.seed = seed;
    r.noise_dist = dist;
    r.lambda_r = edge.lambda_r;
    r.gamma0 = edge.gamma0;
    r.mu1.assign(static_cast<std::size_t>(n_trials), 0.0);
    r.thetas.assign(static_cast<std::size_t>(n_trials), 0.0);
    const double n23 = std::cbrt(static_cast<double>(model.N()) * model.N());
    const double sg = std::sqrt(edge.gamma0);
    parallel_for(static_cast<std::size_t>(n_trials), threads, [&](std::size_t k) {
        Matrix Y = sample_matrix(model, dist, seed, k);
        if (rescale) {
            Y *= sg;
            const double mu = largest_eigenvalue(Y);
            r.mu1[k] = mu / edge.gamma0;
            r.thetas[k] = n23 * (mu - edge.E_plus);
        } else {
            const double mu = largest_eigenvalue(Y);
            r.mu1[k] = mu;
            r.thetas[k] = edge.gamma0 * n23 * (mu - edge.lambda_r);
        }
    });
    summarize(r);
    return r;
}

} // namespace spectraledge
