#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "edge.hpp"
#include "error.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "stieltjes.hpp"

namespace spectraledge {

using CMatrix = Eigen::MatrixXcd;

/// H(z) = [[-z I_M, Y], [Y^T, -I_N]].
inline CMatrix build_linearization(const Matrix& Y, cplx z)
{
    const auto M = Y.rows();
    const auto N = Y.cols();
    CMatrix H = CMatrix::Zero(M + N, M + N);
    H.topLeftCorner(M, M).diagonal().setConstant(-z);
    H.topRightCorner(M, N) = Y.cast<cplx>();
    H.bottomLeftCorner(N, M) = Y.transpose().cast<cplx>();
    H.bottomRightCorner(N, N).diagonal().setConstant(cplx(-1.0, 0.0));
    return H;
}

inline CMatrix resolvent(const Matrix& Y, cplx z)
{
    const CMatrix H = build_linearization(Y, z);
    const Eigen::PartialPivLU<CMatrix> lu(H);
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (!(pivots.minCoeff() > 1e-300)) {
        throw Error(ErrorKind::NumericError, "linearization is numerically singular");
    }
    CMatrix G = lu.solve(CMatrix::Identity(H.rows(), H.cols()));
    if (!G.allFinite()) {
        throw Error(ErrorKind::NumericError, "non-finite resolvent entries");
    }
    return G;
}

/// Deterministic resolvent profile. With scale gamma != 1 the matrix is
/// sqrt(gamma)(R + X) and the profile is the rescaled one:
///   m(z) = s(z/gamma)/gamma, b(z/gamma), tb_hat = gamma tb(z/gamma),
///   w_hat = gamma w(z/gamma), cross term sqrt(gamma) d / (gamma d^2 - w_hat).
struct LocalLawProfile {
    cplx z;
    double gamma = 1.0;
    cplx m, b, tb, w;

    cplx diag(double d) const { return b / (gamma * d * d - w); }
    cplx bar(double d) const { return tb / (gamma * d * d - w); }
    cplx cross(double d) const { return std::sqrt(gamma) * d / (gamma * d * d - w); }
    cplx noise_diag() const { return -1.0 / b; }
};

inline LocalLawProfile local_law_profile(const SpectrumModel& model, cplx z, double gamma = 1.0)
{
    const auto v = solve_stieltjes(model, z / gamma);
    LocalLawProfile p;
    p.z = z;
    p.gamma = gamma;
    p.m = v.s / gamma;
    p.b = v.b;
    p.tb = gamma * v.tb;
    p.w = gamma * v.w;
    return p;
}

struct LocalLawReport {
    cplx z;
    double dev_ii = 0, dev_barbar = 0, dev_cross = 0, dev_mumu = 0, dev_offdiag = 0, dev_avg = 0;
    double psi = 0;
    double ratio_ii = 0, ratio_barbar = 0, ratio_cross = 0, ratio_mumu = 0, ratio_offdiag = 0;
    double ratio_avg = 0; // dev_avg * N eta
    int n_mumu = 0;       // size of the unpaired noise block (N - M)

    double max_ratio() const
    {
        return std::max({ratio_ii, ratio_barbar, ratio_cross, ratio_mumu, ratio_offdiag, ratio_avg});
    }
};

/// Entrywise deviations of G = H(z)^{-1} from the profile. Y must already carry
/// the sqrt(gamma) factor when gamma != 1. Off-diagonal maxima skip the index
/// pairs (i, M+i).
inline LocalLawReport locallaw_deviation(const SpectrumModel& model, const Matrix& Y, cplx z,
                                         double gamma = 1.0)
{
    if (!(z.imag() > 0.0)) {
        throw Error(ErrorKind::DomainError, "local law needs Im z > 0");
    }
    const int M = model.M();
    const int N = model.N();
    if (Y.rows() != M || Y.cols() != N) {
        throw Error(ErrorKind::InvalidArgument, "matrix shape does not match model");
    }
    const auto prof = local_law_profile(model, z, gamma);
    const CMatrix G = resolvent(Y, z);

    LocalLawReport r;
    r.z = z;
    r.n_mumu = N - M;
    cplx trace = 0.0;
    for (int i = 0; i < M; ++i) {
        const double d = model.d()[static_cast<std::size_t>(i)];
        r.dev_ii = std::max(r.dev_ii, std::abs(G(i, i) - prof.diag(d)));
        r.dev_barbar = std::max(r.dev_barbar, std::abs(G(M + i, M + i) - prof.bar(d)));
        r.dev_cross = std::max({r.dev_cross, std::abs(G(i, M + i) - prof.cross(d)),
                                std::abs(G(M + i, i) - prof.cross(d))});
        trace += G(i, i);
    }
    for (int mu = 2 * M; mu < M + N; ++mu) {
        r.dev_mumu = std::max(r.dev_mumu, std::abs(G(mu, mu) - prof.noise_diag()));
    }
    const int T = M + N;
    for (int t = 0; t < T; ++t) {
        for (int s = 0; s < T; ++s) {
            if (s == t || (s < M && t == s + M) || (t < M && s == t + M)) {
                continue;
            }
            r.dev_offdiag = std::max(r.dev_offdiag, std::abs(G(s, t)));
        }
    }
    const cplx sN = trace / static_cast<double>(M);
    r.dev_avg = std::abs(sN - prof.m);

    const double eta = z.imag();
    const double Neta = static_cast<double>(N) * eta;
    r.psi = std::sqrt(std::max(0.0, prof.m.imag()) / Neta) + 1.0 / Neta;
    r.ratio_ii = r.dev_ii / r.psi;
    r.ratio_barbar = r.dev_barbar / r.psi;
    r.ratio_cross = r.dev_cross / r.psi;
    r.ratio_mumu = r.dev_mumu / r.psi;
    r.ratio_offdiag = r.dev_offdiag / r.psi;
    r.ratio_avg = r.dev_avg * Neta;
    return r;
}

/// |G_ii - 1/(-z - (Y G^{(i)} Y^T)_ii)| where G^{(i)} inverts H with row and
/// column i removed.
inline double resolvent_identity_residual(const Matrix& Y, cplx z, const CMatrix& G, int i)
{
    const auto M = Y.rows();
    const auto N = Y.cols();
    const CMatrix H = build_linearization(Y, z);
    const auto T = M + N;
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<std::size_t>(T - 1));
    for (Eigen::Index k = 0; k < T; ++k) {
        if (k != i) {
            keep.push_back(k);
        }
    }
    CMatrix Hi(T - 1, T - 1);
    for (Eigen::Index a = 0; a < T - 1; ++a) {
        for (Eigen::Index b = 0; b < T - 1; ++b) {
            Hi(a, b) = H(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
        }
    }
    const CMatrix Gi = Eigen::PartialPivLU<CMatrix>(Hi).solve(CMatrix::Identity(T - 1, T - 1));
    // noise block of G^{(i)} starts at M - 1 after the deletion
    const auto off = M - 1;
    const Eigen::VectorXcd y = Y.row(i).transpose().cast<cplx>();
    const cplx quad = y.dot(Gi.block(off, off, N, N) * y); // conj(y) = y for real Y
    return std::abs(G(i, i) - 1.0 / (-z - quad));
}

/// |Im G_ii / eta - sum_{j in I_M} |G_ij|^2| averaged over i in I_M.
inline double ward_residual(const CMatrix& G, int M, double eta)
{
    double acc = 0.0;
    for (int i = 0; i < M; ++i) {
        double s = 0.0;
        for (int j = 0; j < M; ++j) {
            s += std::norm(G(i, j));
        }
        acc += std::fabs(G(i, i).imag() / eta - s);
    }
    return acc / M;
}

struct RigidityResult {
    std::vector<int> Ns;
    std::vector<double> medians;
    double slope = 0.0;
    bool low_confidence = false;
};

/// Least-squares slope of log median |mu_1 - lambda_r| against log N. The
/// recipe keeps its aspect ratio: M = round(c N) at each N.
inline RigidityResult rigidity_scan(const SpectrumSpec& recipe, const std::vector<int>& Ns,
                                    int trials, std::uint64_t seed,
                                    NoiseDist dist = NoiseDist::Gaussian, unsigned threads = 1)
{
    if (Ns.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "rigidity scan needs at least two sizes");
    }
    if (trials < 1) {
        throw Error(ErrorKind::InvalidArgument, "rigidity scan needs trials >= 1");
    }
    const double c = static_cast<double>(recipe.M) / recipe.N;
    RigidityResult r;
    r.Ns = Ns;
    r.low_confidence = trials < 10;
    for (int n : Ns) {
        if (n < 50) {
            throw Error(ErrorKind::InvalidArgument, "rigidity scan needs N >= 50");
        }
        const int m = std::max(1, static_cast<int>(std::lround(c * n)));
        const auto model = recipe.resized(m, n).build();
        const auto ens = run_ensemble(model, trials, dist, seed, false, threads);
        std::vector<double> dev(ens.mu1.size());
        for (std::size_t k = 0; k < dev.size(); ++k) {
            dev[k] = std::fabs(ens.mu1[k] - ens.lambda_r);
        }
        std::sort(dev.begin(), dev.end());
        const std::size_t h = dev.size() / 2;
        r.medians.push_back(dev.size() % 2 ? dev[h] : 0.5 * (dev[h - 1] + dev[h]));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(Ns.size());
    for (std::size_t j = 0; j < Ns.size(); ++j) {
        const double x = std::log(static_cast<double>(Ns[j]));
        const double y = std::log(r.medians[j]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    r.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return r;
}

} // namespace spectraledge
