#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <spectraledge/edge.hpp>
#include <spectraledge/stieltjes.hpp>

#include "oracles/marchenko_pastur.hpp"
#include "test_util.hpp"

using namespace spectraledge;

TEST(Stieltjes, MarchenkoPasturRealAxis)
{
    const auto zero = testutil::constant(0.0, 40, 40);
    const auto v = solve_stieltjes(zero, cplx(5.0, 0.0));
    EXPECT_NEAR(v.s.real(), (-5.0 + std::sqrt(5.0)) / 10.0, 1e-8);
    EXPECT_NEAR(v.s.imag(), 0.0, 1e-8);
}

TEST(Stieltjes, MarchenkoPasturComplexGrid)
{
    for (double c : {0.25, 0.5, 1.0}) {
        const auto zero = testutil::constant(0.0, 20, static_cast<int>(std::lround(20 / c)));
        for (double E : {-1.0, 0.3, 1.0, 2.5, 4.0, 7.0}) {
            for (double eta : {1e-3, 0.1, 1.0, 20.0}) {
                const cplx z(E, eta);
                const auto v = solve_stieltjes(zero, z);
                EXPECT_LT(std::abs(v.s - oracle::mp_stieltjes(c, z)), 1e-10)
                    << "c=" << c << " z=" << z;
            }
        }
    }
}

TEST(Stieltjes, ResolventDecay)
{
    const auto m = testutil::random_spectrum(11, 0.5);
    const cplx z(0.0, 1e5);
    const auto v = solve_stieltjes(m, z);
    EXPECT_LT(std::abs(z * v.s + 1.0), 1e-4);
}

TEST(Stieltjes, ConstantSpectrumAtEdge)
{
    const auto m = testutil::constant(1.0, 50, 50);
    const auto v = solve_stieltjes(m, cplx(6.75, 0.0));
    EXPECT_NEAR(v.s.real(), -1.0 / 3.0, 1e-4);
    EXPECT_NEAR(v.b.real(), 2.0 / 3.0, 1e-4);
}

TEST(Stieltjes, BranchAndCompanionInvariants)
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto m = testutil::random_spectrum(seed, seed % 2 ? 0.5 : 1.0);
        const double lam = find_edge(m).lambda_r;
        for (double E : {-0.5, 0.2, 0.5 * lam, lam, 1.5 * lam}) {
            for (double eta : {1e-3, 0.05, 2.0}) {
                const cplx z(E, eta);
                const auto v = solve_stieltjes(m, z);
                EXPECT_GE(v.s.imag(), -1e-12);
                EXPECT_GE((z * v.s).imag(), -1e-12);
                EXPECT_LT(v.residual, 1e-10);
                EXPECT_EQ(v.s_tilde, -(1.0 - m.c()) / v.z + m.c() * v.s);
                EXPECT_LT(companion_residual(m, v), 1e-10);
            }
        }
    }
}

TEST(Stieltjes, DomainErrors)
{
    const auto m = testutil::constant(1.0, 5, 5);
    EXPECT_THROW(solve_stieltjes(m, cplx(0.0, 0.0)), Error);
    EXPECT_THROW(solve_stieltjes(m, cplx(1.0, -0.1)), Error);
    EXPECT_THROW(density(m, 0.0), Error);
}

TEST(Density, MarchenkoPastur)
{
    const auto zero = testutil::constant(0.0, 40, 40);
    EXPECT_NEAR(density(zero, 2.0), 1.0 / (2.0 * M_PI), 1e-6);
    for (double x : {0.5, 1.0, 3.0, 3.9}) {
        EXPECT_NEAR(density(zero, x), oracle::mp_density(1.0, x), 1e-6);
    }
}

TEST(Density, VanishesOutsideSupport)
{
    const auto m = testutil::random_spectrum(5, 0.5);
    const double lam = find_edge(m).lambda_r;
    EXPECT_LT(density(m, lam + 1.0), 1e-8);
    EXPECT_LT(density(m, lam + 3.0), 1e-8);
}

TEST(Density, Normalization)
{
    const auto m = testutil::constant(1.0, 50, 100);
    const double lam = find_edge(m).lambda_r;
    const double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double E) { return density(m, E); }, 1e-6, lam, 12, 1e-9);
    EXPECT_NEAR(mass, 1.0, 1e-4);
}

TEST(Density, SquareRootEdge)
{
    const auto m = testutil::constant(1.0, 50, 50);
    const double lam = find_edge(m).lambda_r;
    double lo = 1e300, hi = 0.0;
    for (double kappa : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
        const double r = density(m, lam - kappa) / std::sqrt(kappa);
        EXPECT_GT(r, 0.0);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_LT((hi - lo) / lo, 0.2);
}

TEST(Stieltjes, ImaginaryPartDecaysInE)
{
    const auto m = testutil::random_spectrum(8, 1.0);
    double prev = 1e300;
    for (double E : {10.0, 20.0, 40.0, 80.0, 160.0}) {
        const double im = solve_stieltjes(m, cplx(E, 0.1)).s.imag();
        EXPECT_LT(im, prev);
        prev = im;
    }
    EXPECT_LT(prev, 1e-4);
}
