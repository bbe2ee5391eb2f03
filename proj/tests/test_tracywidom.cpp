#include <gtest/gtest.h>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/tools/minima.hpp>

#include <spectraledge/airy.hpp>
#include <spectraledge/tracy_widom.hpp>

#include "oracles/painleve.hpp"

using namespace spectraledge;

TEST(Airy, ValueAtZero)
{
    EXPECT_NEAR(airy_ai(0.0), std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0), 1e-16);
    EXPECT_NEAR(airy_ai(0.0), 0.355028054, 1e-9);
}

TEST(Airy, LeadingAsymptoticAtTen)
{
    const double x = 10.0;
    const double lead = std::exp(-2.0 / 3.0 * std::pow(x, 1.5)) / (2 * std::sqrt(M_PI) * std::pow(x, 0.25));
    EXPECT_NEAR(airy_ai(x) / lead, 1.0, 5e-3);
    EXPECT_NEAR(airy_ai(x), 1.1048e-10, 1e-14);
}

TEST(Airy, MatchesBoostOnDomain)
{
    for (double x = -20.0; x <= 40.0; x += 0.0137) {
        const auto v = airy(x);
        const double ref = boost::math::airy_ai(x);
        const double refp = boost::math::airy_ai_prime(x);
        // on the oscillatory side compare against the envelope so zeros do
        // not inflate the relative error
        const double env = x < 0 ? std::pow(-x, -0.25) / std::sqrt(M_PI) : std::fabs(ref);
        const double envp = x < 0 ? std::pow(-x, 0.25) / std::sqrt(M_PI) : std::fabs(refp);
        EXPECT_LE(std::fabs(v.ai - ref), 1e-10 * std::max(env, std::fabs(ref))) << x;
        EXPECT_LE(std::fabs(v.aip - refp), 1e-10 * std::max(envp, std::fabs(refp))) << x;
    }
}

TEST(Airy, RegionsOverlap)
{
    using namespace spectraledge::detail;
    const auto& A = airy_anchors();
    for (long double x : {2.9L, 3.0L, 3.1L}) {
        const auto m = airy_maclaurin(x);
        const auto t = airy_taylor(3.0L, A.pos[0][0], A.pos[0][1], x - 3.0L);
        EXPECT_LE(std::fabs(static_cast<double>((m[0] - t[0]) / m[0])), 1e-11);
        const auto mn = airy_maclaurin(-x);
        const auto tn = airy_taylor(-3.0L, A.neg[0][0], A.neg[0][1], 3.0L - x);
        EXPECT_LE(std::fabs(static_cast<double>(mn[0] - tn[0])), 1e-11);
    }
    for (long double x : {7.9L, 8.0L, 8.1L}) {
        const auto a = airy_asymptotic(x);
        const auto t = airy_taylor(7.75L, A.pos[19][0], A.pos[19][1], x - 7.75L);
        EXPECT_LE(std::fabs(static_cast<double>((a[0] - t[0]) / a[0])), 1e-11);
        const auto an = airy_asymptotic(-x);
        const auto tn = airy_taylor(-7.75L, A.neg[19][0], A.neg[19][1], 7.75L - x);
        EXPECT_LE(std::fabs(static_cast<double>(an[0] - tn[0])), 1e-11);
    }
}

TEST(Airy, DecaysMonotonically)
{
    double prev = airy_ai(1.0);
    for (double x = 1.1; x <= 40.0; x += 0.1) {
        const double v = airy_ai(x);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(Airy, DomainError)
{
    EXPECT_THROW(airy(-20.5), Error);
    EXPECT_THROW(airy(40.5), Error);
}

TEST(TracyWidom, Tails)
{
    const double right = 1.0 - f1_cdf(8.0);
    EXPECT_GE(right, 0.0);
    EXPECT_LE(right, 1e-8);
    EXPECT_LE(f1_cdf(-12.0), 1e-6);
    EXPECT_LE(f1_pdf(-10.0), 1e-5);
    EXPECT_THROW(f1_cdf(8.5), Error);
}

TEST(TracyWidom, Monotone)
{
    double prev = -1.0;
    for (double s = -12.0; s <= 8.0; s += 0.05) {
        const double F = f1_cdf(s);
        EXPECT_GE(F, prev);
        EXPECT_GE(F, 0.0);
        EXPECT_LE(F, 1.0);
        prev = F;
    }
}

TEST(TracyWidom, AgreesWithPainleve)
{
    std::vector<double> pts;
    for (int k = 0; k <= 14; ++k) {
        pts.push_back(2.0 - 0.5 * k);
    }
    pts.push_back(-1.2065);
    std::sort(pts.rbegin(), pts.rend());
    for (const auto& p : oracle::painleve_f1(pts)) {
        EXPECT_LE(std::fabs(f1_cdf(p.s) - p.F1), 1e-6) << p.s;
        EXPECT_LE(std::fabs(f1_pdf(p.s) - p.f1), 1e-5) << p.s;
    }
}

TEST(TracyWidom, QuadratureConverged)
{
    const TracyWidom1 fine(128);
    for (double s = -5.0; s <= 2.0; s += 0.5) {
        EXPECT_LE(std::fabs(f1_cdf(s) - fine.cdf(s)), 1e-8) << s;
    }
}

TEST(TracyWidom, DensityNormalizationAndMoments)
{
    const auto m = f1_moments(-12.0, 8.0);
    EXPECT_NEAR(m.mass, 1.0, 1e-5);
    EXPECT_NEAR(m.mean, -1.2065, 1e-3);
    EXPECT_NEAR(m.variance, 1.6078, 1e-3);
}

TEST(TracyWidom, DensityMassOnTruncatedWindow)
{
    // mass on [-10, 6] is short of 1 by exactly the right tail beyond 6
    const auto m = f1_moments(-10.0, 6.0);
    EXPECT_NEAR(m.mass, f1_cdf(6.0) - f1_cdf(-10.0), 1e-9);
    EXPECT_NEAR(1.0 - m.mass, 1.0 - f1_cdf(6.0), 1e-9);
}

TEST(TracyWidom, ModeMatchesPainleve)
{
    const auto ours = boost::math::tools::brent_find_minima([](double s) { return -f1_pdf(s); },
                                                            -3.0, 0.0, 40);
    const auto theirs = boost::math::tools::brent_find_minima(
        [](double s) {
            std::vector<double> p{s};
            return -oracle::painleve_f1(p).front().f1;
        },
        -3.0, 0.0, 40);
    EXPECT_NEAR(ours.first, theirs.first, 1e-3);
}

TEST(TracyWidom, Table)
{
    const auto rows = f1_table(-5.0, 2.0, 1.0, 2);
    ASSERT_EQ(rows.size(), 8u);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_GT(rows[k].F1, rows[k - 1].F1);
        EXPECT_DOUBLE_EQ(rows[k].s, -5.0 + static_cast<double>(k));
    }
    EXPECT_THROW(f1_table(0.0, 1.0, 0.0), Error);
}
