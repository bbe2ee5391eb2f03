#include <gtest/gtest.h>

#include <spectraledge/rng.hpp>

using namespace spectraledge;

// Known-answer vectors from the Random123 distribution.
TEST(Philox, KnownAnswers)
{
    using B = Philox4x32::Block;
    EXPECT_EQ(Philox4x32::generate(B{0, 0, 0, 0}, {0, 0}),
              (B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::generate(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                   {0xffffffffu, 0xffffffffu}),
              (B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::generate(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                   {0xa4093822u, 0x299f31d0u}),
              (B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(NoiseStream, Deterministic)
{
    const NoiseStream a(42, 3, NoiseDist::Gaussian);
    const NoiseStream b(42, 3, NoiseDist::Gaussian);
    const NoiseStream other_trial(42, 4, NoiseDist::Gaussian);
    const NoiseStream other_seed(43, 3, NoiseDist::Gaussian);
    int same_trial = 0;
    int same_seed = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        EXPECT_EQ(a(k), b(k));
        same_trial += a(k) == other_trial(k);
        same_seed += a(k) == other_seed(k);
    }
    EXPECT_EQ(same_trial, 0);
    EXPECT_EQ(same_seed, 0);
}

TEST(NoiseStream, RademacherSigns)
{
    const NoiseStream r(1, 0, NoiseDist::Rademacher);
    int plus = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        const double v = r(static_cast<std::uint64_t>(k));
        ASSERT_TRUE(v == 1.0 || v == -1.0);
        plus += v > 0;
    }
    // 5 standard deviations of a fair coin
    EXPECT_NEAR(plus, n / 2, 5 * std::sqrt(n / 4.0));
}

class Moments : public ::testing::TestWithParam<NoiseDist> {};

TEST_P(Moments, UnitVariance)
{
    const NoiseStream r(2024, 7, GetParam());
    const int n = 200000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int k = 0; k < n; ++k) {
        const double v = r(static_cast<std::uint64_t>(k));
        ASSERT_TRUE(std::isfinite(v));
        s1 += v;
        s2 += v * v;
        s4 += v * v * v * v;
    }
    s1 /= n;
    s2 /= n;
    s4 /= n;
    EXPECT_NEAR(s1, 0.0, 5.0 / std::sqrt(n));
    const double kurt = GetParam() == NoiseDist::Gaussian ? 3.0 : GetParam() == NoiseDist::Uniform ? 1.8 : 1.0;
    EXPECT_NEAR(s2, 1.0, 5.0 * std::sqrt((kurt - 1.0) / n) + 1e-12);
    EXPECT_NEAR(s4, kurt, 0.05 * kurt);
}

INSTANTIATE_TEST_SUITE_P(AllDists, Moments,
                         ::testing::Values(NoiseDist::Gaussian, NoiseDist::Rademacher,
                                           NoiseDist::Uniform));

TEST(NoiseStream, UniformSupport)
{
    const NoiseStream r(5, 0, NoiseDist::Uniform);
    for (std::uint64_t k = 0; k < 10000; ++k) {
        EXPECT_LE(std::fabs(r(k)), std::sqrt(3.0));
    }
}

TEST(NoiseStream, Open01Bounds)
{
    EXPECT_GT(NoiseStream::open01(0, 0), 0.0);
    EXPECT_EQ(NoiseStream::open01(0xffffffffu, 0xffffffffu), 1.0);
}

TEST(NoiseDistNames, RoundTrip)
{
    for (auto d : {NoiseDist::Gaussian, NoiseDist::Rademacher, NoiseDist::Uniform}) {
        EXPECT_EQ(parse_noise_dist(to_string(d)), d);
    }
    try {
        parse_noise_dist("cauchy");
        FAIL();
    } catch (const Error& e) {
        EXPECT_TRUE(e.is_config_error());
    }
}
