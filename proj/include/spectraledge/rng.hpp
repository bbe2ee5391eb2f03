#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "error.hpp"

namespace spectraledge {

/// Philox4x32-10 (Salmon et al., SC'11). Stateless: output is a function of
/// (key, counter) only.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    static Block generate(Block ctr, std::array<std::uint32_t, 2> key)
    {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

enum class NoiseDist { Gaussian, Rademacher, Uniform };

inline std::string_view to_string(NoiseDist d)
{
    switch (d) {
    case NoiseDist::Gaussian: return "gaussian";
    case NoiseDist::Rademacher: return "rademacher";
    case NoiseDist::Uniform: return "uniform";
    }
    return "unknown";
}

inline NoiseDist parse_noise_dist(std::string_view name)
{
    if (name == "gaussian") {
        return NoiseDist::Gaussian;
    }
    if (name == "rademacher") {
        return NoiseDist::Rademacher;
    }
    if (name == "uniform") {
        return NoiseDist::Uniform;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown noise distribution '" + std::string(name) + "'");
}

/// Unit-variance draw for matrix entry `index` of trial `trial`. One Philox
/// block per entry, so any entry of any trial is addressable directly.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t trial, NoiseDist dist)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          trial_(trial), dist_(dist)
    {
    }

    double operator()(std::uint64_t index) const
    {
        const auto r = Philox4x32::generate({static_cast<std::uint32_t>(index),
                                             static_cast<std::uint32_t>(index >> 32),
                                             static_cast<std::uint32_t>(trial_),
                                             static_cast<std::uint32_t>(trial_ >> 32)},
                                            key_);
        switch (dist_) {
        case NoiseDist::Rademacher:
            return (r[0] >> 31) ? 1.0 : -1.0;
        case NoiseDist::Uniform:
            return std::numbers::sqrt3 * (2.0 * open01(r[0], r[1]) - 1.0);
        case NoiseDist::Gaussian:
        default: {
            // Box-Muller, cosine branch.
            const double u1 = open01(r[0], r[1]);
            const double u2 = open01(r[2], r[3]);
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }
        }
    }

    /// 53-bit uniform on (0, 1].
    static double open01(std::uint32_t hi, std::uint32_t lo)
    {
        const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t trial_;
    NoiseDist dist_;
};

} // namespace spectraledge
