#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace tgd {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123 constants).
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    Block operator()(std::uint64_t counter) const noexcept {
        return bijection({static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32), 0u, 0u}, key_);
    }

    static Block bijection(Block ctr, std::array<std::uint32_t, 2> key) noexcept {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }

    /// Standard normal for sample index i (Box-Muller on one counter block).
    double normal(std::uint64_t i) const noexcept {
        const Block b = (*this)(i);
        const double u1 = to_unit(b[0], b[1]);
        const double u2 = to_unit(b[2], b[3]);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    // 53 random bits mapped to the open interval (0, 1).
    static double to_unit(std::uint32_t lo, std::uint32_t hi) noexcept {
        const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
    std::array<std::uint32_t, 2> key_;
};

template <typename Field>
Field add_gaussian_noise(Field f, double sigma, std::uint64_t seed) {
    if (sigma == 0.0) return f;
    const Philox4x32 rng(seed);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += sigma * rng.normal(i);
    return f;
}

} // namespace tgd
