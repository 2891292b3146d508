/*
   Copyright 2026 The expfunc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream index, substream, draw counter), so a sample indexed by
// (scenario seed, sample index) is reproducible regardless of which worker
// produces it or in what order.
//
// Generator: Philox4x32-10 (Salmon et al., SC 2011).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace expfunc {

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline constexpr std::array<std::uint32_t, 4> philox_round(
    const std::array<std::uint32_t, 4>& ctr,
    const std::array<std::uint32_t, 2>& key) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

/// Philox4x32-10 block function.
inline constexpr std::array<std::uint32_t, 4> philox4x32(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept {
    for (int r = 0; r < 10; ++r) {
        ctr = detail::philox_round(ctr, key);
        key[0] += detail::kPhiloxW0;
        key[1] += detail::kPhiloxW1;
    }
    return ctr;
}

/// One independent random stream. Satisfies UniformRandomBitGenerator
/// (64-bit output) and adds the few continuous draws the samplers need.
/// Distribution transforms are hand-written so the output is identical
/// across standard library implementations.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t index, std::uint32_t substream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_(index),
          substream_(substream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (lane_ == 2) refill();
        const result_type out = (static_cast<result_type>(block_[2 * lane_]) << 32) | block_[2 * lane_ + 1];
        ++lane_;
        return out;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Exp(1).
    double exponential() noexcept { return -std::log(uniform()); }

    /// Standard normal (Box-Muller, second variate cached).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    /// A stream independent of this one, addressed by a different substream.
    RandomStream substream(std::uint32_t sub) const noexcept {
        RandomStream s(0, index_, sub);
        s.key_ = key_;
        return s;
    }

    /// Philox blocks consumed so far (two 64-bit draws each).
    std::uint64_t blocks() const noexcept { return counter_; }

private:
    void refill() noexcept {
        // 2^32 blocks (2^33 draws) per substream is far beyond any single sample.
        const std::array<std::uint32_t, 4> ctr{
            static_cast<std::uint32_t>(counter_), substream_,
            static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32)};
        block_ = philox4x32(ctr, key_);
        ++counter_;
        lane_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t index_;
    std::uint32_t substream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int lane_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace expfunc
