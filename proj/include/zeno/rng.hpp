// rng.hpp — counter-based random streams (Philox4x32-10) for reproducible
// parallel Monte Carlo. A stream is addressed by (master seed, stream id);
// the draw sequence is a pure function of that address, so trajectories can
// be generated in any order or on any thread with identical results.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace zeno {

// Philox4x32-10 block cipher (constants from the Random123 reference).
struct Philox4x32 {
    static constexpr std::uint32_t mul0 = 0xD2511F53u;
    static constexpr std::uint32_t mul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t weyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t weyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += weyl0;
                key[1] += weyl1;
            }
            const std::uint64_t p0 = std::uint64_t(mul0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(mul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(master_seed),
               static_cast<std::uint32_t>(master_seed >> 32)},
          stream_(stream) {}

    std::uint64_t next_u64() {
        if (avail_ == 0) refill();
        return buf_[--avail_];
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (std::normal_distribution is not
    // bit-stable across implementations).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = double((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    void refill() {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(block_),
            static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(stream_),
            static_cast<std::uint32_t>(stream_ >> 32)};
        const auto out = Philox4x32::block(ctr, key_);
        buf_[1] = std::uint64_t(out[0]) | (std::uint64_t(out[1]) << 32);
        buf_[0] = std::uint64_t(out[2]) | (std::uint64_t(out[3]) << 32);
        ++block_;
        avail_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int avail_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace zeno
