#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace crnkit {

/// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
///
/// The 128-bit counter block is (block_lo, block_hi, stream_lo, stream_hi)
/// and the 64-bit key is the seed, so streams are indexed by a 64-bit stream
/// id: trajectories in a batch take stream = trajectory index and are
/// reproducible regardless of scheduling.  Each block yields four 32-bit
/// words, consumed as two 64-bit outputs.
class Philox4x32 {
  public:
    using result_type = std::uint64_t;

    explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (word_ == 0) {
            block_ = run(counter_);
            ++counter_;
        }
        std::uint64_t lo = block_[word_], hi = block_[word_ + 1];
        word_ = (word_ + 2) % 4;
        return lo | (hi << 32);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform in the open interval (0, 1); safe for log transforms.
    double uniform_open() {
        return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Exponential holding time with the given rate.
    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    /// Raw block function, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key) {
        std::array<std::uint32_t, 4> x = counter;
        std::uint32_t k0 = key[0], k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = kMul0 * static_cast<std::uint64_t>(x[0]);
            std::uint64_t p1 = kMul1 * static_cast<std::uint64_t>(x[2]);
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return x;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    std::array<std::uint32_t, 4> run(std::uint64_t block_index) const {
        return block({static_cast<std::uint32_t>(block_index),
                      static_cast<std::uint32_t>(block_index >> 32), stream_[0], stream_[1]},
                     key_);
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    unsigned word_ = 0;
};

}  // namespace crnkit
