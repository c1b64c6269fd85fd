#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace xcorr {

/// Philox4x32-10 block function (Salmon et al., SC'11).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudorandom bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream addressed by (seed, stream index).
///
/// Every stream is an independent, reproducible sequence; two streams with
/// the same seed and index produce identical output regardless of which
/// thread draws them or in what order streams are created. Satisfies
/// UniformRandomBitGenerator.
class RandomStream {
  public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

  private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;  // in 32-bit lanes; 4 means empty
};

}  // namespace xcorr
