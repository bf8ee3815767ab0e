#pragma once

#include <cstdint>
#include <limits>

namespace failsim
{

/**
 * Counter-keyed xoshiro256** stream.
 *
 * A stream is identified by (seed, index); the 256-bit state is filled from a
 * splitmix64 sequence started at a mix of both, so streams for different
 * indices are statistically independent and can be handed to different
 * workers without coordination. Satisfies UniformRandomBitGenerator, so the
 * standard <random> distributions can draw from it.
 */
class RandomStream
{
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0);

    /// Stream for sub-index `index` of this stream's key.
    RandomStream split(std::uint64_t index) const;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double on the open interval (0, 1).
    double uniform();

  private:
    std::uint64_t key_;
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace failsim
