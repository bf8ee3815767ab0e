#include "failsim/random.hpp"

namespace failsim
{

namespace
{

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t splitmix64(std::uint64_t& state)
{
    state += golden_gamma;
    return mix64(state);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : key_(mix64(seed) ^ mix64(mix64(index + golden_gamma)))
{
    std::uint64_t sm = key_;
    for (auto& word : s_)
        word = splitmix64(sm);
    // all-zero state is the one fixed point of xoshiro
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
        s_[0] = golden_gamma;
}

RandomStream RandomStream::split(std::uint64_t index) const { return RandomStream(key_, index); }

RandomStream::result_type RandomStream::operator()()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform()
{
    // 53 random bits, offset by half an ulp so 0 is never returned
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace failsim
