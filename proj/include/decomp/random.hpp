#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace decomp {

namespace detail {

inline std::uint64_t
splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace detail

//! A seeded random stream. Replicate `r` of an experiment with base seed `s`
//! owns `RandomStream::derive(s, r)`; streams are never shared between tasks.
//!
//! Satisfies UniformRandomBitGenerator so user samplers can feed it to the
//! standard distributions.
class RandomStream
{
public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed)
    : seed_(seed)
    , engine_(detail::splitmix64(seed))
  {}

  static RandomStream derive(std::uint64_t base_seed, std::uint64_t index)
  {
    return RandomStream(
      detail::splitmix64(detail::splitmix64(base_seed) ^ (index + 1)));
  }

  std::uint64_t seed() const { return seed_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max()
  {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return engine_(); }

  //! Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal(double mean = 0.0, double sd = 1.0)
  {
    return mean + sd * normal_(engine_);
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

} // namespace decomp
