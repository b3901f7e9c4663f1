#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace kboost {

//! SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

//! Counter-based 64-bit generator: the i-th output is mix64(key + (i + 1) * golden).
//! Independent streams come from distinct keys (see stream_key), so the draws
//! of a replicate do not depend on how work is scheduled.
class CounterRng
{
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0)
    : key_(key)
  {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()()
  {
    ++counter_;
    return mix64(key_ + counter_ * golden);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

private:
  static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

//! Key for the stream identified by a seed and a path of integer labels,
//! e.g. stream_key(seed, {n, repeat, replicate}).
inline std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
{
  std::uint64_t k = mix64(seed ^ 0x6A09E667F3BCC908ULL);
  for (std::uint64_t p : path)
    k = mix64(k ^ mix64(p + 0x9E3779B97F4A7C15ULL));
  return k;
}

} // namespace kboost
