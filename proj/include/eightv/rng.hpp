#pragma once

#include <cstdint>
#include <random>

namespace eightv {

// splitmix64 finaliser, used to derive well-separated per-chain seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One independent stream per (seed, chain index); the stream never depends on
// which thread runs the chain.
class ChainRng {
 public:
  using result_type = std::uint64_t;

  ChainRng(std::uint64_t seed, std::uint64_t chain) : eng_(mix64(mix64(seed) ^ mix64(~chain))) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return eng_(); }

  // Uniform on [0,1) from the top 53 bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double q) { return uniform() < q; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace eightv
