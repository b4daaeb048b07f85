#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ruq {

// Seeded generator with portable derived distributions.
//
// std::mt19937_64's output sequence is fixed by the standard, but the std::*_distribution
// adaptors are not, so uniform/normal/index draws are implemented here to keep every run
// bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n), rejection sampled (no modulo bias). n must be > 0.
  std::uint64_t index(std::uint64_t n);

  // Standard normal via the Marsaglia polar method.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// 64-bit mix of a textual key (FNV-1a followed by a splitmix64 finalizer).
std::uint64_t hash_key(std::string_view key);

// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace ruq
