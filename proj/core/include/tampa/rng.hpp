#pragma once

#include <cstdint>
#include <random>

namespace tampa {

// SplitMix64 finalizer, used to derive independent stream keys from tuples
// like (run seed, purpose tag, edge, minute). Every random quantity in a run
// is drawn from a stream keyed this way, so results do not depend on
// iteration order or on how many draws other components consumed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class KeyMixer {
 public:
  explicit KeyMixer(std::uint64_t seed) : state_(splitmix64(seed)) {}

  KeyMixer& add(std::uint64_t v) {
    state_ = splitmix64(state_ ^ (v + 0x9e3779b97f4a7c15ULL));
    return *this;
  }
  KeyMixer& add(int v) { return add(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }

  std::uint64_t key() const { return state_; }

 private:
  std::uint64_t state_;
};

// mt19937_64 engine with hand-rolled variate transforms. The engine's output
// sequence is fully specified by the standard and the transforms avoid
// std::*_distribution, so draws are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal(double mean, double stddev);

  // Uniform over {0, ..., n-1}.
  int uniform_below(int n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace tampa
