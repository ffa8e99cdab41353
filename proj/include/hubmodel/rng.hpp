#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hubmodel/types.hpp"

namespace hubmodel {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Named substreams hanging off one master seed. Every consumer of randomness
// derives its own stream, so adding or reordering consumers never shifts the
// draws of another, and per-replicate work is reproducible in isolation.
enum StreamTag : std::uint64_t {
  kParamsStream = 1,
  kDataStream = 2,
  kFitStream = 3,
  kInitStream = 4,
  kCellStream = 5,
  kReplicateStream = 6,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  s = mix64(s ^ (index * 0xdaba0b6eb09322e3ULL + 0x589965cc75374cc3ULL));
  return s;
}

// Deterministic across platforms: mt19937_64 output is fully specified and
// doubles are built from the top 53 bits only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // CDF inversion; probs need not be exactly normalized, the last positive
  // entry absorbs rounding slack.
  int categorical(const std::vector<double>& probs) {
    double u = uniform();
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

  // Uniform over {0, ..., k-1}; k must be positive.
  int index(int k) { return static_cast<int>(uniform() * k); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hubmodel
