#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace promptopt {

// Deterministic random source for a run. All sampling decisions flow from one
// seeded stream so that two runs with the same seed make identical draws.
//
// Bounded draws are implemented here (rejection sampling) instead of
// std::uniform_int_distribution, whose output is implementation-defined;
// frozen test expectations must not depend on the standard library build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased uniform draw from [0, n). n must be >= 1.
  std::uint64_t uniform_below(std::uint64_t n);

  // k distinct indices from [0, population), uniform without replacement,
  // in draw order. k is clamped to population.
  std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k);

  // Engine state round-trip, used by run checkpoints.
  std::string serialize() const;
  void deserialize(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

}  // namespace promptopt
