#include "promptopt/rng.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace promptopt {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be >= 1");
  if (n == 1) return 0;
  // Reject the low sliver so that the modulo result is exactly uniform.
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t r = engine_();
  while (r < threshold) r = engine_();
  return r % n;
}

std::vector<std::size_t> Rng::sample_indices(std::size_t population, std::size_t k) {
  if (k > population) k = population;
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k entries are the sample, in draw order.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

std::string Rng::serialize() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void Rng::deserialize(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
  if (is.fail()) throw std::invalid_argument("rng state: malformed");
}

}  // namespace promptopt
