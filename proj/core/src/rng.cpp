#include "agreekit/rng.hpp"

#include <numeric>

#include "agreekit/errors.hpp"

namespace agreekit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::derive(RngSeed seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed.value);
  for (const auto p : path) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw Error("uniform_index over an empty range");
  const auto bound = static_cast<std::uint64_t>(n);
  // reject the low residue so every bucket has equal size
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return static_cast<std::size_t>(x % bound);
  }
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t m) {
  if (m > n) throw Error("cannot draw more items than available");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + uniform_index(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace agreekit
