#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace agreekit {

struct RngSeed {
  std::uint64_t value = 0;
};

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard;
/// the standard distributions are not, so integer and real draws are done
/// here. Independent streams come from derive(), which hashes a path of
/// integers with SplitMix64, e.g. derive(seed, {point, trial}).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t derive(RngSeed seed, std::initializer_list<std::uint64_t> path);

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // m distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace agreekit
