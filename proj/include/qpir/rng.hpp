#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpir {

// Deterministic random stream used for every sampled decision (queries,
// measurement outcomes, random instances in audits and tests).
//
// Seed derivation for trial t of a run with master seed m is pinned to
//
//   child = splitmix64(m ^ (0x9E3779B97F4A7C15 * (t + 1)))
//
// with the standard splitmix64 finalizer, so any report can be reproduced
// bit-for-bit from (master seed, trial index).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  static std::uint64_t mix(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static RandomStream child(std::uint64_t master, std::uint64_t index) {
    return RandomStream(mix(master, index));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t bits() { return gen_(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    return static_cast<int>(static_cast<std::uint64_t>(n) * uniform());
  }

  bool coin() { return (gen_() & 1ULL) != 0; }

  // Standard normal via Box-Muller (used for Gaussian-ensemble sampling).
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Samples an index from a probability vector by cumulative inversion.
  // The weights must sum to 1 within the probability-sum tolerance; they are
  // renormalized before inversion so ties at the boundary cannot push the
  // draw out of range.
  int sample_discrete(const std::vector<double>& weights) {
    double sum = 0.0;
    for (double w : weights) {
      if (w < -1e-12 || !std::isfinite(w)) {
        throw std::runtime_error("sample_discrete: invalid weight " +
                                 std::to_string(w));
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
      throw std::runtime_error(
          "sample_discrete: probabilities sum to " + std::to_string(sum) +
          ", outside tolerance 1e-10");
    }
    const double u = uniform() * sum;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    // Numeric tail: return the last index with nonzero weight.
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return static_cast<int>(i);
    }
    throw std::runtime_error("sample_discrete: all weights zero");
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qpir
