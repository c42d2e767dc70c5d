#pragma once

#include <cstdint>
#include <random>

#include "meanfield/simplex.hpp"

namespace meanfield {

// One deterministic random stream. Results depend only on the seed and on
// the sequence of calls, never on threading or platform: the engine is
// mt19937_64 and every distribution below is hand-rolled from raw 64-bit
// draws (std::uniform_real_distribution and friends are not guaranteed to
// produce identical sequences across standard libraries).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  // Stable derivation of child seeds, so replica k of job j gets the same
  // stream no matter which worker runs it. splitmix64-style finalizer.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t a);
  static std::uint64_t derive(std::uint64_t master, std::uint64_t a, std::uint64_t b);

  // Uniform on [0, 1) with 53 significant bits.
  double uniform();

  // Exponential with the given rate; rate must be positive and finite.
  double exponential(double rate);

  // Uniform integer on {0, ..., n-1} via rejection, bias-free.
  std::int64_t uniform_int(std::int64_t n);

  // Samples an index from a probability vector by inverse CDF scan.
  int sample(const Vector& weights);
  int sample(const SimplexPoint& p) { return sample(p.weights()); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace meanfield
