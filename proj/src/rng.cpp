#include "meanfield/rng.hpp"

#include <cmath>

#include "meanfield/errors.hpp"

namespace meanfield {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace

std::uint64_t RngStream::derive(std::uint64_t master, std::uint64_t a) {
  return mix64(master + 0x9E3779B97F4A7C15ull * (a + 1));
}

std::uint64_t RngStream::derive(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive(derive(master, a), b);
}

double RngStream::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError("exponential draw needs a positive finite rate");
  }
  // -log1p(-u) stays accurate for u near 0 and never hits log(0).
  return -std::log1p(-uniform()) / rate;
}

std::int64_t RngStream::uniform_int(std::int64_t n) {
  if (n <= 0) throw ValidationError("uniform_int needs n > 0");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return static_cast<std::int64_t>(x % un);
}

int RngStream::sample(const Vector& weights) {
  const double u = uniform();
  double acc = 0.0;
  int last_positive = -1;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += weights(i);
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding can leave acc a hair under 1; fall back to the last usable index.
  if (last_positive >= 0) return last_positive;
  throw ValidationError("cannot sample from an all-zero weight vector");
}

}  // namespace meanfield
