#include "meanfield/simplex.hpp"

#include <cmath>
#include <sstream>

#include "meanfield/errors.hpp"

namespace meanfield {

namespace {
constexpr double kNegativeSlack = 1e-12;
constexpr double kSumSlack = 1e-9;
}  // namespace

SimplexPoint::SimplexPoint(Vector weights) : w_(std::move(weights)) {
  if (w_.size() == 0) throw ValidationError("simplex point must have at least one state");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w_.size(); ++i) {
    double v = w_(i);
    if (!std::isfinite(v)) throw ValidationError("simplex point has a non-finite component");
    if (v < -kNegativeSlack) {
      throw ValidationError("simplex point component " + std::to_string(i) +
                            " is negative: " + std::to_string(v));
    }
    if (v < 0.0) v = 0.0;
    w_(i) = v;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumSlack) {
    throw ValidationError("simplex point weights sum to " + std::to_string(sum) +
                          ", expected 1");
  }
  if (sum != 1.0) w_ /= sum;
}

SimplexPoint SimplexPoint::uniform(int n) {
  if (n < 1) throw ValidationError("uniform distribution needs at least one state");
  return SimplexPoint(Vector::Constant(n, 1.0 / n));
}

SimplexPoint SimplexPoint::vertex(int n, int state) {
  if (n < 1) throw ValidationError("vertex distribution needs at least one state");
  if (state < 0 || state >= n) {
    throw ValidationError("vertex state " + std::to_string(state) + " out of range");
  }
  Vector w = Vector::Zero(n);
  w(state) = 1.0;
  return SimplexPoint(std::move(w));
}

double tv_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ValidationError("tv_distance: length mismatch");
  return 0.5 * (a - b).lpNorm<1>();
}

double tv_distance(const SimplexPoint& a, const SimplexPoint& b) {
  return tv_distance(a.weights(), b.weights());
}

std::string to_string(const SimplexPoint& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ")";
  return os.str();
}

}  // namespace meanfield
