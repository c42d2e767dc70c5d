#pragma once

#include <Eigen/Dense>
#include <string>

namespace meanfield {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A probability vector over the state space. Construction tolerates
// roundoff-scale noise (components above -1e-12 are clipped to zero, sums
// within 1e-9 of one are renormalized) and rejects anything worse, so a
// SimplexPoint held by value is always a valid distribution.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector weights);

  static SimplexPoint uniform(int n);
  static SimplexPoint vertex(int n, int state);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int z) const { return w_(z); }
  const Vector& weights() const { return w_; }

 private:
  Vector w_;
};

// Half the l1 distance between two distributions of equal length.
double tv_distance(const Vector& a, const Vector& b);
double tv_distance(const SimplexPoint& a, const SimplexPoint& b);

std::string to_string(const SimplexPoint& p);

}  // namespace meanfield
