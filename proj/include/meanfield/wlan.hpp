#pragma once

#include <vector>

#include "meanfield/equilibria.hpp"
#include "meanfield/simplex.hpp"

namespace meanfield {

// Per-stage attempt rates c_0..c_K of the backoff chain.
class BackoffParameters {
 public:
  explicit BackoffParameters(std::vector<double> attempt_rates);

  int K() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& c() const { return c_; }
  bool strictly_decreasing() const;

 private:
  std::vector<double> c_;
};

// Aggregate attempt rate of one node when every attempt collides with
// probability gamma. Evaluated in a form without the removable singularity
// at gamma -> 1, so the whole closed interval [0, 1) is safe.
double attempt_rate(double gamma, const BackoffParameters& params);

// Collision probability the population produces when each node attempts at
// attempt_rate(gamma): G(gamma) = 1 - exp(-attempt_rate(gamma)).
double collision_response(double gamma, const BackoffParameters& params);

struct Level1Report {
  double gamma_star = 0.0;
  double beta_at_gamma_star = 0.0;
  int iterations = 0;
  double final_bracket = 0.0;
  bool uniqueness_guaranteed = false;  // c strictly decreasing
  int grid_sign_changes = 0;           // of gamma - G(gamma) on a 10^4-point grid
};

// Solves gamma = G(gamma) by bisection on [1e-12, 1 - 1e-12] to the given
// bracket tolerance, then audits uniqueness on a fixed grid.
Level1Report solve_gamma_star(const BackoffParameters& params, double tol = 1e-10);

struct CrossLevelReport {
  Level1Report level1;
  SimplexPoint fixed_point;
  double mean_attempt_rate = 0.0;  // <c, xi*>
  double attempt_residual = 0.0;   // |<c, xi*> - attempt_rate(gamma*)|
  double gamma_residual = 0.0;     // |gamma* - (1 - exp(-<c, xi*>))|
  bool passed = false;

  CrossLevelReport() : fixed_point(SimplexPoint::uniform(1)) {}
};

// Confronts the macroscopic fixed point of the backoff chain with the scalar
// analysis: both residuals must clear tol for passed to be true. Exactly one
// fixed point must exist; anything else is an inconsistency error.
CrossLevelReport cross_level_check(const BackoffParameters& params, double tol = 1e-6,
                                   const FixedPointOptions& options = {});

}  // namespace meanfield
