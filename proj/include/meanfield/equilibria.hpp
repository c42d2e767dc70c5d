#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "meanfield/model.hpp"
#include "meanfield/simplex.hpp"

namespace meanfield {

enum class Stability { stable, unstable, marginal };

const char* to_string(Stability s);

struct StabilityReport {
  Stability stability = Stability::marginal;
  // Eigenvalues of the drift's Jacobian restricted to the simplex tangent
  // space, sorted by descending real part.
  std::vector<std::complex<double>> spectrum;
  // True when the point sits on the boundary and some finite differences had
  // to be one-sided.
  bool one_sided = false;
};

struct FixedPointReport {
  SimplexPoint point;
  double residual = 0.0;
  Stability stability = Stability::marginal;
  std::vector<std::complex<double>> spectrum;
  bool one_sided = false;
  int starts_converged = 0;  // how many starts landed on this point
};

struct FixedPointOptions {
  int n_starts = 64;           // random starts on top of the deterministic ones
  std::uint64_t seed = 0;      // for the random starts
  double tol = 1e-11;          // residual target, infinity norm of the drift
  double dedup_tol = 1e-6;     // points closer than this collapse to one
  double fd_step = 1e-6;
  double spectral_tol = 1e-7;  // margin around zero for stability calls
  int max_iterations = 500;
  int workers = 1;
};

// Stationary distribution of the chain frozen at xi. The frozen chain must be
// irreducible on the edges with strictly positive rate; otherwise a
// ReducibilityError is thrown and the caller has to work with the drift
// residual directly.
SimplexPoint equilibrium_response(const MeanFieldModel& model, const SimplexPoint& xi);

// Spectrum of the tangent-space Jacobian at a candidate fixed point, turned
// into a three-way stability call with a dead zone of spectral_tol around
// zero real part.
StabilityReport classify_stability(const MeanFieldModel& model, const SimplexPoint& point,
                                   double fd_step = 1e-6, double spectral_tol = 1e-7);

// Multi-start search for every zero of the drift on the simplex: damped
// self-consistent iteration through equilibrium_response where the response
// exists, Newton on the drift residual where it does not, dedup, then
// classification. Results are sorted lexicographically by coordinates.
std::vector<FixedPointReport> find_fixed_points(const MeanFieldModel& model,
                                                const FixedPointOptions& options = {});

}  // namespace meanfield
