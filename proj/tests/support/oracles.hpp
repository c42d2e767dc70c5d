#pragma once

// Closed-form and matrix-exponential reference solutions the test suites
// compare against. Everything here is independent of the code under test
// except for basic model plumbing (state count, edge rates).

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "meanfield/model.hpp"
#include "meanfield/simplex.hpp"

namespace oracles {

// Infected fraction of the two-state epidemic with contact rate tau and
// recovery rate rho: the scalar drift is logistic, xi' = xi(tau(1-xi) - rho).
inline double sis_infected(double tau, double rho, double xi0, double t) {
  if (xi0 == 0.0) return 0.0;
  const double r = tau - rho;
  if (r == 0.0) return xi0 / (1.0 + tau * xi0 * t);
  const double cap = 1.0 - rho / tau;
  return cap / (1.0 + (cap / xi0 - 1.0) * std::exp(-r * t));
}

// Exact joint law at time T of the two particles of an N=2 system started
// iid from init, via the matrix exponential of the pair-chain generator.
// Pair states are indexed a*n+b; the empirical measure seen by both
// particles at pair state (a, b) is (e_a + e_b)/2.
inline meanfield::Matrix pair_chain_law(const meanfield::MeanFieldModel& model,
                                        const meanfield::SimplexPoint& init, double T) {
  const int n = model.num_states();
  const int m = n * n;
  meanfield::Matrix Q = meanfield::Matrix::Zero(m, m);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      meanfield::Vector xi = meanfield::Vector::Zero(n);
      xi(a) += 0.5;
      xi(b) += 0.5;
      const int row = a * n + b;
      for (int e = 0; e < model.graph().num_edges(); ++e) {
        const auto [from, to] = model.graph().edge(e);
        const double rate = model.rate_raw(e, xi);
        if (a == from) {
          Q(row, to * n + b) += rate;
          Q(row, row) -= rate;
        }
        if (b == from) {
          Q(row, a * n + to) += rate;
          Q(row, row) -= rate;
        }
      }
    }
  }
  meanfield::Vector p0(m);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) p0(a * n + b) = init[a] * init[b];
  const meanfield::Matrix transfer = (Q.transpose() * T).exp();
  meanfield::Vector pT = transfer * p0;
  meanfield::Matrix joint(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) joint(a, b) = pT(a * n + b);
  return joint;
}

// Marginal law at time t of one particle of a frozen-rate two-state chain
// with rates up (state 0 -> 1) and down (1 -> 0), started from law p0.
inline double two_state_occupancy(double up, double down, double p1_at_0, double t) {
  const double total = up + down;
  if (total == 0.0) return p1_at_0;
  const double stat = up / total;
  return stat + (p1_at_0 - stat) * std::exp(-total * t);
}

}  // namespace oracles
