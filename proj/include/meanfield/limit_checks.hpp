#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meanfield/flow.hpp"
#include "meanfield/model.hpp"
#include "meanfield/simplex.hpp"
#include "meanfield/simulate.hpp"

namespace meanfield {

// One statistic swept over an index (particle count or grid time), with a
// bootstrap Monte-Carlo standard error per row.
struct ConvergenceTable {
  std::string statistic_name;
  std::string index_name;  // "N" or "time"
  std::vector<double> index;
  std::vector<double> statistic;
  std::vector<double> std_error;
  double horizon = 0.0;
  int replicas = 0;
};

struct LimitTestOptions {
  int grid_points = 50;
  int bootstrap = 200;
  int workers = 1;
  SimOptions sim;
  StepControl step;
};

// Empirical-measure convergence: per N, the median over replicas of the
// sup-over-grid TV distance between the simulated trajectory and the
// deterministic flow. Needs at least 30 replicas and an increasing N_list.
ConvergenceTable lln_test(const MeanFieldModel& model, const SimplexPoint& init, double T,
                          const std::vector<std::int64_t>& N_list, int replicas,
                          std::uint64_t seed, const LimitTestOptions& options = {});

// Asymptotic independence of two tagged particles: per N, the TV distance
// between their empirical joint law at T (across replicas) and the product
// of the deterministic marginal with itself. Needs at least 500 replicas.
ConvergenceTable decoupling_test(const MeanFieldModel& model, const SimplexPoint& init,
                                 double T, const std::vector<std::int64_t>& N_list,
                                 int replicas, std::uint64_t seed,
                                 const LimitTestOptions& options = {});

// Marginal consistency of the single-particle picture: simulate replicas of
// the thinned inhomogeneous particle under the flow started from init, and
// per grid time report the TV distance between the empirical marginal and
// the flow itself. Needs at least 500 replicas.
ConvergenceTable level4_marginal_test(const MeanFieldModel& model, const SimplexPoint& init,
                                      double T, int replicas, std::uint64_t seed,
                                      const LimitTestOptions& options = {});

}  // namespace meanfield
