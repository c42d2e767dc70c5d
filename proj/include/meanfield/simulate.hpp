#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "meanfield/flow.hpp"
#include "meanfield/model.hpp"
#include "meanfield/rng.hpp"
#include "meanfield/simplex.hpp"

namespace meanfield {

// Exchangeable system state: how many of the N particles sit in each state.
class ParticleConfiguration {
 public:
  explicit ParticleConfiguration(std::vector<std::int64_t> counts);

  std::int64_t num_particles() const { return total_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  int num_states() const { return static_cast<int>(counts_.size()); }
  SimplexPoint measure() const;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_;
};

// Piecewise-constant record of the empirical measure. If the jump budget ran
// out, the record holds the measure on a fixed time grid instead of at every
// jump, and grid_sampled says so.
struct EmpiricalTrajectory {
  std::vector<double> times;          // starts at 0
  std::vector<SimplexPoint> measures; // value from times[k] until the next entry
  double final_time = 0.0;
  std::int64_t num_particles = 0;
  std::int64_t num_jumps = 0;
  bool grid_sampled = false;

  SimplexPoint at(double t) const;  // right-continuous lookup
};

// Jump record of one named particle.
struct TaggedPath {
  std::int64_t particle = -1;
  std::vector<double> times;  // starts at 0
  std::vector<int> states;

  int state_at(double t) const;  // right-continuous lookup
};

struct SimOptions {
  std::int64_t max_jump_records = 10'000'000;
  int fallback_grid_points = 1001;  // used once the jump budget is exhausted
};

// Exact event-driven simulation of the N-particle system over [0, T].
// Initial states are drawn iid from init; the overloads taking a
// ParticleConfiguration start from those exact counts instead.
EmpiricalTrajectory simulate(const MeanFieldModel& model, std::int64_t N,
                             const SimplexPoint& init, double T, std::uint64_t seed,
                             const SimOptions& options = {});
EmpiricalTrajectory simulate(const MeanFieldModel& model, const ParticleConfiguration& init,
                             double T, std::uint64_t seed, const SimOptions& options = {});

// Same dynamics, also tracking the jump paths of the given particle indices
// (0..N-1; a configuration start labels particles in state order). When a
// class fires while tagged particles occupy its source state, one extra
// uniform draw decides whether a tagged particle was the one that moved.
std::pair<EmpiricalTrajectory, std::vector<TaggedPath>> simulate_tagged(
    const MeanFieldModel& model, std::int64_t N, const SimplexPoint& init, double T,
    std::uint64_t seed, const std::vector<std::int64_t>& tagged,
    const SimOptions& options = {});
std::pair<EmpiricalTrajectory, std::vector<TaggedPath>> simulate_tagged(
    const MeanFieldModel& model, const ParticleConfiguration& init, double T,
    std::uint64_t seed, const std::vector<std::int64_t>& tagged,
    const SimOptions& options = {});

// One particle driven by a frozen population flow, simulated by thinning
// against a per-state bound taken over the flow's grid (with 10% headroom).
// A rate above the bound at a proposed jump time is a hard error.
TaggedPath simulate_inhomogeneous_tagged(const MeanFieldModel& model, const Flow& flow,
                                         double T, std::uint64_t seed, int initial_state);
TaggedPath simulate_inhomogeneous_tagged(const MeanFieldModel& model, const Flow& flow,
                                         double T, RngStream& stream, int initial_state);

}  // namespace meanfield
