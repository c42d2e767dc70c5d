#include "meanfield/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "meanfield/errors.hpp"

namespace meanfield {

ParticleConfiguration::ParticleConfiguration(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)), total_(0) {
  if (counts_.empty()) throw ValidationError("particle configuration needs at least one state");
  for (auto c : counts_) {
    if (c < 0) throw ValidationError("particle counts must be nonnegative");
    total_ += c;
  }
  if (total_ < 1) throw ValidationError("particle configuration needs at least one particle");
}

SimplexPoint ParticleConfiguration::measure() const {
  Vector w(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    w(static_cast<Eigen::Index>(i)) = static_cast<double>(counts_[i]) / total_;
  }
  return SimplexPoint(std::move(w));
}

namespace {

std::size_t locate(const std::vector<double>& times, double t, double final_time,
                   const char* what) {
  if (t < 0.0 || t > final_time * (1.0 + 1e-12) + 1e-12) {
    throw ValidationError(std::string(what) + " evaluated outside [0, " +
                          std::to_string(final_time) + "]: t=" + std::to_string(t));
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

}  // namespace

SimplexPoint EmpiricalTrajectory::at(double t) const {
  return measures[locate(times, t, final_time, "trajectory")];
}

int TaggedPath::state_at(double t) const {
  return states[locate(times, t, times.back() > t ? times.back() : t, "tagged path")];
}

namespace {

// Records the measure per jump until the budget runs out, then converts the
// history to a fixed uniform grid and keeps going there. Grid values are
// right-continuous: grid time g holds the measure after every jump <= g.
class TrajectoryRecorder {
 public:
  TrajectoryRecorder(double T, std::int64_t max_jumps, int grid_points)
      : T_(T), max_entries_(max_jumps + 1), grid_points_(grid_points) {}

  void initial(const Vector& mu) {
    times_.push_back(0.0);
    measures_.push_back(SimplexPoint(mu));
    prev_ = mu;
  }

  void record(double t, const Vector& mu) {
    if (!grid_mode_) {
      if (static_cast<std::int64_t>(times_.size()) < max_entries_) {
        times_.push_back(t);
        measures_.push_back(SimplexPoint(mu));
        prev_ = mu;
        return;
      }
      convert_to_grid();
    }
    while (cursor_ < grid_.size() && grid_[cursor_] < t) {
      times_.push_back(grid_[cursor_]);
      measures_.push_back(SimplexPoint(prev_));
      ++cursor_;
    }
    prev_ = mu;
  }

  EmpiricalTrajectory finish(std::int64_t num_particles, std::int64_t num_jumps) {
    if (grid_mode_) {
      while (cursor_ < grid_.size()) {
        times_.push_back(grid_[cursor_]);
        measures_.push_back(SimplexPoint(prev_));
        ++cursor_;
      }
    }
    EmpiricalTrajectory out;
    out.times = std::move(times_);
    out.measures = std::move(measures_);
    out.final_time = T_;
    out.num_particles = num_particles;
    out.num_jumps = num_jumps;
    out.grid_sampled = grid_mode_;
    return out;
  }

 private:
  void convert_to_grid() {
    grid_.resize(grid_points_);
    for (int j = 0; j < grid_points_; ++j) {
      grid_[j] = T_ * j / (grid_points_ - 1);
    }
    const double t_last = times_.back();
    std::vector<double> new_times;
    std::vector<SimplexPoint> new_measures;
    cursor_ = 0;
    while (cursor_ < grid_.size() && grid_[cursor_] <= t_last) {
      auto it = std::upper_bound(times_.begin(), times_.end(), grid_[cursor_]);
      const std::size_t idx = static_cast<std::size_t>(it - times_.begin()) - 1;
      new_times.push_back(grid_[cursor_]);
      new_measures.push_back(measures_[idx]);
      ++cursor_;
    }
    times_ = std::move(new_times);
    measures_ = std::move(new_measures);
    grid_mode_ = true;
  }

  double T_;
  std::int64_t max_entries_;
  int grid_points_;
  std::vector<double> times_;
  std::vector<SimplexPoint> measures_;
  Vector prev_;
  std::vector<double> grid_;
  std::size_t cursor_ = 0;
  bool grid_mode_ = false;
};

struct TaggedState {
  std::int64_t particle;
  int state;
};

void validate_common(const MeanFieldModel& model, double T, const SimOptions& options) {
  if (T < 0.0 || !std::isfinite(T)) throw ValidationError("horizon T must be nonnegative");
  if (options.max_jump_records < 1) {
    throw ValidationError("max_jump_records must be at least 1");
  }
  if (options.fallback_grid_points < 2) {
    throw ValidationError("fallback_grid_points must be at least 2");
  }
  (void)model;
}

std::vector<TaggedState> validate_tagged(const std::vector<std::int64_t>& tagged,
                                         std::int64_t N) {
  std::set<std::int64_t> seen;
  std::vector<TaggedState> result;
  for (auto p : tagged) {
    if (p < 0 || p >= N) {
      throw ValidationError("tagged particle index " + std::to_string(p) + " out of range");
    }
    if (!seen.insert(p).second) {
      throw ValidationError("tagged particle indices must be distinct");
    }
    result.push_back({p, -1});
  }
  return result;
}

// The one event loop behind every simulate overload. Draw order per jump is
// fixed: holding time, class selection, then one tie-break uniform consumed
// only when a tagged particle occupies the moving class's source state.
std::pair<EmpiricalTrajectory, std::vector<TaggedPath>> run_system(
    const MeanFieldModel& model, std::vector<std::int64_t> counts, double T,
    RngStream& stream, std::vector<TaggedState> tagged, const SimOptions& options) {
  const int n = model.num_states();
  const auto& graph = model.graph();
  const int E = graph.num_edges();
  std::int64_t N = 0;
  for (auto c : counts) N += c;

  Vector mu(n);
  for (int z = 0; z < n; ++z) mu(z) = static_cast<double>(counts[z]) / N;

  TrajectoryRecorder recorder(T, options.max_jump_records, options.fallback_grid_points);
  recorder.initial(mu);

  std::vector<TaggedPath> paths(tagged.size());
  for (std::size_t j = 0; j < tagged.size(); ++j) {
    paths[j].particle = tagged[j].particle;
    paths[j].times.push_back(0.0);
    paths[j].states.push_back(tagged[j].state);
  }

  std::vector<double> weights(E);
  std::int64_t num_jumps = 0;
  double t = 0.0;
  while (true) {
    double total = 0.0;
    for (int e = 0; e < E; ++e) {
      const auto& [a, b] = graph.edge(e);
      weights[e] = counts[a] == 0 ? 0.0 : counts[a] * model.rate_raw(e, mu);
      total += weights[e];
    }
    if (total <= 0.0) break;  // absorbed: nothing can move anymore

    const double dt = stream.exponential(total);
    if (t + dt > T) break;
    t += dt;

    const double u = stream.uniform() * total;
    double acc = 0.0;
    int chosen = -1;
    for (int e = 0; e < E; ++e) {
      if (weights[e] <= 0.0) continue;
      chosen = e;
      acc += weights[e];
      if (u < acc) break;
    }
    const auto& [a, b] = graph.edge(chosen);

    int occupants = 0;
    for (const auto& ts : tagged) occupants += ts.state == a ? 1 : 0;
    if (occupants > 0) {
      const std::int64_t slot = stream.uniform_int(counts[a]);
      if (slot < occupants) {
        int seen = 0;
        for (std::size_t j = 0; j < tagged.size(); ++j) {
          if (tagged[j].state != a) continue;
          if (seen == slot) {
            tagged[j].state = b;
            paths[j].times.push_back(t);
            paths[j].states.push_back(b);
            break;
          }
          ++seen;
        }
      }
    }

    --counts[a];
    ++counts[b];
    mu(a) = static_cast<double>(counts[a]) / N;
    mu(b) = static_cast<double>(counts[b]) / N;
    ++num_jumps;
    recorder.record(t, mu);
  }

  return {recorder.finish(N, num_jumps), std::move(paths)};
}

std::pair<EmpiricalTrajectory, std::vector<TaggedPath>> run_from_law(
    const MeanFieldModel& model, std::int64_t N, const SimplexPoint& init, double T,
    std::uint64_t seed, const std::vector<std::int64_t>& tagged, const SimOptions& options) {
  validate_common(model, T, options);
  if (N < 1) throw ValidationError("particle count N must be at least 1");
  if (init.size() != model.num_states()) {
    throw ValidationError("initial law does not match the model's state count");
  }
  auto tags = validate_tagged(tagged, N);

  RngStream stream(seed);
  std::vector<std::int64_t> counts(model.num_states(), 0);
  for (std::int64_t p = 0; p < N; ++p) {
    const int z = stream.sample(init);
    ++counts[z];
    for (auto& ts : tags) {
      if (ts.particle == p) ts.state = z;
    }
  }
  return run_system(model, std::move(counts), T, stream, std::move(tags), options);
}

std::pair<EmpiricalTrajectory, std::vector<TaggedPath>> run_from_counts(
    const MeanFieldModel& model, const ParticleConfiguration& init, double T,
    std::uint64_t seed, const std::vector<std::int64_t>& tagged, const SimOptions& options) {
  validate_common(model, T, options);
  if (init.num_states() != model.num_states()) {
    throw ValidationError("initial configuration does not match the model's state count");
  }
  auto tags = validate_tagged(tagged, init.num_particles());

  // Particles are labeled in state order: the first counts[0] sit in state 0,
  // the next counts[1] in state 1, and so on.
  for (auto& ts : tags) {
    std::int64_t offset = ts.particle;
    for (int z = 0; z < init.num_states(); ++z) {
      if (offset < init.counts()[z]) {
        ts.state = z;
        break;
      }
      offset -= init.counts()[z];
    }
  }
  RngStream stream(seed);
  return run_system(model, init.counts(), T, stream, std::move(tags), options);
}

}  // namespace

EmpiricalTrajectory simulate(const MeanFieldModel& model, std::int64_t N,
                             const SimplexPoint& init, double T, std::uint64_t seed,
                             const SimOptions& options) {
  return run_from_law(model, N, init, T, seed, {}, options).first;
}

EmpiricalTrajectory simulate(const MeanFieldModel& model, const ParticleConfiguration& init,
                             double T, std::uint64_t seed, const SimOptions& options) {
  return run_from_counts(model, init, T, seed, {}, options).first;
}

std::pair<EmpiricalTrajectory, std::vector<TaggedPath>> simulate_tagged(
    const MeanFieldModel& model, std::int64_t N, const SimplexPoint& init, double T,
    std::uint64_t seed, const std::vector<std::int64_t>& tagged, const SimOptions& options) {
  if (tagged.empty()) throw ValidationError("simulate_tagged needs at least one tagged index");
  return run_from_law(model, N, init, T, seed, tagged, options);
}

std::pair<EmpiricalTrajectory, std::vector<TaggedPath>> simulate_tagged(
    const MeanFieldModel& model, const ParticleConfiguration& init, double T,
    std::uint64_t seed, const std::vector<std::int64_t>& tagged, const SimOptions& options) {
  if (tagged.empty()) throw ValidationError("simulate_tagged needs at least one tagged index");
  return run_from_counts(model, init, T, seed, tagged, options);
}

TaggedPath simulate_inhomogeneous_tagged(const MeanFieldModel& model, const Flow& flow, double T,
                                  RngStream& stream, int initial_state) {
  const int n = model.num_states();
  if (T < 0.0 || !std::isfinite(T)) throw ValidationError("horizon T must be nonnegative");
  if (initial_state < 0 || initial_state >= n) {
    throw ValidationError("initial state out of range");
  }
  if (flow.points()[0].size() != n) {
    throw ValidationError("flow does not match the model's state count");
  }
  if (flow.duration() < T) {
    throw ValidationError("flow horizon " + std::to_string(flow.duration()) +
                          " is shorter than the simulation horizon " + std::to_string(T));
  }

  const auto& graph = model.graph();
  std::vector<std::vector<int>> out_edges(n);
  for (int e = 0; e < graph.num_edges(); ++e) out_edges[graph.edge(e).first].push_back(e);

  // Per-state dominating rate: the largest total exit rate seen across the
  // flow's grid (plus the value at T), with 10% headroom. Piecewise-linear
  // flows keep the true rate close to its node values; a proposal whose exact
  // rate still lands above the bound is a hard error, never a silent clamp.
  std::vector<double> bound(n, 0.0);
  auto scan = [&](const Vector& xi_raw) {
    const Vector xi = xi_raw.cwiseMax(0.0);
    for (int z = 0; z < n; ++z) {
      double total = 0.0;
      for (int e : out_edges[z]) total += model.rate_raw(e, xi);
      bound[z] = std::max(bound[z], total);
    }
  };
  for (int i = 0; i < flow.size(); ++i) {
    if (flow.times()[i] > T) break;
    scan(flow.points()[i].weights());
  }
  scan(flow.at_raw(T));
  for (int z = 0; z < n; ++z) bound[z] *= 1.1;

  TaggedPath path;
  path.particle = 0;
  path.times.push_back(0.0);
  path.states.push_back(initial_state);

  int z = initial_state;
  double t = 0.0;
  std::vector<double> rates;
  while (true) {
    const double B = bound[z];
    if (B <= 0.0) break;  // no exit anywhere along the flow
    t += stream.exponential(B);
    if (t > T) break;

    const Vector xi = flow.at_raw(t).cwiseMax(0.0);
    const std::vector<int>& outs = out_edges[z];
    rates.assign(outs.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      rates[i] = model.rate_raw(outs[i], xi);
      total += rates[i];
    }
    if (total > B * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "thinning bound violated at t=" << t << ": rate " << total << " exceeds bound "
         << B;
      throw NumericsError(os.str());
    }

    // One draw both accepts the proposal and picks the destination.
    const double u = stream.uniform() * B;
    if (u >= total) continue;  // thinned
    double acc = 0.0;
    int chosen = outs.back();
    for (std::size_t i = 0; i < outs.size(); ++i) {
      acc += rates[i];
      if (u < acc) {
        chosen = outs[i];
        break;
      }
    }
    z = graph.edge(chosen).second;
    path.times.push_back(t);
    path.states.push_back(z);
  }
  return path;
}

TaggedPath simulate_inhomogeneous_tagged(const MeanFieldModel& model, const Flow& flow, double T,
                                  std::uint64_t seed, int initial_state) {
  RngStream stream(seed);
  return simulate_inhomogeneous_tagged(model, flow, T, stream, initial_state);
}

}  // namespace meanfield
