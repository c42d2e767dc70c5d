#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "meanfield/model.hpp"
#include "meanfield/simplex.hpp"

namespace meanfield {

// A deterministic measure-valued path sampled at increasing times. Read-back
// between nodes is piecewise-linear, or cubic Hermite when the producer
// attached node slopes (the integrators do; raw data stays linear so that a
// constant flow reads back exactly constant). Times start at 0.
class Flow {
 public:
  Flow(std::vector<double> times, std::vector<SimplexPoint> points);
  Flow(std::vector<double> times, std::vector<SimplexPoint> points,
       std::vector<Vector> slopes);

  double duration() const { return times_.back(); }
  int size() const { return static_cast<int>(times_.size()); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<SimplexPoint>& points() const { return points_; }

  SimplexPoint at(double t) const;
  Vector at_raw(double t) const;
  // Same lookup with a caller-held position hint; monotone sweeps stay O(1).
  Vector at_raw(double t, std::size_t& hint) const;

 private:
  std::vector<double> times_;
  std::vector<SimplexPoint> points_;
  std::vector<Vector> slopes_;  // empty means piecewise-linear read-back
};

struct StepControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double max_step = 0.0;      // 0 means unbounded
  double initial_step = 0.0;  // 0 means choose automatically
};

// Integrates the macroscopic dynamics from init over [0, T] with an embedded
// Fehlberg 4(5) pair; output nodes are the accepted steps.
Flow integrate(const MeanFieldModel& model, const SimplexPoint& init, double T,
               const StepControl& control = {});

// Law of one particle riding a frozen population flow: solves the linear
// non-autonomous forward equation for the marginal, reporting it on the same
// grid as field_flow.
Flow dynamic_response(const MeanFieldModel& model, const Flow& field_flow,
                      const SimplexPoint& initial_law, const StepControl& control = {});

struct CycleDescriptor {
  double period = 0.0;
  double transient_end = 0.0;
  Flow loop;
};

struct CycleOptions {
  double transient_fraction = 0.5;
  double point_tol = 1e-7;
  double cycle_tol = 1e-5;
  StepControl step;
};

struct CycleReport {
  enum class Outcome { converged_to_point, limit_cycle, inconclusive };
  Outcome outcome = Outcome::inconclusive;
  std::optional<SimplexPoint> point;
  std::optional<CycleDescriptor> cycle;
};

// Long-run classification of the tail of a trajectory: settled to a point,
// settled into a verified closed loop, or neither.
CycleReport classify_tail(const Flow& flow, const CycleOptions& options = {});

CycleReport detect_limit_cycle(const MeanFieldModel& model, const SimplexPoint& init,
                               double T_max, const CycleOptions& options = {});

}  // namespace meanfield
