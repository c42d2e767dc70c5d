#include "meanfield/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "meanfield/errors.hpp"

namespace meanfield {

Flow::Flow(std::vector<double> times, std::vector<SimplexPoint> points)
    : times_(std::move(times)), points_(std::move(points)) {
  if (times_.empty() || times_.size() != points_.size()) {
    throw ValidationError("flow needs matching, non-empty time and point lists");
  }
  if (times_.front() != 0.0) throw ValidationError("flow must start at time 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw ValidationError("flow times must be strictly increasing");
    }
    if (points_[i].size() != points_[0].size()) {
      throw ValidationError("flow points must share one state space");
    }
  }
}

Flow::Flow(std::vector<double> times, std::vector<SimplexPoint> points,
           std::vector<Vector> slopes)
    : Flow(std::move(times), std::move(points)) {
  slopes_ = std::move(slopes);
  if (slopes_.size() != times_.size()) {
    throw ValidationError("flow slopes must match the node count");
  }
  for (const auto& s : slopes_) {
    if (s.size() != points_[0].size()) {
      throw ValidationError("flow slopes must share the points' state space");
    }
  }
}

Vector Flow::at_raw(double t, std::size_t& hint) const {
  if (t < 0.0 || t > duration() * (1.0 + 1e-12) + 1e-12) {
    throw ValidationError("flow evaluated outside [0, " + std::to_string(duration()) +
                          "]: t=" + std::to_string(t));
  }
  t = std::min(t, duration());
  if (hint >= times_.size()) hint = 0;
  while (hint + 1 < times_.size() && times_[hint + 1] < t) ++hint;
  while (hint > 0 && times_[hint] > t) --hint;
  if (hint + 1 == times_.size()) return points_.back().weights();
  const double t0 = times_[hint], t1 = times_[hint + 1];
  const double a = (t - t0) / (t1 - t0);
  if (slopes_.empty()) {
    return (1.0 - a) * points_[hint].weights() + a * points_[hint + 1].weights();
  }
  // Cubic Hermite through the nodes. Node slopes sum to zero, so the result
  // still sums to one; clamp the O(h^4) boundary undershoot.
  const double h = t1 - t0;
  const double a2 = a * a, a3 = a2 * a;
  Vector y = (2.0 * a3 - 3.0 * a2 + 1.0) * points_[hint].weights() +
             ((a3 - 2.0 * a2 + a) * h) * slopes_[hint] +
             (-2.0 * a3 + 3.0 * a2) * points_[hint + 1].weights() +
             ((a3 - a2) * h) * slopes_[hint + 1];
  return y.cwiseMax(0.0);
}

Vector Flow::at_raw(double t) const {
  // Bisect, then interpolate through the hinted path.
  std::size_t lo = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
  std::size_t hint = lo == 0 ? 0 : lo - 1;
  return at_raw(t, hint);
}

SimplexPoint Flow::at(double t) const { return SimplexPoint(at_raw(t)); }

namespace {

constexpr double kSimplexEscape = -1e-12;

using Field = std::function<Vector(double, const Vector&)>;

void project_onto_simplex(Vector& y, double t) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) < kSimplexEscape) {
      std::ostringstream os;
      os << "integration left the simplex at t=" << t << ": component " << i << " = " << y(i);
      throw NumericsError(os.str());
    }
    if (y(i) < 0.0) y(i) = 0.0;
    sum += y(i);
  }
  y /= sum;
}

void validate_control(const StepControl& c) {
  if (!(c.abs_tol > 0.0) || !std::isfinite(c.abs_tol)) {
    throw ValidationError("abs_tol must be positive");
  }
  if (c.rel_tol < 0.0 || !std::isfinite(c.rel_tol)) {
    throw ValidationError("rel_tol must be nonnegative");
  }
  if (c.max_step < 0.0 || c.initial_step < 0.0) {
    throw ValidationError("step bounds must be nonnegative");
  }
}

}  // namespace

namespace detail {

// Advances y from t0 to t1, reusing the caller's step size across calls so a
// flow split into many short node intervals keeps its adaptive history.
// record, when set, is called after every accepted step.
void advance_rkf45(const Field& f, double t0, double t1, Vector& y,
                   const StepControl& control, double& h,
                   const std::function<void(double, const Vector&)>& record) {
  const double span = t1 - t0;
  if (!(span > 0.0)) throw ValidationError("integration interval must have positive length");
  double t = t0;
  const double hmax = control.max_step > 0.0 ? control.max_step : span;
  if (h <= 0.0) {
    if (control.initial_step > 0.0) {
      h = control.initial_step;
    } else {
      const double speed = f(t0, y).lpNorm<Eigen::Infinity>();
      h = std::min(span, 0.01 / (speed + 0.01));
    }
  }
  h = std::min(h, hmax);

  Vector y4(y.size());
  while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
    const double h_try = std::min(h, t1 - t);
    if (h_try < 1e-14 * std::max(1.0, std::abs(t))) {
      throw NumericsError("step size underflow at t=" + std::to_string(t));
    }

    const Vector k1 = f(t, y);
    const Vector k2 = f(t + h_try * 0.25, y + (h_try * 0.25) * k1);
    const Vector k3 =
        f(t + h_try * 0.375, y + h_try * ((3.0 / 32) * k1 + (9.0 / 32) * k2));
    const Vector k4 = f(t + h_try * (12.0 / 13),
                        y + h_try * ((1932.0 / 2197) * k1 - (7200.0 / 2197) * k2 +
                                     (7296.0 / 2197) * k3));
    const Vector k5 =
        f(t + h_try, y + h_try * ((439.0 / 216) * k1 - 8.0 * k2 + (3680.0 / 513) * k3 -
                                  (845.0 / 4104) * k4));
    const Vector k6 =
        f(t + h_try * 0.5, y + h_try * ((-8.0 / 27) * k1 + 2.0 * k2 -
                                        (3544.0 / 2565) * k3 + (1859.0 / 4104) * k4 -
                                        (11.0 / 40) * k5));
    y4 = y + h_try * ((25.0 / 216) * k1 + (1408.0 / 2565) * k3 + (2197.0 / 4104) * k4 -
                      (1.0 / 5) * k5);
    const Vector y5 = y + h_try * ((16.0 / 135) * k1 + (6656.0 / 12825) * k3 +
                                   (28561.0 / 56430) * k4 - (9.0 / 50) * k5 +
                                   (2.0 / 55) * k6);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double scale =
          control.abs_tol + control.rel_tol * std::max(std::abs(y(i)), std::abs(y4(i)));
      err_norm = std::max(err_norm, std::abs(y5(i) - y4(i)) / scale);
    }

    if (err_norm <= 1.0) {
      t += h_try;
      y = y4;
      project_onto_simplex(y, t);
      if (record) record(t, y);
    }
    const double factor =
        err_norm > 0.0 ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0) : 5.0;
    h = std::min(h_try * factor, hmax);
  }
}

}  // namespace detail

Flow integrate(const MeanFieldModel& model, const SimplexPoint& init, double T,
               const StepControl& control) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("horizon T must be positive");
  validate_control(control);
  if (init.size() != model.num_states()) {
    throw ValidationError("initial condition does not match the model's state count");
  }

  Field f = [&model](double, const Vector& y) { return drift_raw(model, y); };

  std::vector<double> times{0.0};
  std::vector<SimplexPoint> points{init};
  Vector y = init.weights();
  double h = 0.0;
  detail::advance_rkf45(f, 0.0, T, y, control, h, [&](double t, const Vector& v) {
    times.push_back(t);
    points.push_back(SimplexPoint(v));
  });

  // Consistency audit: the chord slope of every accepted step has to agree
  // with the field at the midpoint up to the step's own truncation scale.
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double hk = times[k + 1] - times[k];
    const Vector& a = points[k].weights();
    const Vector& b = points[k + 1].weights();
    const Vector slope = (b - a) / hk;
    const Vector fmid = f(times[k] + hk / 2, 0.5 * (a + b));
    const double curvature = (f(times[k + 1], b) - f(times[k], a)).lpNorm<Eigen::Infinity>() / hk;
    const double allowed =
        10.0 * (control.abs_tol + control.rel_tol + hk * hk * curvature);
    const double gap = (slope - fmid).lpNorm<Eigen::Infinity>();
    if (gap > allowed) {
      std::ostringstream os;
      os << "integrator self-check failed on [" << times[k] << ", " << times[k + 1]
         << "]: defect " << gap << " exceeds " << allowed;
      throw NumericsError(os.str());
    }
  }

  std::vector<Vector> slopes;
  slopes.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    slopes.push_back(f(times[k], points[k].weights()));
  }
  return Flow(std::move(times), std::move(points), std::move(slopes));
}

Flow dynamic_response(const MeanFieldModel& model, const Flow& field_flow,
                      const SimplexPoint& initial_law, const StepControl& control) {
  validate_control(control);
  const int n = model.num_states();
  if (initial_law.size() != n || field_flow.points()[0].size() != n) {
    throw ValidationError("flow or initial law does not match the model's state count");
  }

  const auto& graph = model.graph();
  std::size_t hint = 0;
  Field f = [&](double t, const Vector& m) {
    const Vector xi = field_flow.at_raw(t, hint).cwiseMax(0.0);
    Vector dm = Vector::Zero(n);
    const Vector mc = m.cwiseMax(0.0);
    for (int e = 0; e < graph.num_edges(); ++e) {
      const auto& [a, b] = graph.edge(e);
      const double flux = mc(a) * model.rate_raw(e, xi);
      dm(a) -= flux;
      dm(b) += flux;
    }
    return dm;
  };

  const auto& grid = field_flow.times();
  std::vector<double> times{0.0};
  std::vector<SimplexPoint> points{initial_law};
  Vector m = initial_law.weights();
  double h = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    detail::advance_rkf45(f, grid[k], grid[k + 1], m, control, h, nullptr);
    times.push_back(grid[k + 1]);
    points.push_back(SimplexPoint(m));
  }
  std::vector<Vector> slopes;
  slopes.reserve(times.size());
  hint = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    slopes.push_back(f(times[k], points[k].weights()));
  }
  return Flow(std::move(times), std::move(points), std::move(slopes));
}

namespace {

void validate_cycle_options(const CycleOptions& o) {
  if (!(o.transient_fraction > 0.0) || !(o.transient_fraction < 1.0)) {
    throw ValidationError("transient_fraction must lie in (0, 1)");
  }
  if (!(o.point_tol > 0.0) || !(o.cycle_tol > 0.0)) {
    throw ValidationError("point_tol and cycle_tol must be positive");
  }
}

// Distances that must clear cycle_tol by a real margin before a return to the
// reference point counts as recurrence rather than as never having left.
constexpr double kExitFactor = 10.0;

}  // namespace

CycleReport classify_tail(const Flow& flow, const CycleOptions& options) {
  validate_cycle_options(options);
  const double T = flow.duration();
  const double tail_start = options.transient_fraction * T;
  const auto& ts = flow.times();
  const auto& ps = flow.points();

  std::size_t first = 0;
  while (first < ts.size() && ts[first] < tail_start) ++first;
  if (first >= ts.size()) first = ts.size() - 1;
  const std::size_t last = ts.size() - 1;

  CycleReport report;

  // Settled to a point: the whole tail sits inside a point_tol ball around
  // the final state.
  double tail_spread = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    tail_spread = std::max(tail_spread, tv_distance(ps[i], ps[last]));
  }
  if (tail_spread <= options.point_tol) {
    report.outcome = CycleReport::Outcome::converged_to_point;
    report.point = ps[last];
    return report;
  }

  if (last - first < 20) return report;  // tail too coarse to say anything

  // Minimum believable period: ten node spacings, so a single step's worth of
  // wobble can never pass as recurrence.
  std::vector<double> gaps;
  gaps.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) gaps.push_back(ts[i + 1] - ts[i]);
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double min_period = 10.0 * gaps[gaps.size() / 2];

  // Walk backward from the end looking for a return to the final state that
  // follows a genuine excursion.
  int candidates_tried = 0;
  double max_since = 0.0;
  for (std::size_t i = last; i-- > first && candidates_tried < 3;) {
    const double d = tv_distance(ps[i], ps[last]);
    const double period = T - ts[i];
    if (d <= options.cycle_tol && period >= min_period &&
        max_since >= kExitFactor * options.cycle_tol) {
      ++candidates_tried;
      // Verify recurrence across the whole tail beyond one period; the tail
      // must hold at least three full periods for the comparison to mean much.
      bool ok = (T - ts[first]) >= 3.0 * period;
      std::size_t hint = 0;
      for (std::size_t j = first; ok && j <= last; ++j) {
        if (ts[j] - period < ts[first]) continue;
        const Vector earlier = flow.at_raw(ts[j] - period, hint);
        if (tv_distance(ps[j].weights(), earlier) > options.cycle_tol) ok = false;
      }
      if (ok) {
        const double loop_start = T - period;
        std::vector<double> loop_times{0.0};
        std::vector<SimplexPoint> loop_points{flow.at(loop_start)};
        for (std::size_t j = i + 1; j <= last; ++j) {
          if (ts[j] <= loop_start) continue;
          loop_times.push_back(ts[j] - loop_start);
          loop_points.push_back(ps[j]);
        }
        CycleDescriptor cycle{period, tail_start,
                              Flow(std::move(loop_times), std::move(loop_points))};
        report.outcome = CycleReport::Outcome::limit_cycle;
        report.cycle = std::move(cycle);
        return report;
      }
    }
    max_since = std::max(max_since, d);
  }
  return report;  // inconclusive
}

CycleReport detect_limit_cycle(const MeanFieldModel& model, const SimplexPoint& init,
                               double T_max, const CycleOptions& options) {
  if (!(T_max > 0.0) || !std::isfinite(T_max)) {
    throw ValidationError("T_max must be positive");
  }
  return classify_tail(integrate(model, init, T_max, options.step), options);
}

}  // namespace meanfield
