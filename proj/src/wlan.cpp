#include "meanfield/wlan.hpp"

#include <cmath>
#include <sstream>

#include "meanfield/errors.hpp"
#include "meanfield/model.hpp"

namespace meanfield {

BackoffParameters::BackoffParameters(std::vector<double> attempt_rates)
    : c_(std::move(attempt_rates)) {
  if (c_.size() < 2) throw ValidationError("backoff chain needs at least two stages");
  for (double v : c_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("attempt rates must be positive and finite");
    }
  }
}

bool BackoffParameters::strictly_decreasing() const {
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (!(c_[i] < c_[i - 1])) return false;
  }
  return true;
}

double attempt_rate(double gamma, const BackoffParameters& params) {
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw ValidationError("gamma must lie in [0, 1)");
  }
  const auto& c = params.c();
  const int K = params.K();
  // 1/beta = (1-gamma) * sum_k gamma^k / c_k + gamma^(K+1) / c_K, the mean
  // holding mass per attempt cycle; this grouping has no 1/(1-gamma) blowup.
  double powg = 1.0;
  double series = 0.0;
  for (int k = 0; k <= K; ++k) {
    series += powg / c[k];
    powg *= gamma;
  }
  const double inv_beta = (1.0 - gamma) * series + powg / c[K];
  return 1.0 / inv_beta;
}

double collision_response(double gamma, const BackoffParameters& params) {
  return 1.0 - std::exp(-attempt_rate(gamma, params));
}

Level1Report solve_gamma_star(const BackoffParameters& params, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("tol must be positive");
  Level1Report report;
  report.uniqueness_guaranteed = params.strictly_decreasing();

  // f(0) < 0 < f(1-) for f = gamma - G: G(0) > 0 and G < 1 always, so the
  // bracket below is guaranteed.
  auto f = [&params](double g) { return g - collision_response(g, params); };
  double lo = 1e-12;
  double hi = 1.0 - 1e-12;
  if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) {
    throw NumericsError("bisection bracket failed; the response is not where it must be");
  }
  int iterations = 0;
  while (hi - lo > tol && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
    ++iterations;
  }
  report.gamma_star = 0.5 * (lo + hi);
  report.beta_at_gamma_star = attempt_rate(report.gamma_star, params);
  report.iterations = iterations;
  report.final_bracket = hi - lo;

  int sign_changes = 0;
  double prev = f(1.0 / 10000);
  for (int i = 2; i < 10000; ++i) {
    const double cur = f(static_cast<double>(i) / 10000);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) ++sign_changes;
    prev = cur;
  }
  report.grid_sign_changes = sign_changes;
  return report;
}

CrossLevelReport cross_level_check(const BackoffParameters& params, double tol,
                                   const FixedPointOptions& options) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("tol must be positive");
  CrossLevelReport report;
  report.level1 = solve_gamma_star(params);

  const MeanFieldModel model = wlan_model(params.c());
  const auto fixed_points = find_fixed_points(model, options);
  if (fixed_points.size() != 1) {
    std::ostringstream os;
    os << "expected exactly one fixed point for the backoff chain, found "
       << fixed_points.size();
    if (params.strictly_decreasing()) {
      os << " despite strictly decreasing attempt rates; the two analysis levels are"
            " inconsistent";
    }
    throw NumericsError(os.str());
  }
  report.fixed_point = fixed_points[0].point;

  const auto& c = params.c();
  double mean_rate = 0.0;
  for (int z = 0; z < report.fixed_point.size(); ++z) {
    mean_rate += c[z] * report.fixed_point[z];
  }
  report.mean_attempt_rate = mean_rate;
  report.attempt_residual = std::abs(mean_rate - report.level1.beta_at_gamma_star);
  report.gamma_residual = std::abs(report.level1.gamma_star - (1.0 - std::exp(-mean_rate)));
  report.passed = report.attempt_residual <= tol && report.gamma_residual <= tol;
  return report;
}

}  // namespace meanfield
