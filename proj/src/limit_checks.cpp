#include "meanfield/limit_checks.hpp"

#include <algorithm>
#include <cmath>

#include "meanfield/errors.hpp"
#include "meanfield/parallel.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

namespace {

void validate_options(const LimitTestOptions& o) {
  if (o.grid_points < 2) throw ValidationError("grid_points must be at least 2");
  if (o.bootstrap < 10) throw ValidationError("bootstrap must be at least 10");
  if (o.workers < 1) throw ValidationError("workers must be at least 1");
}

void validate_n_list(const std::vector<std::int64_t>& N_list) {
  if (N_list.empty()) throw ValidationError("N_list must be non-empty");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 2) throw ValidationError("every N must be at least 2");
    if (i > 0 && N_list[i] <= N_list[i - 1]) {
      throw ValidationError("N_list must be strictly increasing");
    }
  }
}

std::vector<double> uniform_grid(double T, int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = T * i / (points - 1);
  return grid;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double population_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / v.size());
}

// Bootstrap standard error of the median of v.
double bootstrap_median_stderr(const std::vector<double>& v, int B, RngStream& stream) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  std::vector<double> medians(B);
  std::vector<double> resample(v.size());
  for (int b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < v.size(); ++i) resample[i] = v[stream.uniform_int(n)];
    medians[b] = median(resample);
  }
  return population_std(medians);
}

// Joint law over state pairs from a list of (s0, s1) observations.
Vector joint_from_pairs(const std::vector<std::pair<int, int>>& pairs, int n) {
  Vector joint = Vector::Zero(n * n);
  for (const auto& [a, b] : pairs) joint(a * n + b) += 1.0;
  return joint / static_cast<double>(pairs.size());
}

Vector product_law(const Vector& mu) {
  const int n = static_cast<int>(mu.size());
  Vector prod(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) prod(a * n + b) = mu(a) * mu(b);
  }
  return prod;
}

}  // namespace

ConvergenceTable lln_test(const MeanFieldModel& model, const SimplexPoint& init, double T,
                          const std::vector<std::int64_t>& N_list, int replicas,
                          std::uint64_t seed, const LimitTestOptions& options) {
  validate_options(options);
  validate_n_list(N_list);
  if (replicas < 30) throw ValidationError("lln_test needs at least 30 replicas");
  if (!(T > 0.0)) throw ValidationError("horizon T must be positive");

  const Flow flow = integrate(model, init, T, options.step);
  const auto grid = uniform_grid(T, options.grid_points);
  std::vector<Vector> flow_on_grid;
  flow_on_grid.reserve(grid.size());
  for (double t : grid) flow_on_grid.push_back(flow.at_raw(t));

  ConvergenceTable table;
  table.statistic_name = "median sup-grid TV(empirical, flow)";
  table.index_name = "N";
  table.horizon = T;
  table.replicas = replicas;

  for (std::size_t iN = 0; iN < N_list.size(); ++iN) {
    const std::int64_t N = N_list[iN];
    std::vector<double> stats(replicas);
    parallel_for(replicas, options.workers, [&](int r) {
      const auto traj = simulate(model, N, init, T,
                                 RngStream::derive(seed, iN, static_cast<std::uint64_t>(r)),
                                 options.sim);
      double sup = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        sup = std::max(sup, tv_distance(traj.at(grid[g]).weights(), flow_on_grid[g]));
      }
      stats[r] = sup;
    });
    RngStream boot(RngStream::derive(seed, 0xB007, iN));
    table.index.push_back(static_cast<double>(N));
    table.statistic.push_back(median(stats));
    table.std_error.push_back(bootstrap_median_stderr(stats, options.bootstrap, boot));
  }
  return table;
}

ConvergenceTable decoupling_test(const MeanFieldModel& model, const SimplexPoint& init,
                                 double T, const std::vector<std::int64_t>& N_list,
                                 int replicas, std::uint64_t seed,
                                 const LimitTestOptions& options) {
  validate_options(options);
  validate_n_list(N_list);
  if (replicas < 500) throw ValidationError("decoupling_test needs at least 500 replicas");
  if (T < 0.0) throw ValidationError("horizon T must be nonnegative");

  // At T=0 the deterministic marginal is the initial law itself.
  const Vector mu_T =
      T > 0.0 ? integrate(model, init, T, options.step).at_raw(T) : init.weights();
  const Vector product = product_law(mu_T);
  const int n = model.num_states();

  ConvergenceTable table;
  table.statistic_name = "TV(joint law of two tagged at T, product of flow marginals)";
  table.index_name = "N";
  table.horizon = T;
  table.replicas = replicas;

  const std::vector<std::int64_t> tagged{0, 1};
  for (std::size_t iN = 0; iN < N_list.size(); ++iN) {
    const std::int64_t N = N_list[iN];
    std::vector<std::pair<int, int>> pairs(replicas);
    parallel_for(replicas, options.workers, [&](int r) {
      const auto [traj, paths] =
          simulate_tagged(model, N, init, T,
                          RngStream::derive(seed, iN, static_cast<std::uint64_t>(r)), tagged,
                          options.sim);
      pairs[r] = {paths[0].state_at(T), paths[1].state_at(T)};
    });

    const double stat = tv_distance(joint_from_pairs(pairs, n), product);

    RngStream boot(RngStream::derive(seed, 0xB007, iN));
    std::vector<double> boot_stats(options.bootstrap);
    std::vector<std::pair<int, int>> resample(pairs.size());
    for (int b = 0; b < options.bootstrap; ++b) {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        resample[i] = pairs[boot.uniform_int(replicas)];
      }
      boot_stats[b] = tv_distance(joint_from_pairs(resample, n), product);
    }

    table.index.push_back(static_cast<double>(N));
    table.statistic.push_back(stat);
    table.std_error.push_back(population_std(boot_stats));
  }
  return table;
}

ConvergenceTable level4_marginal_test(const MeanFieldModel& model, const SimplexPoint& init,
                                      double T, int replicas, std::uint64_t seed,
                                      const LimitTestOptions& options) {
  validate_options(options);
  if (replicas < 500) throw ValidationError("level4_marginal_test needs at least 500 replicas");
  if (!(T > 0.0)) throw ValidationError("horizon T must be positive");

  const Flow flow = integrate(model, init, T, options.step);
  const auto grid = uniform_grid(T, options.grid_points);
  const int n = model.num_states();

  // One stream per replica covers both the initial draw and the whole path.
  std::vector<std::vector<int>> states(replicas);
  parallel_for(replicas, options.workers, [&](int r) {
    RngStream stream(RngStream::derive(seed, 0x4444, static_cast<std::uint64_t>(r)));
    const int z0 = stream.sample(init);
    const TaggedPath path = simulate_inhomogeneous_tagged(model, flow, T, stream, z0);
    states[r].resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      states[r][g] = path.state_at(grid[g]);
    }
  });

  ConvergenceTable table;
  table.statistic_name = "TV(empirical tagged marginal, flow)";
  table.index_name = "time";
  table.horizon = T;
  table.replicas = replicas;

  RngStream boot(RngStream::derive(seed, 0xB007, 0));
  std::vector<double> boot_stats(options.bootstrap);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Vector target = flow.at_raw(grid[g]);
    Vector empirical = Vector::Zero(n);
    for (int r = 0; r < replicas; ++r) empirical(states[r][g]) += 1.0;
    empirical /= replicas;

    for (int b = 0; b < options.bootstrap; ++b) {
      Vector resampled = Vector::Zero(n);
      for (int r = 0; r < replicas; ++r) {
        resampled(states[boot.uniform_int(replicas)][g]) += 1.0;
      }
      boot_stats[b] = tv_distance(resampled / replicas, target);
    }

    table.index.push_back(grid[g]);
    table.statistic.push_back(tv_distance(empirical, target));
    table.std_error.push_back(population_std(boot_stats));
  }
  return table;
}

}  // namespace meanfield
