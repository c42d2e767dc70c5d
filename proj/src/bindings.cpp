#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "meanfield/equilibria.hpp"
#include "meanfield/flow.hpp"
#include "meanfield/limit_checks.hpp"
#include "meanfield/model.hpp"
#include "meanfield/simulate.hpp"
#include "meanfield/version.hpp"
#include "meanfield/wlan.hpp"

namespace py = pybind11;
using namespace meanfield;

namespace {

SimplexPoint to_point(const Vector& v) { return SimplexPoint(v); }

Matrix flow_matrix(const Flow& flow) {
  const auto n = static_cast<Eigen::Index>(flow.size());
  const auto d = flow.points().empty() ? 0 : flow.points().front().size();
  Matrix out(n, d);
  for (Eigen::Index i = 0; i < n; ++i) out.row(i) = flow.points()[i].weights().transpose();
  return out;
}

Matrix trajectory_matrix(const EmpiricalTrajectory& trajectory) {
  const auto n = static_cast<Eigen::Index>(trajectory.times.size());
  const auto d = trajectory.measures.empty() ? 0 : trajectory.measures.front().size();
  Matrix out(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    out.row(i) = trajectory.measures[i].weights().transpose();
  return out;
}

py::dict table_dict(const ConvergenceTable& table) {
  py::dict d;
  d["statistic_name"] = table.statistic_name;
  d["index_name"] = table.index_name;
  d["index"] = table.index;
  d["statistic"] = table.statistic;
  d["std_error"] = table.std_error;
  d["horizon"] = table.horizon;
  d["replicas"] = table.replicas;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite-state mean-field particle systems: simulation, flows, equilibria";
  m.attr("__version__") = kVersion;

  py::class_<MeanFieldModel>(m, "Model")
      .def_property_readonly("num_states", &MeanFieldModel::num_states)
      .def_property_readonly("labels",
                             [](const MeanFieldModel& model) {
                               return model.states().labels();
                             })
      .def("drift", [](const MeanFieldModel& model, const Vector& xi) {
        return drift(model, to_point(xi));
      })
      .def("rate_matrix", [](const MeanFieldModel& model, const Vector& xi) {
        return build_rate_matrix(model, to_point(xi));
      });

  m.def("wlan_model", &wlan_model, py::arg("c"),
        "Backoff chain on stages 0..K with attempt rates c");
  m.def("sis_model", &sis_model, py::arg("tau"), py::arg("rho"),
        "Two-state epidemic: infection rate tau * xi(I), recovery rate rho");

  m.def(
      "integrate",
      [](const MeanFieldModel& model, const Vector& init, double T, double abs_tol,
         double rel_tol, double max_step) {
        StepControl control;
        control.abs_tol = abs_tol;
        control.rel_tol = rel_tol;
        control.max_step = max_step;
        const Flow flow = integrate(model, to_point(init), T, control);
        return py::make_tuple(flow.times(), flow_matrix(flow));
      },
      py::arg("model"), py::arg("init"), py::arg("T"), py::arg("abs_tol") = 1e-10,
      py::arg("rel_tol") = 1e-8, py::arg("max_step") = 0.0,
      "Macroscopic flow from init over [0, T]; returns (times, states) with one "
      "row per accepted step");

  m.def(
      "simulate",
      [](const MeanFieldModel& model, std::int64_t N, const Vector& init, double T,
         std::uint64_t seed, std::int64_t max_jumps, int grid_points) {
        SimOptions options;
        options.max_jump_records = max_jumps;
        options.fallback_grid_points = grid_points;
        const auto trajectory = simulate(model, N, to_point(init), T, seed, options);
        py::dict d;
        d["times"] = trajectory.times;
        d["measures"] = trajectory_matrix(trajectory);
        d["num_jumps"] = trajectory.num_jumps;
        d["grid_sampled"] = trajectory.grid_sampled;
        return d;
      },
      py::arg("model"), py::arg("N"), py::arg("init"), py::arg("T"), py::arg("seed"),
      py::arg("max_jumps") = std::int64_t{10'000'000}, py::arg("grid_points") = 1001,
      "Exact N-particle simulation; initial states drawn iid from init");

  m.def(
      "find_fixed_points",
      [](const MeanFieldModel& model, int n_starts, std::uint64_t seed, double tol,
         int workers) {
        FixedPointOptions options;
        options.n_starts = n_starts;
        options.seed = seed;
        options.tol = tol;
        options.workers = workers;
        const auto reports = find_fixed_points(model, options);
        py::list out;
        for (const auto& report : reports) {
          py::dict d;
          d["point"] = report.point.weights();
          d["residual"] = report.residual;
          d["stability"] = to_string(report.stability);
          d["spectrum"] = report.spectrum;
          out.append(d);
        }
        return out;
      },
      py::arg("model"), py::arg("n_starts") = 64, py::arg("seed") = 0,
      py::arg("tol") = 1e-11, py::arg("workers") = 1,
      "All mean-field fixed points found from deterministic plus random starts, "
      "each with residual, stability call, and Jacobian spectrum");

  m.def(
      "wlan_gamma",
      [](const std::vector<double>& c, double tol) {
        const Level1Report report = solve_gamma_star(BackoffParameters(c), tol);
        py::dict d;
        d["gamma_star"] = report.gamma_star;
        d["beta_at_gamma_star"] = report.beta_at_gamma_star;
        d["iterations"] = report.iterations;
        d["uniqueness_guaranteed"] = report.uniqueness_guaranteed;
        d["grid_sign_changes"] = report.grid_sign_changes;
        return d;
      },
      py::arg("c"), py::arg("tol") = 1e-10,
      "Collision-probability fixed point of the backoff macro analysis");

  m.def(
      "cross_check",
      [](const std::vector<double>& c, double tol, int n_starts, std::uint64_t seed) {
        FixedPointOptions options;
        options.n_starts = n_starts;
        options.seed = seed;
        const auto report = cross_level_check(BackoffParameters(c), tol, options);
        py::dict d;
        d["gamma_star"] = report.level1.gamma_star;
        d["fixed_point"] = report.fixed_point.weights();
        d["mean_attempt_rate"] = report.mean_attempt_rate;
        d["attempt_residual"] = report.attempt_residual;
        d["gamma_residual"] = report.gamma_residual;
        d["passed"] = report.passed;
        return d;
      },
      py::arg("c"), py::arg("tol") = 1e-6, py::arg("n_starts") = 64, py::arg("seed") = 0,
      "Consistency of the macro collision probability with the equilibrium "
      "distribution of the full chain");

  m.def(
      "detect_limit_cycle",
      [](const MeanFieldModel& model, const Vector& init, double T_max,
         double transient_fraction, double point_tol, double cycle_tol) {
        CycleOptions options;
        options.transient_fraction = transient_fraction;
        options.point_tol = point_tol;
        options.cycle_tol = cycle_tol;
        const CycleReport report = detect_limit_cycle(model, to_point(init), T_max, options);
        py::dict d;
        switch (report.outcome) {
          case CycleReport::Outcome::converged_to_point:
            d["outcome"] = "converged-to-point";
            d["point"] = report.point->weights();
            break;
          case CycleReport::Outcome::limit_cycle:
            d["outcome"] = "limit-cycle";
            d["period"] = report.cycle->period;
            d["loop_times"] = report.cycle->loop.times();
            d["loop_states"] = flow_matrix(report.cycle->loop);
            break;
          case CycleReport::Outcome::inconclusive:
            d["outcome"] = "inconclusive";
            break;
        }
        return d;
      },
      py::arg("model"), py::arg("init"), py::arg("T_max"),
      py::arg("transient_fraction") = 0.5, py::arg("point_tol") = 1e-7,
      py::arg("cycle_tol") = 1e-5,
      "Classify the long-run behaviour of the flow from init");

  m.def(
      "lln_test",
      [](const MeanFieldModel& model, const Vector& init, double T,
         const std::vector<std::int64_t>& N_list, int replicas, std::uint64_t seed,
         int grid_points, int workers) {
        LimitTestOptions options;
        options.grid_points = grid_points;
        options.workers = workers;
        return table_dict(lln_test(model, to_point(init), T, N_list, replicas, seed, options));
      },
      py::arg("model"), py::arg("init"), py::arg("T"), py::arg("N_list"),
      py::arg("replicas"), py::arg("seed"), py::arg("grid_points") = 50,
      py::arg("workers") = 1,
      "Median sup-grid TV distance between simulation and flow, per N");

  m.def(
      "decoupling_test",
      [](const MeanFieldModel& model, const Vector& init, double T,
         const std::vector<std::int64_t>& N_list, int replicas, std::uint64_t seed,
         int workers) {
        LimitTestOptions options;
        options.workers = workers;
        return table_dict(
            decoupling_test(model, to_point(init), T, N_list, replicas, seed, options));
      },
      py::arg("model"), py::arg("init"), py::arg("T"), py::arg("N_list"),
      py::arg("replicas"), py::arg("seed"), py::arg("workers") = 1,
      "TV distance between the two-particle joint law at T and the product law, per N");

  m.def(
      "level4_marginal_test",
      [](const MeanFieldModel& model, const Vector& init, double T, int replicas,
         std::uint64_t seed, int grid_points, int workers) {
        LimitTestOptions options;
        options.grid_points = grid_points;
        options.workers = workers;
        return table_dict(
            level4_marginal_test(model, to_point(init), T, replicas, seed, options));
      },
      py::arg("model"), py::arg("init"), py::arg("T"), py::arg("replicas"), py::arg("seed"),
      py::arg("grid_points") = 50, py::arg("workers") = 1,
      "TV distance between the thinned single-particle marginal and the flow, per grid time");

  m.def("tv_distance",
        [](const Vector& a, const Vector& b) { return tv_distance(a, b); },
        py::arg("a"), py::arg("b"), "Half the l1 distance");
}
