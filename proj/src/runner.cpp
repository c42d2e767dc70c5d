#include "meanfield/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "meanfield/equilibria.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/io.hpp"
#include "meanfield/limit_checks.hpp"
#include "meanfield/wlan.hpp"

namespace meanfield {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw ValidationError("cannot write to " + (dir / name).string());
  return os;
}

SimplexPoint init_point(const RunConfig& config, const MeanFieldModel& model) {
  if (static_cast<int>(config.init.size()) != model.num_states()) {
    throw ValidationError("init has " + std::to_string(config.init.size()) +
                          " entries but the model has " +
                          std::to_string(model.num_states()) + " states");
  }
  return SimplexPoint(Eigen::Map<const Vector>(
      config.init.data(), static_cast<Eigen::Index>(config.init.size())));
}

// Threshold verdict for the *-test commands. lln and decoupling are judged at
// the largest N; level4 must hold at every grid time.
bool threshold_passed(const std::string& command, const ConvergenceTable& table,
                      double threshold) {
  if (command == "level4") {
    for (double s : table.statistic) {
      if (s > threshold) return false;
    }
    return true;
  }
  return table.statistic.back() <= threshold;
}

int finish_test_command(const RunConfig& config, const ConvergenceTable& table,
                        const fs::path& out_dir) {
  {
    auto csv = open_output(out_dir, "table.csv");
    write_table_csv(csv, table);
  }
  std::ostringstream report;
  report << "statistic = " << table.statistic_name << "\n"
         << "horizon = " << format_number(table.horizon) << "\n"
         << "replicas = " << table.replicas << "\n";
  for (std::size_t i = 0; i < table.index.size(); ++i) {
    report << table.index_name << " = "
           << (table.index_name == "N"
                   ? format_integer(static_cast<std::int64_t>(table.index[i]))
                   : format_number(table.index[i]))
           << ": statistic = " << format_number(table.statistic[i])
           << ", stderr = " << format_number(table.std_error[i]) << "\n";
  }

  bool failed = false;
  if (config.has_threshold) {
    const bool ok = threshold_passed(config.command, table, config.threshold);
    failed = !ok;
    report << "threshold " << format_number(config.threshold) << ": "
           << (ok ? "PASS" : "FAIL") << "\n";
  }
  const std::string text = report.str();
  {
    auto txt = open_output(out_dir, "report.txt");
    txt << text;
  }
  std::cout << text;
  return failed ? 3 : 0;
}

}  // namespace

int run(const RunConfig& config) {
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);

  const MeanFieldModel model = build_model(config.model);

  {
    auto manifest = open_output(out_dir, "manifest.cfg");
    manifest << render_manifest(config);
  }

  const std::string& cmd = config.command;

  if (cmd == "simulate") {
    SimOptions options;
    options.max_jump_records = config.max_jumps;
    options.fallback_grid_points = config.grid_points;

    EmpiricalTrajectory trajectory;
    std::vector<TaggedPath> paths;
    if (config.has_init_counts) {
      if (static_cast<int>(config.init_counts.size()) != model.num_states()) {
        throw ValidationError("init_counts has " + std::to_string(config.init_counts.size()) +
                              " entries but the model has " +
                              std::to_string(model.num_states()) + " states");
      }
      const ParticleConfiguration start(config.init_counts);
      if (config.tagged.empty()) {
        trajectory = simulate(model, start, config.T, config.seed, options);
      } else {
        std::tie(trajectory, paths) =
            simulate_tagged(model, start, config.T, config.seed, config.tagged, options);
      }
    } else {
      const SimplexPoint start = init_point(config, model);
      if (config.tagged.empty()) {
        trajectory = simulate(model, config.N, start, config.T, config.seed, options);
      } else {
        std::tie(trajectory, paths) = simulate_tagged(model, config.N, start, config.T,
                                                      config.seed, config.tagged, options);
      }
    }
    {
      auto csv = open_output(out_dir, "trajectory.csv");
      write_trajectory_csv(csv, trajectory, model.states());
    }
    if (!paths.empty()) {
      auto csv = open_output(out_dir, "tagged.csv");
      write_tagged_csv(csv, paths, model.states());
    }
    std::cout << "simulated " << trajectory.num_particles << " particles to T="
              << format_number(trajectory.final_time) << ": " << trajectory.num_jumps
              << " jumps, " << trajectory.times.size() << " records"
              << (trajectory.grid_sampled ? " (grid sampled)" : "") << "\n";
    return 0;
  }

  if (cmd == "integrate") {
    StepControl control;
    control.abs_tol = config.abs_tol;
    control.rel_tol = config.rel_tol;
    control.max_step = config.max_step;
    const Flow flow = integrate(model, init_point(config, model), config.T, control);
    {
      auto csv = open_output(out_dir, "flow.csv");
      write_flow_csv(csv, flow, model.states());
    }
    std::cout << "integrated to T=" << format_number(flow.duration()) << " in "
              << flow.size() - 1 << " accepted steps\n";
    return 0;
  }

  if (cmd == "fixed-points") {
    FixedPointOptions options;
    options.n_starts = config.n_starts;
    options.seed = config.seed;
    options.tol = config.fp_tol;
    options.dedup_tol = config.dedup_tol;
    options.fd_step = config.fd_step;
    options.spectral_tol = config.spectral_tol;
    options.workers = config.workers;
    const auto reports = find_fixed_points(model, options);
    {
      auto csv = open_output(out_dir, "fixed_points.csv");
      write_fixed_points_csv(csv, reports, model.states());
    }
    const std::string text = render_fixed_points_text(reports, model.states());
    {
      auto txt = open_output(out_dir, "fixed_points.txt");
      txt << text;
    }
    std::cout << text;
    return 0;
  }

  if (cmd == "wlan-gamma") {
    const BackoffParameters params(config.model.c);
    const Level1Report report = solve_gamma_star(params, config.tol);
    {
      auto csv = open_output(out_dir, "level1.csv");
      write_level1_csv(csv, report);
    }
    const std::string text = render_level1_text(report);
    {
      auto txt = open_output(out_dir, "level1.txt");
      txt << text;
    }
    std::cout << text;
    return 0;
  }

  if (cmd == "cross-check") {
    const BackoffParameters params(config.model.c);
    FixedPointOptions options;
    options.n_starts = config.n_starts;
    options.seed = config.seed;
    options.workers = config.workers;
    const CrossLevelReport report = cross_level_check(params, config.tol, options);
    {
      auto csv = open_output(out_dir, "cross_check.csv");
      write_cross_level_csv(csv, report, model.states());
    }
    const std::string text = render_cross_level_text(report);
    {
      auto txt = open_output(out_dir, "cross_check.txt");
      txt << text;
    }
    std::cout << text;
    return report.passed ? 0 : 3;
  }

  LimitTestOptions test_options;
  test_options.bootstrap = config.bootstrap;
  test_options.workers = config.workers;

  if (cmd == "lln") {
    test_options.grid_points = config.grid_points;
    const auto table = lln_test(model, init_point(config, model), config.T, config.N_list,
                                config.replicas, config.seed, test_options);
    return finish_test_command(config, table, out_dir);
  }

  if (cmd == "decoupling") {
    const auto table = decoupling_test(model, init_point(config, model), config.T,
                                       config.N_list, config.replicas, config.seed,
                                       test_options);
    return finish_test_command(config, table, out_dir);
  }

  if (cmd == "level4") {
    test_options.grid_points = config.grid_points;
    const auto table = level4_marginal_test(model, init_point(config, model), config.T,
                                            config.replicas, config.seed, test_options);
    return finish_test_command(config, table, out_dir);
  }

  if (cmd == "limit-cycle") {
    CycleOptions options;
    options.transient_fraction = config.transient_fraction;
    options.point_tol = config.point_tol;
    options.cycle_tol = config.cycle_tol;
    const CycleReport report =
        detect_limit_cycle(model, init_point(config, model), config.T_max, options);
    const std::string text = render_cycle_text(report);
    {
      auto txt = open_output(out_dir, "cycle.txt");
      txt << text;
    }
    if (report.outcome == CycleReport::Outcome::limit_cycle) {
      auto csv = open_output(out_dir, "cycle_loop.csv");
      write_flow_csv(csv, report.cycle->loop, model.states());
    }
    std::cout << text;
    return 0;
  }

  throw ValidationError("unknown command '" + cmd + "'");
}

}  // namespace meanfield
