#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meanfield/model.hpp"

namespace meanfield {

// The [model] section, kept both as typed parameters and (for custom models)
// as the original edge expressions so the manifest can reproduce them.
struct ModelConfig {
  std::string name;  // wlan | sis | custom

  std::vector<double> c;  // wlan

  double tau = 0.0;  // sis
  double rho = 0.0;

  std::vector<std::string> states;      // custom
  std::vector<std::string> edge_exprs;  // custom, verbatim
  std::vector<EdgeSpec> edges;          // custom, parsed
  std::vector<double> weights;          // custom, optional
  bool has_weights = false;
};

// Fully resolved run: every optional key holds its default after parsing, so
// the manifest can spell out the complete effective configuration.
struct RunConfig {
  ModelConfig model;
  std::string command;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int workers = 1;

  std::int64_t N = 0;
  bool has_N = false;
  double T = 0.0;
  int replicas = 0;
  std::vector<std::int64_t> N_list;
  std::vector<double> init;
  bool has_init = false;
  std::vector<std::int64_t> init_counts;
  bool has_init_counts = false;
  std::vector<std::int64_t> tagged;
  std::int64_t max_jumps = 10'000'000;
  int grid_points = 0;

  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double max_step = 0.0;

  int n_starts = 64;
  double fp_tol = 1e-11;
  double dedup_tol = 1e-6;
  double fd_step = 1e-6;
  double spectral_tol = 1e-7;

  double tol = 0.0;  // wlan-gamma, cross-check

  double threshold = 0.0;
  bool has_threshold = false;
  int bootstrap = 200;

  double T_max = 0.0;
  double transient_fraction = 0.5;
  double point_tol = 1e-7;
  double cycle_tol = 1e-5;
};

// Strict parse: named sections, key = value lines, bracketed lists, optional
// double quotes around strings, # comments. Unknown sections, unknown keys,
// duplicate keys, and type mismatches are all ConfigErrors carrying a line
// number where one exists.
RunConfig parse_config(const std::string& text);

MeanFieldModel build_model(const ModelConfig& model);

// Structured text that parse_config accepts back, spelling out every
// resolved value; written next to every output as manifest.cfg.
std::string render_manifest(const RunConfig& config);

}  // namespace meanfield
