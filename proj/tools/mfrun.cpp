#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "meanfield/config.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/runner.hpp"
#include "meanfield/version.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw meanfield::ValidationError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field particle system runner"};
  app.set_version_flag("--version", std::string("mfrun ") + meanfield::kVersion);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "config file (required)")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides config)");
  auto* workers_opt =
      app.add_option("--workers", workers, "worker thread cap (overrides config)")
          ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // 0 for --help/--version, nonzero otherwise
  }

  try {
    meanfield::RunConfig config = meanfield::parse_config(read_file(config_path));
    if (*out_opt) config.out_dir = out_dir;
    if (*workers_opt) config.workers = workers;
    if (*seed_opt) config.seed = seed;
    return meanfield::run(config);
  } catch (const meanfield::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
