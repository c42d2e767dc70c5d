#pragma once

#include "meanfield/config.hpp"

namespace meanfield {

// Executes one validated config: builds the model, dispatches on the command,
// writes manifest.cfg plus the command's CSV and text outputs into out_dir,
// and prints a short summary to stdout. Returns 0, or 3 when a configured
// threshold failed; domain, model, and numerical problems surface as the
// usual exceptions for the caller to map onto exit codes.
int run(const RunConfig& config);

}  // namespace meanfield
