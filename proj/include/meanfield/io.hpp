#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "meanfield/equilibria.hpp"
#include "meanfield/flow.hpp"
#include "meanfield/limit_checks.hpp"
#include "meanfield/model.hpp"
#include "meanfield/simulate.hpp"
#include "meanfield/wlan.hpp"

namespace meanfield {

// Shortest decimal form that round-trips to the same double. All CSV output
// goes through these two so reruns are byte-identical.
std::string format_number(double v);
std::string format_integer(std::int64_t v);

void write_trajectory_csv(std::ostream& os, const EmpiricalTrajectory& trajectory,
                          const StateSpace& states);
void write_tagged_csv(std::ostream& os, const std::vector<TaggedPath>& paths,
                      const StateSpace& states);
void write_flow_csv(std::ostream& os, const Flow& flow, const StateSpace& states);
void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPointReport>& reports,
                            const StateSpace& states);
std::string render_fixed_points_text(const std::vector<FixedPointReport>& reports,
                                     const StateSpace& states);
void write_table_csv(std::ostream& os, const ConvergenceTable& table);
void write_level1_csv(std::ostream& os, const Level1Report& report);
std::string render_level1_text(const Level1Report& report);
void write_cross_level_csv(std::ostream& os, const CrossLevelReport& report,
                           const StateSpace& states);
std::string render_cross_level_text(const CrossLevelReport& report);
std::string render_cycle_text(const CycleReport& report);

}  // namespace meanfield
