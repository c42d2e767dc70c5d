#include "meanfield/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "meanfield/errors.hpp"

namespace meanfield {

std::string format_number(double v) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

std::string format_integer(std::int64_t v) {
  char buf[24];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

namespace {

std::string format_complex(const std::complex<double>& z) {
  std::string out = format_number(z.real());
  out += z.imag() < 0.0 ? " - " : " + ";
  out += format_number(std::abs(z.imag()));
  out += "i";
  return out;
}

void write_measure_header(std::ostream& os, const StateSpace& states) {
  os << "time";
  for (const auto& label : states.labels()) os << "," << label;
  os << "\n";
}

void write_measure_row(std::ostream& os, double t, const Vector& w) {
  os << format_number(t);
  for (Eigen::Index i = 0; i < w.size(); ++i) os << "," << format_number(w(i));
  os << "\n";
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const EmpiricalTrajectory& trajectory,
                          const StateSpace& states) {
  write_measure_header(os, states);
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    write_measure_row(os, trajectory.times[k], trajectory.measures[k].weights());
  }
}

void write_tagged_csv(std::ostream& os, const std::vector<TaggedPath>& paths,
                      const StateSpace& states) {
  os << "particle,time,state\n";
  for (const auto& path : paths) {
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      os << format_integer(path.particle) << "," << format_number(path.times[k]) << ","
         << states.label(path.states[k]) << "\n";
    }
  }
}

void write_flow_csv(std::ostream& os, const Flow& flow, const StateSpace& states) {
  write_measure_header(os, states);
  for (int k = 0; k < flow.size(); ++k) {
    write_measure_row(os, flow.times()[k], flow.points()[k].weights());
  }
}

void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPointReport>& reports,
                            const StateSpace& states) {
  os << "index";
  for (const auto& label : states.labels()) os << ",xi_" << label;
  os << ",residual,stability,starts_converged\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    os << format_integer(static_cast<std::int64_t>(i));
    for (int z = 0; z < rep.point.size(); ++z) os << "," << format_number(rep.point[z]);
    os << "," << format_number(rep.residual) << "," << to_string(rep.stability) << ","
       << format_integer(rep.starts_converged) << "\n";
  }
}

std::string render_fixed_points_text(const std::vector<FixedPointReport>& reports,
                                     const StateSpace& states) {
  std::ostringstream os;
  os << reports.size() << (reports.size() == 1 ? " fixed point\n" : " fixed points\n");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    os << "fixed point " << i << ":\n  point = (";
    for (int z = 0; z < rep.point.size(); ++z) {
      if (z) os << ", ";
      os << states.label(z) << ": " << format_number(rep.point[z]);
    }
    os << ")\n  residual = " << format_number(rep.residual)
       << "\n  stability = " << to_string(rep.stability)
       << "\n  starts converged here = " << rep.starts_converged << "\n  spectrum:\n";
    for (const auto& z : rep.spectrum) os << "    " << format_complex(z) << "\n";
    if (rep.one_sided) {
      os << "  note: boundary point, some finite differences were one-sided\n";
    }
  }
  return os.str();
}

void write_table_csv(std::ostream& os, const ConvergenceTable& table) {
  os << table.index_name << ",statistic,stderr\n";
  for (std::size_t i = 0; i < table.index.size(); ++i) {
    if (table.index_name == "N") {
      os << format_integer(static_cast<std::int64_t>(table.index[i]));
    } else {
      os << format_number(table.index[i]);
    }
    os << "," << format_number(table.statistic[i]) << ","
       << format_number(table.std_error[i]) << "\n";
  }
}

void write_level1_csv(std::ostream& os, const Level1Report& report) {
  os << "gamma_star,beta,iterations,final_bracket,uniqueness_guaranteed,grid_sign_changes\n"
     << format_number(report.gamma_star) << "," << format_number(report.beta_at_gamma_star)
     << "," << format_integer(report.iterations) << ","
     << format_number(report.final_bracket) << ","
     << (report.uniqueness_guaranteed ? "true" : "false") << ","
     << format_integer(report.grid_sign_changes) << "\n";
}

std::string render_level1_text(const Level1Report& report) {
  std::ostringstream os;
  os << "gamma* = " << format_number(report.gamma_star) << "\n"
     << "beta(gamma*) = " << format_number(report.beta_at_gamma_star) << "\n"
     << "bisection iterations = " << report.iterations << "\n"
     << "final bracket width = " << format_number(report.final_bracket) << "\n"
     << "uniqueness guaranteed (strictly decreasing rates) = "
     << (report.uniqueness_guaranteed ? "yes" : "no") << "\n"
     << "sign changes of gamma - G(gamma) on the audit grid = " << report.grid_sign_changes
     << "\n";
  return os.str();
}

void write_cross_level_csv(std::ostream& os, const CrossLevelReport& report,
                           const StateSpace& states) {
  os << "gamma_star,beta";
  for (const auto& label : states.labels()) os << ",xi_" << label;
  os << ",mean_attempt_rate,attempt_residual,gamma_residual,passed\n"
     << format_number(report.level1.gamma_star) << ","
     << format_number(report.level1.beta_at_gamma_star);
  for (int z = 0; z < report.fixed_point.size(); ++z) {
    os << "," << format_number(report.fixed_point[z]);
  }
  os << "," << format_number(report.mean_attempt_rate) << ","
     << format_number(report.attempt_residual) << ","
     << format_number(report.gamma_residual) << "," << (report.passed ? "true" : "false")
     << "\n";
}

std::string render_cross_level_text(const CrossLevelReport& report) {
  std::ostringstream os;
  os << "gamma* = " << format_number(report.level1.gamma_star) << "\n"
     << "beta(gamma*) = " << format_number(report.level1.beta_at_gamma_star) << "\n"
     << "fixed point = " << to_string(report.fixed_point) << "\n"
     << "<c, xi*> = " << format_number(report.mean_attempt_rate) << "\n"
     << "|<c, xi*> - beta(gamma*)| = " << format_number(report.attempt_residual) << "\n"
     << "|gamma* - (1 - exp(-<c, xi*>))| = " << format_number(report.gamma_residual) << "\n"
     << "consistent = " << (report.passed ? "yes" : "no") << "\n";
  return os.str();
}

std::string render_cycle_text(const CycleReport& report) {
  std::ostringstream os;
  switch (report.outcome) {
    case CycleReport::Outcome::converged_to_point:
      os << "outcome = converged-to-point\n"
         << "point = " << to_string(*report.point) << "\n";
      break;
    case CycleReport::Outcome::limit_cycle:
      os << "outcome = limit-cycle\n"
         << "period = " << format_number(report.cycle->period) << "\n"
         << "transient end = " << format_number(report.cycle->transient_end) << "\n"
         << "loop samples = " << report.cycle->loop.size() << "\n";
      break;
    case CycleReport::Outcome::inconclusive:
      os << "outcome = inconclusive\n";
      break;
  }
  return os.str();
}

}  // namespace meanfield
