#include "meanfield/config.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "meanfield/errors.hpp"
#include "meanfield/io.hpp"
#include "meanfield/version.hpp"

namespace meanfield {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

struct RawValue {
  std::string text;  // scalar payload, quotes stripped
  bool quoted = false;
  bool is_list = false;
  std::vector<std::string> items;
  int line = 0;
};

struct KeyValue {
  std::string key;
  RawValue value;
};

using Section = std::vector<KeyValue>;

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char ch : key) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  }
  return !std::isdigit(static_cast<unsigned char>(key[0]));
}

// Strips a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& line, int line_no) {
  std::string out;
  bool in_quote = false;
  for (char ch : line) {
    if (ch == '"') in_quote = !in_quote;
    if (ch == '#' && !in_quote) break;
    out += ch;
  }
  if (in_quote) fail(line_no, "unterminated string");
  return out;
}

std::string parse_scalar_item(const std::string& raw, int line_no, bool* quoted) {
  std::string item = trim(raw);
  if (item.empty()) fail(line_no, "empty value");
  if (item.front() == '"') {
    if (item.size() < 2 || item.back() != '"') fail(line_no, "unterminated string");
    *quoted = true;
    item = item.substr(1, item.size() - 2);
    if (item.find('"') != std::string::npos) fail(line_no, "nested quote in string");
    return item;
  }
  *quoted = false;
  if (item.find('"') != std::string::npos) {
    fail(line_no, "stray quote in unquoted value");
  }
  if (item.find_first_of("[],") != std::string::npos) {
    fail(line_no, "unexpected list character in scalar value");
  }
  return item;
}

RawValue parse_value(const std::string& raw, int line_no) {
  RawValue value;
  value.line = line_no;
  std::string text = trim(raw);
  if (text.empty()) fail(line_no, "missing value after '='");

  if (text.front() == '[') {
    if (text.back() != ']') fail(line_no, "list is missing its closing bracket");
    value.is_list = true;
    const std::string inner = trim(text.substr(1, text.size() - 2));
    if (inner.empty()) return value;
    std::string current;
    bool in_quote = false;
    for (char ch : inner) {
      if (ch == '"') in_quote = !in_quote;
      if (ch == ',' && !in_quote) {
        bool q = false;
        value.items.push_back(parse_scalar_item(current, line_no, &q));
        current.clear();
      } else {
        current += ch;
      }
    }
    bool q = false;
    value.items.push_back(parse_scalar_item(current, line_no, &q));
    return value;
  }

  value.text = parse_scalar_item(text, line_no, &value.quoted);
  return value;
}

std::map<std::string, Section> parse_sections(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current_section;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string content = trim(strip_comment(line, line_no));
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']') fail(line_no, "section header is missing ']'");
      const std::string name = trim(content.substr(1, content.size() - 2));
      if (name != "model" && name != "run") {
        fail(line_no, "unknown section [" + name + "]; expected [model] or [run]");
      }
      if (sections.count(name)) fail(line_no, "section [" + name + "] declared twice");
      sections[name] = {};
      current_section = name;
      continue;
    }

    const std::size_t eq = content.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    if (current_section.empty()) {
      fail(line_no, "key outside any section; start with [model] or [run]");
    }
    const std::string key = trim(content.substr(0, eq));
    if (!valid_key(key)) fail(line_no, "invalid key name '" + key + "'");
    Section& section = sections[current_section];
    for (const auto& kv : section) {
      if (kv.key == key) {
        fail(line_no, "duplicate key '" + key + "' in [" + current_section + "]");
      }
    }
    section.push_back({key, parse_value(content.substr(eq + 1), line_no)});
  }
  return sections;
}

// Tracks key consumption so anything left over is an error by name.
class SectionReader {
 public:
  SectionReader(std::string name, const Section* section)
      : name_(std::move(name)), section_(section) {}

  const RawValue* find(const std::string& key) {
    if (!section_) return nullptr;
    for (const auto& kv : *section_) {
      if (kv.key == key) {
        consumed_.insert(key);
        return &kv.value;
      }
    }
    return nullptr;
  }

  const RawValue& require(const std::string& key, const std::string& why = "") {
    const RawValue* value = find(key);
    if (!value) {
      throw ConfigError("missing required key '" + key + "' in [" + name_ + "]" +
                        (why.empty() ? "" : " (" + why + ")"));
    }
    return *value;
  }

  void finish(const std::string& context) const {
    if (!section_) return;
    for (const auto& kv : *section_) {
      if (!consumed_.count(kv.key)) {
        throw ConfigError("unknown key '" + kv.key + "' in [" + name_ + "] (line " +
                          std::to_string(kv.value.line) + ") " + context);
      }
    }
  }

 private:
  std::string name_;
  const Section* section_;
  std::set<std::string> consumed_;
};

[[noreturn]] void fail_key(const std::string& key, const RawValue& value,
                           const std::string& message) {
  fail(value.line, "key '" + key + "': " + message);
}

double parse_double_token(const std::string& token, const std::string& key,
                          const RawValue& value) {
  double out = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc() || result.ptr != end) {
    fail_key(key, value, "expected a number, got '" + token + "'");
  }
  return out;
}

std::int64_t parse_int_token(const std::string& token, const std::string& key,
                             const RawValue& value) {
  std::int64_t out = 0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc() || result.ptr != end) {
    fail_key(key, value, "expected an integer, got '" + token + "'");
  }
  return out;
}

double to_double(const std::string& key, const RawValue& value) {
  if (value.is_list || value.quoted) fail_key(key, value, "expected a number");
  return parse_double_token(value.text, key, value);
}

std::int64_t to_int64(const std::string& key, const RawValue& value) {
  if (value.is_list || value.quoted) fail_key(key, value, "expected an integer");
  return parse_int_token(value.text, key, value);
}

int to_bounded_int(const std::string& key, const RawValue& value, std::int64_t lo,
                   std::int64_t hi) {
  const std::int64_t v = to_int64(key, value);
  if (v < lo || v > hi) {
    fail_key(key, value, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "]");
  }
  return static_cast<int>(v);
}

std::uint64_t to_uint64(const std::string& key, const RawValue& value) {
  if (value.is_list || value.quoted) fail_key(key, value, "expected an unsigned integer");
  std::uint64_t out = 0;
  const char* begin = value.text.data();
  const char* end = value.text.data() + value.text.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc() || result.ptr != end) {
    fail_key(key, value, "expected an unsigned integer, got '" + value.text + "'");
  }
  return out;
}

std::string to_string_value(const std::string& key, const RawValue& value) {
  if (value.is_list) fail_key(key, value, "expected a string, got a list");
  return value.text;
}

std::vector<double> to_double_list(const std::string& key, const RawValue& value) {
  if (!value.is_list) fail_key(key, value, "expected a list like [1, 0.5]");
  std::vector<double> out;
  for (const auto& item : value.items) out.push_back(parse_double_token(item, key, value));
  return out;
}

std::vector<std::int64_t> to_int64_list(const std::string& key, const RawValue& value) {
  if (!value.is_list) fail_key(key, value, "expected a list like [100, 1000]");
  std::vector<std::int64_t> out;
  for (const auto& item : value.items) out.push_back(parse_int_token(item, key, value));
  return out;
}

std::vector<std::string> to_string_list(const std::string& key, const RawValue& value) {
  if (!value.is_list) fail_key(key, value, "expected a list");
  return value.items;
}

EdgeSpec parse_edge_expr(const std::string& text, const StateSpace& states, int line) {
  auto bad = [&text, line](const std::string& why) -> void {
    fail(line, "edge \"" + text + "\": " + why);
  };
  const std::size_t arrow = text.find("->");
  if (arrow == std::string::npos) bad("expected '<from> -> <to> : <kind> <args>'");
  const std::size_t colon = text.find(':', arrow + 2);
  if (colon == std::string::npos) bad("missing ':' before the rate expression");

  EdgeSpec spec;
  const std::string from = trim(text.substr(0, arrow));
  const std::string to = trim(text.substr(arrow + 2, colon - arrow - 2));
  try {
    spec.from = states.index_of(from);
    spec.to = states.index_of(to);
  } catch (const ValidationError& e) {
    bad(e.what());
  }

  std::istringstream expr(text.substr(colon + 1));
  std::string kind;
  expr >> kind;
  auto read_coeff = [&]() {
    std::string token;
    if (!(expr >> token)) bad("missing rate coefficient");
    double out = 0.0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), out);
    if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
      bad("rate coefficient '" + token + "' is not a number");
    }
    return out;
  };
  if (kind == "const") {
    spec.expr.kind = RateExpr::Kind::constant;
    spec.expr.coeff = read_coeff();
  } else if (kind == "linear") {
    spec.expr.kind = RateExpr::Kind::linear;
    std::string state;
    if (!(expr >> state)) bad("linear rate needs '<state> <coefficient>'");
    try {
      spec.expr.state = states.index_of(state);
    } catch (const ValidationError& e) {
      bad(e.what());
    }
    spec.expr.coeff = read_coeff();
  } else if (kind == "collide") {
    spec.expr.kind = RateExpr::Kind::collide;
    spec.expr.coeff = read_coeff();
  } else if (kind == "success") {
    spec.expr.kind = RateExpr::Kind::success;
    spec.expr.coeff = read_coeff();
  } else {
    bad("unknown rate kind '" + kind + "'; expected const, linear, collide, or success");
  }
  std::string leftover;
  if (expr >> leftover) bad("unexpected trailing token '" + leftover + "'");
  return spec;
}

ModelConfig parse_model_section(SectionReader& reader) {
  ModelConfig model;
  const RawValue& name = reader.require("name");
  model.name = to_string_value("name", name);

  if (model.name == "wlan") {
    model.c = to_double_list("c", reader.require("c", "wlan needs its attempt rates"));
  } else if (model.name == "sis") {
    model.tau = to_double("tau", reader.require("tau"));
    model.rho = to_double("rho", reader.require("rho"));
  } else if (model.name == "custom") {
    model.states = to_string_list("states", reader.require("states"));
    StateSpace states(model.states);
    const RawValue& edges = reader.require("edges");
    model.edge_exprs = to_string_list("edges", edges);
    for (const auto& expr : model.edge_exprs) {
      model.edges.push_back(parse_edge_expr(expr, states, edges.line));
    }
    if (const RawValue* weights = reader.find("weights")) {
      model.weights = to_double_list("weights", *weights);
      model.has_weights = true;
      if (model.weights.size() != model.states.size()) {
        fail_key("weights", *weights, "need one weight per state");
      }
    }
    for (std::size_t e = 0; e < model.edges.size(); ++e) {
      const auto kind = model.edges[e].expr.kind;
      if ((kind == RateExpr::Kind::collide || kind == RateExpr::Kind::success) &&
          !model.has_weights) {
        fail_key("edges", edges, "edge '" + model.edge_exprs[e] +
                                     "' needs the model's weights, but none are set");
      }
    }
  } else {
    fail_key("name", name, "unknown model '" + model.name + "'; expected wlan, sis, or custom");
  }
  reader.finish("for model '" + model.name + "'");
  return model;
}

const std::set<std::string> kCommands = {"simulate",  "integrate",  "fixed-points",
                                         "wlan-gamma", "cross-check", "lln",
                                         "decoupling", "level4",     "limit-cycle"};

}  // namespace

RunConfig parse_config(const std::string& text) {
  const auto sections = parse_sections(text);
  if (!sections.count("model")) throw ConfigError("missing [model] section");
  if (!sections.count("run")) throw ConfigError("missing [run] section");

  RunConfig config;
  SectionReader model_reader("model", &sections.at("model"));
  config.model = parse_model_section(model_reader);

  SectionReader run("run", &sections.at("run"));
  config.command = to_string_value("command", run.require("command"));
  if (!kCommands.count(config.command)) {
    throw ConfigError("unknown command '" + config.command + "'");
  }
  const RawValue* seed = run.find("seed");
  if (!seed) throw ConfigError("seed required: every run must pin its random seed");
  config.seed = to_uint64("seed", *seed);
  if (const RawValue* out = run.find("out")) {
    config.out_dir = to_string_value("out", *out);
    if (config.out_dir.empty()) fail_key("out", *out, "must be non-empty");
  }
  if (const RawValue* workers = run.find("workers")) {
    config.workers = to_bounded_int("workers", *workers, 1, 4096);
  }

  const std::string& cmd = config.command;
  auto positive_double = [](const std::string& key, const RawValue& value) {
    const double v = to_double(key, value);
    if (!(v > 0.0)) fail_key(key, value, "must be positive");
    return v;
  };
  auto nonnegative_double = [](const std::string& key, const RawValue& value) {
    const double v = to_double(key, value);
    if (v < 0.0) fail_key(key, value, "must be nonnegative");
    return v;
  };

  auto read_init = [&](bool allow_counts) {
    const RawValue* init = run.find("init");
    const RawValue* counts = allow_counts ? run.find("init_counts") : nullptr;
    if (init && counts) {
      fail_key("init_counts", *counts, "give either init or init_counts, not both");
    }
    if (init) {
      config.init = to_double_list("init", *init);
      config.has_init = true;
      try {
        const SimplexPoint check(Eigen::Map<const Vector>(
            config.init.data(), static_cast<Eigen::Index>(config.init.size())));
        (void)check;
      } catch (const ValidationError& e) {
        fail_key("init", *init, e.what());
      }
    } else if (counts) {
      config.init_counts = to_int64_list("init_counts", *counts);
      config.has_init_counts = true;
      std::int64_t total = 0;
      for (auto v : config.init_counts) {
        if (v < 0) fail_key("init_counts", *counts, "counts must be nonnegative");
        total += v;
      }
      if (total < 1) fail_key("init_counts", *counts, "needs at least one particle");
    } else {
      throw ConfigError("missing required key 'init'" +
                        std::string(allow_counts ? " (or 'init_counts')" : "") + " in [run]");
    }
  };

  if (cmd == "simulate") {
    config.T = nonnegative_double("T", run.require("T"));
    read_init(true);
    if (config.has_init) {
      config.N = to_int64("N", run.require("N", "particle count for a law start"));
      if (config.N < 1) throw ConfigError("key 'N': must be at least 1");
      config.has_N = true;
    } else if (run.find("N")) {
      throw ConfigError("key 'N' conflicts with init_counts (the counts already fix N)");
    }
    if (const RawValue* tagged = run.find("tagged")) {
      config.tagged = to_int64_list("tagged", *tagged);
    }
    if (const RawValue* mj = run.find("max_jumps")) {
      config.max_jumps = to_int64("max_jumps", *mj);
      if (config.max_jumps < 1) fail_key("max_jumps", *mj, "must be at least 1");
    }
    config.grid_points = 1001;
    if (const RawValue* gp = run.find("grid_points")) {
      config.grid_points = to_bounded_int("grid_points", *gp, 2, 10'000'000);
    }
  } else if (cmd == "integrate") {
    config.T = positive_double("T", run.require("T"));
    read_init(false);
    if (const RawValue* v = run.find("abs_tol")) config.abs_tol = positive_double("abs_tol", *v);
    if (const RawValue* v = run.find("rel_tol")) config.rel_tol = nonnegative_double("rel_tol", *v);
    if (const RawValue* v = run.find("max_step")) config.max_step = nonnegative_double("max_step", *v);
  } else if (cmd == "fixed-points") {
    if (const RawValue* v = run.find("n_starts")) {
      config.n_starts = to_bounded_int("n_starts", *v, 0, 1'000'000);
    }
    if (const RawValue* v = run.find("fp_tol")) config.fp_tol = positive_double("fp_tol", *v);
    if (const RawValue* v = run.find("dedup_tol")) config.dedup_tol = positive_double("dedup_tol", *v);
    if (const RawValue* v = run.find("fd_step")) config.fd_step = positive_double("fd_step", *v);
    if (const RawValue* v = run.find("spectral_tol")) {
      config.spectral_tol = nonnegative_double("spectral_tol", *v);
    }
  } else if (cmd == "wlan-gamma" || cmd == "cross-check") {
    if (config.model.name != "wlan") {
      throw ConfigError("command '" + cmd + "' needs a wlan model");
    }
    config.tol = cmd == "wlan-gamma" ? 1e-10 : 1e-6;
    if (const RawValue* v = run.find("tol")) config.tol = positive_double("tol", *v);
    if (cmd == "cross-check") {
      if (const RawValue* v = run.find("n_starts")) {
        config.n_starts = to_bounded_int("n_starts", *v, 0, 1'000'000);
      }
    }
  } else if (cmd == "lln" || cmd == "decoupling") {
    config.T = cmd == "lln" ? positive_double("T", run.require("T"))
                            : nonnegative_double("T", run.require("T"));
    read_init(false);
    config.N_list = to_int64_list("N_list", run.require("N_list"));
    config.replicas = to_bounded_int("replicas", run.require("replicas"), 1, 100'000'000);
    if (const RawValue* v = run.find("bootstrap")) {
      config.bootstrap = to_bounded_int("bootstrap", *v, 10, 1'000'000);
    }
    if (cmd == "lln") {
      config.grid_points = 50;
      if (const RawValue* v = run.find("grid_points")) {
        config.grid_points = to_bounded_int("grid_points", *v, 2, 1'000'000);
      }
    }
    if (const RawValue* v = run.find("threshold")) {
      config.threshold = positive_double("threshold", *v);
      config.has_threshold = true;
    }
  } else if (cmd == "level4") {
    config.T = positive_double("T", run.require("T"));
    read_init(false);
    config.replicas = to_bounded_int("replicas", run.require("replicas"), 1, 100'000'000);
    config.grid_points = 50;
    if (const RawValue* v = run.find("grid_points")) {
      config.grid_points = to_bounded_int("grid_points", *v, 2, 1'000'000);
    }
    if (const RawValue* v = run.find("bootstrap")) {
      config.bootstrap = to_bounded_int("bootstrap", *v, 10, 1'000'000);
    }
    if (const RawValue* v = run.find("threshold")) {
      config.threshold = positive_double("threshold", *v);
      config.has_threshold = true;
    }
  } else if (cmd == "limit-cycle") {
    config.T_max = positive_double("T_max", run.require("T_max"));
    read_init(false);
    if (const RawValue* v = run.find("transient_fraction")) {
      config.transient_fraction = to_double("transient_fraction", *v);
      if (!(config.transient_fraction > 0.0) || !(config.transient_fraction < 1.0)) {
        fail_key("transient_fraction", *v, "must lie strictly between 0 and 1");
      }
    }
    if (const RawValue* v = run.find("point_tol")) config.point_tol = positive_double("point_tol", *v);
    if (const RawValue* v = run.find("cycle_tol")) config.cycle_tol = positive_double("cycle_tol", *v);
  }

  run.finish("for command '" + cmd + "'");
  return config;
}

MeanFieldModel build_model(const ModelConfig& model) {
  if (model.name == "wlan") return wlan_model(model.c);
  if (model.name == "sis") return sis_model(model.tau, model.rho);
  if (model.name == "custom") {
    return custom_model("custom", StateSpace(model.states), model.edges,
                        model.has_weights ? model.weights : std::vector<double>{});
  }
  throw ValidationError("unknown model '" + model.name + "'");
}

namespace {

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string render_double_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out + "]";
}

std::string render_int_list(const std::vector<std::int64_t>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_integer(values[i]);
  }
  return out + "]";
}

std::string render_string_list(const std::vector<std::string>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += quoted(values[i]);
  }
  return out + "]";
}

}  // namespace

std::string render_manifest(const RunConfig& config) {
  std::ostringstream os;
  os << "# meanfield " << kVersion << " manifest\n";
  os << "# re-run with: mfrun --config <this file>\n\n";

  os << "[model]\n";
  os << "name = " << config.model.name << "\n";
  if (config.model.name == "wlan") {
    os << "c = " << render_double_list(config.model.c) << "\n";
  } else if (config.model.name == "sis") {
    os << "tau = " << format_number(config.model.tau) << "\n";
    os << "rho = " << format_number(config.model.rho) << "\n";
  } else {
    os << "states = " << render_string_list(config.model.states) << "\n";
    os << "edges = " << render_string_list(config.model.edge_exprs) << "\n";
    if (config.model.has_weights) {
      os << "weights = " << render_double_list(config.model.weights) << "\n";
    }
  }

  const std::string& cmd = config.command;
  os << "\n[run]\n";
  os << "command = " << cmd << "\n";
  os << "seed = " << config.seed << "\n";
  os << "out = " << quoted(config.out_dir) << "\n";
  os << "workers = " << config.workers << "\n";

  auto emit_init = [&os, &config] {
    if (config.has_init) {
      os << "init = " << render_double_list(config.init) << "\n";
    } else if (config.has_init_counts) {
      os << "init_counts = " << render_int_list(config.init_counts) << "\n";
    }
  };

  if (cmd == "simulate") {
    os << "T = " << format_number(config.T) << "\n";
    emit_init();
    if (config.has_N) os << "N = " << format_integer(config.N) << "\n";
    if (!config.tagged.empty()) os << "tagged = " << render_int_list(config.tagged) << "\n";
    os << "max_jumps = " << format_integer(config.max_jumps) << "\n";
    os << "grid_points = " << config.grid_points << "\n";
  } else if (cmd == "integrate") {
    os << "T = " << format_number(config.T) << "\n";
    emit_init();
    os << "abs_tol = " << format_number(config.abs_tol) << "\n";
    os << "rel_tol = " << format_number(config.rel_tol) << "\n";
    os << "max_step = " << format_number(config.max_step) << "\n";
  } else if (cmd == "fixed-points") {
    os << "n_starts = " << config.n_starts << "\n";
    os << "fp_tol = " << format_number(config.fp_tol) << "\n";
    os << "dedup_tol = " << format_number(config.dedup_tol) << "\n";
    os << "fd_step = " << format_number(config.fd_step) << "\n";
    os << "spectral_tol = " << format_number(config.spectral_tol) << "\n";
  } else if (cmd == "wlan-gamma") {
    os << "tol = " << format_number(config.tol) << "\n";
  } else if (cmd == "cross-check") {
    os << "tol = " << format_number(config.tol) << "\n";
    os << "n_starts = " << config.n_starts << "\n";
  } else if (cmd == "lln" || cmd == "decoupling") {
    os << "T = " << format_number(config.T) << "\n";
    emit_init();
    os << "N_list = " << render_int_list(config.N_list) << "\n";
    os << "replicas = " << config.replicas << "\n";
    if (cmd == "lln") os << "grid_points = " << config.grid_points << "\n";
    os << "bootstrap = " << config.bootstrap << "\n";
    if (config.has_threshold) os << "threshold = " << format_number(config.threshold) << "\n";
  } else if (cmd == "level4") {
    os << "T = " << format_number(config.T) << "\n";
    emit_init();
    os << "replicas = " << config.replicas << "\n";
    os << "grid_points = " << config.grid_points << "\n";
    os << "bootstrap = " << config.bootstrap << "\n";
    if (config.has_threshold) os << "threshold = " << format_number(config.threshold) << "\n";
  } else if (cmd == "limit-cycle") {
    os << "T_max = " << format_number(config.T_max) << "\n";
    emit_init();
    os << "transient_fraction = " << format_number(config.transient_fraction) << "\n";
    os << "point_tol = " << format_number(config.point_tol) << "\n";
    os << "cycle_tol = " << format_number(config.cycle_tol) << "\n";
  }
  return os.str();
}

}  // namespace meanfield
