#include "rcc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rcc {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double to_double(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) {
      fail(line, "trailing characters in number '" + value + "'");
    }
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "malformed number '" + value + "'");
  }
}

std::int64_t to_integer(const std::string& value, int line) {
  std::int64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    fail(line, "malformed integer '" + value + "'");
  }
  return v;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (agents < 1 || dimension < 1 || rows < dimension) {
    throw ConfigError("need agents >= 1 and rows >= dimension >= 1");
  }
  if (schedule == ScheduleKind::StaticRandom &&
      (degree < 1 || degree >= agents)) {
    throw ConfigError("static schedule needs 1 <= degree < agents");
  }
  if (!(radius >= 0.0)) {
    throw ConfigError("radius must be non-negative");
  }
  if (!(eps_total > 0.0) || !(eps_total < 1.0)) {
    throw ConfigError("eps_total must lie in (0,1)");
  }
  if (!(delta_total > 0.0) || !(delta_total < 1.0)) {
    throw ConfigError("delta_total must lie in (0,1)");
  }
  if (halt_threshold != 0 && halt_threshold < 3) {
    throw ConfigError("explicit halt threshold must be at least 3");
  }
  if (activation <= 0.0 || activation > 1.0) {
    throw ConfigError("activation must lie in (0,1]");
  }
  if (round_cap < 1 || n_val < 1) {
    throw ConfigError("round_cap and n_val must be positive");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) {
      raw.erase(comment);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_number, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) {
      fail(line_number, "empty value for key '" + key + "'");
    }

    if (key == "agents") {
      cfg.agents = static_cast<int>(to_integer(value, line_number));
    } else if (key == "rows") {
      cfg.rows = static_cast<int>(to_integer(value, line_number));
    } else if (key == "dimension") {
      cfg.dimension = static_cast<int>(to_integer(value, line_number));
    } else if (key == "radius") {
      cfg.radius = to_double(value, line_number);
    } else if (key == "box_limit") {
      cfg.box_limit = to_double(value, line_number);
    } else if (key == "instance_file") {
      cfg.instance_file = value;
    } else if (key == "schedule") {
      if (value == "static") {
        cfg.schedule = ScheduleKind::StaticRandom;
      } else if (value == "ring") {
        cfg.schedule = ScheduleKind::RingOneEdgePerTick;
      } else {
        fail(line_number, "schedule must be 'static' or 'ring'");
      }
    } else if (key == "degree") {
      cfg.degree = static_cast<int>(to_integer(value, line_number));
    } else if (key == "activation") {
      cfg.activation = to_double(value, line_number);
    } else if (key == "eps_total") {
      cfg.eps_total = to_double(value, line_number);
    } else if (key == "delta_total") {
      cfg.delta_total = to_double(value, line_number);
    } else if (key == "halt_threshold") {
      cfg.halt_threshold =
          value == "auto" ? 0
                          : static_cast<int>(to_integer(value, line_number));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_integer(value, line_number));
    } else if (key == "mode") {
      if (value == "deferred") {
        cfg.deferred_delivery = true;
      } else if (value == "sync") {
        cfg.deferred_delivery = false;
      } else {
        fail(line_number, "mode must be 'deferred' or 'sync'");
      }
    } else if (key == "stop") {
      if (value == "all") {
        cfg.stop_at_first_halt = false;
      } else if (value == "first") {
        cfg.stop_at_first_halt = true;
      } else {
        fail(line_number, "stop must be 'all' or 'first'");
      }
    } else if (key == "round_cap") {
      cfg.round_cap = to_integer(value, line_number);
    } else if (key == "n_val") {
      cfg.n_val = to_integer(value, line_number);
    } else if (key == "validation") {
      if (value == "joint") {
        cfg.validation = ValidationCoupling::Joint;
      } else if (value == "per-agent") {
        cfg.validation = ValidationCoupling::PerAgent;
      } else {
        fail(line_number, "validation must be 'joint' or 'per-agent'");
      }
    } else if (key == "trace_file") {
      cfg.trace_file = value;
    } else if (key == "metrics_file") {
      cfg.metrics_file = value;
    } else if (key == "solution_file") {
      cfg.solution_file = value;
    } else {
      fail(line_number, "unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace rcc
