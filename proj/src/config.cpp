#include "risopt/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace risopt {

namespace {

using nlohmann::json;

double get_real(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
  return j.get<std::size_t>();
}

Vec3 get_vec3(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(key, "expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = get_real(j[static_cast<std::size_t>(i)], key);
  return v;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(text, e.byte)), "JSON syntax error");
  }
  if (!doc.is_object()) throw ConfigError("line 1", "configuration must be a JSON object");

  ScenarioSpec s;
  for (const auto& [key, v] : doc.items()) {
    if (key == "scenario") {
      if (!v.is_string()) throw ConfigError(key, "expected a string");
      s.name = v.get<std::string>();
    } else if (key == "n_rows") s.n_rows = get_count(v, key);
    else if (key == "n_cols") s.n_cols = get_count(v, key);
    else if (key == "d_over_lambda") s.d_over_lambda = get_real(v, key);
    else if (key == "f_c_hz") s.f_c_hz = get_real(v, key);
    else if (key == "ap_pos_m") s.ap_pos_m = get_vec3(v, key);
    else if (key == "ue_pos_m") s.ue_pos_m = get_vec3(v, key);
    else if (key == "L_a") s.paths_ap_ris = get_count(v, key);
    else if (key == "L_b") s.paths_ris_ue = get_count(v, key);
    else if (key == "L_d") s.paths_direct = get_count(v, key);
    else if (key == "kappa_nlos") s.kappa_nlos = get_real(v, key);
    else if (key == "direct_rel_db") s.direct_rel_db = get_real(v, key);
    else if (key == "k_subcarriers") s.k_subcarriers = get_count(v, key);
    else if (key == "b_hz") s.b_hz = get_real(v, key);
    else if (key == "n0_dbm_hz") s.n0_dbm_hz = get_real(v, key);
    else if (key == "p_dbm") s.p_dbm = get_real(v, key);
    else if (key == "epsilon" || key == "rho") {
      if (doc.contains("epsilon") && doc.contains("rho")) throw ConfigError(key, "give either 'epsilon' or 'rho', not both");
      s.epsilon = get_real(v, key);
    } else if (key == "psn_magnitude") {
      const std::string m = v.is_string() ? v.get<std::string>() : "";
      if (m == "unit") s.psn_unit_modulus = true;
      else if (m == "literal") s.psn_unit_modulus = false;
      else throw ConfigError(key, "expected \"unit\" or \"literal\"");
    } else if (key == "h_max_over_lambda") s.h_max_over_lambda = get_real(v, key);
    else if (key == "k_peaks") s.k_peaks = get_real(v, key);
    else if (key == "row_mode") {
      const std::string m = v.is_string() ? v.get<std::string>() : "";
      if (m == "floor") s.row_mode = RowMode::floor;
      else if (m == "round") s.row_mode = RowMode::round;
      else throw ConfigError(key, "expected \"floor\" or \"round\"");
    } else if (key == "optimizer") {
      const std::string m = v.is_string() ? v.get<std::string>() : "";
      if (m == "gd") s.optimizer.method = Method::gd;
      else if (m == "adam") s.optimizer.method = Method::adam;
      else throw ConfigError(key, "expected \"gd\" or \"adam\"");
    } else if (key == "gamma") s.optimizer.gamma = get_real(v, key);
    else if (key == "max_iters") s.optimizer.max_iters = get_count(v, key);
    else if (key == "stop_rel_tol") s.optimizer.stop_rel_tol = get_real(v, key);
    else if (key == "stop_window") s.optimizer.stop_window = get_count(v, key);
    else if (key == "adam_beta1") s.optimizer.beta1 = get_real(v, key);
    else if (key == "adam_beta2") s.optimizer.beta2 = get_real(v, key);
    else if (key == "adam_eps") s.optimizer.adam_eps = get_real(v, key);
    else if (key == "curvature") s.optimizer.curvature = get_real(v, key);
    else if (key == "stm_init") {
      if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
      s.stm_init = v.get<bool>();
    } else if (key == "labels") {
      if (!v.is_array()) throw ConfigError(key, "expected an array of label names");
      s.labels.clear();
      for (const auto& item : v) {
        const auto label = item.is_string() ? parse_label(item.get<std::string>()) : std::nullopt;
        if (!label) throw ConfigError(key, "unknown label " + item.dump());
        s.labels.push_back(*label);
      }
    } else if (key == "trials") s.trials = get_count(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(key, "expected an unsigned 64-bit integer");
      s.seed = v.get<std::uint64_t>();
    } else if (key == "threads") s.threads = get_count(v, key);
    else if (key == "record_trace") {
      if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
      s.record_trace = v.get<bool>();
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config", e.what());
  }
  return s;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trial_csv(std::ostream& os, const ScenarioSpec& spec, const ScenarioResult& res,
                     bool header) {
  if (header) os << kTrialCsvHeader << '\n';
  for (const auto& r : res.records) {
    if (r.degenerate) continue;
    for (const auto& o : r.outcomes) {
      os << spec.name << ',' << to_string(o.label) << ',' << spec.reflectors() << ','
         << spec.k_subcarriers << ',' << format_real(spec.epsilon) << ','
         << format_real(spec.h_max_over_lambda) << ',' << format_real(spec.k_peaks) << ','
         << r.trial << ',' << o.iterations << ',' << format_real(o.rate_bps) << ','
         << format_real(o.relative_rate) << ',' << spec.seed << '\n';
    }
  }
}

void write_trace_csv(std::ostream& os, const ScenarioResult& res) {
  os << kTraceCsvHeader << '\n';
  for (const auto& r : res.records) {
    if (r.degenerate) continue;
    const std::size_t len = std::max(r.objective_trace.size(), r.relative_trace.size());
    for (std::size_t i = 0; i < len; ++i) {
      os << r.trial << ',' << i << ','
         << (i < r.objective_trace.size() ? format_real(r.objective_trace[i]) : "") << ','
         << (i < r.relative_trace.size() ? format_real(r.relative_trace[i]) : "") << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& os, std::string_view axis, const std::vector<SweepPoint>& points) {
  os << kSweepCsvHeader << '\n';
  for (const auto& p : points) {
    const std::size_t valid = p.result.records.size() - p.result.degenerate_trials;
    for (const auto& a : p.result.aggregates) {
      os << p.spec.name << ',' << axis << ',' << format_real(p.value) << ',' << to_string(a.label)
         << ',' << p.spec.reflectors() << ',' << p.spec.k_subcarriers << ','
         << format_real(p.spec.epsilon) << ',' << format_real(p.spec.h_max_over_lambda) << ','
         << format_real(p.spec.k_peaks) << ',' << p.spec.trials << ',' << valid << ','
         << format_real(a.mean_iterations) << ',' << format_real(a.mean_rate_bps) << ','
         << format_real(a.mean_relative) << ',' << format_real(a.stderr_relative) << ','
         << p.spec.seed << '\n';
    }
  }
}

}  // namespace risopt
