#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "risopt/harness.hpp"

namespace risopt {

/// Invalid configuration document. `where` names the offending key or the
/// line of a syntax error.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Strict JSON parse: unknown keys and wrong types are errors. Keys absent
/// from the document keep the desk-scale defaults of ScenarioSpec.
ScenarioSpec parse_scenario(const std::string& json_text);
ScenarioSpec load_scenario(const std::string& path);

/// %.17g, round-trip exact for doubles.
std::string format_real(double v);

inline constexpr const char* kTrialCsvHeader =
    "scenario,label,n,k_subcarriers,epsilon,h_max_over_lambda,k_peaks,trial,iterations,rate_bps,"
    "relative_rate,seed";
inline constexpr const char* kTraceCsvHeader = "trial,iter,objective,relative_rate";
inline constexpr const char* kSweepCsvHeader =
    "scenario,axis,value,label,n,k_subcarriers,epsilon,h_max_over_lambda,k_peaks,trials,"
    "valid_trials,mean_iterations,mean_rate_bps,mean_relative_rate,stderr_relative_rate,seed";

/// One row per (valid trial, label), trial-major.
void write_trial_csv(std::ostream& os, const ScenarioSpec& spec, const ScenarioResult& res,
                     bool header = true);
void write_trace_csv(std::ostream& os, const ScenarioResult& res);
void write_sweep_csv(std::ostream& os, std::string_view axis, const std::vector<SweepPoint>& points);

}  // namespace risopt
