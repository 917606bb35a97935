#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risopt/channel.hpp"
#include "risopt/hwi.hpp"
#include "risopt/ofdm_rate.hpp"
#include "risopt/optim.hpp"

namespace risopt {

enum class Label { ideal_stm, impaired_stm, compensated, random_config, random_compensator };

inline constexpr std::array<Label, 5> kAllLabels{Label::ideal_stm, Label::impaired_stm,
                                                 Label::compensated, Label::random_config,
                                                 Label::random_compensator};

std::string_view to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

/// One experiment, in configuration units (dB, dBm, multiples of lambda,
/// multiples of pi). Physical SI views are derived on demand.
struct ScenarioSpec {
  std::string name = "scenario";

  // geometry and propagation
  std::size_t n_rows = 10;
  std::size_t n_cols = 10;
  double d_over_lambda = 0.25;
  double f_c_hz = 3.0e9;
  Vec3 ap_pos_m{-25.0, 43.30127018922193, 0.0};
  Vec3 ue_pos_m{10.0, 17.320508075688775, 0.0};
  std::size_t paths_ap_ris = 21;
  std::size_t paths_ris_ue = 11;
  std::size_t paths_direct = 20;
  double kappa_nlos = 0.1;
  double direct_rel_db = -20.0;

  // OFDM
  std::size_t k_subcarriers = 128;
  double b_hz = 10.5e6;
  double n0_dbm_hz = -164.0;
  double p_dbm = 30.0;

  // hardware imperfections
  double epsilon = 1.0;
  bool psn_unit_modulus = true;
  double h_max_over_lambda = 0.0;
  double k_peaks = 1.0;  // units of pi
  RowMode row_mode = RowMode::floor;

  OptimizerOptions optimizer;
  /// false: the imperfect configuration starts from theta = 0 instead of STM.
  bool stm_init = true;

  std::vector<Label> labels{kAllLabels.begin(), kAllLabels.end()};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  /// Record per-iteration objective and relative rate of the compensated label.
  bool record_trace = false;

  RisGeometry geometry() const;
  ChannelParams channel_params() const;
  OfdmSpec ofdm() const;  // taps derived from the worst-case delay spread
  std::optional<PsnSpec> psn() const;  // absent when epsilon == 1
  std::optional<DeformationSpec> deformation() const;  // absent when h_max == 0
  std::size_t reflectors() const { return n_rows * n_cols; }
  bool has_label(Label l) const;

  void validate() const;

  /// Sets a numeric parameter by its configuration key. `n_reflectors`
  /// sets a square array. Throws std::invalid_argument for unknown keys.
  void set_numeric(std::string_view key, double value);

  /// Full-size channel and trial counts (K=700, L_a=101, L_b=51, L_d=100, 1000 trials).
  void apply_full_scale();
};

/// Numeric keys accepted by set_numeric / sweep.
const std::vector<std::string>& sweepable_keys();

struct LabelOutcome {
  Label label;
  double rate_bps = 0.0;
  double relative_rate = 0.0;
  std::size_t iterations = 0;
};

struct TrialRecord {
  std::size_t trial = 0;
  bool degenerate = false;
  double bound_bps = 0.0;
  std::size_t m_star = 0;
  bool direct_tap_zero = false;
  std::vector<LabelOutcome> outcomes;  // in spec.labels order
  std::size_t iterations_used = 0;
  double final_objective = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> relative_trace;
  std::array<std::uint64_t, 5> words_drawn{};  // indexed by Purpose tag

  const LabelOutcome* find(Label l) const;
};

/// Runs every requested label on one channel draw and one imperfection draw.
TrialRecord run_trial(const ScenarioSpec& spec, std::size_t trial);

struct LabelAggregate {
  Label label;
  std::size_t count = 0;
  double mean_rate_bps = 0.0;
  double mean_relative = 0.0;
  double stderr_relative = 0.0;
  double mean_iterations = 0.0;
};

struct ScenarioResult {
  std::vector<TrialRecord> records;  // sorted by trial id
  std::vector<LabelAggregate> aggregates;  // in spec.labels order
  std::size_t degenerate_trials = 0;
  /// Mean relative rate of the compensated label per iteration, each trial
  /// padded with its final value (filled when record_trace is set).
  std::vector<double> mean_relative_trace;

  const LabelAggregate* find(Label l) const;
};

/// Runs spec.trials trials on spec.threads threads. Results do not depend on
/// the thread count.
ScenarioResult run_scenario(const ScenarioSpec& spec);

/// Aggregates records in trial order, skipping degenerate ones. Throws
/// std::runtime_error when no trial is valid.
ScenarioResult aggregate(const ScenarioSpec& spec, std::vector<TrialRecord> records);

struct SweepPoint {
  double value = 0.0;
  ScenarioSpec spec;
  ScenarioResult result;
};

std::vector<SweepPoint> sweep(const ScenarioSpec& base, std::string_view axis,
                              const std::vector<double>& values);

}  // namespace risopt
