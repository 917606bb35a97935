#include "risopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "risopt/random.hpp"
#include "risopt/ris_config.hpp"

namespace risopt {

namespace {

constexpr std::array<std::string_view, 5> kLabelNames{"ideal_stm", "impaired_stm", "compensated",
                                                      "random_config", "random_compensator"};

std::size_t to_count(std::string_view key, double v) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e12)
    throw std::invalid_argument("parameter '" + std::string(key) + "' must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

RandomStream stream_for(const ScenarioSpec& spec, std::size_t trial, Purpose p) {
  return make_stream(spec.seed, stream_id(trial, p));
}

}  // namespace

std::string_view to_string(Label l) { return kLabelNames[static_cast<std::size_t>(l)]; }

std::optional<Label> parse_label(std::string_view s) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i)
    if (kLabelNames[i] == s) return static_cast<Label>(i);
  return std::nullopt;
}

RisGeometry ScenarioSpec::geometry() const {
  return RisGeometry::make(n_rows, n_cols, d_over_lambda, f_c_hz);
}

ChannelParams ScenarioSpec::channel_params() const {
  ChannelParams p;
  p.geometry = geometry();
  p.ap_pos = ap_pos_m;
  p.ue_pos = ue_pos_m;
  p.paths_ap_ris = paths_ap_ris;
  p.paths_ris_ue = paths_ris_ue;
  p.paths_direct = paths_direct;
  p.kappa_nlos = kappa_nlos;
  p.direct_rel_db = direct_rel_db;
  return p;
}

OfdmSpec ScenarioSpec::ofdm() const {
  OfdmSpec o;
  o.subcarriers = k_subcarriers;
  o.bandwidth_hz = b_hz;
  o.noise_psd_w_hz = dbm_to_watt(n0_dbm_hz);
  o.mean_power_w = dbm_to_watt(p_dbm);
  o.taps = required_taps(channel_params(), b_hz);
  return o;
}

std::optional<PsnSpec> ScenarioSpec::psn() const {
  if (epsilon == 1.0) return std::nullopt;
  return PsnSpec{epsilon, psn_unit_modulus};
}

std::optional<DeformationSpec> ScenarioSpec::deformation() const {
  if (h_max_over_lambda == 0.0) return std::nullopt;
  const ChannelParams p = channel_params();
  DeformationSpec d;
  d.h_max = h_max_over_lambda * p.geometry.wavelength();
  d.k = k_peaks * std::numbers::pi;
  d.elevation_a = angles_towards(p.ap_pos).elevation;
  d.elevation_b = angles_towards(p.ue_pos).elevation;
  d.row_mode = row_mode;
  return d;
}

bool ScenarioSpec::has_label(Label l) const {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

void ScenarioSpec::validate() const {
  channel_params().validate();
  ofdm().validate();
  PsnSpec{epsilon}.validate();
  if (!(h_max_over_lambda >= 0.0)) throw std::invalid_argument("h_max_over_lambda must be non-negative");
  if (h_max_over_lambda > 0.0 && n_cols < 2) throw std::invalid_argument("deformation needs n_cols >= 2");
  optimizer.validate();
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  if (labels.empty()) throw std::invalid_argument("labels must not be empty");
  if (has_label(Label::compensated) && !has_label(Label::ideal_stm))
    throw std::invalid_argument("label 'compensated' requires 'ideal_stm'");
}

const std::vector<std::string>& sweepable_keys() {
  static const std::vector<std::string> keys{
      "n_reflectors", "n_rows",       "n_cols",     "d_over_lambda",     "f_c_hz",
      "L_a",          "L_b",          "L_d",        "kappa_nlos",        "direct_rel_db",
      "k_subcarriers", "b_hz",        "n0_dbm_hz",  "p_dbm",             "epsilon",
      "rho",          "h_max_over_lambda", "k_peaks", "gamma",           "max_iters",
      "stop_rel_tol", "stop_window",  "trials"};
  return keys;
}

void ScenarioSpec::set_numeric(std::string_view key, double v) {
  if (key == "n_reflectors") {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(v)));
    if (v < 1.0 || static_cast<double>(side * side) != v)
      throw std::invalid_argument("n_reflectors must be a perfect square");
    n_rows = n_cols = side;
  } else if (key == "n_rows") n_rows = to_count(key, v);
  else if (key == "n_cols") n_cols = to_count(key, v);
  else if (key == "d_over_lambda") d_over_lambda = v;
  else if (key == "f_c_hz") f_c_hz = v;
  else if (key == "L_a") paths_ap_ris = to_count(key, v);
  else if (key == "L_b") paths_ris_ue = to_count(key, v);
  else if (key == "L_d") paths_direct = to_count(key, v);
  else if (key == "kappa_nlos") kappa_nlos = v;
  else if (key == "direct_rel_db") direct_rel_db = v;
  else if (key == "k_subcarriers") k_subcarriers = to_count(key, v);
  else if (key == "b_hz") b_hz = v;
  else if (key == "n0_dbm_hz") n0_dbm_hz = v;
  else if (key == "p_dbm") p_dbm = v;
  else if (key == "epsilon" || key == "rho") epsilon = v;
  else if (key == "h_max_over_lambda") h_max_over_lambda = v;
  else if (key == "k_peaks") k_peaks = v;
  else if (key == "gamma") optimizer.gamma = v;
  else if (key == "max_iters") optimizer.max_iters = to_count(key, v);
  else if (key == "stop_rel_tol") optimizer.stop_rel_tol = v;
  else if (key == "stop_window") optimizer.stop_window = to_count(key, v);
  else if (key == "trials") trials = to_count(key, v);
  else throw std::invalid_argument("unknown sweep axis '" + std::string(key) + "'");
}

void ScenarioSpec::apply_full_scale() {
  k_subcarriers = 700;
  paths_ap_ris = 101;
  paths_ris_ue = 51;
  paths_direct = 100;
  trials = 1000;
}

const LabelOutcome* TrialRecord::find(Label l) const {
  for (const auto& o : outcomes)
    if (o.label == l) return &o;
  return nullptr;
}

const LabelAggregate* ScenarioResult::find(Label l) const {
  for (const auto& a : aggregates)
    if (a.label == l) return &a;
  return nullptr;
}

TrialRecord run_trial(const ScenarioSpec& spec, std::size_t trial) {
  const ChannelParams params = spec.channel_params();
  const OfdmSpec ofdm = spec.ofdm();
  const std::size_t N = params.geometry.size();

  TrialRecord rec;
  rec.trial = trial;

  RandomStream ch_stream = stream_for(spec, trial, Purpose::channel);
  const ChannelRealization ch = draw_channel(params, ofdm, ch_stream);
  rec.words_drawn[static_cast<std::size_t>(Purpose::channel)] = ch_stream.words_drawn();

  const FrequencyChannel fc = FrequencyChannel::from(ch);
  if (ch.h_d.isZero(0.0) && ch.V.isZero(0.0)) {
    rec.degenerate = true;
    return rec;
  }
  rec.bound_bps = coherent_upper_bound(fc, ofdm);
  if (!(rec.bound_bps > 0.0)) {
    rec.degenerate = true;
    return rec;
  }

  const StmResult stm = stm_configure(ch);
  rec.m_star = stm.m_star;
  rec.direct_tap_zero = stm.direct_tap_zero;

  // One calibrated imperfection draw shared by every impaired label.
  const RVector base = spec.stm_init ? stm.config.theta : RVector::Zero(static_cast<Eigen::Index>(N));
  RandomStream psn_stream = stream_for(spec, trial, Purpose::psn);
  const CVector imperfect =
      compose_imperfections(base, params.geometry, spec.deformation(), spec.psn(), psn_stream);
  rec.words_drawn[static_cast<std::size_t>(Purpose::psn)] = psn_stream.words_drawn();

  auto evaluate = [&](const CVector& omega) {
    const double rate = water_filled_rate(combine(fc, omega), ofdm);
    return std::pair{rate, relative_rate(rate, rec.bound_bps)};
  };

  for (Label label : spec.labels) {
    LabelOutcome out{label};
    switch (label) {
      case Label::ideal_stm:
        std::tie(out.rate_bps, out.relative_rate) = evaluate(stm.config.omega);
        break;
      case Label::impaired_stm:
        std::tie(out.rate_bps, out.relative_rate) = evaluate(imperfect);
        break;
      case Label::compensated: {
        IterationObserver observer;
        if (spec.record_trace)
          observer = [&](std::size_t, const RVector& theta_bar, double) {
            rec.relative_trace.push_back(evaluate(apply_compensation(imperfect, theta_bar)).second);
          };
        const OptimizeResult opt = optimize(fc, imperfect, spec.optimizer, observer);
        std::tie(out.rate_bps, out.relative_rate) = evaluate(apply_compensation(imperfect, opt.theta_bar));
        out.iterations = opt.state.iter;
        rec.iterations_used = opt.state.iter;
        rec.final_objective = opt.objective;
        if (spec.record_trace) rec.objective_trace = opt.state.objective_trace;
        break;
      }
      case Label::random_config: {
        RandomStream s = stream_for(spec, trial, Purpose::random_config);
        std::tie(out.rate_bps, out.relative_rate) = evaluate(random_configure(N, s).omega);
        rec.words_drawn[static_cast<std::size_t>(Purpose::random_config)] = s.words_drawn();
        break;
      }
      case Label::random_compensator: {
        RandomStream s = stream_for(spec, trial, Purpose::random_compensator);
        std::tie(out.rate_bps, out.relative_rate) =
            evaluate(apply_compensation(imperfect, random_compensator(N, s)));
        rec.words_drawn[static_cast<std::size_t>(Purpose::random_compensator)] = s.words_drawn();
        break;
      }
    }
    rec.outcomes.push_back(out);
  }
  return rec;
}

ScenarioResult aggregate(const ScenarioSpec& spec, std::vector<TrialRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.trial < b.trial; });
  ScenarioResult res;
  for (Label label : spec.labels) {
    LabelAggregate agg{label};
    double sum = 0.0, sum_rate = 0.0, sum_iter = 0.0;
    for (const auto& r : records) {
      if (r.degenerate) continue;
      const LabelOutcome* o = r.find(label);
      if (!o) continue;
      ++agg.count;
      sum += o->relative_rate;
      sum_rate += o->rate_bps;
      sum_iter += static_cast<double>(o->iterations);
    }
    if (agg.count > 0) {
      const double n = static_cast<double>(agg.count);
      agg.mean_relative = sum / n;
      agg.mean_rate_bps = sum_rate / n;
      agg.mean_iterations = sum_iter / n;
      if (agg.count > 1) {
        double ss = 0.0;
        for (const auto& r : records) {
          if (r.degenerate) continue;
          if (const LabelOutcome* o = r.find(label)) ss += std::pow(o->relative_rate - agg.mean_relative, 2);
        }
        agg.stderr_relative = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      }
    }
    res.aggregates.push_back(agg);
  }

  std::size_t valid = 0;
  std::size_t trace_len = 0;
  for (const auto& r : records) {
    if (r.degenerate) {
      ++res.degenerate_trials;
      continue;
    }
    ++valid;
    trace_len = std::max(trace_len, r.relative_trace.size());
  }
  if (valid == 0) throw std::runtime_error("no valid trials in scenario '" + spec.name + "'");

  if (trace_len > 0) {
    res.mean_relative_trace.assign(trace_len, 0.0);
    std::size_t contributing = 0;
    for (const auto& r : records) {
      if (r.degenerate || r.relative_trace.empty()) continue;
      ++contributing;
      for (std::size_t i = 0; i < trace_len; ++i)
        res.mean_relative_trace[i] += r.relative_trace[std::min(i, r.relative_trace.size() - 1)];
    }
    for (auto& v : res.mean_relative_trace) v /= static_cast<double>(contributing);
  }
  res.records = std::move(records);
  return res;
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<TrialRecord> records(spec.trials);
  const std::size_t workers = std::min(spec.threads, spec.trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < spec.trials; ++t) records[t] = run_trial(spec, t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < spec.trials && !failed; t = next++) {
          try {
            records[t] = run_trial(spec, t);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return aggregate(spec, std::move(records));
}

std::vector<SweepPoint> sweep(const ScenarioSpec& base, std::string_view axis,
                              const std::vector<double>& values) {
  const auto& keys = sweepable_keys();
  if (std::find(keys.begin(), keys.end(), axis) == keys.end())
    throw std::invalid_argument("unknown sweep axis '" + std::string(axis) + "'");
  std::vector<SweepPoint> out;
  for (double v : values) {
    SweepPoint p;
    p.value = v;
    p.spec = base;
    p.spec.set_numeric(axis, v);
    p.result = run_scenario(p.spec);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace risopt
