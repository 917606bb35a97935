#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "risopt/config.hpp"
#include "risopt/optim.hpp"
#include "risopt/random.hpp"

namespace risopt::cli {

namespace {

ScenarioSpec prepare(const RunOptions& opts) {
  ScenarioSpec spec = load_scenario(opts.config_path);
  if (opts.full_scale) spec.apply_full_scale();
  if (opts.seed) spec.seed = *opts.seed;
  if (opts.trials) spec.trials = *opts.trials;
  if (opts.trace) spec.record_trace = true;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("command line", e.what());
  }
  return spec;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + ".csv")).string();
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int cmd_run(const RunOptions& opts) {
  return guarded([&] {
    const ScenarioSpec spec = prepare(opts);
    const ScenarioResult res = run_scenario(spec);
    auto out = open_out(opts.out_path);
    write_trial_csv(out, spec, res);
    if (spec.record_trace) {
      auto trace = open_out(sibling(opts.out_path, "_trace"));
      write_trace_csv(trace, res);
    }
    if (res.degenerate_trials > 0)
      std::cerr << "skipped " << res.degenerate_trials << " degenerate trial(s)\n";
  });
}

int cmd_sweep(const RunOptions& opts, const std::string& axis, const std::vector<double>& values) {
  return guarded([&] {
    const ScenarioSpec spec = prepare(opts);
    const auto& keys = sweepable_keys();
    if (std::find(keys.begin(), keys.end(), axis) == keys.end())
      throw ConfigError("--axis", "unknown sweep axis '" + axis + "'");
    if (values.empty()) throw ConfigError("--values", "at least one value is required");
    std::vector<SweepPoint> points;
    try {
      // Validate every point before running any of them.
      for (double v : values) {
        ScenarioSpec probe = spec;
        probe.set_numeric(axis, v);
        probe.validate();
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--values", e.what());
    }
    points = sweep(spec, axis, values);
    auto out = open_out(opts.out_path);
    write_sweep_csv(out, axis, points);
    auto trials = open_out(sibling(opts.out_path, "_trials"));
    bool header = true;
    for (const auto& p : points) {
      write_trial_csv(trials, p.spec, p.result, header);
      header = false;
    }
  });
}

int cmd_gradcheck(std::size_t n, std::size_t k, double tol, std::uint64_t seed) {
  if (n < 1 || k < 1 || n > 64 || k > 64) {
    std::cerr << "config error: gradcheck needs 1 <= n, k <= 64\n";
    return kExitConfig;
  }
  RandomStream s = make_stream(seed, 0);
  auto gaussian = [&] { return cplx(s.standard_normal(), s.standard_normal()) / std::sqrt(2.0); };
  FrequencyChannel fc;
  const auto K = static_cast<Eigen::Index>(k);
  const auto N = static_cast<Eigen::Index>(n);
  fc.direct = CVector::NullaryExpr(K, [&] { return gaussian(); });
  fc.composite = CMatrix::NullaryExpr(K, N, [&] { return gaussian(); });
  const CVector omega_prime = CVector::NullaryExpr(N, [&] { return gaussian(); });
  const RVector theta_bar = RVector::NullaryExpr(N, [&] { return s.uniform(-3.14159, 3.14159); });

  const RVector g = gradient(fc, omega_prime, theta_bar);
  const RVector fd = finite_difference_gradient(fc, omega_prime, theta_bar, 1e-5);
  const double err = max_relative_error(g, fd);
  std::cout << "n=" << n << " k=" << k << " seed=" << seed
            << " max_relative_error=" << format_real(err) << " tol=" << format_real(tol) << '\n';
  return err <= tol ? kExitOk : kExitRuntime;
}

}  // namespace risopt::cli
