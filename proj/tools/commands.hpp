#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace risopt::cli {

// Exit codes: 0 success, 1 runtime failure, 2 configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  bool trace = false;
  bool full_scale = false;
};

int cmd_run(const RunOptions& opts);

/// Writes aggregate rows to out_path and the per-trial rows to
/// <stem>_trials.csv next to it.
int cmd_sweep(const RunOptions& opts, const std::string& axis, const std::vector<double>& values);

int cmd_gradcheck(std::size_t n, std::size_t k, double tol, std::uint64_t seed);

}  // namespace risopt::cli
