#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "risopt/ofdm_rate.hpp"
#include "risopt/types.hpp"

namespace risopt {

enum class Method { gd, adam };

struct OptimizerOptions {
  Method method = Method::gd;
  double gamma = 1e-2;
  std::size_t max_iters = 200;
  double stop_rel_tol = 1e-6;
  std::size_t stop_window = 5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Mean per-reflector curvature of the normalized objective at coherent
  /// alignment. 0 runs on the raw objective.
  double curvature = 25.0;

  void validate() const;
};

struct CompensationState {
  RVector theta_bar;
  std::size_t iter = 0;
  std::vector<double> objective_trace;
  RVector first_moment;
  RVector second_moment;

  static CompensationState zeros(std::size_t n);
};

/// omega_bar_n = omega_prime_n * exp(j theta_bar_n); magnitudes are kept.
CVector apply_compensation(const CVector& omega_prime, const RVector& theta_bar);

/// J = -sum_i |combined_i|^2 over all subcarriers.
double objective(const FrequencyChannel& fc, const CVector& omega_bar);

/// dJ/dtheta_bar_n = 2 sum_i Im{ conj(c_i) v_in omega_bar_n }, with c the
/// combined response at omega_bar = apply_compensation(omega_prime, theta_bar).
RVector gradient(const FrequencyChannel& fc, const CVector& omega_prime, const RVector& theta_bar);

/// Central differences of J in theta_bar; test oracle and `gradcheck`.
RVector finite_difference_gradient(const FrequencyChannel& fc, const CVector& omega_prime,
                                   const RVector& theta_bar, double step = 1e-5);

/// Max over n of |g_n - fd_n| / max(|fd|_inf, tiny).
double max_relative_error(const RVector& analytic, const RVector& reference);

/// theta_bar -= gamma * grad; iter += 1.
void gd_step(CompensationState& state, const RVector& grad, const OptimizerOptions& opts);

/// Bias-corrected ADAM update; iter += 1.
void adam_step(CompensationState& state, const RVector& grad, const OptimizerOptions& opts);

/// Scale s with which the optimizer minimizes J / s. See OptimizerOptions::curvature.
double objective_scale(const FrequencyChannel& fc, const CVector& omega_prime, double curvature);

struct OptimizeResult {
  RVector theta_bar;  // best iterate, wrapped to [-pi, pi]
  double objective = 0.0;  // raw J at theta_bar
  CompensationState state;  // trace holds raw J per iterate
  bool converged = false;   // stopped on the relative-improvement window
};

/// Called after every iterate (including iterate 0) with (iter, theta_bar, J).
using IterationObserver = std::function<void(std::size_t, const RVector&, double)>;

/// Gradient iterations on theta_bar from zero until max_iters or until the
/// relative objective change over stop_window iterations drops below
/// stop_rel_tol. The imperfect configuration omega_prime is held fixed.
OptimizeResult optimize(const FrequencyChannel& fc, const CVector& omega_prime,
                        const OptimizerOptions& opts, const IterationObserver& observer = {});

}  // namespace risopt
