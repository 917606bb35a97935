#include "risopt/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "risopt/ris_config.hpp"

namespace risopt {

namespace {

void check_dims(const FrequencyChannel& fc, Eigen::Index n) {
  if (fc.composite.cols() != n) throw std::invalid_argument("configuration length does not match reflector count");
}

void check_finite(const RVector& grad) {
  if (!grad.allFinite()) throw std::domain_error("gradient has non-finite entries");
}

}  // namespace

void OptimizerOptions::validate() const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("learning rate must be non-negative");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (stop_window < 1) throw std::invalid_argument("stop_window must be at least 1");
  if (!(stop_rel_tol >= 0.0)) throw std::invalid_argument("stop_rel_tol must be non-negative");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw std::invalid_argument("ADAM betas must lie in [0, 1)");
  if (!(adam_eps > 0.0)) throw std::invalid_argument("adam_eps must be positive");
  if (!(curvature >= 0.0)) throw std::invalid_argument("curvature must be non-negative");
}

CompensationState CompensationState::zeros(std::size_t n) {
  CompensationState s;
  const auto len = static_cast<Eigen::Index>(n);
  s.theta_bar = RVector::Zero(len);
  s.first_moment = RVector::Zero(len);
  s.second_moment = RVector::Zero(len);
  return s;
}

CVector apply_compensation(const CVector& omega_prime, const RVector& theta_bar) {
  if (omega_prime.size() != theta_bar.size()) throw std::invalid_argument("apply_compensation: length mismatch");
  CVector out(omega_prime.size());
  for (Eigen::Index n = 0; n < out.size(); ++n) out[n] = omega_prime[n] * std::polar(1.0, theta_bar[n]);
  return out;
}

double objective(const FrequencyChannel& fc, const CVector& omega_bar) {
  check_dims(fc, omega_bar.size());
  return -combine(fc, omega_bar).squaredNorm();
}

RVector gradient(const FrequencyChannel& fc, const CVector& omega_prime, const RVector& theta_bar) {
  check_dims(fc, omega_prime.size());
  const CVector omega_bar = apply_compensation(omega_prime, theta_bar);
  const CVector c = combine(fc, omega_bar);
  // sum_i conj(c_i) v_in = conj((V^H c)_n)
  const CVector vh_c = fc.composite.adjoint() * c;
  RVector g(omega_bar.size());
  for (Eigen::Index n = 0; n < g.size(); ++n) g[n] = 2.0 * std::imag(std::conj(vh_c[n]) * omega_bar[n]);
  return g;
}

RVector finite_difference_gradient(const FrequencyChannel& fc, const CVector& omega_prime,
                                   const RVector& theta_bar, double step) {
  RVector g(theta_bar.size());
  RVector probe = theta_bar;
  for (Eigen::Index n = 0; n < g.size(); ++n) {
    probe[n] = theta_bar[n] + step;
    const double up = objective(fc, apply_compensation(omega_prime, probe));
    probe[n] = theta_bar[n] - step;
    const double down = objective(fc, apply_compensation(omega_prime, probe));
    probe[n] = theta_bar[n];
    g[n] = (up - down) / (2.0 * step);
  }
  return g;
}

double max_relative_error(const RVector& analytic, const RVector& reference) {
  if (analytic.size() != reference.size()) throw std::invalid_argument("max_relative_error: length mismatch");
  if (analytic.size() == 0) return 0.0;
  const double scale = std::max(reference.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (analytic - reference).cwiseAbs().maxCoeff() / scale;
}

void gd_step(CompensationState& state, const RVector& grad, const OptimizerOptions& opts) {
  check_finite(grad);
  if (grad.size() != state.theta_bar.size()) throw std::invalid_argument("gd_step: length mismatch");
  state.theta_bar -= opts.gamma * grad;
  ++state.iter;
}

void adam_step(CompensationState& state, const RVector& grad, const OptimizerOptions& opts) {
  check_finite(grad);
  if (grad.size() != state.theta_bar.size() || state.first_moment.size() != grad.size() ||
      state.second_moment.size() != grad.size())
    throw std::invalid_argument("adam_step: length mismatch");
  const double t = static_cast<double>(state.iter + 1);
  state.first_moment = opts.beta1 * state.first_moment + (1.0 - opts.beta1) * grad;
  state.second_moment = opts.beta2 * state.second_moment + (1.0 - opts.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(opts.beta1, t);
  const double c2 = 1.0 - std::pow(opts.beta2, t);
  const RVector m_hat = state.first_moment / c1;
  const RVector v_hat = state.second_moment / c2;
  state.theta_bar.array() -= opts.gamma * m_hat.array() / (v_hat.array().sqrt() + opts.adam_eps);
  ++state.iter;
}

double objective_scale(const FrequencyChannel& fc, const CVector& omega_prime, double curvature) {
  check_dims(fc, omega_prime.size());
  if (curvature == 0.0 || omega_prime.size() == 0) return 1.0;
  // At coherent alignment the diagonal curvature of J for reflector n is
  // 2 |omega'_n| sum_i b_i |v_in|, b_i being the coherent magnitude.
  const RVector mag = omega_prime.cwiseAbs();
  const Eigen::MatrixXd abs_v = fc.composite.cwiseAbs();
  const RVector coherent = fc.direct.cwiseAbs() + abs_v * mag;
  const RVector diag = 2.0 * mag.cwiseProduct(abs_v.transpose() * coherent);
  const double mean = diag.mean();
  if (!(mean > 0.0)) return 1.0;
  return mean / curvature;
}

OptimizeResult optimize(const FrequencyChannel& fc, const CVector& omega_prime,
                        const OptimizerOptions& opts, const IterationObserver& observer) {
  opts.validate();
  check_dims(fc, omega_prime.size());
  const auto n = static_cast<std::size_t>(omega_prime.size());
  const double scale = objective_scale(fc, omega_prime, opts.curvature);

  OptimizeResult r;
  r.state = CompensationState::zeros(n);
  auto& st = r.state;
  double j = objective(fc, omega_prime);
  st.objective_trace.push_back(j);
  if (observer) observer(0, st.theta_bar, j);
  RVector best = st.theta_bar;
  double best_j = j;

  while (st.iter < opts.max_iters) {
    const RVector g = gradient(fc, omega_prime, st.theta_bar) / scale;
    if (opts.method == Method::gd)
      gd_step(st, g, opts);
    else
      adam_step(st, g, opts);
    j = objective(fc, apply_compensation(omega_prime, st.theta_bar));
    st.objective_trace.push_back(j);
    if (observer) observer(st.iter, st.theta_bar, j);
    if (j < best_j) {
      best_j = j;
      best = st.theta_bar;
    }
    if (st.iter >= opts.stop_window) {
      const double past = st.objective_trace[st.iter - opts.stop_window];
      const double denom = std::abs(past);
      const double change = std::abs(j - past);
      if (denom > 0.0 ? change / denom < opts.stop_rel_tol : change == 0.0) {
        r.converged = true;
        break;
      }
    }
  }
  r.theta_bar = wrap_phases(best);
  r.objective = best_j;
  return r;
}

}  // namespace risopt
