#include "risopt/ris_config.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "risopt/hwi.hpp"

namespace risopt {

namespace {
constexpr double kPi = std::numbers::pi;

RVector uniform_phases(std::size_t n, RandomStream& s) {
  if (n < 1) throw std::invalid_argument("reflector count must be at least 1");
  RVector theta(static_cast<Eigen::Index>(n));
  for (auto& t : theta) t = s.uniform(-kPi, kPi);
  return theta;
}
}  // namespace

double wrap_phase(double x) {
  const double r = std::remainder(x, 2.0 * kPi);
  return r;
}

RVector wrap_phases(const RVector& x) { return x.unaryExpr([](double v) { return wrap_phase(v); }); }

PhaseConfig PhaseConfig::from_phases(RVector theta, ConfigLabel label) {
  PhaseConfig c;
  c.theta = wrap_phases(theta);
  c.omega = unit_phasors(c.theta);
  c.label = label;
  return c;
}

StmResult stm_configure(const ChannelRealization& ch) {
  const std::size_t M = ch.taps;
  const auto N = ch.V.rows();
  if (M < 1 || M > ch.subcarriers()) throw std::invalid_argument("stm_configure: invalid tap count");
  if (N > 0 && static_cast<std::size_t>(ch.V.cols()) < M)
    throw std::invalid_argument("stm_configure: V has too few columns");

  StmResult r;
  r.tap_metric.resize(static_cast<Eigen::Index>(M));
  for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(M); ++m) {
    double mag = std::abs(ch.h_d[m]);
    if (N > 0) mag += ch.V.col(m).cwiseAbs().sum();
    r.tap_metric[m] = mag * mag;
  }
  Eigen::Index best = 0;
  for (Eigen::Index m = 1; m < r.tap_metric.size(); ++m)
    if (r.tap_metric[m] > r.tap_metric[best]) best = m;
  if (!(r.tap_metric[best] > 0.0)) throw std::domain_error("stm_configure: channel is identically zero");
  r.m_star = static_cast<std::size_t>(best);

  const cplx hd = ch.h_d[best];
  r.direct_tap_zero = hd == cplx(0.0, 0.0);
  const double ref = r.direct_tap_zero ? 0.0 : std::arg(hd);
  RVector theta(N);
  for (Eigen::Index n = 0; n < N; ++n) {
    const cplx v = ch.V(n, best);
    theta[n] = ref - (v == cplx(0.0, 0.0) ? 0.0 : std::arg(v));
  }
  r.config = PhaseConfig::from_phases(std::move(theta), ConfigLabel::ideal_stm);
  return r;
}

PhaseConfig random_configure(std::size_t n, RandomStream& s) {
  return PhaseConfig::from_phases(uniform_phases(n, s), ConfigLabel::random);
}

RVector random_compensator(std::size_t n, RandomStream& s) { return uniform_phases(n, s); }

}  // namespace risopt
