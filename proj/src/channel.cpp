#include "risopt/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "risopt/ofdm_rate.hpp"

namespace risopt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

double wrap_azimuth(double a) { return std::remainder(a, 2.0 * kPi); }

cplx circular_gaussian(RandomStream& s, double variance) {
  const double sigma = std::sqrt(variance / 2.0);
  const double re = s.standard_normal();
  const double im = s.standard_normal();
  return {sigma * re, sigma * im};
}

// Kernel weights of a path whose delay lands `offset` samples after tap 0.
// Normalized to unit energy over the full window support, so a path keeps
// its power wherever it falls between taps. Weights for negative taps are
// dropped (causal truncation).
struct DelayKernel {
  int first = 0;
  int count = 0;
  std::array<double, 2 * kKernelHalfWidth + 2> w{};
};

DelayKernel delay_kernel(double offset) {
  const double snapped = std::round(offset);
  if (std::abs(offset - snapped) < 1e-9) offset = snapped;

  DelayKernel k;
  const int lo = static_cast<int>(std::floor(offset)) - kKernelHalfWidth;
  double energy = 0.0;
  std::array<double, 2 * kKernelHalfWidth + 2> all{};
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    all[i] = windowed_sinc(static_cast<double>(lo + i) - offset);
    energy += all[i] * all[i];
  }
  const double norm = 1.0 / std::sqrt(energy);
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    const int m = lo + i;
    if (m < 0 || all[i] == 0.0) continue;
    if (k.count == 0) k.first = m;
    k.w[static_cast<std::size_t>(m - k.first)] = all[i] * norm;
    k.count = m - k.first + 1;
  }
  return k;
}

void check_offset(double offset, std::size_t taps) {
  if (!(offset >= -1e-9) || !std::isfinite(offset))
    throw std::domain_error("path delay precedes the channel reference delay");
  const double budget = static_cast<double>(taps) - 2.0 * kKernelHalfWidth - 1.0;
  if (offset > budget + 1e-9)
    throw std::domain_error("delay spread exceeds the tap budget M - 2W - 1");
}

PathSet sample_los_dominated(std::size_t count, double los_delay, double los_gain,
                             const PathAngles& los_angles, const ChannelParams& p,
                             RandomStream& s) {
  if (!(los_delay > 0.0)) throw std::invalid_argument("LOS delay must be positive");
  if (count < 1) throw std::invalid_argument("path count must be at least 1");
  PathSet set;
  set.reference_delay = los_delay;
  set.los_index = 0;
  set.delays.push_back(los_delay);
  set.gains.emplace_back(los_gain, 0.0);
  set.angles.push_back(los_angles);

  const double nlos_var =
      count > 1 ? p.kappa_nlos * los_gain * los_gain / static_cast<double>(count - 1) : 0.0;
  const double az = p.azimuth_spread_deg * kDeg;
  const double el = p.elevation_spread_deg * kDeg;
  for (std::size_t l = 1; l < count; ++l) {
    set.delays.push_back(s.uniform(los_delay, 2.0 * los_delay));
    PathAngles a;
    a.azimuth = wrap_azimuth(los_angles.azimuth + s.uniform(-az, az));
    a.elevation = std::clamp(los_angles.elevation + s.uniform(-el, el), -kPi / 2, kPi / 2);
    set.angles.push_back(a);
    // The LOS path stays strictly strongest: redraw the rare tail sample.
    cplx g = circular_gaussian(s, nlos_var);
    for (int tries = 0; std::abs(g) >= los_gain && tries < 64; ++tries)
      g = circular_gaussian(s, nlos_var);
    if (std::abs(g) >= los_gain) g *= 0.999 * los_gain / std::abs(g);
    set.gains.push_back(g);
  }
  return set;
}

}  // namespace

Vec3 RisGeometry::element_position(std::size_t n) const {
  if (n >= size()) throw std::out_of_range("element index out of range");
  const double r = static_cast<double>(n / n_cols);
  const double c = static_cast<double>(n % n_cols);
  return {(c - (static_cast<double>(n_cols) - 1.0) / 2.0) * d_h, 0.0,
          (r - (static_cast<double>(n_rows) - 1.0) / 2.0) * d_v};
}

void RisGeometry::validate() const {
  if (n_rows < 1 || n_cols < 1) throw std::invalid_argument("RIS needs at least one element");
  if (!(d_h > 0.0) || !(d_v > 0.0)) throw std::invalid_argument("element spacing must be positive");
  if (!(f_c > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
}

RisGeometry RisGeometry::make(std::size_t rows, std::size_t cols, double d_over_lambda,
                              double f_c) {
  RisGeometry g;
  g.n_rows = rows;
  g.n_cols = cols;
  g.f_c = f_c;
  g.d_h = g.d_v = d_over_lambda * g.wavelength();
  g.validate();
  return g;
}

Vec3 direction(const PathAngles& a) {
  return {std::sin(a.azimuth) * std::cos(a.elevation), std::cos(a.azimuth) * std::cos(a.elevation),
          std::sin(a.elevation)};
}

PathAngles angles_towards(const Vec3& p) {
  const double d = p.norm();
  if (!(d > 0.0)) throw std::invalid_argument("position coincides with the RIS center");
  return {std::atan2(p.x(), p.y()), std::asin(p.z() / d)};
}

double ChannelParams::ap_ris_delay() const { return ap_pos.norm() / kSpeedOfLight; }
double ChannelParams::ris_ue_delay() const { return ue_pos.norm() / kSpeedOfLight; }
double ChannelParams::direct_delay() const { return (ap_pos - ue_pos).norm() / kSpeedOfLight; }

double ChannelParams::los_gain_ap_ris() const {
  return geometry.wavelength() / (4.0 * kPi * ap_pos.norm());
}

double ChannelParams::los_gain_ris_ue() const {
  return geometry.wavelength() / (4.0 * kPi * ue_pos.norm());
}

double ChannelParams::direct_power() const {
  const double product = los_gain_ap_ris() * los_gain_ris_ue();
  return std::pow(10.0, direct_rel_db / 10.0) * product * product;
}

void ChannelParams::validate() const {
  geometry.validate();
  if (paths_ap_ris < 1 || paths_ris_ue < 1 || paths_direct < 1)
    throw std::invalid_argument("every channel needs at least one path");
  if (!(kappa_nlos >= 0.0)) throw std::invalid_argument("kappa_nlos must be non-negative");
  if (!(ap_ris_delay() > 0.0) || !(ris_ue_delay() > 0.0) || !(direct_delay() > 0.0))
    throw std::invalid_argument("AP, RIS and UE positions must be distinct");
}

double windowed_sinc(double x) {
  const double ax = std::abs(x);
  constexpr double W = kKernelHalfWidth;
  if (ax >= W) return 0.0;
  if (x == std::round(x)) return x == 0.0 ? 1.0 : 0.0;
  const double sinc = std::sin(kPi * x) / (kPi * x);
  if (ax <= W / 2) return sinc;
  return sinc * 0.5 * (1.0 + std::cos(kPi * (ax - W / 2) / (W / 2)));
}

std::size_t required_taps(double delay_spread, double bandwidth_hz) {
  if (!(delay_spread >= 0.0) || !(bandwidth_hz > 0.0))
    throw std::invalid_argument("required_taps: invalid spread or bandwidth");
  return static_cast<std::size_t>(std::ceil(bandwidth_hz * delay_spread)) + 2 * kKernelHalfWidth + 1;
}

std::size_t required_taps(const ChannelParams& params, double bandwidth_hz) {
  // Direct delays lie in [tau_d, 2 tau_d]; cascade delays in
  // [tau_a + tau_b, 2 (tau_a + tau_b)].
  const double spread = std::max(params.direct_delay(), params.ap_ris_delay() + params.ris_ue_delay());
  return required_taps(spread, bandwidth_hz);
}

PathSet sample_direct_paths(const ChannelParams& params, RandomStream& s) {
  const double tau = params.direct_delay();
  if (!(tau > 0.0)) throw std::invalid_argument("direct delay must be positive");
  if (params.paths_direct < 1) throw std::invalid_argument("L_d must be at least 1");
  PathSet set;
  const double var = params.direct_power() / static_cast<double>(params.paths_direct);
  for (std::size_t l = 0; l < params.paths_direct; ++l) {
    set.delays.push_back(s.uniform(tau, 2.0 * tau));
    set.gains.push_back(circular_gaussian(s, var));
  }
  set.reference_delay = *std::min_element(set.delays.begin(), set.delays.end());
  return set;
}

CascadePaths sample_cascade_paths(const ChannelParams& params, RandomStream& s) {
  CascadePaths out;
  out.ap_ris = sample_los_dominated(params.paths_ap_ris, params.ap_ris_delay(),
                                    params.los_gain_ap_ris(), angles_towards(params.ap_pos),
                                    params, s);
  out.ris_ue = sample_los_dominated(params.paths_ris_ue, params.ris_ue_delay(),
                                    params.los_gain_ris_ue(), angles_towards(params.ue_pos),
                                    params, s);
  return out;
}

double array_phase(const RisGeometry& geom, std::size_t n, const PathAngles& in,
                   const PathAngles& out) {
  const Vec3 p = geom.element_position(n);
  return 2.0 * kPi / geom.wavelength() * p.dot(direction(in) + direction(out));
}

CVector synthesize_direct_taps(const PathSet& paths, const OfdmSpec& ofdm, double f_c) {
  ofdm.validate();
  CVector h = CVector::Zero(static_cast<Eigen::Index>(ofdm.subcarriers));
  for (std::size_t l = 0; l < paths.size(); ++l) {
    const double offset = (paths.delays[l] - paths.reference_delay) * ofdm.bandwidth_hz;
    check_offset(offset, ofdm.taps);
    const cplx coef = paths.gains[l] * std::polar(1.0, -2.0 * kPi * f_c * paths.delays[l]);
    const DelayKernel k = delay_kernel(offset);
    for (int i = 0; i < k.count; ++i) h[k.first + i] += coef * k.w[static_cast<std::size_t>(i)];
  }
  return h;
}

CMatrix synthesize_composite_taps(const PathSet& ap_ris, const PathSet& ris_ue,
                                  const RisGeometry& geom, const OfdmSpec& ofdm) {
  geom.validate();
  ofdm.validate();
  const auto N = static_cast<Eigen::Index>(geom.size());
  const auto La = static_cast<Eigen::Index>(ap_ris.size());
  const auto Lb = static_cast<Eigen::Index>(ris_ue.size());
  if (ap_ris.angles.size() != ap_ris.size() || ris_ue.angles.size() != ris_ue.size())
    throw std::invalid_argument("cascade paths need per-path angles");

  // Array phase separates into an arrival and a departure factor.
  const double wavenumber = 2.0 * kPi / geom.wavelength();
  CMatrix arrive(N, La), depart(N, Lb);
  for (Eigen::Index n = 0; n < N; ++n) {
    const Vec3 p = geom.element_position(static_cast<std::size_t>(n));
    for (Eigen::Index l = 0; l < La; ++l)
      arrive(n, l) = std::polar(1.0, wavenumber * p.dot(direction(ap_ris.angles[l])));
    for (Eigen::Index l = 0; l < Lb; ++l)
      depart(n, l) = std::polar(1.0, wavenumber * p.dot(direction(ris_ue.angles[l])));
  }

  const double f_c = geom.f_c;
  const double reference = ap_ris.reference_delay + ris_ue.reference_delay;
  CMatrix V = CMatrix::Zero(N, static_cast<Eigen::Index>(ofdm.subcarriers));
  CVector steer(N);
  for (Eigen::Index a = 0; a < La; ++a) {
    for (Eigen::Index b = 0; b < Lb; ++b) {
      const double delay = ap_ris.delays[a] + ris_ue.delays[b];
      const double offset = (delay - reference) * ofdm.bandwidth_hz;
      check_offset(offset, ofdm.taps);
      const cplx coef = ap_ris.gains[a] * ris_ue.gains[b] * std::polar(1.0, -2.0 * kPi * f_c * delay);
      steer = coef * arrive.col(a).cwiseProduct(depart.col(b));
      const DelayKernel k = delay_kernel(offset);
      for (int i = 0; i < k.count; ++i) V.col(k.first + i) += k.w[static_cast<std::size_t>(i)] * steer;
    }
  }
  return V;
}

ChannelRealization draw_channel(const ChannelParams& params, const OfdmSpec& ofdm,
                                RandomStream& s) {
  params.validate();
  ofdm.validate();
  const CascadePaths cascade = sample_cascade_paths(params, s);
  const PathSet direct = sample_direct_paths(params, s);
  ChannelRealization ch;
  ch.taps = ofdm.taps;
  ch.V = synthesize_composite_taps(cascade.ap_ris, cascade.ris_ue, params.geometry, ofdm);
  ch.h_d = synthesize_direct_taps(direct, ofdm, params.geometry.f_c);
  return ch;
}

}  // namespace risopt
