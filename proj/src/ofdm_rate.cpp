#include "risopt/ofdm_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "risopt/channel.hpp"

namespace risopt {

namespace {

constexpr int kWaterFillIterations = 200;
constexpr double kWaterFillTol = 1e-9;

// Twiddle matrix W(i, m) = exp(-j 2 pi i m / K) for the first `taps` columns.
CMatrix twiddles(std::size_t K, std::size_t taps) {
  const auto k = static_cast<Eigen::Index>(K);
  const auto m = static_cast<Eigen::Index>(taps);
  CMatrix W(k, m);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      // Reduce i*j mod K first so the angle stays exact for large K.
      const auto r = static_cast<double>((i * j) % k);
      W(i, j) = std::polar(1.0, -2.0 * std::numbers::pi * r / static_cast<double>(K));
    }
  return W;
}

}  // namespace

void OfdmSpec::validate() const {
  if (taps < 1 || subcarriers < taps) throw std::invalid_argument("OFDM spec requires K >= M >= 1");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(noise_psd_w_hz > 0.0)) throw std::invalid_argument("noise density must be positive");
  if (!(mean_power_w > 0.0)) throw std::invalid_argument("transmit power must be positive");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

CVector dft_response(const CVector& taps) {
  const auto K = static_cast<std::size_t>(taps.size());
  if (K == 0) throw std::invalid_argument("dft_response: empty input");
  return twiddles(K, K) * taps;
}

FrequencyChannel FrequencyChannel::from(const ChannelRealization& ch) {
  const auto K = ch.subcarriers();
  if (K == 0) throw std::invalid_argument("channel has no subcarriers");
  if (static_cast<std::size_t>(ch.V.cols()) != K && ch.V.rows() != 0)
    throw std::invalid_argument("V must be N x K");
  const std::size_t M = ch.taps == 0 ? K : std::min(ch.taps, K);
  const CMatrix W = twiddles(K, M);
  FrequencyChannel fc;
  fc.direct = W * ch.h_d.head(static_cast<Eigen::Index>(M));
  if (ch.V.rows() == 0)
    fc.composite = CMatrix::Zero(static_cast<Eigen::Index>(K), 0);
  else
    fc.composite = W * ch.V.leftCols(static_cast<Eigen::Index>(M)).transpose();
  return fc;
}

CVector combine(const FrequencyChannel& fc, const CVector& omega) {
  if (omega.size() != fc.composite.cols())
    throw std::invalid_argument("configuration length does not match reflector count");
  return fc.direct + fc.composite * omega;
}

SubcarrierResponse combined_response(const ChannelRealization& ch, const CVector& omega) {
  FrequencyChannel fc = FrequencyChannel::from(ch);
  SubcarrierResponse r;
  r.combined = combine(fc, omega);
  r.direct = std::move(fc.direct);
  r.composite_per_element = std::move(fc.composite);
  return r;
}

RVector water_fill(const RVector& gain_sq, const OfdmSpec& spec) {
  const auto K = gain_sq.size();
  if (K == 0) throw std::invalid_argument("water_fill: no subcarriers");
  if (!(spec.mean_power_w > 0.0) || !(spec.noise_power() > 0.0))
    throw std::invalid_argument("water_fill: power and noise must be positive");
  const double noise = spec.noise_power();
  RVector floor_level = RVector::Constant(K, std::numeric_limits<double>::infinity());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index i = 0; i < K; ++i) {
    const double g = gain_sq[i];
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("water_fill: gains must be finite and >= 0");
    if (g > 0.0) {
      floor_level[i] = noise / g;
      lo = std::min(lo, floor_level[i]);
      hi = std::max(hi, floor_level[i]);
    }
  }
  if (!std::isfinite(lo)) throw std::domain_error("water_fill: all subcarrier gains are zero");

  const double total = static_cast<double>(K) * spec.mean_power_w;
  auto filled = [&](double mu) { return (mu - floor_level.array()).max(0.0).sum(); };

  hi += total;
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < kWaterFillIterations; ++it) {
    mu = 0.5 * (lo + hi);
    const double f = filled(mu);
    if (std::abs(f - total) <= kWaterFillTol * total) break;
    (f < total ? lo : hi) = mu;
  }

  // Solve the water level exactly on the active set found by bisection.
  double active_sum = 0.0;
  Eigen::Index active = 0;
  for (Eigen::Index i = 0; i < K; ++i)
    if (floor_level[i] < mu) {
      active_sum += floor_level[i];
      ++active;
    }
  if (active > 0) {
    const double exact = (total + active_sum) / static_cast<double>(active);
    if (std::abs(filled(exact) - total) <= std::abs(filled(mu) - total)) mu = exact;
  }
  return (mu - floor_level.array()).max(0.0).matrix();
}

double achievable_rate(const CVector& combined, const RVector& power, const OfdmSpec& spec) {
  if (combined.size() != power.size()) throw std::invalid_argument("achievable_rate: length mismatch");
  if ((power.array() < 0.0).any()) throw std::invalid_argument("achievable_rate: negative power");
  const double noise = spec.noise_power();
  double bits = 0.0;
  for (Eigen::Index i = 0; i < combined.size(); ++i)
    bits += std::log1p(power[i] * std::norm(combined[i]) / noise);
  return spec.bandwidth_hz / spec.symbol_length() * bits / std::numbers::ln2;
}

double achievable_rate(const SubcarrierResponse& resp, const RVector& power, const OfdmSpec& spec) {
  return achievable_rate(resp.combined, power, spec);
}

double water_filled_rate(const CVector& combined, const OfdmSpec& spec) {
  const RVector g = combined.cwiseAbs2();
  if (!(g.array() > 0.0).any()) return 0.0;
  return achievable_rate(combined, water_fill(g, spec), spec);
}

RVector coherent_magnitudes(const FrequencyChannel& fc) {
  RVector m = fc.direct.cwiseAbs();
  if (fc.composite.cols() > 0) m += fc.composite.cwiseAbs().rowwise().sum();
  return m;
}

double coherent_upper_bound(const FrequencyChannel& fc, const OfdmSpec& spec) {
  const RVector mag = coherent_magnitudes(fc);
  const CVector as_complex = mag.cast<cplx>();
  return water_filled_rate(as_complex, spec);
}

double coherent_upper_bound(const ChannelRealization& ch, const OfdmSpec& spec) {
  return coherent_upper_bound(FrequencyChannel::from(ch), spec);
}

double relative_rate(double actual, double bound) {
  if (!(bound > 0.0)) throw std::domain_error("relative_rate: bound must be positive");
  return actual / bound;
}

}  // namespace risopt
