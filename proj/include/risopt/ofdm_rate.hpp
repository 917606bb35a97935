#pragma once

#include <cstddef>

#include "risopt/types.hpp"

namespace risopt {

struct ChannelRealization;

struct OfdmSpec {
  std::size_t subcarriers = 128;    // K
  std::size_t taps = 16;            // M
  double bandwidth_hz = 10.5e6;     // B
  double noise_psd_w_hz = 3.981071705534973e-20;  // N0, -164 dBm/Hz
  double mean_power_w = 1.0;        // P = <p>, 30 dBm

  /// xi = K + M - 1, the cyclic-prefix-aware symbol length.
  double symbol_length() const { return static_cast<double>(subcarriers + taps - 1); }
  double noise_power() const { return bandwidth_hz * noise_psd_w_hz; }
  void validate() const;
};

double dbm_to_watt(double dbm);

/// H[i] = sum_j taps[j] exp(-j 2 pi i j / K), K = taps.size().
CVector dft_response(const CVector& taps);

/// Frequency-domain view of a realization: the direct response and the
/// per-reflector composite responses (K x N). Computed once per realization.
struct FrequencyChannel {
  CVector direct;
  CMatrix composite;

  static FrequencyChannel from(const ChannelRealization& ch);
  std::size_t subcarriers() const { return static_cast<std::size_t>(direct.size()); }
  std::size_t reflectors() const { return static_cast<std::size_t>(composite.cols()); }
};

struct SubcarrierResponse {
  CVector combined;
  CVector direct;
  CMatrix composite_per_element;
};

/// combined[i] = direct[i] + sum_n composite[i][n] * omega[n]
CVector combine(const FrequencyChannel& fc, const CVector& omega);
SubcarrierResponse combined_response(const ChannelRealization& ch, const CVector& omega);

/// Water-filling over subcarrier gains |H_i|^2 with mean power P.
RVector water_fill(const RVector& gain_sq, const OfdmSpec& spec);

/// R = (B / xi) sum_i log2(1 + p_i |combined_i|^2 / (B N0)), bit/s.
double achievable_rate(const CVector& combined, const RVector& power, const OfdmSpec& spec);
double achievable_rate(const SubcarrierResponse& resp, const RVector& power, const OfdmSpec& spec);

/// Rate with water-filling on the response's own gains.
double water_filled_rate(const CVector& combined, const OfdmSpec& spec);

/// Per-subcarrier magnitudes |direct_i| + sum_n |composite_in| (unit-modulus
/// coherent combining).
RVector coherent_magnitudes(const FrequencyChannel& fc);

double coherent_upper_bound(const FrequencyChannel& fc, const OfdmSpec& spec);
double coherent_upper_bound(const ChannelRealization& ch, const OfdmSpec& spec);

/// actual / bound.
double relative_rate(double actual, double bound);

}  // namespace risopt
