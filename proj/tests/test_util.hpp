#pragma once

#include <cmath>
#include <numbers>

#include "risopt/channel.hpp"
#include "risopt/ofdm_rate.hpp"
#include "risopt/random.hpp"

namespace risopt::testing {

inline constexpr double kPi = std::numbers::pi;

inline cplx gaussian(RandomStream& s) {
  return cplx(s.standard_normal(), s.standard_normal()) / std::sqrt(2.0);
}

inline CVector random_cvector(Eigen::Index n, RandomStream& s) {
  CVector v(n);
  for (auto& x : v) x = gaussian(s);
  return v;
}

inline CVector random_unit(Eigen::Index n, RandomStream& s) {
  CVector v(n);
  for (auto& x : v) x = std::polar(1.0, s.uniform(-kPi, kPi));
  return v;
}

/// Random tap-domain realization with the first `taps` columns filled.
inline ChannelRealization random_channel(std::size_t n, std::size_t k, std::size_t taps,
                                         RandomStream& s) {
  ChannelRealization ch;
  ch.taps = taps;
  ch.h_d = CVector::Zero(static_cast<Eigen::Index>(k));
  ch.V = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t m = 0; m < taps; ++m) {
    ch.h_d[static_cast<Eigen::Index>(m)] = gaussian(s);
    for (std::size_t r = 0; r < n; ++r) ch.V(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = gaussian(s);
  }
  return ch;
}

/// Naive DFT with a selectable twiddle sign, independent of dft_response.
inline CVector naive_dft(const CVector& x, double sign = -1.0) {
  const auto K = x.size();
  CVector out = CVector::Zero(K);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j)
      out[i] += x[j] * std::exp(cplx(0.0, sign * 2.0 * kPi * static_cast<double>(i * j) / static_cast<double>(K)));
  return out;
}

}  // namespace risopt::testing
