#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "risopt/random.hpp"
#include "risopt/types.hpp"

namespace risopt {

struct OfdmSpec;

/// Planar RIS in the xz-plane, outward normal +y. Elements are indexed
/// row-major: n = r * n_cols + c.
struct RisGeometry {
  std::size_t n_rows = 10;
  std::size_t n_cols = 10;
  double d_h = 0.025;  // m
  double d_v = 0.025;  // m
  double f_c = 3.0e9;  // Hz

  std::size_t size() const { return n_rows * n_cols; }
  double wavelength() const { return kSpeedOfLight / f_c; }
  Vec3 element_position(std::size_t n) const;
  void validate() const;

  /// Square-ish array with element spacing d_over_lambda * wavelength.
  static RisGeometry make(std::size_t rows, std::size_t cols, double d_over_lambda, double f_c);
};

struct PathAngles {
  double azimuth = 0.0;    // rad, [-pi, pi]
  double elevation = 0.0;  // rad, [-pi/2, pi/2]
};

/// (sin az cos el, cos az cos el, sin el)
Vec3 direction(const PathAngles& a);

/// Angles of the unit vector pointing from the RIS center towards `p`.
PathAngles angles_towards(const Vec3& p);

struct PathSet {
  std::vector<double> delays;  // s
  std::vector<cplx> gains;
  std::vector<PathAngles> angles;  // empty for the direct channel
  double reference_delay = 0.0;    // mapped onto tap 0
  std::optional<std::size_t> los_index;

  std::size_t size() const { return delays.size(); }
};

struct ChannelRealization {
  CVector h_d;  // K, entries >= taps are zero
  CMatrix V;    // N x K, columns >= taps are zero
  std::size_t taps = 0;

  std::size_t reflectors() const { return static_cast<std::size_t>(V.rows()); }
  std::size_t subcarriers() const { return static_cast<std::size_t>(h_d.size()); }
};

/// Stochastic propagation parameters. Large-scale gains are free-space for
/// the LOS legs; the direct channel is NLOS only.
struct ChannelParams {
  RisGeometry geometry;
  Vec3 ap_pos{-25.0, 43.30127018922193, 0.0};  // 50 m from the RIS
  Vec3 ue_pos{10.0, 17.320508075688775, 0.0};  // 20 m from the RIS
  std::size_t paths_ap_ris = 21;               // L_a
  std::size_t paths_ris_ue = 11;               // L_b
  std::size_t paths_direct = 20;               // L_d
  double kappa_nlos = 0.1;    // cascade NLOS power / LOS power
  double direct_rel_db = -20; // direct power / (|g_a,LOS| |g_b,LOS|)^2
  double azimuth_spread_deg = 40.0;
  double elevation_spread_deg = 10.0;

  double ap_ris_delay() const;
  double ris_ue_delay() const;
  double direct_delay() const;
  double los_gain_ap_ris() const;
  double los_gain_ris_ue() const;
  double direct_power() const;
  void validate() const;
};

/// Half-width of the band-limited delay kernel, in samples.
inline constexpr int kKernelHalfWidth = 6;

/// Sinc with a raised-cosine taper on the outer half of [-W, W]; zero beyond.
double windowed_sinc(double x);

/// Taps needed for a delay spread (s) at bandwidth B: ceil(B*spread) + 2W + 1.
std::size_t required_taps(double delay_spread, double bandwidth_hz);

/// Tap count covering the worst-case spread of both channels.
std::size_t required_taps(const ChannelParams& params, double bandwidth_hz);

PathSet sample_direct_paths(const ChannelParams& params, RandomStream& s);

struct CascadePaths {
  PathSet ap_ris;
  PathSet ris_ue;
};
CascadePaths sample_cascade_paths(const ChannelParams& params, RandomStream& s);

/// Phase (2pi/lambda) p_n . (u(in) + u(out)) of element n.
double array_phase(const RisGeometry& geom, std::size_t n, const PathAngles& in,
                   const PathAngles& out);

CVector synthesize_direct_taps(const PathSet& paths, const OfdmSpec& ofdm, double f_c);

CMatrix synthesize_composite_taps(const PathSet& ap_ris, const PathSet& ris_ue,
                                  const RisGeometry& geom, const OfdmSpec& ofdm);

/// Draws paths from `s` (cascade first, then direct) and synthesizes taps.
ChannelRealization draw_channel(const ChannelParams& params, const OfdmSpec& ofdm,
                                RandomStream& s);

}  // namespace risopt
