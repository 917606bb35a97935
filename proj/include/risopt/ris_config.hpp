#pragma once

#include <cstddef>
#include <string_view>

#include "risopt/channel.hpp"
#include "risopt/random.hpp"
#include "risopt/types.hpp"

namespace risopt {

enum class ConfigLabel { ideal_stm, random, imperfect, compensated };

struct PhaseConfig {
  RVector theta;  // wrapped to [-pi, pi]
  CVector omega;  // exp(j theta)
  ConfigLabel label = ConfigLabel::ideal_stm;

  static PhaseConfig from_phases(RVector theta, ConfigLabel label);
};

/// Wraps to [-pi, pi].
double wrap_phase(double x);
RVector wrap_phases(const RVector& x);

/// Strongest-tap maximization result. tap_metric[m] is the aligned power
/// (|h_d[m]| + sum_n |V[n][m]|)^2 of tap m.
struct StmResult {
  PhaseConfig config;
  std::size_t m_star = 0;
  RVector tap_metric;
  bool direct_tap_zero = false;  // arg(h_d[m*]) taken as 0
};

/// Aligns every reflector with the direct channel at the strongest tap.
/// Ties go to the smallest tap. Throws std::domain_error if every tap of
/// both channels is zero.
StmResult stm_configure(const ChannelRealization& ch);

/// theta_n ~ U[-pi, pi) i.i.d.
PhaseConfig random_configure(std::size_t n, RandomStream& s);

/// Compensation phases ~ U[-pi, pi) i.i.d.; the lower-bound compensator.
RVector random_compensator(std::size_t n, RandomStream& s);

}  // namespace risopt
