#pragma once

#include <optional>

#include "risopt/channel.hpp"
#include "risopt/random.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// Phase-shift noise: omega_hat = eps * omega + v * sqrt(1 - eps^2), v real
/// standard normal per element. eps = 1 is noiseless, eps = 0 is pure noise.
/// With unit_modulus the realized coefficient is exp(j arg omega_hat): the
/// reflector stays a passive phase shifter and only its phase is perturbed.
/// Otherwise omega_hat is realized as is, magnitude included.
struct PsnSpec {
  double epsilon = 1.0;
  bool unit_modulus = true;
  void validate() const;
};

enum class RowMode { floor, round };

/// Surface deformation with peak height h_max and peak-count parameter k.
struct DeformationSpec {
  double h_max = 0.0;           // m
  double k = 0.0;               // rad
  double elevation_a = 0.0;     // LOS elevation of arrival, rad
  double elevation_b = 0.0;     // LOS elevation of departure, rad
  RowMode row_mode = RowMode::floor;
  void validate() const;
};

CVector apply_psn(const CVector& omega, const PsnSpec& spec, RandomStream& s);

/// Per-element phase offsets (rad). psi_n = row(n) / (n_cols - 1), where
/// row(n) is floor(n / n_cols) or, in round mode, n / n_cols rounded half
/// away from zero.
RVector deformation_offsets(const RisGeometry& geom, const DeformationSpec& spec);

RVector apply_deformation(const RVector& theta, const RVector& offsets);

/// exp(j theta) for a phase vector.
CVector unit_phasors(const RVector& theta);

/// Deformation first (programmed phases), then PSN (realized coefficients).
/// Either stage may be absent. apply_psn itself is always the literal model;
/// the unit-modulus projection happens here.
CVector compose_imperfections(const RVector& theta_ideal, const RisGeometry& geom,
                              const std::optional<DeformationSpec>& deform,
                              const std::optional<PsnSpec>& psn, RandomStream& s);

}  // namespace risopt
