#include "risopt/hwi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risopt {

void PsnSpec::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("PSN epsilon must lie in [0, 1]");
}

void DeformationSpec::validate() const {
  if (!(h_max >= 0.0)) throw std::invalid_argument("h_max must be non-negative");
  if (!std::isfinite(k)) throw std::invalid_argument("deformation k must be finite");
}

CVector apply_psn(const CVector& omega, const PsnSpec& spec, RandomStream& s) {
  spec.validate();
  for (Eigen::Index n = 0; n < omega.size(); ++n)
    if (std::abs(std::abs(omega[n]) - 1.0) > 1e-9)
      throw std::invalid_argument("apply_psn: configuration must be unit-modulus");
  const double spread = std::sqrt(1.0 - spec.epsilon * spec.epsilon);
  CVector out(omega.size());
  for (Eigen::Index n = 0; n < omega.size(); ++n)
    out[n] = spec.epsilon * omega[n] + s.standard_normal() * spread;
  return out;
}

RVector deformation_offsets(const RisGeometry& geom, const DeformationSpec& spec) {
  geom.validate();
  spec.validate();
  if (geom.n_cols < 2) throw std::invalid_argument("deformation needs n_cols >= 2");
  const auto N = static_cast<Eigen::Index>(geom.size());
  const double cols = static_cast<double>(geom.n_cols);
  const double scale = 2.0 * std::numbers::pi / geom.wavelength() * spec.h_max *
                       (std::cos(spec.elevation_a) + std::cos(spec.elevation_b));
  RVector out(N);
  for (Eigen::Index n = 0; n < N; ++n) {
    const double ratio = static_cast<double>(n) / cols;
    const double row = spec.row_mode == RowMode::floor ? std::floor(ratio) : std::round(ratio);
    out[n] = scale * std::sin(spec.k * row / (cols - 1.0));
  }
  return out;
}

RVector apply_deformation(const RVector& theta, const RVector& offsets) {
  if (theta.size() != offsets.size()) throw std::invalid_argument("apply_deformation: length mismatch");
  return theta + offsets;
}

CVector unit_phasors(const RVector& theta) {
  CVector out(theta.size());
  for (Eigen::Index n = 0; n < theta.size(); ++n) out[n] = std::polar(1.0, theta[n]);
  return out;
}

CVector compose_imperfections(const RVector& theta_ideal, const RisGeometry& geom,
                              const std::optional<DeformationSpec>& deform,
                              const std::optional<PsnSpec>& psn, RandomStream& s) {
  RVector theta = theta_ideal;
  if (deform) {
    if (static_cast<std::size_t>(theta.size()) != geom.size())
      throw std::invalid_argument("configuration length does not match the geometry");
    theta = apply_deformation(theta, deformation_offsets(geom, *deform));
  }
  CVector omega = unit_phasors(theta);
  if (psn) {
    omega = apply_psn(omega, *psn, s);
    if (psn->unit_modulus)
      for (auto& w : omega) w = std::polar(1.0, std::arg(w));
  }
  return omega;
}

}  // namespace risopt
