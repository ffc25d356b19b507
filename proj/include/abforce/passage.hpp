#pragma once

#include "abforce/electron_beam.hpp"
#include "abforce/solenoid.hpp"

// Geometry of one beam passage: the electron travels along x at constant
// impact parameter y_e from the solenoid axis (the solenoid lies along z
// through the origin). y_e > 0 and y_e < 0 label the two interferometer
// arms; the model below is only meaningful when the path stays outside the
// solenoid body.

namespace abforce {

enum class Side { upper, lower };

struct PassageGeometry {
  double impact_parameter;  // m, signed, never zero

  /// Throws std::domain_error if impact_parameter_m == 0 (on-axis paths are
  /// outside the model's domain).
  static PassageGeometry at(double impact_parameter_m);

  Side side() const { return impact_parameter > 0.0 ? Side::upper : Side::lower; }

  /// True when the path clears the solenoid body: |y_e| > radius.
  bool passes_outside(const Solenoid& s) const;
};

/// Dimensionless expansion parameter of the displacement/phase series:
///   epsilon = flux * e / (2 pi m v0 |y_e|),
/// the peak fractional speed perturbation along the passage. The series
/// results are quantitatively trustworthy for epsilon well below ~0.1.
struct PerturbationStrength {
  double value;

  static constexpr double regime_bound = 0.1;

  bool in_expansion_regime() const { return value < regime_bound; }
};

PerturbationStrength perturbation_strength(double flux_weber,
                                           const ElectronBeam& beam,
                                           double impact_parameter_m);

}  // namespace abforce
