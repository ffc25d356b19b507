#include "abforce/passage.hpp"

#include <cmath>
#include <stdexcept>

#include "abforce/constants.hpp"

namespace abforce {

PassageGeometry PassageGeometry::at(double impact_parameter_m) {
  if (impact_parameter_m == 0.0) {
    throw std::domain_error("passage: impact parameter must be nonzero");
  }
  return {impact_parameter_m};
}

bool PassageGeometry::passes_outside(const Solenoid& s) const {
  return std::abs(impact_parameter) > s.radius;
}

PerturbationStrength perturbation_strength(double flux_weber,
                                           const ElectronBeam& beam,
                                           double impact_parameter_m) {
  const auto geom = PassageGeometry::at(impact_parameter_m);
  using namespace constants;
  const double eps =
      std::abs(flux_weber) * elementary_charge /
      (2.0 * pi * electron_mass * beam.speed * std::abs(geom.impact_parameter));
  return {eps};
}

}  // namespace abforce
