#include "abforce/solenoid.hpp"

#include <stdexcept>

#include "abforce/constants.hpp"
#include "abforce/units.hpp"

namespace abforce {

Solenoid Solenoid::make(double radius_m, double winding_density_per_m,
                        double current_A, double relative_permeability) {
  if (!(radius_m > 0.0)) {
    throw std::domain_error("solenoid: radius must be > 0");
  }
  if (!(winding_density_per_m >= 0.0)) {
    throw std::domain_error("solenoid: winding density must be >= 0");
  }
  if (!(current_A >= 0.0)) {
    throw std::domain_error("solenoid: current must be >= 0");
  }
  if (!(relative_permeability >= 1.0)) {
    throw std::domain_error("solenoid: relative permeability must be >= 1");
  }
  const double field =
      relative_permeability *
      (constants::vacuum_permeability * winding_density_per_m * current_A);
  const double area = constants::pi * radius_m * radius_m;
  return {radius_m,    winding_density_per_m, current_A,
          relative_permeability, area,        field,
          field * area};
}

double solenoid_field(const Solenoid& s) { return s.field; }

double flux_from_gauss_cm2(double flux_gauss_cm2) {
  return units::gauss_cm2_to_weber(flux_gauss_cm2);
}

}  // namespace abforce
