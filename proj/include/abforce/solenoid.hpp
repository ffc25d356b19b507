#pragma once

// Idealized long solenoid (magnetized-core variant included):
//   B = mu_r * mu_0 * n * I,   A = pi r^2,   flux = B * A.
// The field is written as mu_r * (mu_0 n I) so that runs differing only in
// mu_r scale each other exactly in floating point.

namespace abforce {

struct Solenoid {
  double radius;                 // m
  double winding_density;        // turns per m
  double current;                // A
  double relative_permeability;  // dimensionless, >= 1
  double area;                   // m^2, derived
  double field;                  // T, derived
  double flux;                   // Wb, derived

  /// Throws std::domain_error unless radius > 0, winding_density >= 0,
  /// current >= 0 and relative_permeability >= 1.
  static Solenoid make(double radius_m, double winding_density_per_m,
                       double current_A, double relative_permeability = 1.0);
};

/// Interior field magnitude in tesla (the derived `field` member).
double solenoid_field(const Solenoid& s);

/// Enclosed flux in weber given in bench units (G cm^2).
double flux_from_gauss_cm2(double flux_gauss_cm2);

}  // namespace abforce
