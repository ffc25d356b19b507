#pragma once

// Physical constants, CODATA 2018 exact/recommended values, SI units.
// planck_reduced is derived from planck so the two can never drift apart.

namespace abforce::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double elementary_charge = 1.602176634e-19;     // C (exact)
inline constexpr double electron_mass = 9.1093837015e-31;        // kg
inline constexpr double planck = 6.62607015e-34;                 // J s (exact)
inline constexpr double planck_reduced = planck / (2.0 * pi);    // J s
inline constexpr double vacuum_permeability = 1.25663706212e-6;  // T m / A

/// Bundle of the constants above, for callers that want to pass them around
/// or introspect them as a value.
struct PhysicalConstants {
  double elementary_charge;    // C
  double electron_mass;        // kg
  double planck;               // J s
  double planck_reduced;       // J s
  double vacuum_permeability;  // T m / A
};

constexpr PhysicalConstants codata2018() {
  return {elementary_charge, electron_mass, planck, planck_reduced,
          vacuum_permeability};
}

}  // namespace abforce::constants
