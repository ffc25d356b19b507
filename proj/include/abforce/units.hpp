#pragma once

#include "abforce/constants.hpp"

// Unit conversions between SI (used for every internal computation) and the
// bench units used at the boundaries: keV/eV for energies, G cm^2 for flux,
// pm/nm/um/mm for lengths, and multiples of pi for phases.
// Each pair is an exact multiplicative inverse.

namespace abforce::units {

constexpr double kev_to_joule(double kev) {
  return kev * (1e3 * constants::elementary_charge);
}
constexpr double joule_to_kev(double joule) {
  return joule / (1e3 * constants::elementary_charge);
}

constexpr double ev_to_joule(double ev) {
  return ev * constants::elementary_charge;
}
constexpr double joule_to_ev(double joule) {
  return joule / constants::elementary_charge;
}

// 1 G cm^2 = 1e-4 T * 1e-4 m^2 = 1e-8 Wb.
constexpr double gauss_cm2_to_weber(double gcm2) { return gcm2 * 1e-8; }
constexpr double weber_to_gauss_cm2(double wb) { return wb * 1e8; }

constexpr double m_to_pm(double m) { return m * 1e12; }
constexpr double pm_to_m(double pm) { return pm * 1e-12; }
constexpr double m_to_nm(double m) { return m * 1e9; }
constexpr double nm_to_m(double nm) { return nm * 1e-9; }
constexpr double m_to_um(double m) { return m * 1e6; }
constexpr double um_to_m(double um) { return um * 1e-6; }
constexpr double m_to_mm(double m) { return m * 1e3; }
constexpr double mm_to_m(double mm) { return mm * 1e-3; }

constexpr double rad_to_pi_units(double rad) { return rad / constants::pi; }
constexpr double pi_units_to_rad(double pis) { return pis * constants::pi; }

}  // namespace abforce::units
