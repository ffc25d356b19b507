#pragma once

#include <optional>

// Monoenergetic electron beam described nonrelativistically:
//   v0 = sqrt(2E/m),  lambda = h/(m v0),  k = m v0 / hbar.
// Kinetic energy is the defining quantity; speed, de Broglie wavelength and
// wavevector are derived once at construction so they stay consistent.

namespace abforce {

struct ElectronBeam {
  double kinetic_energy;          // J
  double speed;                   // m/s
  double debroglie_wavelength;    // m
  double wavevector;              // 1/m
  std::optional<double> energy_spread;  // J, full width; empty if unknown

  /// Beam from kinetic energy in joules. Throws std::domain_error unless
  /// energy > 0 (and energy_spread > 0 when provided).
  static ElectronBeam from_energy(double kinetic_energy_joule,
                                  std::optional<double> energy_spread_joule = {});

  /// Beam from speed in m/s; same validation, energy derived as m v^2 / 2.
  static ElectronBeam from_speed(double speed_m_per_s,
                                 std::optional<double> energy_spread_joule = {});
};

/// Convenience spelling of ElectronBeam::from_energy.
ElectronBeam beam_from_energy(double kinetic_energy_joule,
                              std::optional<double> energy_spread_joule = {});

}  // namespace abforce
