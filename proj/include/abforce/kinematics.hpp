#pragma once

#include "abforce/electron_beam.hpp"

// Semi-classical force model of an electron passing an isolated flux line.
//
// Model. An electron moving along x with impact parameter y_e from a
// solenoid of enclosed flux `flux` feels a longitudinal force
//
//   F_x(x) = -(flux * e * v / (4 pi)) * 4 x y_e / (x^2 + y_e^2)^2,
//
// i.e. it is accelerated on approach and decelerated on retreat (or vice
// versa, by side and flux sign), with no net speed change after the passage.
// Integrating m dv/dt = F_x once gives the exact speed profile
//
//   v(x) = v0 + (flux * e / (2 pi m)) * y_e / (x^2 + y_e^2),
//
// a Lorentzian bump whose peak fractional height is the dimensionless
// expansion parameter epsilon = flux*e / (2 pi m v0 |y_e|).
//
// Everything else here is the standard perturbative chain built on that
// profile, kept in its conventional two-term form:
//   * lead/lag of one passage relative to free flight (side_displacement),
//   * the difference between the two sides of an interferometer
//     (relative_displacement),
//   * the phase split into a dispersionless part e*flux/hbar (independent of
//     beam speed) and a dispersive second-order part (semiclassical_phase),
//   * the wave-packet envelope shift d(phase)/dk (envelope_shift),
//   * arrival-time delays for the classical-force and semi-classical
//     pictures (classical_delay, semiclassical_delay).
//
// Expansion results carry their terms separately plus epsilon so callers can
// distinguish first- and second-order physics. The companion trajectory
// module integrates the same force law numerically; see its tests for where
// the two-term closed forms start to deviate from the integrated dynamics.
//
// Conventions: SI throughout; flux may be signed; y_e is signed (sign selects
// the interferometer side) and must be nonzero. All functions are pure and
// thread-safe.

namespace abforce::kinematics {

/// Two-term perturbative expansion of a displacement, in meters.
struct DisplacementTerms {
  double first_order;   // m, linear in flux
  double second_order;  // m, quadratic in flux
  double total;         // m, first_order + second_order
  double epsilon;       // expansion parameter of this configuration
  bool expansion_valid; // epsilon < 0.1
};

/// Phase accumulated between the two sides, split by dispersion character.
struct PhaseDecomposition {
  double dispersionless;  // rad, independent of beam speed
  double dispersive;      // rad, second order, scales as 1/v0
  double total;           // rad, sum
  double epsilon;
  bool expansion_valid;
};

/// Longitudinal force (N) on the electron at position x along the path.
/// Throws std::domain_error if x and y_e are both zero.
double force_x(double flux_weber, double speed_m_per_s, double x_m,
               double y_e_m);

/// Exact speed profile v(x) in m/s for a passage at y_e (nonzero).
double velocity_profile(double flux_weber, const ElectronBeam& beam,
                        double x_m, double y_e_m);

/// Net lead (+) or lag (-) of one passage relative to free flight.
DisplacementTerms side_displacement(double flux_weber, const ElectronBeam& beam,
                                    double y_e_m);

/// Longitudinal displacement between the y_e > 0 and y_e < 0 sides of a
/// symmetric interferometer (upper minus lower), |y_e| given by y_e_m.
DisplacementTerms relative_displacement(double flux_weber,
                                        const ElectronBeam& beam,
                                        double y_e_m);

/// Flux-only phase e*flux/hbar in radians.
double ab_phase(double flux_weber);

/// Relative phase between the sides: dispersionless + dispersive parts.
PhaseDecomposition semiclassical_phase(double flux_weber,
                                       const ElectronBeam& beam, double y_e_m);

/// Wave-packet envelope displacement d(phase)/dk in meters.
double envelope_shift(double flux_weber, const ElectronBeam& beam,
                      double y_e_m);

/// Arrival-time delay (s) if the full relative displacement is carried by
/// the particle: flux*e / (m v0^2).
double classical_delay(double flux_weber, const ElectronBeam& beam);

/// Arrival-time delay (s) if only the envelope shift is carried:
/// envelope_shift / v0. Second order in flux.
double semiclassical_delay(double flux_weber, const ElectronBeam& beam,
                           double y_e_m);

}  // namespace abforce::kinematics
