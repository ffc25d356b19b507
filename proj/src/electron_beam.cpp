#include "abforce/electron_beam.hpp"

#include <cmath>
#include <stdexcept>

#include "abforce/constants.hpp"

namespace abforce {

namespace {

void check_spread(const std::optional<double>& spread) {
  if (spread && !(*spread > 0.0)) {
    throw std::domain_error("electron beam: energy_spread must be > 0");
  }
}

ElectronBeam derive(double energy, double speed,
                    std::optional<double> spread) {
  using namespace constants;
  const double lambda = planck / (electron_mass * speed);
  const double k = electron_mass * speed / planck_reduced;
  return {energy, speed, lambda, k, spread};
}

}  // namespace

ElectronBeam ElectronBeam::from_energy(double kinetic_energy_joule,
                                       std::optional<double> energy_spread_joule) {
  if (!(kinetic_energy_joule > 0.0)) {
    throw std::domain_error("electron beam: kinetic energy must be > 0");
  }
  check_spread(energy_spread_joule);
  const double speed =
      std::sqrt(2.0 * kinetic_energy_joule / constants::electron_mass);
  return derive(kinetic_energy_joule, speed, energy_spread_joule);
}

ElectronBeam ElectronBeam::from_speed(double speed_m_per_s,
                                      std::optional<double> energy_spread_joule) {
  if (!(speed_m_per_s > 0.0)) {
    throw std::domain_error("electron beam: speed must be > 0");
  }
  check_spread(energy_spread_joule);
  const double energy =
      0.5 * constants::electron_mass * speed_m_per_s * speed_m_per_s;
  return derive(energy, speed_m_per_s, energy_spread_joule);
}

ElectronBeam beam_from_energy(double kinetic_energy_joule,
                              std::optional<double> energy_spread_joule) {
  return ElectronBeam::from_energy(kinetic_energy_joule, energy_spread_joule);
}

}  // namespace abforce
