#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "abforce/report.hpp"
#include "abforce/trajectory.hpp"

// Delay-versus-current sweeps: for each coil current, the solenoid field and
// flux per permeability mode, and the requested delay columns (classical,
// semi-classical analytic, numeric). Rows are independent and computed in
// parallel; output is serialized in row order, so results are deterministic.

namespace abforce::sweep {

/// Iron-core (mu_r = 150) versus air-core (mu_r = 1) configurations.
enum class MuRMode { with_core, without_core };

constexpr double mu_r_of(MuRMode m) {
  return m == MuRMode::with_core ? 150.0 : 1.0;
}
constexpr const char* suffix_of(MuRMode m) {
  return m == MuRMode::with_core ? "mur150" : "mur1";
}

enum class OutputColumn { classical_delay, semiclassical_delay, numeric_delay };

struct SweepSpec {
  double current_min = 0.0;  // A
  double current_max = 0.0;  // A
  std::size_t steps = 0;     // >= 2, inclusive endpoints
  std::vector<MuRMode> modes;
  double electron_energy = 0.0;   // J
  double solenoid_radius = 0.0;   // m
  double winding_density = 0.0;   // turns per m
  std::optional<double> impact_parameter;  // m, needed for semi/numeric
  std::vector<OutputColumn> outputs;
  trajectory::IntegratorConfig integrator{};

  /// Throws std::invalid_argument on structural problems (range, steps,
  /// empty mode/output sets, missing impact parameter), std::domain_error on
  /// bad physics values.
  void validate() const;
};

struct SweepResult {
  std::vector<std::string> header;  // column names, current_A first
  // One row per current; empty cells mark per-row integrator failures.
  std::vector<std::vector<std::optional<double>>> rows;
  std::vector<std::string> warnings;
};

SweepResult run_sweep(const SweepSpec& spec);

/// CSV with the envelope's comment block, the header row, and one data row
/// per current (empty string for failed cells; full precision otherwise).
void write_csv(const SweepResult& result, const report::ReportEnvelope& env,
               std::ostream& out);

}  // namespace abforce::sweep
