#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Catalog of interferometry experiments (five historical, one proposed) with
// the feasibility logic that decides what each configuration can actually
// test. Stored columns are bench data in SI form and are never recomputed in
// place; recomputation lives in a separate verification channel
// (verify_record) so that stored-vs-derived discrepancies surface as
// findings instead of being silently corrected.

namespace abforce::catalog {

enum class Provenance { catalog, user };

struct ExperimentRecord {
  std::string name;
  double electron_energy;        // J
  double debroglie_wavelength;   // m
  double coherence_length;       // m
  double phase_shift;            // rad
  double relative_shift;         // m
  double magnetic_flux;          // Wb
  std::optional<double> impact_parameter;  // m
  Provenance provenance = Provenance::user;
};

/// The six built-in records: Chambers, Mollenstedt, Bayh, Schaal, Tonomura,
/// Proposed. Immutable static data.
const std::vector<ExperimentRecord>& builtin_table1();

/// Case-insensitive lookup by name; empty when unknown.
std::optional<ExperimentRecord> find_record(std::string_view name);

/// Longitudinal coherence length h*v0/dE for a beam of kinetic energy E and
/// energy spread dE (both J, both > 0; throws std::domain_error otherwise).
double coherence_length(double energy_joule, double energy_spread_joule);

/// Energy spread implied by a record's stored coherence length: h*v0/L_coh.
/// Exact algebraic inverse of coherence_length.
double derived_energy_spread(const ExperimentRecord& rec);

struct ColumnCheck {
  double stored;
  double computed;
  double relative_deviation;  // computed/stored - 1
  bool consistent;            // |relative_deviation| <= 0.05
};

/// Stored-vs-recomputed comparison: wavelength from energy, phase from flux,
/// shift from flux and energy (leading order).
struct DiscrepancyReport {
  std::string name;
  ColumnCheck wavelength;
  ColumnCheck phase;
  ColumnCheck shift;
};

DiscrepancyReport verify_record(const ExperimentRecord& rec);

/// What a configuration can test, by comparing displacement scales with the
/// coherence length. Booleans are recomputed from the lengths on every call.
struct RegimeReport {
  double v_dt_classical;                        // m
  std::optional<double> v_dt_semiclassical;     // m, needs impact parameter
  double coherence_length;                      // m
  bool fringe_test_feasible;                    // phase > 2 pi L_coh / lambda
  bool classical_force_testable;                // v dt_clas > L_coh
  std::optional<bool> dispersionless_force_testable;  // v dt_semi > L_coh
  std::string outcome_note;                     // narrative for outcomes A/B/C
};

/// y_e_m overrides the record's own impact parameter when given. With
/// neither available, the semi-classical fields stay absent and the note
/// flags them as unavailable.
RegimeReport classify_regime(const ExperimentRecord& rec,
                             std::optional<double> y_e_m = {});

/// Build a user record from first principles: wavelength from the energy,
/// coherence length from the spread, phase and shift from the flux.
ExperimentRecord record_from_parameters(std::string name, double energy_joule,
                                        double energy_spread_joule,
                                        double flux_weber,
                                        std::optional<double> y_e_m = {});

/// JSON array of records with unit-suffixed keys (energy_keV, lambda_pm,
/// Lcoh_nm, phase_pi, shift_nm, flux_Gcm2, y_e_um). Documents produced here
/// re-import and re-export byte-identically: display values are chosen so
/// their conversion back to SI is exact.
nlohmann::ordered_json export_catalog(const std::vector<ExperimentRecord>& recs);

/// Accepts a bare array, {"catalog": [...]}, or a full table1 report
/// ({"results": {"catalog": [...]}}). Imported records get user provenance.
/// Throws std::domain_error on malformed input.
std::vector<ExperimentRecord> import_catalog(const nlohmann::json& doc);

}  // namespace abforce::catalog
