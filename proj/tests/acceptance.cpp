// Acceptance gate: one printed line per criterion check, pinned tolerances.
// Exit code = number of failed checks. [FINDING] lines are informational
// measurements that accompany the checks (flagged catalog rows, deviation
// structure) and never affect the exit code.
//
// Criteria:
//   C1 catalog-verification        stored columns vs recomputed values
//   C2 discrimination-scales       delay scales vs coherence envelopes
//   C3 numeric-analytic-agreement  integrator vs perturbative expansion
//   C4 phase-displacement-conjugacy k * displacement == phase, dispersion law
//   C5 composition-and-envelope    solenoid scaling, group-delay identity
//   C6 integrator-fidelity         speed recovery, window-truncation law
//   C7 sweep-reproducibility       determinism, mode ratios, outcome note

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abforce/catalog.hpp"
#include "abforce/constants.hpp"
#include "abforce/electron_beam.hpp"
#include "abforce/kinematics.hpp"
#include "abforce/report.hpp"
#include "abforce/solenoid.hpp"
#include "abforce/sweep.hpp"
#include "abforce/trajectory.hpp"
#include "abforce/units.hpp"
#include "oracles.hpp"

using namespace abforce;

namespace {

int failures = 0;

bool expect(bool ok, const char* id, const char* slug,
            const std::string& detail) {
  std::printf("[%s] %s (%s): %s\n", ok ? "PASS" : "FAIL", id, slug,
              detail.c_str());
  if (!ok) ++failures;
  return ok;
}

void finding(const std::string& detail) {
  std::printf("[FINDING] %s\n", detail.c_str());
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// Reference bench point used throughout: 1 keV beam, 50 um impact
// parameter, 9.9e-3 G cm^2 of enclosed flux (epsilon = 2.955e-3). Scaling
// the flux scales epsilon linearly.
constexpr double kFluxRef = 9.9e-11;   // Wb
constexpr double kYRef = 50e-6;        // m
constexpr double kEpsRef = 2.9551601595488026e-3;

double flux_for_epsilon(double eps) { return kFluxRef * eps / kEpsRef; }

// ---------------------------------------------------------------------------

void criterion1_catalog() {
  struct Expected {
    const char* name;
    bool phase_ok;
    bool shift_ok;
  };
  const Expected expected[] = {
      {"Chambers", true, true},   {"Mollenstedt", true, true},
      {"Bayh", true, true},       {"Schaal", false, false},
      {"Tonomura", false, false}, {"Proposed", true, true},
  };

  bool lambda_all = true;
  bool flags_match = true;
  std::ostringstream flagged;
  for (const auto& e : expected) {
    const auto rec = catalog::find_record(e.name);
    if (!rec) {
      flags_match = false;
      continue;
    }
    const auto rep = catalog::verify_record(*rec);
    lambda_all = lambda_all && rep.wavelength.consistent;
    if (rep.phase.consistent != e.phase_ok ||
        rep.shift.consistent != e.shift_ok) {
      flags_match = false;
    }
    if (!rep.phase.consistent || !rep.shift.consistent) {
      flagged << fmt(" %s(phase %+.3g%%, shift %+.3g%%)", e.name,
                     100.0 * rep.phase.relative_deviation,
                     100.0 * rep.shift.relative_deviation);
    }
  }
  expect(lambda_all, "C1", "catalog-verification",
         "all six stored wavelengths consistent with stored energies (<=5%)");
  expect(flags_match, "C1", "catalog-verification",
         "phase/shift columns consistent for Chambers, Mollenstedt, Bayh, "
         "Proposed and flagged for Schaal, Tonomura");
  finding("flagged catalog rows:" + flagged.str() +
          " -- stored phase and shift of those two rows do not follow from "
          "their stored flux and energy under this model; the verifier "
          "reports them rather than reconciling them");
}

void criterion2_scales() {
  const auto tonomura = catalog::classify_regime(
      *catalog::find_record("Tonomura"));
  expect(tonomura.v_dt_classical > 1.5e-11 &&
             tonomura.v_dt_classical < 2.5e-11,
         "C2", "discrimination-scales",
         fmt("Tonomura v0*dt_classical = %.4g m, inside [1.5e-11, 2.5e-11]",
             tonomura.v_dt_classical));

  const auto proposed = catalog::classify_regime(
      *catalog::find_record("Proposed"));
  expect(proposed.v_dt_classical > proposed.coherence_length, "C2",
         "discrimination-scales",
         fmt("proposed v0*dt_classical = %.4g m exceeds the %.3g m "
             "coherence length",
             proposed.v_dt_classical, proposed.coherence_length));
  const bool semi_ok = proposed.v_dt_semiclassical.has_value() &&
                       *proposed.v_dt_semiclassical > 1.0e-9 &&
                       *proposed.v_dt_semiclassical < 2.0e-9 &&
                       *proposed.v_dt_semiclassical <
                           proposed.coherence_length;
  expect(semi_ok, "C2", "discrimination-scales",
         fmt("proposed v0*dt_semiclassical = %.4g m, inside [1e-9, 2e-9] "
             "and below the coherence length",
             proposed.v_dt_semiclassical.value_or(NAN)));
  expect(proposed.fringe_test_feasible && proposed.classical_force_testable &&
             proposed.dispersionless_force_testable.has_value() &&
             !*proposed.dispersionless_force_testable,
         "C2", "discrimination-scales",
         "proposed configuration classifies as the discrimination regime "
         "(fringes feasible, classical displacement testable, "
         "dispersionless displacement not testable)");
}

void criterion3_numeric_agreement() {
  // (a) The integrator reproduces the first-order relative displacement to
  // 1e-5 across random configurations with epsilon <= 1e-3.
  auto rng = oracles::seeded_rng(0xacce97);
  const int n = 24;
  int ok_count = 0;
  double worst = 0.0;
  double mean_dev_over_eps = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v0 = oracles::log_uniform(rng, 5e6, 2e8);
    const double y = oracles::log_uniform(rng, 5e-6, 5e-4);
    const double eps = oracles::log_uniform(rng, 1e-5, 1e-3);
    const double flux = eps * 2.0 * constants::pi *
                        constants::electron_mass * v0 * y /
                        constants::elementary_charge;
    const auto beam = ElectronBeam::from_speed(v0);
    const double num =
        trajectory::numeric_relative_displacement(flux, beam, y);
    const auto ana = kinematics::relative_displacement(flux, beam, y);
    const double dev = std::abs(num / ana.first_order - 1.0);
    worst = std::max(worst, dev);
    if (dev < 1e-5) ++ok_count;
    mean_dev_over_eps += (num / ana.total - 1.0) / ana.epsilon;
  }
  mean_dev_over_eps /= n;
  expect(ok_count == n, "C3a", "numeric-analytic-agreement",
         fmt("%d/%d random configurations (eps <= 1e-3): numeric relative "
             "displacement within 1e-5 of first order (worst %.2e)",
             ok_count, n, worst));
  finding(fmt("numeric total exceeds the printed two-term expansion by "
              "~eps/2 relative (measured mean dev/eps = %+.3f); the "
              "printed second-order term follows the conventional "
              "antisymmetric form rather than the integrated dynamics, "
              "which carry even flux powers only",
              mean_dev_over_eps));

  // (b) Richardson extraction isolates the quadratic part of the one-sided
  // displacement to 1% over two decades of epsilon.
  const auto beam = ElectronBeam::from_energy(units::kev_to_joule(1.0));
  bool all_ok = true;
  std::ostringstream detail;
  for (const double eps : {1e-4, 1e-3, 1e-2}) {
    const double flux = flux_for_epsilon(eps);
    const double extracted =
        trajectory::extract_second_order(flux, beam, kYRef);
    const double analytic =
        kinematics::side_displacement(flux, beam, kYRef).second_order;
    const double dev = std::abs(extracted / analytic - 1.0);
    all_ok = all_ok && dev < 0.01;
    detail << fmt(" eps=%.0e:%.2e", eps, dev);
  }
  expect(all_ok, "C3b", "numeric-analytic-agreement",
         "extracted quadratic displacement within 1% of the analytic "
         "second-order term at" + detail.str());
}

void criterion4_conjugacy() {
  // k * first-order displacement equals the dispersionless phase, and the
  // dispersive phase scales exactly as 1/v0.
  std::vector<double> v0s, dispersives;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double v0 = 1e6 * std::pow(100.0, i / 9.0);  // 1e6 .. 1e8 m/s
    const auto beam = ElectronBeam::from_speed(v0);
    const auto shift = kinematics::relative_displacement(kFluxRef, beam, kYRef);
    const auto phase = kinematics::semiclassical_phase(kFluxRef, beam, kYRef);
    const double dev =
        std::abs(beam.wavevector * shift.first_order / phase.dispersionless -
                 1.0);
    worst = std::max(worst, dev);
    v0s.push_back(v0);
    dispersives.push_back(std::abs(phase.dispersive));
  }
  expect(worst < 1e-12, "C4", "phase-displacement-conjugacy",
         fmt("k * first-order displacement matches the dispersionless phase "
             "over v0 in [1e6, 1e8] m/s (worst relative deviation %.2e)",
             worst));
  const double slope = oracles::fit_loglog_slope(v0s, dispersives);
  expect(std::abs(slope + 1.0) < 1e-6, "C4", "phase-displacement-conjugacy",
         fmt("dispersive phase scales as v0^%.8f (expected -1)", slope));
}

void criterion5_composition() {
  // Core permeability scales the field/flux linearly and every quadratic
  // observable by mu_r^2.
  const auto iron = Solenoid::make(1.25e-3, 3000.0, 0.25, 150.0);
  const auto air = Solenoid::make(1.25e-3, 3000.0, 0.25, 1.0);
  const double flux_ratio = iron.flux / air.flux;
  expect(std::abs(flux_ratio / 150.0 - 1.0) < 1e-13, "C5",
         "composition-and-envelope",
         fmt("iron-core/air-core flux ratio = %.15g (expected 150)",
             flux_ratio));
  const auto beam = ElectronBeam::from_energy(units::kev_to_joule(10.0));
  const double y = 2e-3;
  const double disp_ratio =
      kinematics::semiclassical_phase(iron.flux, beam, y).dispersive /
      kinematics::semiclassical_phase(air.flux, beam, y).dispersive;
  expect(std::abs(disp_ratio / 22500.0 - 1.0) < 1e-12, "C5",
         "composition-and-envelope",
         fmt("dispersive-phase ratio = %.15g (expected 150^2 = 22500)",
             disp_ratio));

  // The envelope shift is the group-delay derivative of the dispersive
  // phase: compare against a centered finite difference in k.
  const auto ref = ElectronBeam::from_energy(units::kev_to_joule(1.0));
  const double k = ref.wavevector;
  const double h = 1e-5 * k;
  auto phase_at = [&](double kk) {
    const auto b = ElectronBeam::from_speed(constants::planck_reduced * kk /
                                            constants::electron_mass);
    return kinematics::semiclassical_phase(kFluxRef, b, kYRef).dispersive;
  };
  const double fd = (phase_at(k + h) - phase_at(k - h)) / (2.0 * h);
  const double envelope = kinematics::envelope_shift(kFluxRef, ref, kYRef);
  const double dev = std::abs(fd / envelope - 1.0);
  expect(dev < 1e-6, "C5", "composition-and-envelope",
         fmt("envelope shift matches d(dispersive phase)/dk to %.2e "
             "(finite difference, h = 1e-5 k)",
             dev));
}

void criterion6_integrator() {
  const auto beam = ElectronBeam::from_energy(units::kev_to_joule(1.0));

  // Speed recovery: after the passage the speed returns to the analytic
  // profile value at the window edge, within 10x the relative tolerance.
  {
    const double eps = 0.05;  // documented validity boundary sample
    const double flux = flux_for_epsilon(eps);
    trajectory::IntegratorConfig cfg;
    const auto run = trajectory::integrate_passage(flux, beam, kYRef, cfg);
    const double window = cfg.window_factor * kYRef;
    const double expected =
        kinematics::velocity_profile(flux, beam, window, kYRef);
    const double dev = std::abs(run.final_speed / expected - 1.0);
    expect(dev < 10.0 * cfg.relative_tolerance, "C6", "integrator-fidelity",
           fmt("final speed at eps = 0.05 within 10*rtol of the analytic "
               "profile (deviation %.2e)",
               dev));
  }

  // Window-truncation law: with the tail correction disabled the deficit
  // against the closed form decays as (window factor)^-1.
  {
    const double exact = oracles::exact_displacement(kFluxRef, beam, kYRef);
    std::vector<double> wfs, deficits;
    bool all_undershoot = true;
    for (const double wf : {100.0, 316.0, 1000.0, 3162.0, 10000.0}) {
      trajectory::IntegratorConfig cfg;
      cfg.window_factor = wf;
      cfg.relative_tolerance = 1e-12;
      cfg.tail_correction = false;
      const auto run = trajectory::integrate_passage(flux_for_epsilon(kEpsRef),
                                                     beam, kYRef, cfg);
      const double deficit = exact - run.displacement_vs_free_flight;
      all_undershoot = all_undershoot && deficit > 0.0;
      wfs.push_back(wf);
      deficits.push_back(std::abs(deficit));
    }
    const double slope = oracles::fit_loglog_slope(wfs, deficits);
    expect(all_undershoot && std::abs(slope + 1.0) < 0.05, "C6",
           "integrator-fidelity",
           fmt("tail-off truncation deficit scales as window^%.3f "
               "(expected -1), always undershooting",
               slope));
  }

  // With the tail correction enabled the result is window-insensitive.
  {
    trajectory::IntegratorConfig cfg;
    cfg.relative_tolerance = 1e-12;
    cfg.window_factor = 1000.0;
    const double d1 =
        trajectory::integrate_passage(kFluxRef, beam, kYRef, cfg)
            .displacement_vs_free_flight;
    cfg.window_factor = 2000.0;
    const double d2 =
        trajectory::integrate_passage(kFluxRef, beam, kYRef, cfg)
            .displacement_vs_free_flight;
    const double dev = std::abs(d1 / d2 - 1.0);
    expect(dev < 1e-8, "C6", "integrator-fidelity",
           fmt("tail-corrected displacement moves by %.2e when the window "
               "doubles (bound 1e-8)",
               dev));
  }
}

void criterion7_sweep() {
  // The proposed-configuration outcome note must state the discrimination
  // logic verbatim.
  const auto proposed = catalog::classify_regime(
      *catalog::find_record("Proposed"));
  const char* sentence =
      "observation of fringes rules out classical forces, but not the "
      "existence of semi-classical forces";
  expect(proposed.outcome_note.find(sentence) != std::string::npos, "C7",
         "sweep-reproducibility",
         "outcome note states that fringes rule out classical forces but "
         "not semi-classical ones");

  sweep::SweepSpec spec;
  spec.current_min = 0.0;
  spec.current_max = 0.5;
  spec.steps = 11;
  spec.modes = {sweep::MuRMode::with_core, sweep::MuRMode::without_core};
  spec.electron_energy = units::kev_to_joule(10.0);
  spec.solenoid_radius = 1.25e-3;
  spec.winding_density = 3000.0;
  spec.impact_parameter = 2e-3;
  spec.outputs = {sweep::OutputColumn::classical_delay,
                  sweep::OutputColumn::semiclassical_delay,
                  sweep::OutputColumn::numeric_delay};

  const auto a = sweep::run_sweep(spec);
  const auto b = sweep::run_sweep(spec);

  bool identical = a.header == b.header && a.rows.size() == b.rows.size();
  if (identical) {
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      if (a.rows[i] != b.rows[i]) identical = false;
    }
  }
  report::ReportEnvelope env;
  env.command = "sweep";
  std::ostringstream csv_a, csv_b;
  sweep::write_csv(a, env, csv_a);
  sweep::write_csv(b, env, csv_b);
  identical = identical && csv_a.str() == csv_b.str();
  expect(identical, "C7", "sweep-reproducibility",
         fmt("two identical sweeps (11 currents x 2 modes x 3 outputs) "
             "agree bit for bit, CSV included (%zu rows)",
             a.rows.size()));

  auto col = [&](const std::string& name) {
    const auto it = std::find(a.header.begin(), a.header.end(), name);
    return it == a.header.end()
               ? SIZE_MAX
               : static_cast<std::size_t>(it - a.header.begin());
  };
  const auto flux150 = col("flux_Wb_mur150");
  const auto flux1 = col("flux_Wb_mur1");
  const auto clas150 = col("dt_classical_s_mur150");
  const auto clas1 = col("dt_classical_s_mur1");
  const auto semi150 = col("dt_semiclassical_s_mur150");
  const auto semi1 = col("dt_semiclassical_s_mur1");
  const auto num150 = col("dt_numeric_s_mur150");
  const auto num1 = col("dt_numeric_s_mur1");
  const bool cols_ok = flux150 != SIZE_MAX && flux1 != SIZE_MAX &&
                       clas150 != SIZE_MAX && clas1 != SIZE_MAX &&
                       semi150 != SIZE_MAX && semi1 != SIZE_MAX &&
                       num150 != SIZE_MAX && num1 != SIZE_MAX;
  expect(cols_ok, "C7", "sweep-reproducibility",
         "sweep emits flux, classical, semiclassical and numeric columns "
         "for both core modes");
  if (!cols_ok) return;

  // Row-wise mode ratios: classical delay linear in flux (x150), the
  // semiclassical delay quadratic (x22500).
  bool ratios_ok = true;
  double worst_lin = 0.0, worst_quad = 0.0;
  for (std::size_t i = 1; i < a.rows.size(); ++i) {  // skip the 0 A row
    const auto& row = a.rows[i];
    const double lin = *row[clas150] / *row[clas1];
    const double quad = *row[semi150] / *row[semi1];
    worst_lin = std::max(worst_lin, std::abs(lin / 150.0 - 1.0));
    worst_quad = std::max(worst_quad, std::abs(quad / 22500.0 - 1.0));
  }
  ratios_ok = worst_lin < 1e-12 && worst_quad < 1e-12;
  expect(ratios_ok, "C7", "sweep-reproducibility",
         fmt("per-row mode ratios: classical x%.0f (dev %.1e), "
             "semiclassical x%.0f (dev %.1e)",
             150.0, worst_lin, 22500.0, worst_quad));

  // Where the expansion applies (eps < 1e-2), the numeric delay agrees with
  // classical + semiclassical to 1%.
  const auto beam = ElectronBeam::from_energy(spec.electron_energy);
  bool sum_ok = true;
  double worst_dev = 0.0;
  int compared = 0;
  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    const auto& row = a.rows[i];
    const std::size_t flux_cols[] = {flux150, flux1};
    const std::size_t clas_cols[] = {clas150, clas1};
    const std::size_t semi_cols[] = {semi150, semi1};
    const std::size_t num_cols[] = {num150, num1};
    for (int m = 0; m < 2; ++m) {
      if (!row[flux_cols[m]] || !row[num_cols[m]]) continue;
      const double flux = *row[flux_cols[m]];
      const double eps = flux * constants::elementary_charge /
                         (2.0 * constants::pi * constants::electron_mass *
                          beam.speed * *spec.impact_parameter);
      if (eps <= 0.0 || eps >= 1e-2) continue;
      const double dev = std::abs(
          *row[num_cols[m]] / (*row[clas_cols[m]] + *row[semi_cols[m]]) - 1.0);
      worst_dev = std::max(worst_dev, dev);
      sum_ok = sum_ok && dev < 0.01;
      ++compared;
    }
  }
  expect(sum_ok && compared > 0, "C7", "sweep-reproducibility",
         fmt("numeric delay within 1%% of classical + semiclassical on all "
             "%d in-regime cells (worst %.2e; expected structural offset "
             "~eps/2 from the conventional second-order form)",
             compared, worst_dev));
}

}  // namespace

int main() {
  std::printf("model-consistency acceptance gate\n");
  std::printf("---------------------------------\n");

  criterion1_catalog();
  criterion2_scales();
  criterion3_numeric_agreement();
  criterion4_conjugacy();
  criterion5_composition();
  criterion6_integrator();
  criterion7_sweep();

  // Reference force magnitude at the bench point, for the record.
  const double f = kinematics::force_x(
      kFluxRef, ElectronBeam::from_energy(units::kev_to_joule(1.0)).speed,
      kYRef, kYRef);
  finding(fmt("longitudinal force at the bench point (x = y = 50 um, 1 keV, "
              "9.9e-3 G cm^2) = %.6e N; the model's displacement, phase and "
              "delay chain is self-consistent with this value (work-energy "
              "checked in the unit suite)",
              f));

  std::printf("---------------------------------\n");
  std::printf("acceptance: %d check(s) failed\n", failures);
  return failures;
}
