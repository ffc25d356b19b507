// abforce: analytic quantities, trajectory integration, experiment-table
// verification, regime classification, and delay-vs-current sweeps for the
// semi-classical flux-passage force model. Bench units on flags (keV, mm,
// um, G*cm^2, pi-radians), SI in emitted files.
//
// Exit codes: 0 success; 2 usage error; 3 domain error (bad physics input);
// 4 integrator convergence failure; 1 unexpected internal error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abforce/catalog.hpp"
#include "abforce/constants.hpp"
#include "abforce/electron_beam.hpp"
#include "abforce/kinematics.hpp"
#include "abforce/passage.hpp"
#include "abforce/report.hpp"
#include "abforce/solenoid.hpp"
#include "abforce/sweep.hpp"
#include "abforce/trajectory.hpp"
#include "abforce/units.hpp"
#include "abforce/version.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace abforce;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double unset = std::numeric_limits<double>::quiet_NaN();
bool given(double v) { return !std::isnan(v); }

// ---------------------------------------------------------------- config --

// The config file carries the same keys as the report's parameter echo, so a
// previous report (or its "parameters" object) replays exactly. Flags win
// over config values; config wins over built-in defaults.
json load_config_prepass(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      path = argv[i + 1];
      break;
    }
    if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
      break;
    }
  }
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("parameters") &&
      doc["parameters"].is_object()) {
    return doc["parameters"];
  }
  if (!doc.is_object()) {
    throw UsageError("config file must hold a JSON object");
  }
  return doc;
}

struct Seeder {
  const json& cfg;
  void num(double& var, const char* key) const {
    if (cfg.contains(key) && cfg.at(key).is_number()) {
      var = cfg.at(key).get<double>();
    }
  }
  void uint(std::size_t& var, const char* key) const {
    if (cfg.contains(key) && cfg.at(key).is_number_unsigned()) {
      var = cfg.at(key).get<std::size_t>();
    }
  }
  void str(std::string& var, const char* key) const {
    if (cfg.contains(key) && cfg.at(key).is_string()) {
      var = cfg.at(key).get<std::string>();
    }
  }
  void flag(bool& var, const char* key) const {
    if (cfg.contains(key) && cfg.at(key).is_boolean()) {
      var = cfg.at(key).get<bool>();
    }
  }
};

// ---------------------------------------------------------------- output --

struct GlobalOpts {
  std::string out;
  std::string format;  // "", "csv", "json"
  bool no_timestamp = false;
  std::string config_path;
};

std::string pick_format(const GlobalOpts& g, const char* fallback) {
  if (g.format.empty()) return fallback;
  if (g.format != "csv" && g.format != "json") {
    throw UsageError("--format must be csv or json");
  }
  return g.format;
}

report::ReportEnvelope make_envelope(const char* command,
                                     const GlobalOpts& g) {
  report::ReportEnvelope env;
  env.command = command;
  env.version = version_string;
  if (!g.no_timestamp) env.timestamp = report::iso8601_utc_now();
  return env;
}

void emit_text(const std::string& text, const GlobalOpts& g) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file: " + g.out);
  f << text;
}

std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Flat key/value CSV for report-style results.
std::string results_csv(const report::ReportEnvelope& env) {
  std::string text = env.csv_comment_block();
  text += "quantity,value\n";
  for (const auto& [key, value] : env.results.items()) {
    text += key;
    text += ',';
    if (value.is_null()) {
      // empty cell
    } else if (value.is_number_float()) {
      text += report::format_full(value.get<double>());
    } else if (value.is_string()) {
      text += csv_escape(value.get<std::string>());
    } else {
      text += value.dump();
    }
    text += '\n';
  }
  return text;
}

std::string render(const report::ReportEnvelope& env, const GlobalOpts& g,
                   const char* default_format) {
  const std::string fmt = pick_format(g, default_format);
  if (fmt == "json") return env.to_json().dump(2) + "\n";
  return results_csv(env);
}

// ----------------------------------------------------------- flux source --

struct FluxSource {
  double flux_gcm2 = unset;
  double r_mm = unset;
  double n_per_mm = unset;
  double current = unset;
  double mu_r = unset;
};

void add_flux_options(CLI::App* cmd, FluxSource& fs) {
  cmd->add_option("--flux-gcm2", fs.flux_gcm2, "Enclosed flux (G*cm^2)");
  cmd->add_option("--solenoid-r-mm", fs.r_mm, "Solenoid radius (mm)");
  cmd->add_option("--n-per-mm", fs.n_per_mm, "Winding density (turns/mm)");
  cmd->add_option("--current", fs.current, "Coil current (A)");
  cmd->add_option("--mu-r", fs.mu_r, "Core relative permeability (default 1)");
}

void seed_flux(const Seeder& seed, FluxSource& fs) {
  seed.num(fs.flux_gcm2, "flux_gcm2");
  seed.num(fs.r_mm, "solenoid_r_mm");
  seed.num(fs.n_per_mm, "n_per_mm");
  seed.num(fs.current, "current");
  seed.num(fs.mu_r, "mu_r");
}

struct ResolvedFlux {
  double flux_weber;
  std::optional<Solenoid> solenoid;
};

ResolvedFlux resolve_flux(const FluxSource& fs) {
  const bool has_flux = given(fs.flux_gcm2);
  const bool any_sol = given(fs.r_mm) || given(fs.n_per_mm) ||
                       given(fs.current) || given(fs.mu_r);
  if (has_flux && any_sol) {
    throw UsageError(
        "give either --flux-gcm2 or a solenoid specification "
        "(--solenoid-r-mm --n-per-mm --current [--mu-r]), not both");
  }
  if (has_flux) return {units::gauss_cm2_to_weber(fs.flux_gcm2), {}};
  if (!any_sol) {
    throw UsageError(
        "missing flux source: --flux-gcm2 or --solenoid-r-mm + --n-per-mm + "
        "--current");
  }
  std::vector<std::string> missing;
  if (!given(fs.r_mm)) missing.emplace_back("--solenoid-r-mm");
  if (!given(fs.n_per_mm)) missing.emplace_back("--n-per-mm");
  if (!given(fs.current)) missing.emplace_back("--current");
  if (!missing.empty()) {
    std::string msg = "incomplete solenoid specification; missing";
    for (const auto& m : missing) msg += " " + m;
    throw UsageError(msg);
  }
  const auto sol =
      Solenoid::make(units::mm_to_m(fs.r_mm), fs.n_per_mm * 1e3, fs.current,
                     given(fs.mu_r) ? fs.mu_r : 1.0);
  return {sol.flux, sol};
}

void echo_flux(const FluxSource& fs, const ResolvedFlux& rf,
               ordered_json& params, ordered_json& params_si) {
  if (rf.solenoid) {
    params["solenoid_r_mm"] = fs.r_mm;
    params["n_per_mm"] = fs.n_per_mm;
    params["current"] = fs.current;
    params["mu_r"] = rf.solenoid->relative_permeability;
    params_si["solenoid_radius_m"] = rf.solenoid->radius;
    params_si["winding_density_per_m"] = rf.solenoid->winding_density;
    params_si["current_A"] = rf.solenoid->current;
    params_si["B_T"] = rf.solenoid->field;
    params_si["area_m2"] = rf.solenoid->area;
  } else {
    params["flux_gcm2"] = fs.flux_gcm2;
  }
  params_si["flux_Wb"] = rf.flux_weber;
}

// ------------------------------------------------------- integrator opts --

struct IntegratorOpts {
  double window_factor = 1e4;
  double rtol = 1e-10;
  double atol_pos = 1e-18;
  std::size_t max_steps = 1'000'000;
  bool no_tail = false;
};

void add_integrator_options(CLI::App* cmd, IntegratorOpts& io) {
  cmd->add_option("--window-factor", io.window_factor,
                  "Integration window half-width in units of |y_e|");
  cmd->add_option("--rtol", io.rtol, "Relative tolerance");
  cmd->add_option("--atol-pos", io.atol_pos,
                  "Absolute displacement tolerance (m)");
  cmd->add_option("--max-steps", io.max_steps, "Step budget");
  cmd->add_flag("--no-tail", io.no_tail, "Disable the window tail correction");
}

void seed_integrator(const Seeder& seed, IntegratorOpts& io) {
  seed.num(io.window_factor, "window_factor");
  seed.num(io.rtol, "rtol");
  seed.num(io.atol_pos, "atol_pos");
  seed.uint(io.max_steps, "max_steps");
  seed.flag(io.no_tail, "no_tail");
}

trajectory::IntegratorConfig to_config(const IntegratorOpts& io) {
  trajectory::IntegratorConfig cfg;
  cfg.window_factor = io.window_factor;
  cfg.relative_tolerance = io.rtol;
  cfg.absolute_tolerance_position = io.atol_pos;
  cfg.max_steps = io.max_steps;
  cfg.tail_correction = !io.no_tail;
  return cfg;
}

void echo_integrator(const IntegratorOpts& io, ordered_json& params) {
  params["window_factor"] = io.window_factor;
  params["rtol"] = io.rtol;
  params["atol_pos"] = io.atol_pos;
  params["max_steps"] = io.max_steps;
  params["no_tail"] = io.no_tail;
}

// ---------------------------------------------------------------- analytic --

struct AnalyticParams {
  FluxSource flux;
  double energy_kev = unset;
  double ye_um = unset;
};

int run_analytic(const AnalyticParams& p, const GlobalOpts& g) {
  if (!given(p.energy_kev)) throw UsageError("missing --energy-kev");
  const auto rf = resolve_flux(p.flux);
  const auto beam =
      ElectronBeam::from_energy(units::kev_to_joule(p.energy_kev));
  const double flux = rf.flux_weber;

  auto env = make_envelope("analytic", g);
  echo_flux(p.flux, rf, env.parameters, env.parameters_si);
  env.parameters["energy_kev"] = p.energy_kev;
  env.parameters_si["energy_J"] = beam.kinetic_energy;
  if (given(p.ye_um)) {
    env.parameters["ye_um"] = p.ye_um;
    env.parameters_si["y_e_m"] = units::um_to_m(p.ye_um);
  }

  ordered_json& r = env.results;
  r["v0_m_per_s"] = beam.speed;
  r["lambda_m"] = beam.debroglie_wavelength;
  r["lambda_pm"] = units::m_to_pm(beam.debroglie_wavelength);
  r["wavevector_per_m"] = beam.wavevector;

  const double phase = kinematics::ab_phase(flux);
  r["ab_phase_rad"] = phase;
  r["ab_phase_pi"] = units::rad_to_pi_units(phase);

  const double lead = kinematics::classical_delay(flux, beam) * beam.speed;
  r["relative_shift_first_order_m"] = lead;
  r["relative_shift_first_order_nm"] = units::m_to_nm(lead);
  r["classical_delay_s"] = kinematics::classical_delay(flux, beam);
  r["v_dt_classical_m"] = lead;
  r["v_dt_classical_nm"] = units::m_to_nm(lead);

  if (given(p.ye_um)) {
    const double y = units::um_to_m(p.ye_um);
    const auto rel = kinematics::relative_displacement(flux, beam, y);
    const auto upper = kinematics::side_displacement(flux, beam, std::abs(y));
    const auto lower = kinematics::side_displacement(flux, beam, -std::abs(y));
    const auto ph = kinematics::semiclassical_phase(flux, beam, y);
    const double envl = kinematics::envelope_shift(flux, beam, y);
    const double dt_semi = kinematics::semiclassical_delay(flux, beam, y);

    r["epsilon"] = rel.epsilon;
    r["side_shift_upper_first_order_m"] = upper.first_order;
    r["side_shift_upper_second_order_m"] = upper.second_order;
    r["side_shift_upper_total_m"] = upper.total;
    r["side_shift_lower_total_m"] = lower.total;
    r["relative_shift_second_order_m"] = rel.second_order;
    r["relative_shift_total_m"] = rel.total;
    r["relative_shift_total_nm"] = units::m_to_nm(rel.total);
    r["phase_dispersionless_rad"] = ph.dispersionless;
    r["phase_dispersive_rad"] = ph.dispersive;
    r["phase_total_rad"] = ph.total;
    r["phase_total_pi"] = units::rad_to_pi_units(ph.total);
    r["envelope_shift_m"] = envl;
    r["envelope_shift_nm"] = units::m_to_nm(envl);
    r["semiclassical_delay_s"] = dt_semi;
    r["v_dt_semiclassical_m"] = envl;
    r["v_dt_semiclassical_nm"] = units::m_to_nm(envl);
    const double peak = kinematics::velocity_profile(flux, beam, 0.0, y) -
                        beam.speed;
    r["peak_speed_change_m_per_s"] = peak;
    if (!rel.expansion_valid) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "epsilon=%.3g outside the expansion regime (< 0.1); "
                    "second-order quantities are indicative only",
                    rel.epsilon);
      env.warnings.emplace_back(buf);
    }
  } else {
    env.warnings.emplace_back(
        "no --ye-um given; second-order (impact-parameter dependent) "
        "quantities omitted");
  }

  emit_text(render(env, g, "json"), g);
  return 0;
}

// -------------------------------------------------------------- trajectory --

struct TrajectoryParams {
  FluxSource flux;
  double energy_kev = unset;
  double ye_um = unset;
  IntegratorOpts integ;
};

std::string sidecar_path(const std::string& out) {
  const std::filesystem::path p(out);
  if (p.extension() == ".csv") {
    auto q = p;
    q.replace_extension(".json");
    return q.string();
  }
  return out + ".json";
}

int run_trajectory(const TrajectoryParams& p, const GlobalOpts& g) {
  if (!given(p.energy_kev)) throw UsageError("missing --energy-kev");
  if (!given(p.ye_um)) throw UsageError("missing --ye-um");
  if (g.out.empty()) throw UsageError("trajectory requires --out <path>");
  const auto rf = resolve_flux(p.flux);
  const auto beam =
      ElectronBeam::from_energy(units::kev_to_joule(p.energy_kev));
  const double y = units::um_to_m(p.ye_um);

  auto env = make_envelope("trajectory", g);
  echo_flux(p.flux, rf, env.parameters, env.parameters_si);
  env.parameters["energy_kev"] = p.energy_kev;
  env.parameters["ye_um"] = p.ye_um;
  echo_integrator(p.integ, env.parameters);
  env.parameters_si["energy_J"] = beam.kinetic_energy;
  env.parameters_si["y_e_m"] = y;

  const auto result =
      trajectory::integrate_passage(rf.flux_weber, beam, y, to_config(p.integ));

  if (result.epsilon >= PerturbationStrength::regime_bound) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "epsilon=%.3g outside the expansion regime (< 0.1)",
                  result.epsilon);
    env.warnings.emplace_back(buf);
  }

  std::ofstream csv(g.out, std::ios::binary);
  if (!csv) throw UsageError("cannot open output file: " + g.out);
  csv << env.csv_comment_block();
  trajectory::write_samples_csv(result, csv);

  ordered_json& r = env.results;
  r["displacement_vs_free_flight_m"] = result.displacement_vs_free_flight;
  r["time_delay_s"] = result.time_delay;
  r["final_speed_m_per_s"] = result.final_speed;
  r["tail_correction_applied_m"] = result.tail_correction_applied;
  r["local_error_estimate_m"] = result.local_error_estimate;
  r["epsilon"] = result.epsilon;
  r["samples"] = result.samples.size();
  r["window_m"] = p.integ.window_factor * std::abs(y);

  const std::string side = sidecar_path(g.out);
  std::ofstream sj(side, std::ios::binary);
  if (!sj) throw UsageError("cannot open sidecar file: " + side);
  sj << env.to_json().dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------ table1 --

int run_table1(const GlobalOpts& g) {
  auto env = make_envelope("table1", g);
  const auto& table = catalog::builtin_table1();
  const auto exported = catalog::export_catalog(table);

  const std::string fmt = pick_format(g, "csv");
  if (fmt == "json") {
    ordered_json verification = ordered_json::array();
    for (const auto& rec : table) {
      const auto rep = catalog::verify_record(rec);
      auto col = [](const catalog::ColumnCheck& c, const char* unit_suffix) {
        ordered_json j;
        j[std::string("stored_") + unit_suffix] = c.stored;
        j[std::string("computed_") + unit_suffix] = c.computed;
        j["relative_deviation"] = c.relative_deviation;
        j["consistent"] = c.consistent;
        return j;
      };
      ordered_json v;
      v["name"] = rep.name;
      v["wavelength"] = col(rep.wavelength, "m");
      v["phase"] = col(rep.phase, "rad");
      v["shift"] = col(rep.shift, "m");
      verification.push_back(std::move(v));
    }
    env.results["catalog"] = exported;
    env.results["verification"] = std::move(verification);
    emit_text(env.to_json().dump(2) + "\n", g);
    return 0;
  }

  std::string text = env.csv_comment_block();
  text +=
      "name,energy_keV,lambda_pm,Lcoh_nm,phase_pi,shift_nm,flux_Gcm2,"
      "computed_lambda_pm,computed_phase_pi,computed_shift_nm,"
      "lambda_dev_rel,phase_dev_rel,shift_dev_rel,"
      "lambda_consistent,phase_consistent,shift_consistent\n";
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto rep = catalog::verify_record(table[i]);
    const auto& ex = exported[i];
    text += table[i].name;
    for (const char* key : {"energy_keV", "lambda_pm", "Lcoh_nm", "phase_pi",
                            "shift_nm", "flux_Gcm2"}) {
      text += ',' + ex.at(key).dump();
    }
    auto num = [&](double v, const char* spec) {
      std::snprintf(buf, sizeof buf, spec, v);
      text += ',';
      text += buf;
    };
    num(units::m_to_pm(rep.wavelength.computed), "%.10g");
    num(units::rad_to_pi_units(rep.phase.computed), "%.10g");
    num(units::m_to_nm(rep.shift.computed), "%.10g");
    num(rep.wavelength.relative_deviation, "%.6e");
    num(rep.phase.relative_deviation, "%.6e");
    num(rep.shift.relative_deviation, "%.6e");
    for (bool b : {rep.wavelength.consistent, rep.phase.consistent,
                   rep.shift.consistent}) {
      text += b ? ",true" : ",false";
    }
    text += '\n';
  }
  emit_text(text, g);
  return 0;
}

// ----------------------------------------------------------------- regimes --

struct RegimesParams {
  std::string record;
  std::string name = "custom";
  double energy_kev = unset;
  double spread_ev = unset;
  FluxSource flux;
  double ye_um = unset;
};

int run_regimes(const RegimesParams& p, const GlobalOpts& g) {
  auto env = make_envelope("regimes", g);

  catalog::ExperimentRecord rec;
  const bool custom_given = given(p.energy_kev) || given(p.spread_ev) ||
                            given(p.flux.flux_gcm2) || given(p.flux.r_mm) ||
                            given(p.flux.n_per_mm) || given(p.flux.current);
  if (!p.record.empty() && custom_given) {
    throw UsageError("give --record or custom parameters, not both");
  }
  if (!p.record.empty()) {
    auto found = catalog::find_record(p.record);
    if (!found) {
      std::string msg = "unknown record '" + p.record + "'; valid names:";
      for (const auto& r : catalog::builtin_table1()) {
        msg += " " + r.name;
      }
      throw UsageError(msg);
    }
    rec = *found;
    env.parameters["record"] = p.record;
  } else {
    if (!given(p.energy_kev)) throw UsageError("missing --energy-kev");
    if (!given(p.spread_ev)) throw UsageError("missing --spread-ev");
    const auto rf = resolve_flux(p.flux);
    rec = catalog::record_from_parameters(
        p.name, units::kev_to_joule(p.energy_kev),
        units::ev_to_joule(p.spread_ev), rf.flux_weber,
        given(p.ye_um) ? std::optional<double>(units::um_to_m(p.ye_um))
                       : std::nullopt);
    env.parameters["name"] = p.name;
    env.parameters["energy_kev"] = p.energy_kev;
    env.parameters["spread_ev"] = p.spread_ev;
    echo_flux(p.flux, rf, env.parameters, env.parameters_si);
  }
  std::optional<double> y_override;
  if (given(p.ye_um)) {
    y_override = units::um_to_m(p.ye_um);
    env.parameters["ye_um"] = p.ye_um;
    env.parameters_si["y_e_m"] = *y_override;
  }

  const auto report = catalog::classify_regime(rec, y_override);

  ordered_json& r = env.results;
  r["name"] = rec.name;
  r["energy_J"] = rec.electron_energy;
  r["flux_Wb"] = rec.magnetic_flux;
  r["phase_pi"] = units::rad_to_pi_units(rec.phase_shift);
  r["coherence_length_m"] = report.coherence_length;
  r["coherence_length_nm"] = units::m_to_nm(report.coherence_length);
  r["v_dt_classical_m"] = report.v_dt_classical;
  r["v_dt_classical_nm"] = units::m_to_nm(report.v_dt_classical);
  if (report.v_dt_semiclassical) {
    r["v_dt_semiclassical_m"] = *report.v_dt_semiclassical;
    r["v_dt_semiclassical_nm"] = units::m_to_nm(*report.v_dt_semiclassical);
  } else {
    r["v_dt_semiclassical_m"] = nullptr;
    r["v_dt_semiclassical_nm"] = nullptr;
  }
  r["fringe_test_feasible"] = report.fringe_test_feasible;
  r["classical_force_testable"] = report.classical_force_testable;
  if (report.dispersionless_force_testable) {
    r["dispersionless_force_testable"] = *report.dispersionless_force_testable;
  } else {
    r["dispersionless_force_testable"] = nullptr;
    env.warnings.emplace_back(
        "no impact parameter available; semi-classical branch unavailable");
  }
  r["outcome_note"] = report.outcome_note;

  emit_text(render(env, g, "json"), g);
  return 0;
}

// ------------------------------------------------------------------- sweep --

struct SweepParams {
  double current_min = 0.0;
  double current_max = unset;
  std::size_t steps = 0;
  std::string modes = "with-core,without-core";
  std::string outputs = "classical,semiclassical,numeric";
  double energy_kev = unset;
  double r_mm = unset;
  double n_per_mm = unset;
  double ye_um = unset;
  IntegratorOpts integ;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_sweep_cmd(const SweepParams& p, const GlobalOpts& g) {
  if (!given(p.current_max)) throw UsageError("missing --current-max");
  if (p.steps == 0) throw UsageError("missing --steps");
  if (!given(p.energy_kev)) throw UsageError("missing --energy-kev");
  if (!given(p.r_mm)) throw UsageError("missing --solenoid-r-mm");
  if (!given(p.n_per_mm)) throw UsageError("missing --n-per-mm");
  if (g.out.empty()) throw UsageError("sweep requires --out <path>");

  sweep::SweepSpec spec;
  spec.current_min = p.current_min;
  spec.current_max = p.current_max;
  spec.steps = p.steps;
  for (const auto& tok : split_csv(p.modes)) {
    if (tok == "with-core") {
      spec.modes.push_back(sweep::MuRMode::with_core);
    } else if (tok == "without-core") {
      spec.modes.push_back(sweep::MuRMode::without_core);
    } else {
      throw UsageError("unknown mode '" + tok +
                       "'; valid: with-core, without-core");
    }
  }
  for (const auto& tok : split_csv(p.outputs)) {
    if (tok == "classical") {
      spec.outputs.push_back(sweep::OutputColumn::classical_delay);
    } else if (tok == "semiclassical") {
      spec.outputs.push_back(sweep::OutputColumn::semiclassical_delay);
    } else if (tok == "numeric") {
      spec.outputs.push_back(sweep::OutputColumn::numeric_delay);
    } else {
      throw UsageError("unknown output '" + tok +
                       "'; valid: classical, semiclassical, numeric");
    }
  }
  spec.electron_energy = units::kev_to_joule(p.energy_kev);
  spec.solenoid_radius = units::mm_to_m(p.r_mm);
  spec.winding_density = p.n_per_mm * 1e3;
  if (given(p.ye_um)) spec.impact_parameter = units::um_to_m(p.ye_um);
  spec.integrator = to_config(p.integ);

  auto env = make_envelope("sweep", g);
  env.parameters["current_min"] = p.current_min;
  env.parameters["current_max"] = p.current_max;
  env.parameters["steps"] = p.steps;
  env.parameters["modes"] = p.modes;
  env.parameters["outputs"] = p.outputs;
  env.parameters["energy_kev"] = p.energy_kev;
  env.parameters["solenoid_r_mm"] = p.r_mm;
  env.parameters["n_per_mm"] = p.n_per_mm;
  if (given(p.ye_um)) env.parameters["ye_um"] = p.ye_um;
  echo_integrator(p.integ, env.parameters);
  env.parameters_si["energy_J"] = spec.electron_energy;
  env.parameters_si["solenoid_radius_m"] = spec.solenoid_radius;
  env.parameters_si["winding_density_per_m"] = spec.winding_density;
  if (spec.impact_parameter) {
    env.parameters_si["y_e_m"] = *spec.impact_parameter;
  }

  const auto result = sweep::run_sweep(spec);
  for (const auto& w : result.warnings) env.warnings.push_back(w);

  const std::string fmt = pick_format(g, "csv");
  if (fmt == "json") {
    env.results["header"] = result.header;
    ordered_json rows = ordered_json::array();
    for (const auto& row : result.rows) {
      ordered_json r = ordered_json::array();
      for (const auto& cell : row) {
        if (cell) {
          r.push_back(*cell);
        } else {
          r.push_back(nullptr);
        }
      }
      rows.push_back(std::move(r));
    }
    env.results["rows"] = std::move(rows);
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw UsageError("cannot open output file: " + g.out);
    f << env.to_json().dump(2) << "\n";
    return 0;
  }

  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file: " + g.out);
  sweep::write_csv(result, env, f);
  return 0;
}

// -------------------------------------------------------------------- main --

int run(int argc, char** argv) {
  const json cfg = load_config_prepass(argc, argv);
  const Seeder seed{cfg};

  CLI::App app{
      "Semi-classical force model of flux-passage interferometry: analytic "
      "displacement/phase/delay chain, trajectory integration, experiment "
      "catalog verification, regime classification, and delay sweeps."};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format: csv or json");
  app.add_flag("--no-timestamp", g.no_timestamp,
               "Suppress the timestamp line/field");
  app.add_option("--config", g.config_path,
                 "JSON config file (same schema as the report parameter "
                 "echo); flags override it");

  AnalyticParams ap;
  seed_flux(seed, ap.flux);
  seed.num(ap.energy_kev, "energy_kev");
  seed.num(ap.ye_um, "ye_um");
  auto* cmd_analytic =
      app.add_subcommand("analytic", "Evaluate the analytic chain");
  cmd_analytic->fallthrough();
  add_flux_options(cmd_analytic, ap.flux);
  cmd_analytic->add_option("--energy-kev", ap.energy_kev,
                           "Beam kinetic energy (keV)");
  cmd_analytic->add_option("--ye-um", ap.ye_um, "Impact parameter (um)");

  TrajectoryParams tp;
  seed_flux(seed, tp.flux);
  seed.num(tp.energy_kev, "energy_kev");
  seed.num(tp.ye_um, "ye_um");
  seed_integrator(seed, tp.integ);
  auto* cmd_traj = app.add_subcommand(
      "trajectory", "Integrate one passage; CSV samples + JSON sidecar");
  cmd_traj->fallthrough();
  add_flux_options(cmd_traj, tp.flux);
  cmd_traj->add_option("--energy-kev", tp.energy_kev,
                       "Beam kinetic energy (keV)");
  cmd_traj->add_option("--ye-um", tp.ye_um, "Impact parameter (um, signed)");
  add_integrator_options(cmd_traj, tp.integ);

  auto* cmd_table =
      app.add_subcommand("table1", "Experiment catalog with verification");
  cmd_table->fallthrough();

  RegimesParams rp;
  seed.str(rp.record, "record");
  seed.str(rp.name, "name");
  seed.num(rp.energy_kev, "energy_kev");
  seed.num(rp.spread_ev, "spread_ev");
  seed_flux(seed, rp.flux);
  seed.num(rp.ye_um, "ye_um");
  auto* cmd_regimes =
      app.add_subcommand("regimes", "Feasibility / outcome classification");
  cmd_regimes->fallthrough();
  cmd_regimes->add_option("--record", rp.record,
                          "Catalog record name (case-insensitive)");
  cmd_regimes->add_option("--name", rp.name, "Name for a custom record");
  cmd_regimes->add_option("--energy-kev", rp.energy_kev,
                          "Beam kinetic energy (keV)");
  cmd_regimes->add_option("--spread-ev", rp.spread_ev, "Energy spread (eV)");
  add_flux_options(cmd_regimes, rp.flux);
  cmd_regimes->add_option("--ye-um", rp.ye_um,
                          "Impact parameter override (um)");

  SweepParams sp;
  seed.num(sp.current_min, "current_min");
  seed.num(sp.current_max, "current_max");
  seed.uint(sp.steps, "steps");
  seed.str(sp.modes, "modes");
  seed.str(sp.outputs, "outputs");
  seed.num(sp.energy_kev, "energy_kev");
  seed.num(sp.r_mm, "solenoid_r_mm");
  seed.num(sp.n_per_mm, "n_per_mm");
  seed.num(sp.ye_um, "ye_um");
  seed_integrator(seed, sp.integ);
  auto* cmd_sweep =
      app.add_subcommand("sweep", "Delay-vs-current curves to CSV");
  cmd_sweep->fallthrough();
  cmd_sweep->add_option("--current-min", sp.current_min, "Start current (A)");
  cmd_sweep->add_option("--current-max", sp.current_max, "End current (A)");
  cmd_sweep->add_option("--steps", sp.steps, "Number of currents (>= 2)");
  cmd_sweep->add_option("--modes", sp.modes,
                        "Comma list: with-core,without-core");
  cmd_sweep->add_option("--outputs", sp.outputs,
                        "Comma list: classical,semiclassical,numeric");
  cmd_sweep->add_option("--energy-kev", sp.energy_kev,
                        "Beam kinetic energy (keV)");
  cmd_sweep->add_option("--solenoid-r-mm", sp.r_mm, "Solenoid radius (mm)");
  cmd_sweep->add_option("--n-per-mm", sp.n_per_mm,
                        "Winding density (turns/mm)");
  cmd_sweep->add_option("--ye-um", sp.ye_um, "Impact parameter (um)");
  add_integrator_options(cmd_sweep, sp.integ);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (app.got_subcommand(cmd_analytic)) return run_analytic(ap, g);
  if (app.got_subcommand(cmd_traj)) return run_trajectory(tp, g);
  if (app.got_subcommand(cmd_table)) return run_table1(g);
  if (app.got_subcommand(cmd_regimes)) return run_regimes(rp, g);
  if (app.got_subcommand(cmd_sweep)) return run_sweep_cmd(sp, g);
  return 2;  // unreachable given require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const trajectory::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
