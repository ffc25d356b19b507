#include "abforce/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "abforce/electron_beam.hpp"
#include "abforce/kinematics.hpp"
#include "abforce/passage.hpp"
#include "abforce/solenoid.hpp"

namespace abforce::sweep {

namespace {

bool wants(const SweepSpec& spec, OutputColumn c) {
  return std::find(spec.outputs.begin(), spec.outputs.end(), c) !=
         spec.outputs.end();
}

struct RowOutcome {
  std::vector<std::optional<double>> cells;
  std::vector<std::string> warnings;
};

}  // namespace

void SweepSpec::validate() const {
  if (!(current_min >= 0.0)) {
    throw std::invalid_argument("sweep: current_min must be >= 0");
  }
  if (!(current_max > current_min)) {
    throw std::invalid_argument("sweep: current_max must exceed current_min");
  }
  if (steps < 2) {
    throw std::invalid_argument("sweep: steps must be >= 2");
  }
  if (modes.empty()) {
    throw std::invalid_argument("sweep: at least one permeability mode");
  }
  if (outputs.empty()) {
    throw std::invalid_argument("sweep: at least one output column");
  }
  if (!(electron_energy > 0.0)) {
    throw std::domain_error("sweep: electron energy must be > 0");
  }
  if (!(solenoid_radius > 0.0)) {
    throw std::domain_error("sweep: solenoid radius must be > 0");
  }
  if (!(winding_density >= 0.0)) {
    throw std::domain_error("sweep: winding density must be >= 0");
  }
  const bool needs_y = wants(*this, OutputColumn::semiclassical_delay) ||
                       wants(*this, OutputColumn::numeric_delay);
  if (needs_y && (!impact_parameter || *impact_parameter == 0.0)) {
    throw std::invalid_argument(
        "sweep: impact parameter required for semi-classical or numeric "
        "columns");
  }
  integrator.validate();
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto beam = ElectronBeam::from_energy(spec.electron_energy);

  SweepResult result;
  result.header.push_back("current_A");
  auto per_mode = [&](const std::string& stem) {
    for (const auto mode : spec.modes) {
      result.header.push_back(stem + "_" + suffix_of(mode));
    }
  };
  per_mode("B_T");
  per_mode("flux_Wb");
  if (wants(spec, OutputColumn::classical_delay)) per_mode("dt_classical_s");
  if (wants(spec, OutputColumn::semiclassical_delay)) {
    per_mode("dt_semiclassical_s");
  }
  if (wants(spec, OutputColumn::numeric_delay)) per_mode("dt_numeric_s");

  const std::size_t n = spec.steps;
  std::vector<RowOutcome> outcomes(n);

  auto compute_row = [&](std::size_t i) {
    RowOutcome out;
    const double current =
        spec.current_min +
        (spec.current_max - spec.current_min) *
            (static_cast<double>(i) / static_cast<double>(n - 1));
    out.cells.push_back(current);

    std::vector<double> fluxes;
    fluxes.reserve(spec.modes.size());
    for (const auto mode : spec.modes) {
      const auto sol = Solenoid::make(spec.solenoid_radius,
                                      spec.winding_density, current,
                                      mu_r_of(mode));
      fluxes.push_back(sol.flux);
      out.cells.push_back(sol.field);
    }
    for (const double flux : fluxes) out.cells.push_back(flux);

    char label[160];
    if (wants(spec, OutputColumn::classical_delay)) {
      for (const double flux : fluxes) {
        out.cells.push_back(kinematics::classical_delay(flux, beam));
      }
    }
    if (wants(spec, OutputColumn::semiclassical_delay)) {
      for (const double flux : fluxes) {
        out.cells.push_back(
            kinematics::semiclassical_delay(flux, beam, *spec.impact_parameter));
      }
    }
    if (wants(spec, OutputColumn::numeric_delay)) {
      for (std::size_t m = 0; m < fluxes.size(); ++m) {
        try {
          const double rel = trajectory::numeric_relative_displacement(
              fluxes[m], beam, *spec.impact_parameter, spec.integrator);
          out.cells.push_back(rel / beam.speed);
        } catch (const trajectory::ConvergenceError& e) {
          std::snprintf(label, sizeof label,
                        "row current_A=%.6g mode %s: numeric cell dropped (%s)",
                        current, suffix_of(spec.modes[m]), e.what());
          out.warnings.emplace_back(label);
          out.cells.push_back(std::nullopt);
        }
      }
    }

    if (spec.impact_parameter) {
      for (std::size_t m = 0; m < fluxes.size(); ++m) {
        const auto eps =
            perturbation_strength(fluxes[m], beam, *spec.impact_parameter);
        if (!eps.in_expansion_regime()) {
          std::snprintf(label, sizeof label,
                        "row current_A=%.6g mode %s: epsilon=%.3g outside the "
                        "expansion regime (< 0.1)",
                        current, suffix_of(spec.modes[m]), eps.value);
          out.warnings.emplace_back(label);
        }
      }
    }
    return out;
  };

  // Rows are independent; farm them out to a small pool and stitch the
  // results back in row order so output stays deterministic.
  const unsigned pool = std::min<unsigned>(
      std::max(1u, std::thread::hardware_concurrency()), 8u);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      outcomes[i] = compute_row(i);
    }
  };
  if (pool <= 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (auto& oc : outcomes) {
    result.rows.push_back(std::move(oc.cells));
    for (auto& w : oc.warnings) result.warnings.push_back(std::move(w));
  }
  return result;
}

void write_csv(const SweepResult& result, const report::ReportEnvelope& env,
               std::ostream& out) {
  out << env.csv_comment_block();
  for (std::size_t c = 0; c < result.header.size(); ++c) {
    out << (c ? "," : "") << result.header[c];
  }
  out << "\n";
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      if (row[c]) out << report::format_full(*row[c]);
    }
    out << "\n";
  }
}

}  // namespace abforce::sweep
