#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "abforce/electron_beam.hpp"

// Numerical integration of a passage under the longitudinal force law,
// independent of the closed-form expansion chain. The two routes cross-check
// each other: the closed forms say where the integrator must land, and the
// integrator says which terms of the expansions survive contact with the
// dynamics.
//
// Formulation. Newton's equations dx/dt = v, m dv/dt = F_x(v, x) are
// integrated in x rather than t, with state (delta, v):
//
//   d(delta)/dx = 1 - v0 / v,        d(v)/dx = F_x(v, x) / (m v),
//
// where delta(x) is the lead (+) or lag (-) relative to a free-flight
// electron that entered the window at the same moment. Accumulating delta
// directly avoids the catastrophic cancellation of forming (2W - v0 T) from
// two nearly equal lengths, and makes the zero-flux case exact: with no
// force every derivative evaluates to zero and the result is bit-for-bit 0.
//
// Scheme: embedded Dormand-Prince 5(4) with the usual PI-free step
// controller; the fifth-order solution is propagated, the embedded
// difference drives step acceptance and is accumulated (in absolute value)
// into local_error_estimate as a conservative bound on the displacement
// error.
//
// Window. Integration runs over x in [-W, +W], W = window_factor * |y_e|.
// The force tail outside the window still contributes; with tail_correction
// enabled, its first-order quadrature
//
//   tail = (flux * e * sign(y_e) / (pi m v0)) * atan(|y_e| / W)
//
// is added to the integrated displacement, leaving a residual O(eps/wf^3).
// With the correction disabled the window truncation error falls off only as
// 1/window_factor, which the tests pin as a scaling law.
//
// All functions here are pure and thread-safe; many passages may be
// integrated concurrently.

namespace abforce::trajectory {

struct IntegratorConfig {
  double window_factor = 1e4;     // W = window_factor * |y_e|, >= 100
  double relative_tolerance = 1e-10;
  double absolute_tolerance_position = 1e-18;  // m
  std::size_t max_steps = 1'000'000;
  bool tail_correction = true;

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

struct TrajectorySample {
  double t;  // s, measured from window entry
  double x;  // m
  double v;  // m/s
};

struct TrajectoryResult {
  std::vector<TrajectorySample> samples;  // one per accepted step
  double displacement_vs_free_flight;     // m, lead (+) / lag (-)
  double time_delay;                      // s, = -displacement / v0
  double final_speed;                     // m/s, at x = +W
  double tail_correction_applied;         // m, 0 when disabled
  double local_error_estimate;            // m, sum of per-step error bounds
  double epsilon;                         // expansion parameter of the run
};

/// Integration failed to converge (step-count or step-size exhaustion, or
/// the speed fell below v0/2, outside the model's useful range). Carries the
/// partial result up to the failure point.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, TrajectoryResult partial);
  const TrajectoryResult& partial() const { return partial_; }

 private:
  TrajectoryResult partial_;
};

/// Integrate one passage at signed impact parameter y_e.
/// Throws std::domain_error for y_e == 0, std::invalid_argument for a bad
/// config, ConvergenceError when integration cannot finish.
TrajectoryResult integrate_passage(double flux_weber, const ElectronBeam& beam,
                                   double y_e_m,
                                   const IntegratorConfig& config = {});

/// Upper-side minus lower-side displacement for a symmetric interferometer
/// with arms at +/- |y_e|.
double numeric_relative_displacement(double flux_weber,
                                     const ElectronBeam& beam, double y_e_m,
                                     const IntegratorConfig& config = {});

/// Isolate the part of the one-sided displacement quadratic in flux, by
/// Richardson combination of runs at flux, flux/2 and flux/4 (the three-run
/// stencil cancels the linear and cubic terms; two runs would leave a cubic
/// contamination of order epsilon, too coarse for percent-level work).
/// Returns the quadratic contribution at the given flux, in meters.
double extract_second_order(double flux_weber, const ElectronBeam& beam,
                            double y_e_m, const IntegratorConfig& config = {});

struct ConvergenceCell {
  double relative_tolerance;
  double window_factor;
  double displacement;          // m (NaN when the run failed)
  double local_error_estimate;  // m
  std::size_t steps;
  bool converged;
};

/// Displacement as a function of tolerance and window size, plus the
/// extrapolated limit (tightest tolerance, widest window) and an uncertainty
/// taken from the last ladder increments.
struct ConvergenceReport {
  std::vector<ConvergenceCell> cells;
  double extrapolated_displacement;  // m
  double uncertainty;                // m
};

ConvergenceReport convergence_report(double flux_weber,
                                     const ElectronBeam& beam, double y_e_m);

/// Raw sample dump: header `t_s,x_m,v_m_per_s`, one row per sample, full
/// round-trip precision.
void write_samples_csv(const TrajectoryResult& result, std::ostream& out);

}  // namespace abforce::trajectory
