#pragma once

// Lindblad master-equation integration with time-dependent Gaussian drive.

#include "rabi/pulses.hpp"
#include "rabi/quantum_core.hpp"
#include "rabi/system_model.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rabi {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double dt_initial_ps = 1e-3;
  double dt_max_ps = 0.5;
  double dt_min_ps = 1e-10;
  double sample_dt_ps = 0.05;
  bool keep_states = true;

  void validate() const;
  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct TimeSpan {
  double start_ps = 0.0;
  double end_ps = 100.0;

  void validate() const;
  /// start, start + sample_dt, ... up to end (inclusive within 1e-9 ps).
  std::vector<double> sample_grid(double sample_dt) const;
  friend bool operator==(const TimeSpan&, const TimeSpan&) = default;
};

/// Top-Fock population above which a run is flagged as truncation-limited.
inline constexpr double kTruncationGuard = 1e-6;
/// Trace drift that triggers renormalization of the propagated state.
inline constexpr double kRenormalizeThreshold = 1e-9;

struct Diagnostics {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double max_top_fock_population = 0.0;
  bool truncation_flag = false;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
  int renormalizations = 0;
};

/// Column names of the per-sample observable table, in CSV order.
inline constexpr std::array<const char*, 9> kObservableColumns = {
    "n_photon", "coh_re", "coh_im", "coh_sq", "pop_g", "pop_1", "pop_2", "purity", "trace_err"};

struct EvolutionResult {
  HilbertDims dims{1};
  std::vector<double> times;
  std::optional<std::vector<DensityMatrix>> states;
  std::map<std::string, std::vector<double>> observables;
  Diagnostics diagnostics;

  const std::vector<double>& column(const std::string& name) const;
};

/// drho/dt at time t.
Matrix lindblad_rhs(const DensityMatrix& rho, double t, const SystemModel& model,
                    const PulseSchedule& schedule);

/// Adaptive Dormand-Prince 5(4) integration, dense output on the sample grid.
EvolutionResult evolve(const SystemModel& model, const PulseSchedule& schedule, const DensityMatrix& rho0,
                       TimeSpan span, const IntegratorConfig& cfg);

/// Fixed-step classical RK4; samples on the grid of cfg.sample_dt_ps.
EvolutionResult evolve_fixed_rk4(const SystemModel& model, const PulseSchedule& schedule,
                                 const DensityMatrix& rho0, TimeSpan span, double dt,
                                 const IntegratorConfig& cfg = {});

/// Schroedinger evolution; the model must have no jump channels.
EvolutionResult evolve_pure(const SystemModel& model, const PulseSchedule& schedule, const KetState& psi0,
                            TimeSpan span, const IntegratorConfig& cfg);

}  // namespace rabi
