#pragma once

// Weak-excitation, no-jump model of the cavity + emitter restricted to the
// five states |0,g>, |1,g>, |0,1>, |1,1>, |0,2> (photon number, emitter level).
// Used as an independent check of the full master-equation runs.

#include "rabi/quantum_core.hpp"
#include "rabi/system_model.hpp"

#include <vector>

namespace rabi::oracle {

struct AmplitudeState {
  cplx c_0g = 0.0;
  cplx c_1g = 0.0;
  cplx c_01 = 0.0;
  cplx c_11 = 0.0;
  cplx c_02 = 0.0;

  double norm() const;
};

/// Free (drive-off) evolution by dt_ps, closed form.
AmplitudeState evolve_amplitudes(const SystemParams& params, const AmplitudeState& state, double dt_ps);

/// States at each of `times` (ascending, all >= t_start) starting from `state` at t_start.
std::vector<AmplitudeState> evolve_amplitudes(const SystemParams& params, const AmplitudeState& state,
                                              double t_start, const std::vector<double>& times);

/// Sudden resonant pi pulse on g <-> 1: -i sigma_x on that pair, level 2 untouched.
AmplitudeState apply_instantaneous_pi_pulse(const AmplitudeState& state);

/// Same rotation with the +i sigma_y phase convention (for convention-independence checks).
AmplitudeState apply_instantaneous_pi_pulse_sigma_y(const AmplitudeState& state);

struct PredictedObservables {
  double n_photon;
  cplx coherent_amplitude;
};

PredictedObservables predict_observables(const AmplitudeState& state);

}  // namespace rabi::oracle
