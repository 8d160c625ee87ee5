#pragma once

// Rotating-frame Hamiltonian and Lindblad channels of the cavity + cascade
// three-level emitter.
//
// Units: energies and rates in micro-eV (frequencies of levels/carriers in eV),
// times in ps. Operators returned here are in rad/ps.

#include "rabi/quantum_core.hpp"

#include <string>
#include <vector>

namespace rabi {

/// hbar in micro-eV * ps.
inline constexpr double kHbarUeVps = 658.2119569;
inline constexpr double kUeVPerEV = 1e6;

/// E / hbar, micro-eV -> rad/ps.
constexpr double to_angular_rate(double energy_ueV) { return energy_ueV / kHbarUeVps; }

struct SystemParams {
  double g_ueV = 100.0;
  double omega_1_eV = 1.3066;
  /// Biexciton level: 2*omega_1 - 2.27 meV.
  double omega_2_eV = 2.0 * 1.3066 - 2.27e-3;
  /// Resonant with the 1 <-> 2 transition.
  double omega_cav_eV = (2.0 * 1.3066 - 2.27e-3) - 1.3066;
  double gamma_1_ueV = 1.0;
  double gamma_2_ueV = 5.0;
  double gamma_a_ueV = 20.0;
  double gamma_d1_ueV = 0.0;
  double gamma_d2_ueV = 0.0;

  /// Throws ValidationError naming the first negative rate.
  void validate() const;
  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Carrier frequencies defining the rotating frame.
struct FrameSpec {
  double control_carrier_eV;
  double probe_carrier_eV;

  /// Control at omega_1, probe at the cavity frequency.
  static FrameSpec resonant(const SystemParams& p) { return {p.omega_1_eV, p.omega_cav_eV}; }
  void validate() const;
  friend bool operator==(const FrameSpec&, const FrameSpec&) = default;
};

struct JumpOperator {
  std::string label;
  double rate_ueV;
  Operator op;  // dimensionless

  /// sqrt(rate / hbar), in (rad/ps)^(1/2).
  double coefficient() const;
  Operator scaled() const { return op * cplx(coefficient()); }
};

Operator build_drift_hamiltonian(const SystemParams& params, const FrameSpec& frame, HilbertDims dims);
Operator build_coupling(const SystemParams& params, HilbertDims dims);
/// Order: 2->1, 1->g, dephasing 1, dephasing 2, cavity. Zero-rate channels are omitted.
std::vector<JumpOperator> build_jump_operators(const SystemParams& params, HilbertDims dims);

/// sigma_11 + 2 sigma_22 + a^dag a
Operator excitation_number_operator(HilbertDims dims);

/// Static part of the generator: drift + coupling Hamiltonian and jump channels.
struct SystemModel {
  HilbertDims dims;
  Operator hamiltonian;
  std::vector<JumpOperator> jumps;

  static SystemModel build(const SystemParams& params, const FrameSpec& frame, HilbertDims dims);
};

}  // namespace rabi
