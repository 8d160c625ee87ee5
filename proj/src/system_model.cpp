#include "rabi/system_model.hpp"

#include "rabi/errors.hpp"

#include <cmath>

namespace rabi {

void SystemParams::validate() const {
  const auto check = [](double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError("must be finite", field);
    if (v < 0.0) throw ValidationError("must be >= 0", field);
  };
  check(g_ueV, "system.g_ueV");
  check(gamma_1_ueV, "system.gamma_1_ueV");
  check(gamma_2_ueV, "system.gamma_2_ueV");
  check(gamma_a_ueV, "system.gamma_a_ueV");
  check(gamma_d1_ueV, "system.gamma_d1_ueV");
  check(gamma_d2_ueV, "system.gamma_d2_ueV");
  if (!(omega_1_eV > 0.0)) throw ValidationError("must be > 0", "system.omega_1_eV");
  if (!(omega_2_eV > 0.0)) throw ValidationError("must be > 0", "system.omega_2_eV");
  if (!(omega_cav_eV > 0.0)) throw ValidationError("must be > 0", "system.omega_cav_eV");
}

void FrameSpec::validate() const {
  if (!(control_carrier_eV > 0.0) || !std::isfinite(control_carrier_eV))
    throw ValidationError("must be a positive frequency", "frame.control_carrier_eV");
  if (!(probe_carrier_eV > 0.0) || !std::isfinite(probe_carrier_eV))
    throw ValidationError("must be a positive frequency", "frame.probe_carrier_eV");
}

double JumpOperator::coefficient() const { return std::sqrt(to_angular_rate(rate_ueV)); }

Operator build_drift_hamiltonian(const SystemParams& p, const FrameSpec& frame, HilbertDims dims) {
  const double w1 = to_angular_rate((p.omega_1_eV - frame.control_carrier_eV) * kUeVPerEV);
  const double w2 = to_angular_rate(
      (p.omega_2_eV - frame.control_carrier_eV - frame.probe_carrier_eV) * kUeVPerEV);
  const double wc = to_angular_rate((p.omega_cav_eV - frame.probe_carrier_eV) * kUeVPerEV);

  Matrix h = Matrix::Zero(dims.total(), dims.total());
  for (int n = 0; n <= dims.n_max(); ++n) {
    h(dims.index(Level::g, n), dims.index(Level::g, n)) = wc * n;
    h(dims.index(Level::one, n), dims.index(Level::one, n)) = w1 + wc * n;
    h(dims.index(Level::two, n), dims.index(Level::two, n)) = w2 + wc * n;
  }
  return {dims, std::move(h)};
}

Operator build_coupling(const SystemParams& p, HilbertDims dims) {
  if (p.g_ueV < 0.0) throw ValidationError("must be >= 0", "system.g_ueV");
  const Matrix a = annihilation_operator(dims.n_max());
  const Operator emit = tensor_embed(emitter_transition(Level::one, Level::two), a.adjoint(), dims);
  return cplx(to_angular_rate(p.g_ueV)) * (emit + emit.adjoint());
}

std::vector<JumpOperator> build_jump_operators(const SystemParams& p, HilbertDims dims) {
  p.validate();
  std::vector<JumpOperator> out;
  const auto add = [&](const char* label, double rate, Operator op) {
    if (rate > 0.0) out.push_back({label, rate, std::move(op)});
  };
  add("decay_2_to_1", p.gamma_2_ueV, embed_emitter(emitter_transition(Level::one, Level::two), dims));
  add("decay_1_to_g", p.gamma_1_ueV, embed_emitter(emitter_transition(Level::g, Level::one), dims));
  add("dephasing_1", p.gamma_d1_ueV, embed_emitter(emitter_transition(Level::one, Level::one), dims));
  add("dephasing_2", p.gamma_d2_ueV, embed_emitter(emitter_transition(Level::two, Level::two), dims));
  add("cavity_loss", p.gamma_a_ueV, embed_cavity(annihilation_operator(dims.n_max()), dims));
  return out;
}

Operator excitation_number_operator(HilbertDims dims) {
  const Matrix a = annihilation_operator(dims.n_max());
  return embed_emitter(emitter_transition(Level::one, Level::one), dims) +
         cplx(2.0) * embed_emitter(emitter_transition(Level::two, Level::two), dims) +
         embed_cavity(a.adjoint() * a, dims);
}

SystemModel SystemModel::build(const SystemParams& params, const FrameSpec& frame, HilbertDims dims) {
  params.validate();
  frame.validate();
  return {dims, build_drift_hamiltonian(params, frame, dims) + build_coupling(params, dims),
          build_jump_operators(params, dims)};
}

}  // namespace rabi
