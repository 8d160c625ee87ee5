#include "rabi/amplitude_oracle.hpp"

#include "rabi/errors.hpp"

#include <cmath>

namespace rabi::oracle {

double AmplitudeState::norm() const {
  return std::sqrt(std::norm(c_0g) + std::norm(c_1g) + std::norm(c_01) + std::norm(c_11) + std::norm(c_02));
}

AmplitudeState evolve_amplitudes(const SystemParams& p, const AmplitudeState& s, double dt) {
  const double ga = to_angular_rate(p.gamma_a_ueV);
  const double g1 = to_angular_rate(p.gamma_1_ueV);
  const double g2 = to_angular_rate(p.gamma_2_ueV);
  const double g = to_angular_rate(p.g_ueV);

  AmplitudeState out;
  out.c_0g = s.c_0g;
  out.c_1g = s.c_1g * std::exp(-0.5 * ga * dt);
  out.c_01 = s.c_01 * std::exp(-0.5 * g1 * dt);

  // d/dt (c_11, c_02) = M (c_11, c_02), M = -kbar I + N,
  // N = [[-d, -ig], [-ig, d]], N^2 = (d^2 - g^2) I.
  const double k11 = 0.5 * (ga + g1);
  const double k02 = 0.5 * g2;
  const double kbar = 0.5 * (k11 + k02);
  const double d = 0.5 * (k11 - k02);
  const cplx lambda = std::sqrt(cplx(d * d - g * g));
  const cplx ch = std::cosh(lambda * dt);
  const cplx sh_over = std::abs(lambda * dt) < 1e-12 ? cplx(dt) : std::sinh(lambda * dt) / lambda;
  const cplx ig(0.0, g);
  const double decay = std::exp(-kbar * dt);
  out.c_11 = decay * (ch * s.c_11 + sh_over * (-d * s.c_11 - ig * s.c_02));
  out.c_02 = decay * (ch * s.c_02 + sh_over * (-ig * s.c_11 + d * s.c_02));
  return out;
}

std::vector<AmplitudeState> evolve_amplitudes(const SystemParams& p, const AmplitudeState& s, double t_start,
                                              const std::vector<double>& times) {
  std::vector<AmplitudeState> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < t_start) throw ValidationError("oracle sample time precedes the start time");
    out.push_back(evolve_amplitudes(p, s, t - t_start));
  }
  return out;
}

AmplitudeState apply_instantaneous_pi_pulse(const AmplitudeState& s) {
  const cplx mi(0.0, -1.0);
  return {mi * s.c_01, mi * s.c_11, mi * s.c_0g, mi * s.c_1g, s.c_02};
}

AmplitudeState apply_instantaneous_pi_pulse_sigma_y(const AmplitudeState& s) {
  // i sigma_y = [[0, 1], [-1, 0]] on (g, 1): g <- 1, 1 <- -g.
  return {s.c_01, s.c_11, -s.c_0g, -s.c_1g, s.c_02};
}

PredictedObservables predict_observables(const AmplitudeState& s) {
  return {std::norm(s.c_11) + std::norm(s.c_1g), std::conj(s.c_0g) * s.c_1g + std::conj(s.c_01) * s.c_11};
}

}  // namespace rabi::oracle
