#include "rabi/amplitude_oracle.hpp"
#include "rabi/evolution.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace rabi;
using namespace rabi::oracle;

namespace {

// Generator on (c_0g, c_1g, c_01, c_11, c_02) built term by term, exponentiated numerically.
Eigen::Matrix<cplx, 5, 5> generator(const SystemParams& p) {
  const double ga = to_angular_rate(p.gamma_a_ueV), g1 = to_angular_rate(p.gamma_1_ueV);
  const double g2 = to_angular_rate(p.gamma_2_ueV), g = to_angular_rate(p.g_ueV);
  const cplx i(0.0, 1.0);
  Eigen::Matrix<cplx, 5, 5> m = Eigen::Matrix<cplx, 5, 5>::Zero();
  m(1, 1) = -0.5 * ga;
  m(2, 2) = -0.5 * g1;
  m(3, 3) = -0.5 * (ga + g1);
  m(4, 4) = -0.5 * g2;
  m(3, 4) = m(4, 3) = -i * g;
  return m;
}

Eigen::Matrix<cplx, 5, 1> as_vector(const AmplitudeState& s) {
  Eigen::Matrix<cplx, 5, 1> v;
  v << s.c_0g, s.c_1g, s.c_01, s.c_11, s.c_02;
  return v;
}

void check_against_expm(const SystemParams& p, const AmplitudeState& s, double t) {
  const Eigen::Matrix<cplx, 5, 5> u = (generator(p) * t).exp();
  const auto expected = (u * as_vector(s)).eval();
  const auto got = as_vector(evolve_amplitudes(p, s, t));
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
}

}  // namespace

TEST_CASE("closed form matches a numerical matrix exponential") {
  const AmplitudeState s{0.9, cplx(0.1, 0.2), cplx(-0.3, 0.05), cplx(0.2, -0.1), cplx(0.0, 0.15)};
  SystemParams under;  // g > |d|: underdamped
  SystemParams over;
  over.g_ueV = 2.0;  // g < |d|: overdamped
  SystemParams critical;
  // |d| = g exactly: lambda = 0 branch.
  critical.gamma_1_ueV = 0.0;
  critical.gamma_2_ueV = 0.0;
  critical.gamma_a_ueV = 40.0;
  critical.g_ueV = 10.0;
  for (const SystemParams& p : {under, over, critical}) {
    for (double t : {0.0, 0.3, 7.0, 42.0}) check_against_expm(p, s, t);
  }
}

TEST_CASE("lossless vacuum Rabi limit") {
  SystemParams p;
  p.gamma_1_ueV = p.gamma_2_ueV = p.gamma_a_ueV = 0.0;
  const AmplitudeState s{0.0, 0.0, 0.0, 1.0, 0.0};
  for (double t : {1.0, 5.0, 10.3, 20.0}) {
    const auto out = evolve_amplitudes(p, s, t);
    const double c = std::cos(to_angular_rate(100.0) * t);
    CHECK(std::norm(out.c_11) == doctest::Approx(c * c).epsilon(1e-12));
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("evolution composes") {
  const SystemParams p;
  const AmplitudeState s{0.8, 0.3, 0.1, 0.4, 0.2};
  const auto a = evolve_amplitudes(p, evolve_amplitudes(p, s, 3.0), 4.5);
  const auto b = evolve_amplitudes(p, s, 7.5);
  CHECK((as_vector(a) - as_vector(b)).cwiseAbs().maxCoeff() < 1e-14);

  const auto many = evolve_amplitudes(p, s, 2.0, std::vector<double>{2.0, 5.0, 9.5});
  REQUIRE(many.size() == 3);
  CHECK((as_vector(many[2]) - as_vector(b)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS(evolve_amplitudes(p, s, 2.0, std::vector<double>{1.0}));
}

TEST_CASE("instantaneous pi pulses") {
  const AmplitudeState s{cplx(0.5, 0.1), 0.2, cplx(0.0, 0.3), 0.4, 0.6};
  const auto x = apply_instantaneous_pi_pulse(s);
  CHECK(x.c_0g == cplx(0.0, -1.0) * s.c_01);
  CHECK(x.c_01 == cplx(0.0, -1.0) * s.c_0g);
  CHECK(x.c_1g == cplx(0.0, -1.0) * s.c_11);
  CHECK(x.c_02 == s.c_02);
  // Two pi pulses give -1 on the g/1 subspace.
  const auto xx = apply_instantaneous_pi_pulse(x);
  CHECK(xx.c_0g == -s.c_0g);
  CHECK(xx.c_11 == -s.c_11);
  CHECK(xx.c_02 == s.c_02);

  const auto y = apply_instantaneous_pi_pulse_sigma_y(s);
  CHECK(y.c_0g == s.c_01);
  CHECK(y.c_01 == -s.c_0g);
  // Observables after a single pulse do not depend on the convention.
  const auto ox = predict_observables(x), oy = predict_observables(y);
  CHECK(ox.n_photon == doctest::Approx(oy.n_photon));
  CHECK(std::abs(ox.coherent_amplitude) == doctest::Approx(std::abs(oy.coherent_amplitude)));
}

TEST_CASE("agrees with the full model for a lossless single-excitation protocol") {
  // Initial state c_0g|g,0> + c_1g|g,1>, pi pulse at 20 ps, compare at 40 ps.
  SystemParams p;
  p.gamma_1_ueV = p.gamma_2_ueV = p.gamma_a_ueV = 0.0;
  const HilbertDims dims(2);
  const SystemModel model = SystemModel::build(p, FrameSpec::resonant(p), dims);
  Vector psi = Vector::Zero(dims.total());
  psi(dims.index(Level::g, 0)) = std::sqrt(0.95);
  psi(dims.index(Level::g, 1)) = std::sqrt(0.05);

  GaussianPulse pi;
  pi.target = PulseTarget::emitter_g1;
  pi.t0_ps = 20.0;
  pi.fwhm_ps = 0.05;
  pi.area = std::numbers::pi;
  IntegratorConfig cfg;
  cfg.sample_dt_ps = 1.0;
  const auto full = evolve_pure(model, PulseSchedule{{pi}}, KetState(dims, psi), {0.0, 40.0}, cfg);

  const AmplitudeState s0{std::sqrt(0.95), std::sqrt(0.05), 0.0, 0.0, 0.0};
  const auto s1 = evolve_amplitudes(p, apply_instantaneous_pi_pulse(evolve_amplitudes(p, s0, 20.0)), 20.0);
  const auto pred = predict_observables(s1);
  CHECK(full.column("n_photon").back() == doctest::Approx(pred.n_photon).epsilon(2e-3));
  CHECK(full.column("coh_re").back() == doctest::Approx(pred.coherent_amplitude.real()).epsilon(2e-3).scale(0.2));
  CHECK(full.column("coh_im").back() == doctest::Approx(pred.coherent_amplitude.imag()).epsilon(2e-3).scale(0.2));
}

TEST_CASE("two-pulse protocols predict the same observables under either pi-pulse convention") {
  const SystemParams p;
  const AmplitudeState s0{std::sqrt(0.95), std::sqrt(0.05), 0.0, 0.0, 0.0};
  for (double t2 : {44.9, 50.3, 55.8}) {
    const auto run = [&](auto pulse) {
      AmplitudeState s = pulse(evolve_amplitudes(p, s0, 23.0));
      s = pulse(evolve_amplitudes(p, s, t2 - 25.0));
      return s;
    };
    const AmplitudeState x = run(apply_instantaneous_pi_pulse);
    const AmplitudeState y = run(apply_instantaneous_pi_pulse_sigma_y);
    for (double dt : {0.0, 3.0, 11.0, 30.0}) {
      const auto ox = predict_observables(evolve_amplitudes(p, x, dt));
      const auto oy = predict_observables(evolve_amplitudes(p, y, dt));
      CHECK(ox.n_photon == doctest::Approx(oy.n_photon).epsilon(1e-12));
      CHECK(std::abs(ox.coherent_amplitude - oy.coherent_amplitude) < 1e-12);
    }
  }
}
