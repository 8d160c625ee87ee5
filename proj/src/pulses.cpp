#include "rabi/pulses.hpp"

#include "rabi/errors.hpp"
#include "rabi/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rabi {

namespace {

const double kFwhmToSigma = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));

}  // namespace

PulseTarget parse_pulse_target(std::string_view name) {
  if (name == "cavity") return PulseTarget::cavity;
  if (name == "emitter_g1") return PulseTarget::emitter_g1;
  throw ValidationError("unknown pulse target '" + std::string(name) +
                        "' (expected cavity or emitter_g1)");
}

std::string_view pulse_target_name(PulseTarget target) {
  return target == PulseTarget::cavity ? "cavity" : "emitter_g1";
}

double GaussianPulse::sigma_ps() const { return fwhm_ps * kFwhmToSigma; }

double GaussianPulse::peak_amplitude() const { return amplitude_from_area(area, fwhm_ps); }

bool GaussianPulse::active_at(double t) const {
  return std::abs(t - t0_ps) <= kPulseSupportFwhm * fwhm_ps;
}

double amplitude_from_area(double area, double fwhm_ps) {
  if (!(fwhm_ps > 0.0)) throw ValidationError("fwhm must be > 0");
  const double s = fwhm_ps * kFwhmToSigma;
  return area / (2.0 * s * std::sqrt(2.0 * std::numbers::pi));
}

cplx envelope(const GaussianPulse& p, double t) {
  const double s = p.sigma_ps();
  const double x = (t - p.t0_ps) / s;
  const double mag = p.peak_amplitude() * std::exp(-0.5 * x * x);
  return std::polar(mag, p.phase - to_angular_rate(p.detuning_ueV) * t);
}

std::vector<std::string> validate_schedule(const PulseSchedule& schedule) {
  std::vector<std::string> warnings;
  const auto& ps = schedule.pulses;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string field = "pulse." + std::to_string(i + 1);
    const GaussianPulse& p = ps[i];
    if (!std::isfinite(p.t0_ps)) throw ValidationError("must be finite", field + ".t0_ps");
    if (!(p.fwhm_ps > 0.0) || !std::isfinite(p.fwhm_ps))
      throw ValidationError("must be > 0", field + ".fwhm_ps");
    if (!(p.area >= 0.0) || !std::isfinite(p.area)) throw ValidationError("must be >= 0", field + ".area");
    if (!std::isfinite(p.detuning_ueV)) throw ValidationError("must be finite", field + ".detuning_ueV");
    if (!std::isfinite(p.phase)) throw ValidationError("must be finite", field + ".phase");
    if (i > 0 && p.t0_ps < ps[i - 1].t0_ps)
      throw ValidationError("pulses must be sorted by t0", field + ".t0_ps");
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i].target != PulseTarget::emitter_g1 || ps[j].target != PulseTarget::emitter_g1) continue;
      const double width = std::max(ps[i].fwhm_ps, ps[j].fwhm_ps);
      if (std::abs(ps[j].t0_ps - ps[i].t0_ps) < 3.0 * width) {
        warnings.push_back("emitter pulses " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                           " overlap within 3 fwhm; their areas no longer add simply");
      }
    }
  }
  return warnings;
}

Drive::Drive(const PulseSchedule& schedule, HilbertDims dims)
    : schedule_(schedule),
      cavity_target_(embed_cavity(annihilation_operator(dims.n_max()), dims).matrix()),
      emitter_target_(embed_emitter(emitter_transition(Level::g, Level::one), dims).matrix()) {}

void Drive::accumulate(Matrix& h, double t) const {
  for (const GaussianPulse& p : schedule_.pulses) {
    if (!p.active_at(t)) continue;
    const cplx e = envelope(p, t);
    const Matrix& target = p.target == PulseTarget::cavity ? cavity_target_ : emitter_target_;
    h += std::conj(e) * target;
    h += e * target.adjoint();
  }
}

double Drive::min_active_fwhm(double t) const {
  double w = 0.0;
  for (const GaussianPulse& p : schedule_.pulses) {
    if (p.active_at(t) && (w == 0.0 || p.fwhm_ps < w)) w = p.fwhm_ps;
  }
  return w;
}

double Drive::next_support_start(double t) const {
  double next = std::numeric_limits<double>::infinity();
  for (const GaussianPulse& p : schedule_.pulses) {
    const double start = p.t0_ps - kPulseSupportFwhm * p.fwhm_ps;
    if (start > t) next = std::min(next, start);
  }
  return next;
}

Operator drive_hamiltonian(const PulseSchedule& schedule, double t, HilbertDims dims) {
  Operator h = Operator::zero(dims);
  Matrix m = h.matrix();
  Drive(schedule, dims).accumulate(m, t);
  return {dims, std::move(m)};
}

}  // namespace rabi
