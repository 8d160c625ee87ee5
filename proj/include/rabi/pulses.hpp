#pragma once

// Gaussian drive pulses in the rotating frame.
//
// Convention: the two-level Rabi frequency is 2|eps(t)| and the pulse area is
// its time integral, so area pi fully inverts g <-> 1. Widths are FWHM of the
// field envelope.

#include "rabi/quantum_core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rabi {

enum class PulseTarget { cavity, emitter_g1 };

PulseTarget parse_pulse_target(std::string_view name);
std::string_view pulse_target_name(PulseTarget target);

/// Envelope half-width (in units of fwhm) beyond which a pulse is treated as off.
inline constexpr double kPulseSupportFwhm = 6.0;

struct GaussianPulse {
  PulseTarget target = PulseTarget::cavity;
  double t0_ps = 0.0;
  double fwhm_ps = 0.2;
  double area = 0.0;
  double detuning_ueV = 0.0;
  double phase = 0.0;

  /// Gaussian standard deviation of the field envelope.
  double sigma_ps() const;
  double peak_amplitude() const;
  bool active_at(double t) const;

  friend bool operator==(const GaussianPulse&, const GaussianPulse&) = default;
};

struct PulseSchedule {
  std::vector<GaussianPulse> pulses;

  bool empty() const noexcept { return pulses.empty(); }
  friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;
};

/// Peak field amplitude in rad/ps: area / (2 s sqrt(2 pi)), s = fwhm / (2 sqrt(2 ln 2)).
double amplitude_from_area(double area, double fwhm_ps);

/// A exp(-(t-t0)^2 / 2s^2) exp(i(phase - detuning t / hbar))
cplx envelope(const GaussianPulse& pulse, double t);

/// Throws ValidationError on non-positive fwhm, negative area, non-finite
/// fields or unsorted centres. Returns human-readable warnings (emitter pulse
/// overlap within 3 fwhm).
std::vector<std::string> validate_schedule(const PulseSchedule& schedule);

/// Time-dependent drive with the target operators embedded once.
class Drive {
 public:
  Drive(const PulseSchedule& schedule, HilbertDims dims);

  /// h += sum over active pulses of eps*(t) T + eps(t) T^dag
  void accumulate(Matrix& h, double t) const;
  /// Smallest fwhm among pulses whose support contains t, or 0 if none.
  double min_active_fwhm(double t) const;
  /// Start of the next pulse support strictly after t, or +inf.
  double next_support_start(double t) const;
  const PulseSchedule& schedule() const noexcept { return schedule_; }

 private:
  PulseSchedule schedule_;
  Matrix cavity_target_;
  Matrix emitter_target_;
};

Operator drive_hamiltonian(const PulseSchedule& schedule, double t, HilbertDims dims);

}  // namespace rabi
