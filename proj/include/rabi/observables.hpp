#pragma once

#include "rabi/evolution.hpp"
#include "rabi/quantum_core.hpp"

#include <vector>

namespace rabi {

/// Uniformly sampled real series.
struct Series {
  std::vector<double> times;
  std::vector<double> values;

  /// Equal lengths, strictly increasing and uniformly spaced times.
  void validate() const;
  double spacing() const;
  /// Value at the sample nearest to t.
  double at(double t) const;
  std::size_t nearest_index(double t) const;
};

struct ComplexSeries {
  std::vector<double> times;
  std::vector<cplx> values;

  void validate() const;
};

Series photon_population(const EvolutionResult& result);
Series emitter_population(const EvolutionResult& result, Level level);
ComplexSeries coherent_amplitude(const EvolutionResult& result);

/// Below this photon number the coherent fraction is reported as 0.
inline constexpr double kCoherentFractionFloor = 1e-12;
/// |<a>|^2 / <a^dag a>
Series coherent_fraction(const EvolutionResult& result);

struct SpectrumResult {
  std::vector<double> omegas_ueV;  // offsets from the cavity carrier
  std::vector<double> values;
  double window_start_ps = 0.0;
  double window_length_ps = 0.0;

  /// Local maxima of the spectrum (grid points), strongest first.
  std::vector<double> peak_offsets(double min_relative_height = 0.05) const;
};

/// -400 ... 400 micro-eV in 1 micro-eV steps.
std::vector<double> default_omega_grid();

/// |int_T^{T+window} <a>(t) exp(i omega t / hbar) dt|^2 by the trapezoidal rule.
/// A signal exp(-i w0 t / hbar) peaks at omega = w0.
SpectrumResult windowed_spectrum(const ComplexSeries& coh, double window_start_ps, double window_ps,
                                 const std::vector<double>& omega_grid_ueV);

enum class ExtremumKind { max, min };

struct Extremum {
  double time;
  double value;
  ExtremumKind kind;
};

/// Relative prominence (of the series' max |value|) below which extrema are dropped.
inline constexpr double kExtremumProminence = 1e-4;

/// Interior local extrema later than after_t, refined by three-point parabolic
/// interpolation, in time order.
std::vector<Extremum> find_extrema(const Series& series, double after_t);

struct ExponentialFit {
  double rate;  // 1/ps, positive for decay
  double r_squared;
  double amplitude;
};

/// Least-squares line through log(values) on [t_start, t_end].
ExponentialFit fit_exponential(const Series& series, double t_start, double t_end);

/// (max - min) / (max + min) of the samples in [t_start, t_end].
double oscillation_visibility(const Series& series, double t_start, double t_end);

/// Sum of |negative eigenvalues| of the emitter partial transpose.
double negativity(const DensityMatrix& rho);

}  // namespace rabi
