#pragma once

// Scenario runner: simulation from config, named presets with two-pass pulse
// placement, arrival-time sweeps, spectrograms and CSV output.

#include "rabi/config.hpp"
#include "rabi/evolution.hpp"
#include "rabi/observables.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rabi {

/// Probe area giving a coherent cavity state with <a^dag a> = 0.05.
double default_probe_area();

/// Evolves the config's schedule from |0 photons, g>.
EvolutionResult simulate(const ExperimentConfig& cfg);

/// Coherent amplitude / real series rebuilt from the recorded observable columns.
ComplexSeries recorded_coherent_amplitude(const EvolutionResult& result);
Series recorded_series(const EvolutionResult& result, const std::string& column);
/// |<a>|^2 / <a^dag a> from the recorded columns (0 below the photon floor).
Series recorded_coherent_fraction(const EvolutionResult& result);

// ---- presets ----

enum class PresetKind { fig1c, fig2a, fig2b, fig2c, fig2d, fig3 };

const std::vector<std::string_view>& preset_names();
PresetKind parse_preset(std::string_view name);

struct PresetOptions {
  /// Search for the second-pulse extremum starts this long after the first control pulse.
  double lead_ps = 15.0;
  /// Config overrides ("key=value") applied to the preset's base config.
  std::vector<std::string> overrides;
};

struct PresetRun {
  std::string name;
  ExperimentConfig config;  // resolved, with every placed pulse
  EvolutionResult result;
  /// Centre times of the control pulses placed by the two-pass procedure.
  std::vector<double> placed_times;
};

/// Probe at 2 ps and pi control at 25 ps, before any placement.
ExperimentConfig preset_base_config(PresetKind kind);
/// Applies overrides; "protocol.lead_ps" is taken into `options` instead of the config.
PresetRun run_preset(std::string_view name, const PresetOptions& options = {});

// ---- sweeps ----

enum class SweepReduction { final_coherent_fraction, oscillation_contrast, decay_rate };

SweepReduction parse_reduction(std::string_view name);
std::string_view reduction_name(SweepReduction r);

struct SweepSpec {
  std::string field;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
  SweepReduction reduction = SweepReduction::final_coherent_fraction;

  void validate() const;
};

struct SweepRow {
  double value;
  double reduction;
};

/// Scalar summary of one run after the last pulse of its schedule.
double reduce(const EvolutionResult& result, const PulseSchedule& schedule, SweepReduction reduction);

/// Independent runs per grid point; `threads` = 0 means RABI_SWITCH_THREADS or hardware concurrency.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep, unsigned threads = 0);

/// Worker count honoring RABI_SWITCH_THREADS.
unsigned sweep_thread_count();

// ---- spectrogram ----

struct SpectrogramPoint {
  double window_start_ps;
  double omega_ueV;
  double value;
};

/// Windows of length `window_ps` starting at t0, t0 + window/3, ... while they end by t1.
std::vector<SpectrogramPoint> spectrogram(const EvolutionResult& result, double t0, double t1, double window_ps,
                                          const std::vector<double>& omega_grid_ueV);

// ---- CSV ----

inline constexpr const char* kTrajectoryHeader =
    "t_ps,n_photon,coh_re,coh_im,coh_sq,pop_g,pop_1,pop_2,purity,trace_err";

void write_csv(const EvolutionResult& result, const std::filesystem::path& path);
/// Reads a trajectory CSV written by write_csv back into observable columns.
EvolutionResult read_csv(const std::filesystem::path& path);
void write_sweep_csv(const std::vector<SweepRow>& rows, const SweepSpec& sweep, const std::filesystem::path& path);
void write_spectrum_csv(const SpectrumResult& spectrum, const std::filesystem::path& path);
void write_spectrogram_csv(const std::vector<SpectrogramPoint>& points, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

}  // namespace rabi
