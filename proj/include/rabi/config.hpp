#pragma once

// Experiment configuration: flat `key = value` text with dotted sections,
// e.g. `pulse.2.t0_ps = 45.3`. Parsing is strict: unknown or duplicate keys
// are errors, and g, gamma_a and every pulse's target/t0/area must be given.

#include "rabi/evolution.hpp"
#include "rabi/pulses.hpp"
#include "rabi/system_model.hpp"

#include <map>
#include <string>
#include <vector>

namespace rabi {

struct SpectrumOutputs {
  double window_ps = 15.0;
  double omega_min_ueV = -400.0;
  double omega_max_ueV = 400.0;
  double omega_step_ueV = 1.0;
  std::vector<double> window_starts_ps;

  std::vector<double> omega_grid() const;
  friend bool operator==(const SpectrumOutputs&, const SpectrumOutputs&) = default;
};

struct ExperimentConfig {
  int n_max = 4;
  SystemParams params;
  FrameSpec frame = FrameSpec::resonant(SystemParams{});
  PulseSchedule schedule;
  IntegratorConfig integrator;
  TimeSpan span;
  SpectrumOutputs spectrum;

  /// Throws ValidationError naming the field; returns schedule warnings.
  std::vector<std::string> validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 for entries that did not come from text
};

/// Ordered raw key/value view of a config.
using ConfigMap = std::map<std::string, ConfigEntry>;

ConfigMap parse_config_map(const std::string& text);
ExperimentConfig config_from_map(const ConfigMap& map);
ExperimentConfig parse_config(const std::string& text);

ConfigMap config_to_map(const ExperimentConfig& cfg);
std::string serialize_config(const ExperimentConfig& cfg);

/// Applies "key=value" strings on top of `map`.
void apply_overrides(ConfigMap& map, const std::vector<std::string>& overrides);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& text, const std::string& field, int line = 0);

}  // namespace rabi
