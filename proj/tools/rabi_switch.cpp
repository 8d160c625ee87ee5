// Command-line front end: simulate, preset, sweep, spectrogram.

#include "rabi/errors.hpp"
#include "rabi/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIntegration = 2, kIo = 3 };

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw rabi::IoError("cannot create output directory", dir.string());
}

rabi::ExperimentConfig load_config(const fs::path& file) {
  rabi::ExperimentConfig cfg = rabi::parse_config(rabi::read_text(file));
  for (const auto& w : cfg.validate()) std::cerr << "warning: " << w << "\n";
  return cfg;
}

void report(const rabi::EvolutionResult& r, std::ostream& os) {
  const auto& d = r.diagnostics;
  os << "samples " << r.times.size() << ", steps " << d.accepted_steps << " (+" << d.rejected_steps
     << " rejected), max |Tr-1| " << d.max_trace_error << ", min eig " << d.min_eigenvalue << ", top Fock "
     << d.max_top_fock_population << (d.truncation_flag ? " [TRUNCATION GUARD TRIPPED]" : "") << "\n";
}

void write_spectra(const rabi::ExperimentConfig& cfg, const rabi::EvolutionResult& r, const fs::path& dir,
                   const std::string& stem) {
  const auto coh = rabi::recorded_coherent_amplitude(r);
  for (std::size_t i = 0; i < cfg.spectrum.window_starts_ps.size(); ++i) {
    const auto s = rabi::windowed_spectrum(coh, cfg.spectrum.window_starts_ps[i], cfg.spectrum.window_ps,
                                           cfg.spectrum.omega_grid());
    rabi::write_spectrum_csv(s, dir / (stem + "_spectrum_" + std::to_string(i + 1) + ".csv"));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-controlled vacuum Rabi oscillations in a cavity with a cascade three-level emitter"};
  app.require_subcommand(1);

  fs::path config_file, out_dir;

  auto* sim = app.add_subcommand("simulate", "Run one configuration");
  sim->add_option("--config", config_file, "Config file")->required();
  sim->add_option("--out", out_dir, "Output directory")->required();

  std::string preset_name;
  std::vector<std::string> overrides;
  auto* preset = app.add_subcommand("preset", "Run a preset scenario (fig1c, fig2a, fig2b, fig2c, fig2d, fig3)");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("--out", out_dir, "Output directory")->required();
  preset->add_option("--override", overrides, "key=value applied to the preset config (repeatable)");

  rabi::SweepSpec sweep_spec;
  std::string reduce_name;
  auto* sweep = app.add_subcommand("sweep", "Sweep one numeric config field");
  sweep->add_option("--config", config_file, "Config file")->required();
  sweep->add_option("--field", sweep_spec.field, "Config key, e.g. pulse.3.t0_ps")->required();
  sweep->add_option("--from", sweep_spec.from)->required();
  sweep->add_option("--to", sweep_spec.to)->required();
  sweep->add_option("--steps", sweep_spec.steps)->required();
  sweep->add_option("--reduce", reduce_name, "final_coherent_fraction | oscillation_contrast | decay_rate")
      ->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();

  double t0 = 0, t1 = 0, window = 0;
  auto* spec = app.add_subcommand("spectrogram", "Sliding-window coherent spectrum S(T, omega)");
  spec->add_option("--config", config_file, "Config file")->required();
  spec->add_option("--t0", t0)->required();
  spec->add_option("--t1", t1)->required();
  spec->add_option("--window", window)->required();
  spec->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*sim) {
      const auto cfg = load_config(config_file);
      const auto result = rabi::simulate(cfg);
      make_out_dir(out_dir);
      rabi::write_csv(result, out_dir / "trajectory.csv");
      rabi::write_text(rabi::serialize_config(cfg), out_dir / "config.cfg");
      write_spectra(cfg, result, out_dir, "trajectory");
      report(result, std::cout);
    } else if (*preset) {
      const auto run = rabi::run_preset(preset_name, {15.0, overrides});
      make_out_dir(out_dir);
      rabi::write_csv(run.result, out_dir / (run.name + ".csv"));
      rabi::write_text(rabi::serialize_config(run.config), out_dir / (run.name + ".cfg"));
      write_spectra(run.config, run.result, out_dir, run.name);
      for (double t : run.placed_times) std::cout << "placed control pulse at t = " << t << " ps\n";
      report(run.result, std::cout);
    } else if (*sweep) {
      sweep_spec.reduction = rabi::parse_reduction(reduce_name);
      const auto cfg = load_config(config_file);
      const auto rows = rabi::run_sweep(cfg, sweep_spec);
      make_out_dir(out_dir);
      rabi::write_sweep_csv(rows, sweep_spec, out_dir / "sweep.csv");
      std::cout << rows.size() << " sweep points written\n";
    } else if (*spec) {
      const auto cfg = load_config(config_file);
      const auto result = rabi::simulate(cfg);
      const auto points = rabi::spectrogram(result, t0, t1, window, cfg.spectrum.omega_grid());
      make_out_dir(out_dir);
      rabi::write_spectrogram_csv(points, out_dir / "spectrogram.csv");
      std::cout << points.size() << " spectrogram points written\n";
    }
  } catch (const rabi::IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << "\n";
    return kIntegration;
  } catch (const rabi::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const rabi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
