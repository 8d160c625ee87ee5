#include "rabi/experiment.hpp"

#include "rabi/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace rabi {

double default_probe_area() { return 2.0 * std::sqrt(0.05); }

EvolutionResult simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const HilbertDims dims(cfg.n_max);
  const SystemModel model = SystemModel::build(cfg.params, cfg.frame, dims);
  return evolve(model, cfg.schedule, DensityMatrix::basis(dims, Level::g, 0), cfg.span, cfg.integrator);
}

Series recorded_series(const EvolutionResult& r, const std::string& column) {
  return {r.times, r.column(column)};
}

ComplexSeries recorded_coherent_amplitude(const EvolutionResult& r) {
  const auto& re = r.column("coh_re");
  const auto& im = r.column("coh_im");
  ComplexSeries s{r.times, std::vector<cplx>(re.size())};
  for (std::size_t k = 0; k < re.size(); ++k) s.values[k] = {re[k], im[k]};
  return s;
}

Series recorded_coherent_fraction(const EvolutionResult& r) {
  const auto& n = r.column("n_photon");
  const auto& c = r.column("coh_sq");
  Series s{r.times, std::vector<double>(n.size(), 0.0)};
  for (std::size_t k = 0; k < n.size(); ++k)
    if (n[k] >= kCoherentFractionFloor) s.values[k] = c[k] / n[k];
  return s;
}

// ---- presets ----

const std::vector<std::string_view>& preset_names() {
  static const std::vector<std::string_view> names = {"fig1c", "fig2a", "fig2b", "fig2c", "fig2d", "fig3"};
  return names;
}

PresetKind parse_preset(std::string_view name) {
  const auto& names = preset_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    std::string valid;
    for (auto n : names) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw ValidationError("unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
  }
  return static_cast<PresetKind>(it - names.begin());
}

ExperimentConfig preset_base_config(PresetKind kind) {
  ExperimentConfig c;
  c.schedule.pulses = {
      {PulseTarget::cavity, 2.0, 0.4, default_probe_area(), 0.0, 0.0},
      {PulseTarget::emitter_g1, 25.0, 0.2, std::numbers::pi, 0.0, 0.0},
  };
  switch (kind) {
    case PresetKind::fig1c:
      c.span = {0.0, 100.0};
      c.spectrum.window_starts_ps = {5.0, 26.0};
      break;
    case PresetKind::fig2c:
      c.span = {0.0, 130.0};
      break;
    case PresetKind::fig3:
      c.params.gamma_d1_ueV = 5.0;
      c.params.gamma_d2_ueV = 5.0;
      c.span = {0.0, 120.0};
      break;
    default:
      c.span = {0.0, 120.0};
      break;
  }
  return c;
}

namespace {

const GaussianPulse& first_control(const ExperimentConfig& c) {
  for (const GaussianPulse& p : c.schedule.pulses)
    if (p.target == PulseTarget::emitter_g1) return p;
  throw ValidationError("preset schedule has no control pulse");
}

ExperimentConfig with_control(ExperimentConfig c, const GaussianPulse& like, double t0) {
  GaussianPulse p = like;
  p.t0_ps = t0;
  auto& ps = c.schedule.pulses;
  ps.insert(std::upper_bound(ps.begin(), ps.end(), p,
                             [](const GaussianPulse& a, const GaussianPulse& b) { return a.t0_ps < b.t0_ps; }),
            p);
  c.validate();
  return c;
}

const Extremum& first_of(const std::vector<Extremum>& ext, ExtremumKind kind, const char* what) {
  for (const Extremum& e : ext)
    if (e.kind == kind) return e;
  throw ValidationError(std::string("could not locate a photon-population ") + what + " for pulse placement");
}

EvolutionResult placement_pass(ExperimentConfig c) {
  c.integrator.keep_states = false;
  return simulate(c);
}

}  // namespace

PresetRun run_preset(std::string_view name, const PresetOptions& options) {
  const PresetKind kind = parse_preset(name);
  double lead = options.lead_ps;
  std::vector<std::string> overrides;
  for (const std::string& o : options.overrides) {
    const auto eq = o.find('=');
    if (eq != std::string::npos && o.substr(0, eq) == "protocol.lead_ps") {
      lead = parse_double(o.substr(eq + 1), "protocol.lead_ps");
    } else {
      overrides.push_back(o);
    }
  }
  ConfigMap map = config_to_map(preset_base_config(kind));
  apply_overrides(map, overrides);
  ExperimentConfig cfg = config_from_map(map);

  PresetRun run{std::string(name), cfg, {}, {}};
  if (kind == PresetKind::fig1c) {
    run.result = simulate(cfg);
    return run;
  }

  const GaussianPulse control = first_control(cfg);
  const EvolutionResult pass1 = placement_pass(cfg);
  const auto ext = find_extrema(recorded_series(pass1, "n_photon"), control.t0_ps + lead);
  double t2 = 0.0;
  switch (kind) {
    case PresetKind::fig2a:
      t2 = first_of(ext, ExtremumKind::max, "maximum").time;
      break;
    case PresetKind::fig2d:
      t2 = 0.5 * (first_of(ext, ExtremumKind::max, "maximum").time + first_of(ext, ExtremumKind::min, "minimum").time);
      break;
    default:  // fig2b, fig2c, fig3
      t2 = first_of(ext, ExtremumKind::min, "minimum").time;
      break;
  }
  cfg = with_control(cfg, control, t2);
  run.placed_times.push_back(t2);

  if (kind == PresetKind::fig2c) {
    const EvolutionResult pass2 = placement_pass(cfg);
    const auto ext2 = find_extrema(recorded_series(pass2, "n_photon"), t2 + kPulseSupportFwhm * control.fwhm_ps);
    const double t3 = first_of(ext2, ExtremumKind::min, "minimum").time;
    cfg = with_control(cfg, control, t3);
    run.placed_times.push_back(t3);
  }

  run.config = cfg;
  run.result = simulate(cfg);
  return run;
}

// ---- sweeps ----

SweepReduction parse_reduction(std::string_view name) {
  if (name == "final_coherent_fraction") return SweepReduction::final_coherent_fraction;
  if (name == "oscillation_contrast") return SweepReduction::oscillation_contrast;
  if (name == "decay_rate") return SweepReduction::decay_rate;
  throw ValidationError("unknown reduction '" + std::string(name) +
                        "' (valid: final_coherent_fraction, oscillation_contrast, decay_rate)");
}

std::string_view reduction_name(SweepReduction r) {
  switch (r) {
    case SweepReduction::final_coherent_fraction: return "final_coherent_fraction";
    case SweepReduction::oscillation_contrast: return "oscillation_contrast";
    case SweepReduction::decay_rate: return "decay_rate";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (field.empty()) throw ValidationError("sweep field is empty", "field");
  if (!std::isfinite(from) || !std::isfinite(to) || !(from < to)) throw ValidationError("need from < to", "from");
  if (steps < 2) throw ValidationError("must be >= 2", "steps");
}

double reduce(const EvolutionResult& r, const PulseSchedule& schedule, SweepReduction reduction) {
  if (r.times.empty()) throw ValidationError("cannot reduce an empty result");
  double window_start = r.times.front();
  for (const GaussianPulse& p : schedule.pulses)
    window_start = std::max(window_start, p.t0_ps + kPulseSupportFwhm * p.fwhm_ps);
  const Series n = recorded_series(r, "n_photon");

  switch (reduction) {
    case SweepReduction::final_coherent_fraction:
      return recorded_coherent_fraction(r).values.back();
    case SweepReduction::decay_rate:
      return fit_exponential(n, window_start, r.times.back()).rate;
    case SweepReduction::oscillation_contrast: {
      const auto ext = find_extrema(n, window_start);
      double sum = 0.0;
      int pairs = 0;
      for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
        if (ext[i].kind != ExtremumKind::max || ext[i + 1].kind != ExtremumKind::min) continue;
        const double hi = ext[i].value, lo = ext[i + 1].value;
        if (hi + lo > 0.0) {
          sum += (hi - lo) / (hi + lo);
          ++pairs;
        }
      }
      return pairs > 0 ? sum / pairs : 0.0;
    }
  }
  return 0.0;
}

unsigned sweep_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RABI_SWITCH_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep, unsigned threads) {
  sweep.validate();
  const ConfigMap base = config_to_map(cfg);
  if (base.count(sweep.field) == 0 || base.at(sweep.field).value.find_first_not_of("0123456789.eE+-") != std::string::npos)
    throw ValidationError("sweep field not found", sweep.field);

  // Build and validate every grid point up front so bad values fail before any compute.
  std::vector<ExperimentConfig> configs;
  std::vector<SweepRow> rows(static_cast<std::size_t>(sweep.steps));
  for (int i = 0; i < sweep.steps; ++i) {
    const double v = sweep.from + (sweep.to - sweep.from) * i / (sweep.steps - 1);
    ConfigMap m = base;
    m[sweep.field].value = format_double(v);
    ExperimentConfig c = config_from_map(m);
    c.integrator.keep_states = false;
    configs.push_back(std::move(c));
    rows[static_cast<std::size_t>(i)].value = v;
  }

  if (threads == 0) threads = sweep_thread_count();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        rows[i].reduction = reduce(simulate(configs[i]), configs[i].schedule, sweep.reduction);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

// ---- spectrogram ----

std::vector<SpectrogramPoint> spectrogram(const EvolutionResult& r, double t0, double t1, double window_ps,
                                          const std::vector<double>& omega_grid_ueV) {
  if (!(window_ps > 0.0)) throw ValidationError("must be > 0", "window");
  if (!(t1 - t0 >= window_ps)) throw ValidationError("t1 - t0 must be at least one window", "t1");
  const ComplexSeries coh = recorded_coherent_amplitude(r);
  std::vector<SpectrogramPoint> out;
  const double stride = window_ps / 3.0;
  for (long k = 0;; ++k) {
    const double start = t0 + static_cast<double>(k) * stride;
    if (start + window_ps > t1 + 1e-9) break;
    const SpectrumResult s = windowed_spectrum(coh, start, window_ps, omega_grid_ueV);
    for (std::size_t w = 0; w < s.values.size(); ++w) out.push_back({start, s.omegas_ueV[w], s.values[w]});
  }
  return out;
}

// ---- CSV ----

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed", path.string());
}

}  // namespace

void write_csv(const EvolutionResult& r, const std::filesystem::path& path) {
  std::vector<const std::vector<double>*> cols;
  for (const char* c : kObservableColumns) cols.push_back(r.times.empty() ? nullptr : &r.column(c));
  std::ofstream out = open_out(path);
  out << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out << format_double(r.times[k]);
    for (const auto* c : cols) out << ',' << format_double((*c)[k]);
    out << '\n';
  }
  finish(out, path);
}

EvolutionResult read_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) throw IoError("not a trajectory CSV", path.string());
  EvolutionResult r;
  for (const char* c : kObservableColumns) r.observables[c];
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string f;
    std::vector<double> row;
    while (std::getline(fields, f, ',')) row.push_back(parse_double(f, path.string(), lineno));
    if (row.size() != kObservableColumns.size() + 1) throw ParseError("wrong column count", lineno);
    r.times.push_back(row[0]);
    for (std::size_t c = 0; c < kObservableColumns.size(); ++c) r.observables[kObservableColumns[c]].push_back(row[c + 1]);
  }
  return r;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const SweepSpec& sweep, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << sweep.field << ',' << reduction_name(sweep.reduction) << '\n';
  for (const SweepRow& row : rows) out << format_double(row.value) << ',' << format_double(row.reduction) << '\n';
  finish(out, path);
}

void write_spectrum_csv(const SpectrumResult& s, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "omega_ueV,S\n";
  for (std::size_t w = 0; w < s.values.size(); ++w)
    out << format_double(s.omegas_ueV[w]) << ',' << format_double(s.values[w]) << '\n';
  finish(out, path);
}

void write_spectrogram_csv(const std::vector<SpectrogramPoint>& points, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "T_ps,omega_ueV,S\n";
  for (const auto& p : points)
    out << format_double(p.window_start_ps) << ',' << format_double(p.omega_ueV) << ',' << format_double(p.value) << '\n';
  finish(out, path);
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << text;
  finish(out, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rabi
