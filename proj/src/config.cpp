#include "rabi/config.hpp"

#include "rabi/errors.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace rabi {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(const std::string& text, const std::string& field, int line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != last) {
    const std::string msg = "expected a number, got '" + text + "'";
    if (line > 0) throw ParseError(field + ": " + msg, line);
    throw ValidationError(msg, field);
  }
  return v;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Consumes entries from a ConfigMap, tracking which keys were used.
class Reader {
 public:
  explicit Reader(const ConfigMap& map) : map_(map) {}

  bool has(const std::string& key) const { return map_.count(key) != 0; }

  double number(const std::string& key, double fallback) {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    used_.insert(key);
    return parse_double(it->second.value, key, it->second.line);
  }

  double required_number(const std::string& key) {
    if (!has(key)) throw ValidationError("required field is missing", key);
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError("must be an integer", key);
    return static_cast<int>(v);
  }

  std::string required_text(const std::string& key) {
    const auto it = map_.find(key);
    if (it == map_.end()) throw ValidationError("required field is missing", key);
    used_.insert(key);
    return it->second.value;
  }

  void reject_unused() const {
    for (const auto& [key, entry] : map_) {
      if (used_.count(key) == 0) {
        if (entry.line > 0) throw ParseError("unknown key '" + key + "'", entry.line);
        throw ValidationError("unknown key", key);
      }
    }
  }

 private:
  const ConfigMap& map_;
  std::set<std::string> used_;
};

/// Indices N such that some key starts with "<prefix>.N.", required to be 1..count.
int count_indexed(const ConfigMap& map, const std::string& prefix) {
  std::set<int> seen;
  for (const auto& [key, entry] : map) {
    if (key.rfind(prefix + ".", 0) != 0) continue;
    const std::string rest = key.substr(prefix.size() + 1);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) continue;
    const std::string idx = rest.substr(0, dot);
    int n = 0;
    const auto res = std::from_chars(idx.data(), idx.data() + idx.size(), n);
    if (res.ec != std::errc() || res.ptr != idx.data() + idx.size()) continue;
    if (n < 1) throw ParseError("index must start at 1 in '" + key + "'", entry.line);
    seen.insert(n);
  }
  const int count = static_cast<int>(seen.size());
  if (count > 0 && *seen.rbegin() != count)
    throw ValidationError("indices must be contiguous from 1", prefix);
  return count;
}

}  // namespace

std::vector<double> SpectrumOutputs::omega_grid() const {
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((omega_max_ueV - omega_min_ueV) / omega_step_ueV + 1e-9));
  for (long k = 0; k <= n; ++k) grid.push_back(omega_min_ueV + static_cast<double>(k) * omega_step_ueV);
  return grid;
}

std::vector<std::string> ExperimentConfig::validate() const {
  if (n_max < 1) throw ValidationError("must be >= 1", "n_max");
  params.validate();
  frame.validate();
  integrator.validate();
  span.validate();
  if (!(spectrum.window_ps > 0.0)) throw ValidationError("must be > 0", "spectrum.window_ps");
  if (!(spectrum.omega_step_ueV > 0.0)) throw ValidationError("must be > 0", "spectrum.omega_step_ueV");
  if (!(spectrum.omega_max_ueV > spectrum.omega_min_ueV))
    throw ValidationError("must exceed spectrum.omega_min_ueV", "spectrum.omega_max_ueV");
  for (std::size_t i = 0; i < spectrum.window_starts_ps.size(); ++i) {
    const double s = spectrum.window_starts_ps[i];
    if (s < span.start_ps || s + spectrum.window_ps > span.end_ps + 1e-9)
      throw ValidationError("window lies outside the time span", "spectrum." + std::to_string(i + 1) + ".start_ps");
  }
  return validate_schedule(schedule);
}

ConfigMap parse_config_map(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line);
    if (key.find_first_of(" \t") != std::string::npos) throw ParseError("key contains whitespace", line);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line);
    if (!map.emplace(key, ConfigEntry{value, line}).second) throw ParseError("duplicate key '" + key + "'", line);
  }
  return map;
}

ExperimentConfig config_from_map(const ConfigMap& map) {
  Reader r(map);
  ExperimentConfig c;
  c.n_max = r.integer("n_max", 4);

  SystemParams& p = c.params;
  p.g_ueV = r.required_number("system.g_ueV");
  p.gamma_a_ueV = r.required_number("system.gamma_a_ueV");
  p.gamma_1_ueV = r.number("system.gamma_1_ueV", p.gamma_1_ueV);
  p.gamma_2_ueV = r.number("system.gamma_2_ueV", p.gamma_2_ueV);
  p.gamma_d1_ueV = r.number("system.gamma_d1_ueV", p.gamma_d1_ueV);
  p.gamma_d2_ueV = r.number("system.gamma_d2_ueV", p.gamma_d2_ueV);
  p.omega_1_eV = r.number("system.omega_1_eV", p.omega_1_eV);
  p.omega_2_eV = r.number("system.omega_2_eV", p.omega_2_eV);
  p.omega_cav_eV = r.number("system.omega_cav_eV", p.omega_cav_eV);

  const FrameSpec resonant = FrameSpec::resonant(p);
  c.frame.control_carrier_eV = r.number("frame.control_carrier_eV", resonant.control_carrier_eV);
  c.frame.probe_carrier_eV = r.number("frame.probe_carrier_eV", resonant.probe_carrier_eV);

  IntegratorConfig& ic = c.integrator;
  ic.rel_tol = r.number("integrator.rel_tol", ic.rel_tol);
  ic.abs_tol = r.number("integrator.abs_tol", ic.abs_tol);
  ic.dt_initial_ps = r.number("integrator.dt_initial_ps", ic.dt_initial_ps);
  ic.dt_max_ps = r.number("integrator.dt_max_ps", ic.dt_max_ps);
  ic.dt_min_ps = r.number("integrator.dt_min_ps", ic.dt_min_ps);
  ic.sample_dt_ps = r.number("integrator.sample_dt_ps", ic.sample_dt_ps);

  c.span.start_ps = r.number("time.start_ps", c.span.start_ps);
  c.span.end_ps = r.number("time.end_ps", c.span.end_ps);

  const int n_pulses = count_indexed(map, "pulse");
  for (int i = 1; i <= n_pulses; ++i) {
    const std::string k = "pulse." + std::to_string(i) + ".";
    GaussianPulse pulse;
    try {
      pulse.target = parse_pulse_target(r.required_text(k + "target"));
    } catch (const ValidationError& e) {
      if (!e.field().empty()) throw;
      throw ValidationError(e.what(), k + "target");
    }
    pulse.t0_ps = r.required_number(k + "t0_ps");
    pulse.area = r.required_number(k + "area");
    pulse.fwhm_ps = r.number(k + "fwhm_ps", pulse.target == PulseTarget::cavity ? 0.4 : 0.2);
    pulse.detuning_ueV = r.number(k + "detuning_ueV", 0.0);
    pulse.phase = r.number(k + "phase", 0.0);
    c.schedule.pulses.push_back(pulse);
  }

  SpectrumOutputs& so = c.spectrum;
  so.window_ps = r.number("spectrum.window_ps", so.window_ps);
  so.omega_min_ueV = r.number("spectrum.omega_min_ueV", so.omega_min_ueV);
  so.omega_max_ueV = r.number("spectrum.omega_max_ueV", so.omega_max_ueV);
  so.omega_step_ueV = r.number("spectrum.omega_step_ueV", so.omega_step_ueV);
  const int n_windows = count_indexed(map, "spectrum");
  for (int i = 1; i <= n_windows; ++i)
    so.window_starts_ps.push_back(r.required_number("spectrum." + std::to_string(i) + ".start_ps"));

  r.reject_unused();
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& text) { return config_from_map(parse_config_map(text)); }

ConfigMap config_to_map(const ExperimentConfig& c) {
  ConfigMap m;
  const auto put = [&](const std::string& key, double v) { m[key] = {format_double(v), 0}; };
  put("n_max", c.n_max);
  put("system.g_ueV", c.params.g_ueV);
  put("system.gamma_a_ueV", c.params.gamma_a_ueV);
  put("system.gamma_1_ueV", c.params.gamma_1_ueV);
  put("system.gamma_2_ueV", c.params.gamma_2_ueV);
  put("system.gamma_d1_ueV", c.params.gamma_d1_ueV);
  put("system.gamma_d2_ueV", c.params.gamma_d2_ueV);
  put("system.omega_1_eV", c.params.omega_1_eV);
  put("system.omega_2_eV", c.params.omega_2_eV);
  put("system.omega_cav_eV", c.params.omega_cav_eV);
  put("frame.control_carrier_eV", c.frame.control_carrier_eV);
  put("frame.probe_carrier_eV", c.frame.probe_carrier_eV);
  put("integrator.rel_tol", c.integrator.rel_tol);
  put("integrator.abs_tol", c.integrator.abs_tol);
  put("integrator.dt_initial_ps", c.integrator.dt_initial_ps);
  put("integrator.dt_max_ps", c.integrator.dt_max_ps);
  put("integrator.dt_min_ps", c.integrator.dt_min_ps);
  put("integrator.sample_dt_ps", c.integrator.sample_dt_ps);
  put("time.start_ps", c.span.start_ps);
  put("time.end_ps", c.span.end_ps);
  for (std::size_t i = 0; i < c.schedule.pulses.size(); ++i) {
    const GaussianPulse& p = c.schedule.pulses[i];
    const std::string k = "pulse." + std::to_string(i + 1) + ".";
    m[k + "target"] = {std::string(pulse_target_name(p.target)), 0};
    put(k + "t0_ps", p.t0_ps);
    put(k + "fwhm_ps", p.fwhm_ps);
    put(k + "area", p.area);
    put(k + "detuning_ueV", p.detuning_ueV);
    put(k + "phase", p.phase);
  }
  put("spectrum.window_ps", c.spectrum.window_ps);
  put("spectrum.omega_min_ueV", c.spectrum.omega_min_ueV);
  put("spectrum.omega_max_ueV", c.spectrum.omega_max_ueV);
  put("spectrum.omega_step_ueV", c.spectrum.omega_step_ueV);
  for (std::size_t i = 0; i < c.spectrum.window_starts_ps.size(); ++i)
    put("spectrum." + std::to_string(i + 1) + ".start_ps", c.spectrum.window_starts_ps[i]);
  return m;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::string out;
  for (const auto& [key, entry] : config_to_map(c)) out += key + " = " + entry.value + "\n";
  return out;
}

void apply_overrides(ConfigMap& map, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ValidationError("override must be key=value, got '" + o + "'");
    const std::string key = trim(o.substr(0, eq));
    const std::string value = trim(o.substr(eq + 1));
    if (key.empty() || value.empty()) throw ValidationError("override must be key=value, got '" + o + "'");
    map[key] = {value, 0};
  }
}

}  // namespace rabi
