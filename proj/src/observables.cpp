#include "rabi/observables.hpp"

#include "rabi/errors.hpp"
#include "rabi/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rabi {

namespace {

void check_times(const std::vector<double>& t, std::size_t n_values) {
  if (t.size() != n_values) throw ValidationError("series times and values differ in length");
  if (t.size() < 2) return;
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw ValidationError("series times must be strictly increasing");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double step = t[i] - t[i - 1];
    if (!(step > 0.0)) throw ValidationError("series times must be strictly increasing");
    if (std::abs(step - dt) > 1e-6 * dt + 1e-12) throw ValidationError("series must be uniformly sampled");
  }
}

const std::vector<DensityMatrix>& states_of(const EvolutionResult& r) {
  if (!r.states) throw ValidationError("evolution result does not hold states");
  return *r.states;
}

template <class F>
Series map_states(const EvolutionResult& r, F&& f) {
  const auto& states = states_of(r);
  Series s{r.times, std::vector<double>(states.size())};
  for (std::size_t k = 0; k < states.size(); ++k) s.values[k] = f(states[k]);
  return s;
}

}  // namespace

void Series::validate() const { check_times(times, values.size()); }

double Series::spacing() const {
  if (times.size() < 2) throw ValidationError("series needs at least two samples");
  return times[1] - times[0];
}

std::size_t Series::nearest_index(double t) const {
  if (times.empty()) throw ValidationError("empty series");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  if (it == times.end()) return times.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  return (t - times[hi - 1] <= times[hi] - t) ? hi - 1 : hi;
}

double Series::at(double t) const { return values[nearest_index(t)]; }

void ComplexSeries::validate() const { check_times(times, values.size()); }

Series photon_population(const EvolutionResult& r) {
  const Operator a = embed_cavity(annihilation_operator(r.dims.n_max()), r.dims);
  const Operator n = a.adjoint() * a;
  return map_states(r, [&](const DensityMatrix& rho) { return expectation(rho, n).real(); });
}

Series emitter_population(const EvolutionResult& r, Level level) {
  const Operator p = embed_emitter(emitter_transition(level, level), r.dims);
  return map_states(r, [&](const DensityMatrix& rho) { return expectation(rho, p).real(); });
}

ComplexSeries coherent_amplitude(const EvolutionResult& r) {
  const auto& states = states_of(r);
  const Operator a = embed_cavity(annihilation_operator(r.dims.n_max()), r.dims);
  ComplexSeries s{r.times, std::vector<cplx>(states.size())};
  for (std::size_t k = 0; k < states.size(); ++k) s.values[k] = expectation(states[k], a);
  return s;
}

Series coherent_fraction(const EvolutionResult& r) {
  const Series n = photon_population(r);
  const ComplexSeries coh = coherent_amplitude(r);
  Series out{r.times, std::vector<double>(n.values.size(), 0.0)};
  for (std::size_t k = 0; k < n.values.size(); ++k) {
    if (n.values[k] >= kCoherentFractionFloor) out.values[k] = std::norm(coh.values[k]) / n.values[k];
  }
  return out;
}

std::vector<double> default_omega_grid() {
  std::vector<double> grid;
  for (int w = -400; w <= 400; ++w) grid.push_back(w);
  return grid;
}

SpectrumResult windowed_spectrum(const ComplexSeries& coh, double window_start_ps, double window_ps,
                                 const std::vector<double>& omega_grid_ueV) {
  coh.validate();
  if (!(window_ps > 0.0)) throw ValidationError("spectrum window must be > 0");
  if (coh.times.size() < 2) throw ValidationError("spectrum needs at least two samples");
  const double dt = coh.times[1] - coh.times[0];
  const double tol = 1e-9 * std::max(1.0, std::abs(window_start_ps)) + 1e-6 * dt;
  const double t_end = window_start_ps + window_ps;
  if (window_start_ps < coh.times.front() - tol || t_end > coh.times.back() + tol)
    throw ValidationError("spectrum window lies outside the data range");

  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < coh.times.size(); ++k)
    if (coh.times[k] >= window_start_ps - tol && coh.times[k] <= t_end + tol) idx.push_back(k);
  if (idx.size() < 2) throw ValidationError("spectrum window contains fewer than two samples");

  SpectrumResult out{omega_grid_ueV, std::vector<double>(omega_grid_ueV.size()), window_start_ps, window_ps};
  for (std::size_t w = 0; w < omega_grid_ueV.size(); ++w) {
    const double omega = to_angular_rate(omega_grid_ueV[w]);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double weight = (j == 0 || j + 1 == idx.size()) ? 0.5 : 1.0;
      const double t = coh.times[idx[j]];
      acc += weight * coh.values[idx[j]] * std::polar(1.0, omega * t);
    }
    out.values[w] = std::norm(acc * dt);
  }
  return out;
}

std::vector<double> SpectrumResult::peak_offsets(double min_relative_height) const {
  const double top = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  std::vector<std::pair<double, double>> peaks;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] >= min_relative_height * top)
      peaks.emplace_back(values[i], omegas_ueV[i]);
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> out;
  for (const auto& p : peaks) out.push_back(p.second);
  return out;
}

namespace {

// Topographic prominence of the local maximum at i.
double prominence(const std::vector<double>& y, std::size_t i) {
  double left_min = y[i];
  for (std::size_t j = i; j-- > 0;) {
    if (y[j] > y[i]) break;
    left_min = std::min(left_min, y[j]);
  }
  double right_min = y[i];
  for (std::size_t j = i + 1; j < y.size(); ++j) {
    if (y[j] > y[i]) break;
    right_min = std::min(right_min, y[j]);
  }
  return y[i] - std::max(left_min, right_min);
}

}  // namespace

std::vector<Extremum> find_extrema(const Series& series, double after_t) {
  series.validate();
  const auto& y = series.values;
  if (y.size() < 3) throw ValidationError("find_extrema needs at least 3 samples");
  const double dt = series.spacing();
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double threshold = kExtremumProminence * scale;

  std::vector<double> neg(y.size());
  std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });

  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    ExtremumKind kind;
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      kind = ExtremumKind::max;
      if (prominence(y, i) < threshold) continue;
    } else if (y[i] < y[i - 1] && y[i] <= y[i + 1]) {
      kind = ExtremumKind::min;
      if (prominence(neg, i) < threshold) continue;
    } else {
      continue;
    }
    const double curv = y[i - 1] - 2.0 * y[i] + y[i + 1];
    double offset = 0.0;
    double value = y[i];
    if (curv != 0.0) {
      offset = std::clamp(0.5 * (y[i - 1] - y[i + 1]) / curv, -0.5, 0.5);
      value = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * offset;
    }
    const double t = series.times[i] + offset * dt;
    if (t > after_t) out.push_back({t, value, kind});
  }
  return out;
}

ExponentialFit fit_exponential(const Series& series, double t_start, double t_end) {
  series.validate();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k];
    if (t < t_start || t > t_end) continue;
    const double v = series.values[k];
    if (!(v > 0.0)) throw ValidationError("exponential fit needs positive values (t = " + std::to_string(t) + ")");
    pts.emplace_back(t, std::log(v));
  }
  if (pts.size() < 2) throw ValidationError("exponential fit window holds fewer than 2 samples");
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, l] : pts) {
    sx += x;
    sy += l;
  }
  const double mx = sx / n, my = sy / n;
  for (const auto& [x, l] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (l - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (const auto& [x, l] : pts) {
    const double r = l - (intercept + slope * x);
    ss_res += r * r;
    ss_tot += (l - my) * (l - my);
  }
  const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return {-slope, r2, std::exp(intercept)};
}

double oscillation_visibility(const Series& series, double t_start, double t_end) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    if (series.times[k] < t_start || series.times[k] > t_end) continue;
    lo = std::min(lo, series.values[k]);
    hi = std::max(hi, series.values[k]);
  }
  if (!(hi >= lo)) throw ValidationError("visibility window holds no samples");
  return hi + lo > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
}

double negativity(const DensityMatrix& rho) {
  const int nc = rho.dims().photon_states();
  const Matrix& m = rho.matrix();
  Matrix pt(m.rows(), m.cols());
  for (int e = 0; e < 3; ++e)
    for (int f = 0; f < 3; ++f) pt.block(e * nc, f * nc, nc, nc) = m.block(f * nc, e * nc, nc, nc);
  const Matrix h = 0.5 * (pt + pt.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.0) neg -= es.eigenvalues()(i);
  return neg;
}

}  // namespace rabi
