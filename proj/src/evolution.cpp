#include "rabi/evolution.hpp"

#include "rabi/errors.hpp"
#include "rabi/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rabi {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0)) throw ValidationError("must be > 0", "integrator.rel_tol");
  if (!(abs_tol > 0.0)) throw ValidationError("must be > 0", "integrator.abs_tol");
  if (!(sample_dt_ps > 0.0)) throw ValidationError("must be > 0", "integrator.sample_dt_ps");
  if (!(dt_min_ps > 0.0)) throw ValidationError("must be > 0", "integrator.dt_min_ps");
  if (!(dt_min_ps <= dt_initial_ps)) throw ValidationError("must be >= dt_min_ps", "integrator.dt_initial_ps");
  if (!(dt_initial_ps <= dt_max_ps)) throw ValidationError("must be >= dt_initial_ps", "integrator.dt_max_ps");
}

void TimeSpan::validate() const {
  if (!std::isfinite(start_ps)) throw ValidationError("must be finite", "time.start_ps");
  if (!std::isfinite(end_ps)) throw ValidationError("must be finite", "time.end_ps");
  if (!(end_ps > start_ps)) throw ValidationError("must be > time.start_ps", "time.end_ps");
}

std::vector<double> TimeSpan::sample_grid(double sample_dt) const {
  const auto n = static_cast<long>(std::floor((end_ps - start_ps) / sample_dt + 1e-9));
  std::vector<double> grid(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) grid[static_cast<std::size_t>(k)] = start_ps + static_cast<double>(k) * sample_dt;
  return grid;
}

const std::vector<double>& EvolutionResult::column(const std::string& name) const {
  const auto it = observables.find(name);
  if (it == observables.end()) throw ValidationError("no observable column '" + name + "'");
  return it->second;
}

namespace {

struct Triplet {
  int row;
  int col;
  cplx value;
};

/// Precomputed generator: rhs = -i(Heff rho - rho Heff^dag) + sum L rho L^dag,
/// with Heff = H - (i/2) sum L^dag L and each L stored as its nonzeros.
class LindbladGenerator {
 public:
  LindbladGenerator(const SystemModel& model, const PulseSchedule& schedule)
      : drive_(schedule, model.dims), heff_static_(model.hamiltonian.matrix()), h_(heff_static_) {
    for (const JumpOperator& j : model.jumps) {
      const Matrix l = j.scaled().matrix();
      heff_static_ -= cplx(0.0, 0.5) * (l.adjoint() * l);
      std::vector<Triplet> nz;
      for (int c = 0; c < l.cols(); ++c)
        for (int r = 0; r < l.rows(); ++r)
          if (l(r, c) != 0.0) nz.push_back({r, c, l(r, c)});
      jumps_.push_back(std::move(nz));
    }
  }

  void operator()(double t, const Matrix& rho, Matrix& out) {
    h_ = heff_static_;
    drive_.accumulate(h_, t);
    out.noalias() = h_ * rho;
    out.noalias() -= rho * h_.adjoint();
    out *= cplx(0.0, -1.0);
    for (const auto& nz : jumps_) {
      for (const Triplet& a : nz)
        for (const Triplet& b : nz) out(a.row, b.row) += a.value * rho(a.col, b.col) * std::conj(b.value);
    }
  }

  const Drive& drive() const noexcept { return drive_; }

 private:
  Drive drive_;
  Matrix heff_static_;
  Matrix h_;
  std::vector<std::vector<Triplet>> jumps_;
};

class Hamiltonian {
 public:
  Hamiltonian(const SystemModel& model, const PulseSchedule& schedule)
      : drive_(schedule, model.dims), static_(model.hamiltonian.matrix()), h_(static_) {}

  const Matrix& at(double t) {
    h_ = static_;
    drive_.accumulate(h_, t);
    return h_;
  }

  void operator()(double t, const Vector& psi, Vector& out) {
    out.noalias() = at(t) * psi;
    out *= cplx(0.0, -1.0);
  }

  const Drive& drive() const noexcept { return drive_; }

 private:
  Drive drive_;
  Matrix static_;
  Matrix h_;
};

/// Step bound: dt_max between pulses, fwhm/20 inside a pulse support, and
/// never stepping past the start of the next support.
auto make_step_cap(const Drive& drive, double dt_max) {
  return [&drive, dt_max](double t) {
    constexpr double kLookAhead = 1e-9;
    double cap = dt_max;
    const double w = drive.min_active_fwhm(t + kLookAhead);
    if (w > 0.0) cap = std::min(cap, w / 20.0);
    cap = std::min(cap, drive.next_support_start(t + kLookAhead) - t);
    return cap;
  };
}

/// Fills observables and diagnostics from sampled states.
class Recorder {
 public:
  Recorder(HilbertDims dims, std::vector<double> times, bool keep_states)
      : dims_(dims),
        a_(embed_cavity(annihilation_operator(dims.n_max()), dims)),
        n_(a_.adjoint() * a_),
        keep_(keep_states) {
    for (int l = 0; l < 3; ++l)
      proj_[l] = embed_emitter(emitter_transition(static_cast<Level>(l), static_cast<Level>(l)), dims);
    result_.dims = dims;
    const std::size_t n = times.size();
    result_.times = std::move(times);
    for (const char* c : kObservableColumns) result_.observables[c].assign(n, 0.0);
    if (keep_) result_.states.emplace();
    result_.diagnostics.min_eigenvalue = std::numeric_limits<double>::infinity();
  }

  void record(std::size_t k, const Matrix& m) {
    DensityMatrix rho = DensityMatrix::unchecked(dims_, m);
    auto& obs = result_.observables;
    const cplx coh = expectation(rho, a_);
    const cplx tr = rho.trace();
    obs["n_photon"][k] = expectation(rho, n_).real();
    obs["coh_re"][k] = coh.real();
    obs["coh_im"][k] = coh.imag();
    obs["coh_sq"][k] = std::norm(coh);
    obs["pop_g"][k] = expectation(rho, proj_[0]).real();
    obs["pop_1"][k] = expectation(rho, proj_[1]).real();
    obs["pop_2"][k] = expectation(rho, proj_[2]).real();
    obs["purity"][k] = rho.purity();
    obs["trace_err"][k] = tr.real() - 1.0;

    Diagnostics& d = result_.diagnostics;
    d.max_trace_error = std::max(d.max_trace_error, std::abs(tr - 1.0));
    d.max_hermiticity_error = std::max(d.max_hermiticity_error, rho.hermiticity_error());
    d.min_eigenvalue = std::min(d.min_eigenvalue, rho.min_eigenvalue());
    const double top = top_fock_population(rho);
    d.max_top_fock_population = std::max(d.max_top_fock_population, top);
    if (top > kTruncationGuard) d.truncation_flag = true;
    if (keep_) result_.states->push_back(std::move(rho));
  }

  EvolutionResult finish(const detail::StepStats& stats, int renormalizations) {
    Diagnostics& d = result_.diagnostics;
    d.accepted_steps = stats.accepted;
    d.rejected_steps = stats.rejected;
    d.rhs_evaluations = stats.rhs_evaluations;
    d.renormalizations = renormalizations;
    if (result_.times.empty()) d.min_eigenvalue = 0.0;
    return std::move(result_);
  }

 private:
  HilbertDims dims_;
  Operator a_;
  Operator n_;
  Operator proj_[3] = {Operator::zero(dims_), Operator::zero(dims_), Operator::zero(dims_)};
  bool keep_;
  EvolutionResult result_;
};

void require_state_dims(const HilbertDims& state, const HilbertDims& model) {
  if (!(state == model)) throw InvalidDimension("initial state and model have different dimensions");
}

}  // namespace

Matrix lindblad_rhs(const DensityMatrix& rho, double t, const SystemModel& model,
                    const PulseSchedule& schedule) {
  require_state_dims(rho.dims(), model.dims);
  LindbladGenerator gen(model, schedule);
  Matrix out(rho.matrix().rows(), rho.matrix().cols());
  gen(t, rho.matrix(), out);
  return out;
}

EvolutionResult evolve(const SystemModel& model, const PulseSchedule& schedule, const DensityMatrix& rho0,
                       TimeSpan span, const IntegratorConfig& cfg) {
  cfg.validate();
  span.validate();
  validate_schedule(schedule);
  require_state_dims(rho0.dims(), model.dims);

  LindbladGenerator gen(model, schedule);
  const std::vector<double> grid = span.sample_grid(cfg.sample_dt_ps);
  Recorder rec(model.dims, grid, cfg.keep_states);
  int renormalizations = 0;

  const detail::AdaptiveOptions opt{cfg.rel_tol, cfg.abs_tol, cfg.dt_initial_ps, cfg.dt_min_ps};
  const auto stats = detail::integrate_dopri5(
      gen, rho0.matrix(), span.start_ps, span.end_ps, grid, opt, make_step_cap(gen.drive(), cfg.dt_max_ps),
      [&](std::size_t k, const Matrix& m) { rec.record(k, m); },
      [&](double, Matrix& m) {
        const cplx tr = m.trace();
        if (std::abs(tr - 1.0) <= kRenormalizeThreshold) return false;
        m /= tr.real();
        ++renormalizations;
        return true;
      });
  return rec.finish(stats, renormalizations);
}

EvolutionResult evolve_fixed_rk4(const SystemModel& model, const PulseSchedule& schedule,
                                 const DensityMatrix& rho0, TimeSpan span, double dt,
                                 const IntegratorConfig& cfg) {
  if (!(dt > 0.0)) throw ValidationError("fixed step must be > 0", "dt");
  span.validate();
  cfg.validate();
  validate_schedule(schedule);
  require_state_dims(rho0.dims(), model.dims);

  LindbladGenerator gen(model, schedule);
  const std::vector<double> grid = span.sample_grid(cfg.sample_dt_ps);
  Recorder rec(model.dims, grid, cfg.keep_states);
  const auto stats = detail::integrate_rk4(gen, rho0.matrix(), span.start_ps, grid, dt,
                                           [&](std::size_t k, const Matrix& m) { rec.record(k, m); });
  return rec.finish(stats, 0);
}

EvolutionResult evolve_pure(const SystemModel& model, const PulseSchedule& schedule, const KetState& psi0,
                            TimeSpan span, const IntegratorConfig& cfg) {
  if (!model.jumps.empty())
    throw ValidationError("pure-state evolution requires a model without dissipation channels");
  cfg.validate();
  span.validate();
  validate_schedule(schedule);
  require_state_dims(psi0.dims(), model.dims);

  Hamiltonian ham(model, schedule);
  const std::vector<double> grid = span.sample_grid(cfg.sample_dt_ps);
  Recorder rec(model.dims, grid, cfg.keep_states);
  const detail::AdaptiveOptions opt{cfg.rel_tol, cfg.abs_tol, cfg.dt_initial_ps, cfg.dt_min_ps};
  const auto stats = detail::integrate_dopri5(
      ham, psi0.amplitudes(), span.start_ps, span.end_ps, grid, opt, make_step_cap(ham.drive(), cfg.dt_max_ps),
      [&](std::size_t k, const Vector& v) { rec.record(k, v * v.adjoint()); },
      [](double, Vector&) { return false; });
  return rec.finish(stats, 0);
}

}  // namespace rabi
