#include "mse/advect.hpp"

#include <cmath>
#include <string>

#include "mse/errors.hpp"

namespace mse {
namespace {

using ComplexSparse = Eigen::SparseMatrix<std::complex<double>>;

long steps_for(double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(t_end >= 0.0)) throw InvalidArgument("end time must be non-negative");
  const double n = t_end / dt;
  const long r = std::lround(n);
  if (std::abs(n - static_cast<double>(r)) > 1e-9 * std::max(1.0, n)) {
    throw InvalidArgument("end time is not a whole number of time steps");
  }
  return r;
}

std::optional<long> reversal_step(const std::optional<double>& t, double dt) {
  if (!t) return std::nullopt;
  return steps_for(*t, dt);
}

SparseMatrix to_col_major(const IncidenceMatrix& e) { return SparseMatrix(e.to_double()); }

template <class Stepper>
AdvectionResult run(const Stepper& forward, long n_steps, std::optional<long> reverse_at,
                    const Eigen::VectorXd& y0, const SolveOptions& opts) {
  const double dt = forward.basis().dt;
  std::optional<Stepper> backward;
  if (reverse_at && *reverse_at < n_steps) backward.emplace(forward.op().reversed(), forward.basis());

  AdvectionResult r;
  r.final_state = y0;
  r.times.reserve(n_steps + 1);
  r.mass.reserve(n_steps + 1);
  r.times.push_back(0.0);
  r.mass.push_back(compensated_sum(y0));
  r.snapshots.push_back({0, 0.0, y0});
  for (long n = 0; n < n_steps; ++n) {
    const bool rev = backward && n >= *reverse_at;
    r.final_state = rev ? backward->step(r.final_state) : forward.step(r.final_state);
    if (!r.final_state.allFinite()) throw SolverFailure("non-finite state", n + 1);
    const StepInfo info{n + 1, (n + 1) * dt};
    r.times.push_back(info.t);
    r.mass.push_back(compensated_sum(r.final_state));
    const bool keep = info.step == n_steps || (opts.snapshot_stride > 0 && info.step % opts.snapshot_stride == 0);
    if (keep) r.snapshots.push_back({info.step, info.t, r.final_state});
    if (opts.on_step) opts.on_step(info, r.final_state);
  }
  return r;
}

}  // namespace

long AdvectionProblem::step_count() const { return steps_for(t_end, dt); }
long AdvectionProblem1D::step_count() const { return steps_for(t_end, dt); }

// --- operator ---------------------------------------------------------------

AdvectionSlabOperator::AdvectionSlabOperator(SparseMatrix incidence, const MassMatrix& mass,
                                             SparseMatrix wedge)
    : incidence_(std::move(incidence)), mass_(mass.matrix), wedge_(std::move(wedge)), solver_(mass) {
  if (incidence_.cols() != mass_.rows() || wedge_.rows() != mass_.rows() ||
      wedge_.cols() != incidence_.rows()) {
    throw DimensionMismatch("advection operator: incidence, mass and wedge shapes disagree");
  }
}

Eigen::VectorXd AdvectionSlabOperator::flux(const Eigen::VectorXd& rho) const {
  if (rho.size() != size()) throw DimensionMismatch("advection operator state size");
  return solver_.solve(Eigen::VectorXd(wedge_ * rho));
}

Eigen::VectorXd AdvectionSlabOperator::apply(const Eigen::VectorXd& rho) const {
  return -(incidence_ * flux(rho));
}

Eigen::MatrixXd AdvectionSlabOperator::explicit_matrix() const {
  const Eigen::MatrixXd x = solver_.solve(Eigen::MatrixXd(wedge_));
  return -(incidence_ * x);
}

AdvectionSlabOperator AdvectionSlabOperator::reversed() const {
  AdvectionSlabOperator r = *this;
  r.wedge_ = -wedge_;
  return r;
}

AdvectionSlabOperator build_operator(const AdvectionProblem& problem) {
  const Mesh2D& mesh = *problem.mesh;
  if (problem.initial.degree != 2) throw InvalidArgument("2D advection needs a 2-form");
  return AdvectionSlabOperator(to_col_major(incidence_2_1(mesh.complex())), mass_matrix(mesh, 1),
                               wedge_matrix(mesh, problem.velocity, 2).matrix);
}

AdvectionSlabOperator build_operator(const AdvectionProblem1D& problem) {
  const Mesh1D& mesh = *problem.mesh;
  if (problem.initial.degree != 1) throw InvalidArgument("1D advection needs a 1-form");
  return AdvectionSlabOperator(to_col_major(incidence_1_0(mesh.complex())), mass_matrix(mesh, 0),
                               wedge_matrix(mesh, problem.velocity, 1).matrix);
}

// --- stepper ----------------------------------------------------------------

AdvectionStepper::AdvectionStepper(const AdvectionSlabOperator& op, TimeBasis basis)
    : op_(op), basis_(std::move(basis)) {
  const SparseMatrix we = op_.wedge() * op_.incidence();
  for (auto& shift : collocation_shifts(basis_)) {
    auto f = std::make_unique<Factor>();
    f->shift = std::move(shift);
    if (f->shift.real) {
      SparseMatrix k = op_.mass() + f->shift.lambda.real() * we;
      k.makeCompressed();
      f->real_lu.compute(k);
      if (f->real_lu.info() != Eigen::Success) throw SolverFailure("slab factorization: " + f->real_lu.lastErrorMessage());
    } else {
      ComplexSparse k = op_.mass().cast<std::complex<double>>() + f->shift.lambda * we.cast<std::complex<double>>();
      k.makeCompressed();
      f->complex_lu.compute(k);
      if (f->complex_lu.info() != Eigen::Success) throw SolverFailure("slab factorization: " + f->complex_lu.lastErrorMessage());
    }
    factors_.push_back(std::move(f));
  }
}

// Calls f(shift, u, sigma) for each diagonal shift, with complex vectors.
template <class F>
void AdvectionStepper::for_each_shift(const Eigen::VectorXd& rho, F&& f) const {
  if (rho.size() != op_.size()) throw DimensionMismatch("advection stepper state size");
  const Eigen::VectorXd rhs = op_.wedge() * rho;
  for (const auto& fac : factors_) {
    const auto& s = fac->shift;
    if (s.real) {
      const Eigen::VectorXd sigma = fac->real_lu.solve(rhs);
      const Eigen::VectorXd u = rho - s.lambda.real() * (op_.incidence() * sigma);
      f(s, Eigen::VectorXcd(u.cast<std::complex<double>>()), Eigen::VectorXcd(sigma.cast<std::complex<double>>()));
    } else {
      const Eigen::VectorXcd sigma = fac->complex_lu.solve(rhs.cast<std::complex<double>>());
      const Eigen::VectorXcd u =
          rho.cast<std::complex<double>>() - s.lambda * (op_.incidence().cast<std::complex<double>>() * sigma);
      f(s, u, sigma);
    }
  }
}

Eigen::VectorXd AdvectionStepper::slab_flux(const Eigen::VectorXd& rho) const {
  if (rho.size() != op_.size()) throw DimensionMismatch("advection stepper state size");
  const Eigen::VectorXd rhs = op_.wedge() * rho;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(op_.flux_size());
  for (const auto& fac : factors_) {
    if (fac->shift.real) {
      s += fac->shift.end_coeff.real() * fac->real_lu.solve(rhs);
    } else {
      s += (fac->shift.end_coeff * fac->complex_lu.solve(rhs.cast<std::complex<double>>())).real();
    }
  }
  return s;
}

Eigen::VectorXd AdvectionStepper::step(const Eigen::VectorXd& rho) const {
  return rho - op_.incidence() * slab_flux(rho);
}

std::vector<Eigen::VectorXd> AdvectionStepper::stage_fluxes(const Eigen::VectorXd& rho) const {
  const int p = basis_.order;
  std::vector<Eigen::VectorXd> sig(p, Eigen::VectorXd::Zero(op_.flux_size()));
  for_each_shift(rho, [&](const CollocationShift& s, const Eigen::VectorXcd&, const Eigen::VectorXcd& sigma) {
    for (int q = 0; q < p; ++q) sig[q] += (s.stage[q] * sigma).real();
  });
  return sig;
}

TimeSlab AdvectionStepper::solve_slab(const Eigen::VectorXd& rho, double t0) const {
  const int p = basis_.order;
  TimeSlab slab;
  slab.t0 = t0;
  slab.dt = basis_.dt;
  slab.stages.assign(p, Eigen::VectorXd::Zero(op_.size()));
  std::vector<Eigen::VectorXd> sig(p, Eigen::VectorXd::Zero(op_.flux_size()));
  for_each_shift(rho, [&](const CollocationShift& s, const Eigen::VectorXcd& u, const Eigen::VectorXcd& sigma) {
    for (int q = 0; q < p; ++q) {
      slab.stages[q] += (s.stage[q] * u).real();
      sig[q] += (s.stage[q] * sigma).real();
    }
  });
  for (int q = 0; q < p; ++q) slab.rates.push_back(-(op_.incidence() * sig[q]));
  // Levels in flux form as well: y^k = y0 - E sum_r P_kr sigma_r.
  const Eigen::MatrixXd level = collocation_level_matrix(basis_);
  slab.levels.push_back(rho);
  for (int k = 0; k < p; ++k) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(op_.flux_size());
    for (int r = 0; r < p; ++r) s += level(k, r) * sig[r];
    slab.levels.push_back(rho - op_.incidence() * s);
  }
  return slab;
}

// --- solve ------------------------------------------------------------------

AdvectionResult solve(const AdvectionProblem& problem, const SolveOptions& opts) {
  if (!problem.mesh || problem.initial.mesh != problem.mesh) {
    throw InvalidArgument("initial form must live on the problem mesh");
  }
  const long n = problem.step_count();
  const AdvectionStepper stepper(build_operator(problem), build_time_basis(problem.pt, problem.dt));
  return run(stepper, n, reversal_step(problem.reversal_time, problem.dt), problem.initial.coeffs, opts);
}

AdvectionResult solve(const AdvectionProblem1D& problem, const SolveOptions& opts) {
  if (!problem.mesh || problem.initial.mesh != problem.mesh) {
    throw InvalidArgument("initial form must live on the problem mesh");
  }
  const long n = problem.step_count();
  const AdvectionStepper stepper(build_operator(problem), build_time_basis(problem.pt, problem.dt));
  return run(stepper, n, reversal_step(problem.reversal_time, problem.dt), problem.initial.coeffs, opts);
}

std::vector<double> mass_history(const std::vector<double>& totals) {
  std::vector<double> drift;
  drift.reserve(totals.size());
  for (double m : totals) drift.push_back(m - totals.front());
  return drift;
}

std::vector<double> mass_history(const std::vector<DiscreteForm>& series) {
  std::vector<double> totals;
  totals.reserve(series.size());
  for (const auto& f : series) totals.push_back(total_integral(f));
  return mass_history(totals);
}

}  // namespace mse
