#include "mse/timestep.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "mse/errors.hpp"
#include "mse/polybasis.hpp"

namespace mse {
namespace {

// Collocation algebra of one slab, independent of the state dimension.
//   G_qk = e_k(tq), S_qm = sum_{k >= m} l_k(tq),
//   y(tq) = y0 + sum_r C_qr h_r with C = S G^-1,
//   y^k  = y0 + sum_r P_kr h_r with P_k = sum_{m <= k} (G^-1)_m.
struct SlabAlgebra {
  Eigen::MatrixXd ginv;
  Eigen::MatrixXd stage;  // C
  Eigen::MatrixXd level;  // P, rows k = 1..p
};

SlabAlgebra slab_algebra(const TimeBasis& basis) {
  const int p = basis.order;
  SlabAlgebra s;
  s.ginv = basis.edge.inverse();
  Eigen::MatrixXd tail(p, p);
  for (int q = 0; q < p; ++q) {
    double acc = 0.0;
    for (int m = p; m >= 1; --m) {
      acc += basis.lagrange(q, m);
      tail(q, m - 1) = acc;
    }
  }
  s.stage = tail * s.ginv;
  s.level = Eigen::MatrixXd(p, p);
  Eigen::RowVectorXd run = Eigen::RowVectorXd::Zero(p);
  for (int k = 0; k < p; ++k) {
    run += s.ginv.row(k);
    s.level.row(k) = run;
  }
  return s;
}

void fill_levels(TimeSlab& slab, const Eigen::MatrixXd& ginv) {
  const int p = static_cast<int>(slab.rates.size());
  slab.levels.resize(p + 1);
  Eigen::VectorXd y = slab.levels[0];
  for (int k = 0; k < p; ++k) {
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(y.size());
    for (int r = 0; r < p; ++r) delta += ginv(k, r) * slab.rates[r];
    y += delta;
    slab.levels[k + 1] = y;
  }
}

}  // namespace

TimeBasis build_time_basis(int pt, double dt) {
  if (pt < 1) throw InvalidOrder("time order must be >= 1, got " + std::to_string(pt));
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const Basis1D basis(pt);
  const auto gauss = gauss_nodes(pt);
  TimeBasis tb;
  tb.order = pt;
  tb.dt = dt;
  for (double x : basis.nodes()) tb.levels.push_back(0.5 * (x + 1.0) * dt);
  for (double x : gauss) tb.collocation.push_back(0.5 * (x + 1.0) * dt);
  tb.lagrange.resize(pt, pt + 1);
  tb.edge.resize(pt, pt);
  for (int q = 0; q < pt; ++q) {
    const auto l = basis.lagrange_all(gauss[q]);
    const auto e = basis.edge_all(gauss[q]);
    for (int k = 0; k <= pt; ++k) tb.lagrange(q, k) = l[k];
    for (int k = 0; k < pt; ++k) tb.edge(q, k) = e[k] * 2.0 / dt;
  }
  return tb;
}

double collocation_residual(const TimeSlab& slab, const TimeBasis& basis,
                            const Eigen::MatrixXd& a) {
  const int p = basis.order;
  double worst = 0.0;
  for (int q = 0; q < p; ++q) {
    Eigen::VectorXd lhs = Eigen::VectorXd::Zero(slab.levels[0].size());
    Eigen::VectorXd mid = Eigen::VectorXd::Zero(slab.levels[0].size());
    for (int k = 1; k <= p; ++k) lhs += (slab.levels[k] - slab.levels[k - 1]) * basis.edge(q, k - 1);
    for (int k = 0; k <= p; ++k) mid += slab.levels[k] * basis.lagrange(q, k);
    worst = std::max(worst, (lhs - a * mid).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

// --- diagonalised slab ------------------------------------------------------

Eigen::VectorXd collocation_end_weights(const TimeBasis& basis) {
  return slab_algebra(basis).level.row(basis.order - 1).transpose();
}

Eigen::MatrixXd collocation_level_matrix(const TimeBasis& basis) { return slab_algebra(basis).level; }

std::vector<CollocationShift> collocation_shifts(const TimeBasis& basis) {
  const int p = basis.order;
  const auto alg = slab_algebra(basis);
  const Eigen::VectorXd g = alg.level.row(p - 1).transpose();

  Eigen::EigenSolver<Eigen::MatrixXd> es(alg.stage);
  if (es.info() != Eigen::Success) throw SolverFailure("collocation matrix eigen-decomposition");
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::VectorXcd lam = es.eigenvalues();
  const Eigen::VectorXcd c = v.partialPivLu().solve(Eigen::VectorXcd::Ones(p));
  const Eigen::MatrixXcd recon = v * lam.asDiagonal() * v.inverse();
  if ((recon - alg.stage.cast<std::complex<double>>()).norm() > 1e-10 * alg.stage.norm()) {
    throw SolverFailure("collocation matrix is not diagonalisable to working accuracy");
  }

  const double scale = lam.cwiseAbs().maxCoeff();
  std::vector<CollocationShift> shifts;
  std::vector<bool> used(p, false);
  for (int j = 0; j < p; ++j) {
    if (used[j]) continue;
    used[j] = true;
    CollocationShift s;
    s.lambda = lam[j];
    s.real = std::abs(lam[j].imag()) <= 1e-13 * scale;
    double mult = 1.0;
    if (s.real) {
      s.lambda = lam[j].real();
    } else {
      // The conjugate partner contributes the complex conjugate; fold it in.
      for (int k = j + 1; k < p; ++k) {
        if (!used[k] && std::abs(lam[k] - std::conj(lam[j])) <= 1e-10 * scale) {
          used[k] = true;
          mult = 2.0;
          break;
        }
      }
      if (mult != 2.0) throw SolverFailure("unpaired complex collocation eigenvalue");
    }
    s.stage.resize(p);
    std::complex<double> end{0.0, 0.0};
    for (int q = 0; q < p; ++q) {
      s.stage[q] = mult * v(q, j) * c[j];
      end += g[q] * v(q, j) * c[j];
    }
    s.end_coeff = mult * end;
    if (s.real) {
      for (auto& z : s.stage) z = z.real();
      s.end_coeff = s.end_coeff.real();
    }
    shifts.push_back(std::move(s));
  }
  return shifts;
}

// --- CollocationIntegrator --------------------------------------------------

CollocationIntegrator::CollocationIntegrator(Eigen::MatrixXd a, TimeBasis basis)
    : a_(std::move(a)), basis_(std::move(basis)) {
  if (a_.rows() != a_.cols()) throw DimensionMismatch("integrator matrix must be square");
  end_weights_ = collocation_end_weights(basis_);
  const Eigen::Index n = a_.rows();
  for (auto& base : collocation_shifts(basis_)) {
    Shift s;
    static_cast<CollocationShift&>(s) = std::move(base);
    if (s.real) {
      s.real_lu.compute(Eigen::MatrixXd::Identity(n, n) - s.lambda.real() * a_);
    } else {
      s.complex_lu.compute(Eigen::MatrixXcd::Identity(n, n) - s.lambda * a_.cast<std::complex<double>>());
    }
    shifts_.push_back(std::move(s));
  }
}

std::vector<Eigen::VectorXd> CollocationIntegrator::stages(const Eigen::VectorXd& y0) const {
  if (y0.size() != size()) throw DimensionMismatch("integrator state size");
  const int p = basis_.order;
  std::vector<Eigen::VectorXd> y(p, Eigen::VectorXd::Zero(size()));
  for (const auto& s : shifts_) {
    if (s.real) {
      const Eigen::VectorXd u = s.real_lu.solve(y0);
      for (int q = 0; q < p; ++q) y[q] += s.stage[q].real() * u;
    } else {
      const Eigen::VectorXcd u = s.complex_lu.solve(y0.cast<std::complex<double>>());
      for (int q = 0; q < p; ++q) y[q] += (s.stage[q] * u).real();
    }
  }
  return y;
}

Eigen::VectorXd CollocationIntegrator::stage_combination(const Eigen::VectorXd& y0) const {
  if (y0.size() != size()) throw DimensionMismatch("integrator state size");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(size());
  for (const auto& s : shifts_) {
    if (s.real) {
      w += s.end_coeff.real() * s.real_lu.solve(y0);
    } else {
      w += (s.end_coeff * s.complex_lu.solve(y0.cast<std::complex<double>>())).real();
    }
  }
  return w;
}

TimeSlab CollocationIntegrator::solve_slab(const Eigen::VectorXd& y0, double t0) const {
  TimeSlab slab;
  slab.t0 = t0;
  slab.dt = basis_.dt;
  slab.stages = stages(y0);
  slab.rates.reserve(slab.stages.size());
  for (const auto& y : slab.stages) slab.rates.push_back(a_ * y);
  slab.levels.assign(1, y0);
  fill_levels(slab, basis_.edge.inverse());
  return slab;
}

Eigen::VectorXd CollocationIntegrator::step(const Eigen::VectorXd& y0) const {
  return y0 + a_ * stage_combination(y0);
}

TimeSlab slab_solve_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& y0,
                           const TimeBasis& basis) {
  return CollocationIntegrator(a, basis).solve_slab(y0);
}

AdvanceResult advance(const CollocationIntegrator& integrator, const Eigen::VectorXd& y0,
                      long n_steps, const StepCallback& callback, double t0) {
  AdvanceResult result{y0, {}};
  result.steps.reserve(n_steps > 0 ? n_steps : 0);
  const double dt = integrator.basis().dt;
  for (long n = 1; n <= n_steps; ++n) {
    result.state = integrator.step(result.state);
    if (!result.state.allFinite()) throw SolverFailure("non-finite state", n);
    const StepInfo info{n, t0 + n * dt};
    result.steps.push_back(info);
    if (callback) callback(info, result.state);
  }
  return result;
}

AdvanceResult advance(const Eigen::MatrixXd& a, const Eigen::VectorXd& y0, double dt, long n_steps,
                      int pt, const StepCallback& callback) {
  if (n_steps <= 0) return {y0, {}};
  const CollocationIntegrator integrator(a, build_time_basis(pt, dt));
  return advance(integrator, y0, n_steps, callback);
}

// --- Newton fallback for general right-hand sides ----------------------------

TimeSlab slab_solve(const RhsFunction& h, const RhsJacobian& jacobian, const Eigen::VectorXd& y0,
                    double t0, const TimeBasis& basis, NewtonOptions opts) {
  const int p = basis.order;
  const Eigen::Index n = y0.size();
  const auto alg = slab_algebra(basis);
  // Unknowns are state-major: index = i * p + q.
  Eigen::VectorXd y(n * p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int q = 0; q < p; ++q) y[i * p + q] = y0[i];

  auto stage = [&](int q) {
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s[i] = y[i * p + q];
    return s;
  };

  std::vector<Eigen::VectorXd> rates(p);
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    std::vector<Eigen::MatrixXd> jac(p);
    for (int q = 0; q < p; ++q) {
      const Eigen::VectorXd s = stage(q);
      rates[q] = h(s, t0 + basis.collocation[q]);
      jac[q] = jacobian(s, t0 + basis.collocation[q]);
    }
    Eigen::VectorXd res(n * p);
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n * p, n * p);
    for (int q = 0; q < p; ++q) {
      for (Eigen::Index i = 0; i < n; ++i) {
        double acc = y[i * p + q] - y0[i];
        for (int r = 0; r < p; ++r) acc -= alg.stage(q, r) * rates[r][i];
        res[i * p + q] = acc;
      }
      for (int r = 0; r < p; ++r) {
        const double c = alg.stage(q, r);
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) k(i * p + q, j * p + r) -= c * jac[r](i, j);
      }
    }
    const Eigen::VectorXd delta = k.partialPivLu().solve(res);
    y -= delta;
    if (!y.allFinite()) break;
    if (delta.lpNorm<Eigen::Infinity>() <= opts.tolerance * (1.0 + y.lpNorm<Eigen::Infinity>())) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw SolverFailure("Newton slab iteration did not converge in " +
                        std::to_string(opts.max_iterations) + " iterations");
  }
  TimeSlab slab;
  slab.t0 = t0;
  slab.dt = basis.dt;
  for (int q = 0; q < p; ++q) {
    slab.stages.push_back(stage(q));
    slab.rates.push_back(h(slab.stages.back(), t0 + basis.collocation[q]));
  }
  slab.levels.assign(1, y0);
  fill_levels(slab, alg.ginv);
  return slab;
}

}  // namespace mse
