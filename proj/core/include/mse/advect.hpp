#pragma once

// Advection of top-degree forms: d rho/dt = -d i_v rho, discretised as
//   d rho/dt = -E sigma,  M sigma = W rho
// and integrated with Gauss collocation slabs. Every update is applied in
// flux form rho <- rho - E s, so the column sums of E keep 1^T rho fixed.

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mse/forms.hpp"
#include "mse/operators.hpp"
#include "mse/timestep.hpp"

namespace mse {

struct AdvectionProblem {
  std::shared_ptr<const Mesh2D> mesh;
  VelocityField velocity;
  DiscreteForm initial;
  int pt{4};
  double dt{0.1};
  double t_end{1.0};
  /// Velocity changes sign from this time on.
  std::optional<double> reversal_time;

  long step_count() const;
};

struct AdvectionProblem1D {
  std::shared_ptr<const Mesh1D> mesh;
  VelocityField1D velocity;
  DiscreteForm1D initial;
  int pt{4};
  double dt{0.1};
  double t_end{1.0};
  std::optional<double> reversal_time;

  long step_count() const;
};

/// A = -E M^-1 W on top-degree cochains; M is factorised once and shared.
class AdvectionSlabOperator {
 public:
  AdvectionSlabOperator(SparseMatrix incidence, const MassMatrix& mass, SparseMatrix wedge);

  Eigen::Index size() const noexcept { return incidence_.rows(); }
  Eigen::Index flux_size() const noexcept { return incidence_.cols(); }
  const SparseMatrix& incidence() const noexcept { return incidence_; }
  const SparseMatrix& mass() const noexcept { return mass_; }
  const SparseMatrix& wedge() const noexcept { return wedge_; }

  /// sigma = M^-1 W rho, the discrete interior product.
  Eigen::VectorXd flux(const Eigen::VectorXd& rho) const;
  /// Matrix-free A rho.
  Eigen::VectorXd apply(const Eigen::VectorXd& rho) const;
  /// Dense A, built column block by column block.
  Eigen::MatrixXd explicit_matrix() const;
  /// Same operator with the velocity negated; the mass factor is reused.
  AdvectionSlabOperator reversed() const;

 private:
  SparseMatrix incidence_;
  SparseMatrix mass_;
  SparseMatrix wedge_;
  MassSolver solver_;
};

AdvectionSlabOperator build_operator(const AdvectionProblem& problem);
AdvectionSlabOperator build_operator(const AdvectionProblem1D& problem);

/// Gauss collocation slab for A = -E M^-1 W. Each diagonal shift is solved
/// through the flux unknowns: (M + lambda W E) sigma = W y0, u = y0 - lambda E sigma.
class AdvectionStepper {
 public:
  AdvectionStepper(const AdvectionSlabOperator& op, TimeBasis basis);

  const TimeBasis& basis() const noexcept { return basis_; }
  const AdvectionSlabOperator& op() const noexcept { return op_; }

  /// Slab-integrated flux s: the step is rho - E s.
  Eigen::VectorXd slab_flux(const Eigen::VectorXd& rho) const;
  Eigen::VectorXd step(const Eigen::VectorXd& rho) const;
  /// Full slab, with the stage fluxes sigma(tq) in `rates` replaced by -E sigma.
  TimeSlab solve_slab(const Eigen::VectorXd& rho, double t0 = 0.0) const;
  /// Stage interior products sigma(tq), q = 1..p_t.
  std::vector<Eigen::VectorXd> stage_fluxes(const Eigen::VectorXd& rho) const;

 private:
  struct Factor {
    CollocationShift shift;
    Eigen::SparseLU<SparseMatrix> real_lu;
    Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> complex_lu;
  };

  template <class F>
  void for_each_shift(const Eigen::VectorXd& rho, F&& f) const;

  AdvectionSlabOperator op_;
  TimeBasis basis_;
  std::vector<std::unique_ptr<Factor>> factors_;
};

struct Snapshot {
  long step{0};
  double t{0.0};
  Eigen::VectorXd coeffs;
};

struct SolveOptions {
  /// Keep every n-th state (the initial and final states are always kept); 0 keeps only those.
  long snapshot_stride{0};
  /// Called after every step with the new state.
  std::function<void(const StepInfo&, const Eigen::VectorXd&)> on_step;
};

struct AdvectionResult {
  Eigen::VectorXd final_state;
  std::vector<Snapshot> snapshots;
  std::vector<double> times;  // t of step 0..n
  std::vector<double> mass;   // total integral at step 0..n
};

AdvectionResult solve(const AdvectionProblem& problem, const SolveOptions& opts = {});
AdvectionResult solve(const AdvectionProblem1D& problem, const SolveOptions& opts = {});

/// Drift of the total integral against the first entry.
std::vector<double> mass_history(const std::vector<double>& totals);
std::vector<double> mass_history(const std::vector<DiscreteForm>& series);

}  // namespace mse
