#pragma once

// Gauss-collocation ("mimetic") time integration on slabs [t0, t0 + dt].
//
// The trajectory is a degree-p_t polynomial carried by its values y^k at the
// p_t + 1 Gauss-Lobatto levels; its derivative is matched to the right-hand
// side at the p_t Gauss nodes:
//
//   sum_k (y^k - y^{k-1}) e_k(tq) = h( sum_k y^k l_k(tq), tq ),   q = 1..p_t
//
// For linear steady h(y) = A y the slab reduces to p_t shifted solves
// (I - lambda_j A) u = y0 after diagonalising the p_t x p_t collocation
// matrix, and the factors are reused for every step.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace mse {

struct TimeBasis {
  int order{1};
  double dt{1.0};
  std::vector<double> levels;       // Gauss-Lobatto offsets t^0..t^p in [0, dt]
  std::vector<double> collocation;  // Gauss offsets tq^1..tq^p
  Eigen::MatrixXd lagrange;         // p x (p+1): l_k(tq)
  Eigen::MatrixXd edge;             // p x p: e_k(tq), already scaled by 2/dt
};

TimeBasis build_time_basis(int pt, double dt);

/// Unknowns of one slab. levels[0] is the incoming state.
struct TimeSlab {
  double t0{0.0};
  double dt{0.0};
  std::vector<Eigen::VectorXd> levels;  // y at Gauss-Lobatto levels, size p+1
  std::vector<Eigen::VectorXd> stages;  // y at Gauss nodes, size p
  std::vector<Eigen::VectorXd> rates;   // h at Gauss nodes, size p
};

/// One term of the diagonalised slab: with u = (I - lambda A)^-1 y0 the stage
/// values are y(tq) = sum Re(stage[q] u) and the end state is
/// y0 + A sum Re(end_coeff u). Conjugate pairs are folded into one term.
struct CollocationShift {
  std::complex<double> lambda;
  bool real{true};
  std::complex<double> end_coeff;
  std::vector<std::complex<double>> stage;
};

std::vector<CollocationShift> collocation_shifts(const TimeBasis& basis);
/// Weights g_q with y^p = y0 + A sum_q g_q y(tq).
Eigen::VectorXd collocation_end_weights(const TimeBasis& basis);
/// (G^-1) cumulated by rows: y^k = y0 + sum_r P_kr h(tq_r), k = 1..p.
Eigen::MatrixXd collocation_level_matrix(const TimeBasis& basis);

/// Residual of the collocation equations of a solved slab for h(y) = A y.
double collocation_residual(const TimeSlab& slab, const TimeBasis& basis,
                            const Eigen::MatrixXd& a);

/// Linear steady integrator with the slab factorization computed once.
class CollocationIntegrator {
 public:
  CollocationIntegrator(Eigen::MatrixXd a, TimeBasis basis);

  const TimeBasis& basis() const noexcept { return basis_; }
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  Eigen::Index size() const noexcept { return a_.rows(); }

  /// Stage values y(tq), q = 1..p.
  std::vector<Eigen::VectorXd> stages(const Eigen::VectorXd& y0) const;
  /// w such that y^p = y0 + A w; also y^p = y0 + dt sum_q b_q h(tq).
  Eigen::VectorXd stage_combination(const Eigen::VectorXd& y0) const;
  /// Weights g_q with w = sum_q g_q y(tq).
  const Eigen::VectorXd& end_weights() const noexcept { return end_weights_; }

  TimeSlab solve_slab(const Eigen::VectorXd& y0, double t0 = 0.0) const;
  Eigen::VectorXd step(const Eigen::VectorXd& y0) const;

 private:
  struct Shift : CollocationShift {
    Eigen::PartialPivLU<Eigen::MatrixXd> real_lu;
    Eigen::PartialPivLU<Eigen::MatrixXcd> complex_lu;
  };

  Eigen::MatrixXd a_;
  TimeBasis basis_;
  Eigen::VectorXd end_weights_;
  std::vector<Shift> shifts_;
};

TimeSlab slab_solve_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& y0,
                           const TimeBasis& basis);

/// Per-step record passed to advance callbacks.
struct StepInfo {
  long step{0};
  double t{0.0};
};
using StepCallback = std::function<void(const StepInfo&, const Eigen::VectorXd&)>;

struct AdvanceResult {
  Eigen::VectorXd state;
  std::vector<StepInfo> steps;
};

AdvanceResult advance(const Eigen::MatrixXd& a, const Eigen::VectorXd& y0, double dt, long n_steps,
                      int pt, const StepCallback& callback = {});
AdvanceResult advance(const CollocationIntegrator& integrator, const Eigen::VectorXd& y0,
                      long n_steps, const StepCallback& callback = {}, double t0 = 0.0);

/// General right-hand side h(y, t) with Jacobian dh/dy, solved by Newton.
using RhsFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
using RhsJacobian = std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)>;

struct NewtonOptions {
  double tolerance{1e-12};
  int max_iterations{50};
};

TimeSlab slab_solve(const RhsFunction& h, const RhsJacobian& jacobian, const Eigen::VectorXd& y0,
                    double t0, const TimeBasis& basis, NewtonOptions opts = {});

}  // namespace mse
