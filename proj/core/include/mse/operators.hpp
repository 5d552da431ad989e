#pragma once

// Galerkin (metric) operators: mass matrices of the basis forms and the
// wedge matrix that defines the discrete interior product as the L2 adjoint
// of wedging with the velocity 1-form v-flat.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <iosfwd>
#include <memory>

#include "mse/forms.hpp"

namespace mse {

/// Prescribed velocity in Cartesian components. The flat operator is the
/// identity on components (Euclidean metric).
struct VelocityField {
  ScalarField vx;
  ScalarField vy;
  bool steady{true};

  static VelocityField uniform(double ax, double ay);
  static VelocityField zero() { return uniform(0.0, 0.0); }
  /// Single vortex from psi = sin^2(pi x) sin^2(pi y) / pi on the unit square.
  static VelocityField rudman_vortex();
  VelocityField reversed() const;
};

struct VelocityField1D {
  ScalarField1D v;

  static VelocityField1D uniform(double a);
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// M_ij = <eps_i, eps_j>_L2 for degree-k basis forms.
struct MassMatrix {
  int degree{0};
  SparseMatrix matrix;
};

/// W_ji = <eps_i^(k), nu ^ eps_j^(k-1)>_L2; rows (k-1)-cells, columns k-cells.
struct WedgeMatrix {
  int degree{1};
  SparseMatrix matrix;
};

/// Gauss points per direction used by every inner product for order p.
int operator_quadrature_points(int p);

MassMatrix mass_matrix(const Mesh2D& mesh, int k);
MassMatrix mass_matrix(const Mesh1D& mesh, int k);

WedgeMatrix wedge_matrix(const Mesh2D& mesh, const VelocityField& velocity, int k);
WedgeMatrix wedge_matrix(const Mesh1D& mesh, const VelocityField1D& velocity, int k = 1);

/// Sparse Cholesky factor of a mass matrix, computed once and shared.
class MassSolver {
 public:
  explicit MassSolver(const MassMatrix& m);

  int degree() const noexcept { return degree_; }
  Eigen::Index size() const noexcept { return size_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

 private:
  int degree_;
  Eigen::Index size_;
  std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> factor_;
};

/// Solves M sigma = W rho: the L2-optimal (k-1)-form contraction of rho.
DiscreteForm interior_product(const DiscreteForm& rho, const MassSolver& mass, const WedgeMatrix& w);
DiscreteForm1D interior_product(const DiscreteForm1D& rho, const MassSolver& mass,
                                const WedgeMatrix& w);

/// Coordinate-format dump, one "row col value" triple per line.
void write_coo(std::ostream& os, const SparseMatrix& m);

}  // namespace mse
