#include "mse/operators.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "mse/errors.hpp"

namespace mse {
namespace {

using Triplet = Eigen::Triplet<double>;

// Reference basis values on the tensor Gauss grid of one element; rows are
// quadrature points q = b * nq + a.
struct ElementBasis {
  QuadratureRule quad;
  Eigen::VectorXd weights;  // tensor weights w_a w_b
  Eigen::MatrixXd nodal;    // nq^2 x (p+1)^2
  Eigen::MatrixXd edge_xi;  // nq^2 x 2p(p+1), xi component of edge forms
  Eigen::MatrixXd edge_eta; // nq^2 x 2p(p+1), eta component
  Eigen::MatrixXd face;     // nq^2 x p^2
};

ElementBasis element_basis(const Mesh2D& mesh) {
  const auto& c = mesh.complex();
  const int p = c.order();
  ElementBasis eb;
  eb.quad = gauss_rule(operator_quadrature_points(p));
  const int nq = static_cast<int>(eb.quad.size());
  const auto tab = tabulate(mesh.basis(), eb.quad.nodes);
  const int n = nq * nq;
  eb.weights.resize(n);
  eb.nodal = Eigen::MatrixXd::Zero(n, c.local_nodes());
  eb.edge_xi = Eigen::MatrixXd::Zero(n, c.local_edges());
  eb.edge_eta = Eigen::MatrixXd::Zero(n, c.local_edges());
  eb.face = Eigen::MatrixXd::Zero(n, c.local_faces());
  for (int b = 0; b < nq; ++b) {
    for (int a = 0; a < nq; ++a) {
      const int q = b * nq + a;
      eb.weights[q] = eb.quad.weights[a] * eb.quad.weights[b];
      for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i)
          eb.nodal(q, c.local_node(i, j)) = tab.lagrange(a, i) * tab.lagrange(b, j);
      for (int j = 0; j <= p; ++j)
        for (int i = 1; i <= p; ++i)
          eb.edge_xi(q, c.local_xedge(i, j)) = tab.edge(a, i - 1) * tab.lagrange(b, j);
      for (int j = 1; j <= p; ++j)
        for (int i = 0; i <= p; ++i)
          eb.edge_eta(q, c.local_yedge(i, j)) = tab.lagrange(a, i) * tab.edge(b, j - 1);
      for (int j = 1; j <= p; ++j)
        for (int i = 1; i <= p; ++i)
          eb.face(q, c.local_face(i, j)) = tab.edge(a, i - 1) * tab.edge(b, j - 1);
    }
  }
  return eb;
}

void scatter(std::vector<Triplet>& t, const Eigen::MatrixXd& local, std::span<const int> rows,
             std::span<const int> cols) {
  for (Eigen::Index j = 0; j < local.cols(); ++j) {
    for (Eigen::Index i = 0; i < local.rows(); ++i) {
      if (local(i, j) != 0.0) t.emplace_back(rows[i], cols[j], local(i, j));
    }
  }
}

std::span<const int> entities(const CellComplex2D& c, int e, int degree) {
  switch (degree) {
    case 0:
      return c.element_nodes(e);
    case 1:
      return c.element_edges(e);
    default:
      return c.element_faces(e);
  }
}

SparseMatrix assemble(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

VelocityField VelocityField::uniform(double ax, double ay) {
  return {[ax](double, double) { return ax; }, [ay](double, double) { return ay; }, true};
}

VelocityField VelocityField::rudman_vortex() {
  constexpr double pi = std::numbers::pi;
  // v = (d psi / dy, -d psi / dx)
  auto vx = [](double x, double y) {
    const double sx = std::sin(pi * x);
    return sx * sx * std::sin(2.0 * pi * y);
  };
  auto vy = [](double x, double y) {
    const double sy = std::sin(pi * y);
    return -std::sin(2.0 * pi * x) * sy * sy;
  };
  return {vx, vy, true};
}

VelocityField VelocityField::reversed() const {
  return {[f = vx](double x, double y) { return -f(x, y); },
          [f = vy](double x, double y) { return -f(x, y); }, steady};
}

VelocityField1D VelocityField1D::uniform(double a) {
  return {[a](double) { return a; }};
}

int operator_quadrature_points(int p) { return p + 2; }

MassMatrix mass_matrix(const Mesh2D& mesh, int k) {
  if (k < 0 || k > 2) throw InvalidArgument("mass_matrix degree " + std::to_string(k));
  const auto& c = mesh.complex();
  const auto eb = element_basis(mesh);
  std::vector<Triplet> t;
  for (int e = 0; e < c.element_count(); ++e) {
    const auto mf = pullback_weights(mesh, e, eb.quad);
    const Eigen::Index n = eb.weights.size();
    Eigen::MatrixXd local;
    switch (k) {
      case 0: {
        Eigen::VectorXd w(n);
        for (Eigen::Index q = 0; q < n; ++q) w[q] = eb.weights[q] * mf.det[q];
        local = eb.nodal.transpose() * w.asDiagonal() * eb.nodal;
        break;
      }
      case 1: {
        Eigen::VectorXd gxx(n), gxy(n), gyy(n);
        for (Eigen::Index q = 0; q < n; ++q) {
          gxx[q] = eb.weights[q] * mf.one_form[q][0];
          gxy[q] = eb.weights[q] * mf.one_form[q][1];
          gyy[q] = eb.weights[q] * mf.one_form[q][2];
        }
        const Eigen::MatrixXd cross = eb.edge_xi.transpose() * gxy.asDiagonal() * eb.edge_eta;
        local = eb.edge_xi.transpose() * gxx.asDiagonal() * eb.edge_xi +
                eb.edge_eta.transpose() * gyy.asDiagonal() * eb.edge_eta + cross +
                cross.transpose();
        break;
      }
      default: {
        Eigen::VectorXd w(n);
        for (Eigen::Index q = 0; q < n; ++q) w[q] = eb.weights[q] * mf.inv_det[q];
        local = eb.face.transpose() * w.asDiagonal() * eb.face;
      }
    }
    const auto ids = entities(c, e, k);
    scatter(t, local, ids, ids);
  }
  const int size = c.cell_count(k);
  return {k, assemble(size, size, t)};
}

MassMatrix mass_matrix(const Mesh1D& mesh, int k) {
  if (k < 0 || k > 1) throw InvalidArgument("1D mass_matrix degree " + std::to_string(k));
  const auto& c = mesh.complex();
  const int p = c.order();
  const auto quad = gauss_rule(operator_quadrature_points(p));
  const auto tab = tabulate(mesh.basis(), quad.nodes);
  const double jac = mesh.jacobian();
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(quad.weights.data(), quad.size());
  const Eigen::MatrixXd local =
      k == 0 ? Eigen::MatrixXd(tab.lagrange.transpose() * (w * jac).asDiagonal() * tab.lagrange)
             : Eigen::MatrixXd(tab.edge.transpose() * (w / jac).asDiagonal() * tab.edge);
  std::vector<Triplet> t;
  std::vector<int> ids(local.rows());
  for (int e = 0; e < c.nx(); ++e) {
    for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
      ids[i] = k == 0 ? c.node_index(e, i) : c.edge_index(e, i + 1);
    }
    scatter(t, local, ids, ids);
  }
  const int size = k == 0 ? c.node_count() : c.edge_count();
  return {k, assemble(size, size, t)};
}

WedgeMatrix wedge_matrix(const Mesh2D& mesh, const VelocityField& velocity, int k) {
  if (k == 0) throw InvalidArgument("interior product of a 0-form vanishes; wedge_matrix needs k >= 1");
  if (k < 0 || k > 2) throw InvalidArgument("wedge_matrix degree " + std::to_string(k));
  const auto& c = mesh.complex();
  const auto eb = element_basis(mesh);
  const int nq = static_cast<int>(eb.quad.size());
  const Eigen::Index n = eb.weights.size();
  std::vector<Triplet> t;
  Eigen::VectorXd gx(n), gy(n);
  for (int e = 0; e < c.element_count(); ++e) {
    const auto& map = mesh.element_map(e);
    for (int b = 0; b < nq; ++b) {
      for (int a = 0; a < nq; ++a) {
        const int q = b * nq + a;
        const Jacobian j = map.jacobian(eb.quad.nodes[a], eb.quad.nodes[b]);
        const Point2 x = map(eb.quad.nodes[a], eb.quad.nodes[b]);
        const double vx = velocity.vx(x.x, x.y);
        const double vy = velocity.vy(x.x, x.y);
        if (k == 2) {
          // nu ^ (J^-T phi) for phi = (s, 0) and (0, s), times det J / det J.
          const double det = j.det();
          gx[q] = eb.weights[q] * -(vx * j.x_eta + vy * j.y_eta) / det;
          gy[q] = eb.weights[q] * (vx * j.x_xi + vy * j.y_xi) / det;
        } else {
          // (J^-T phi) . v det J.
          gx[q] = eb.weights[q] * (j.y_eta * vx - j.x_eta * vy);
          gy[q] = eb.weights[q] * (-j.y_xi * vx + j.x_xi * vy);
        }
      }
    }
    if (k == 2) {
      const Eigen::MatrixXd local = eb.edge_xi.transpose() * gx.asDiagonal() * eb.face +
                                    eb.edge_eta.transpose() * gy.asDiagonal() * eb.face;
      scatter(t, local, c.element_edges(e), c.element_faces(e));
    } else {
      const Eigen::MatrixXd local = eb.nodal.transpose() * gx.asDiagonal() * eb.edge_xi +
                                    eb.nodal.transpose() * gy.asDiagonal() * eb.edge_eta;
      scatter(t, local, c.element_nodes(e), c.element_edges(e));
    }
  }
  return {k, assemble(c.cell_count(k - 1), c.cell_count(k), t)};
}

WedgeMatrix wedge_matrix(const Mesh1D& mesh, const VelocityField1D& velocity, int k) {
  if (k != 1) throw InvalidArgument("1D wedge_matrix needs k = 1");
  const auto& c = mesh.complex();
  const int p = c.order();
  const auto quad = gauss_rule(operator_quadrature_points(p));
  const auto tab = tabulate(mesh.basis(), quad.nodes);
  const int nq = static_cast<int>(quad.size());
  std::vector<Triplet> t;
  std::vector<int> rows(p + 1), cols(p);
  Eigen::VectorXd w(nq);
  for (int e = 0; e < c.nx(); ++e) {
    for (int q = 0; q < nq; ++q) w[q] = quad.weights[q] * velocity.v(mesh.map(e, quad.nodes[q]));
    // (e_i / J) v l_j J dxi
    const Eigen::MatrixXd local = tab.lagrange.transpose() * w.asDiagonal() * tab.edge;
    for (int i = 0; i <= p; ++i) rows[i] = c.node_index(e, i);
    for (int i = 1; i <= p; ++i) cols[i - 1] = c.edge_index(e, i);
    scatter(t, local, rows, cols);
  }
  return {1, assemble(c.node_count(), c.edge_count(), t)};
}

MassSolver::MassSolver(const MassMatrix& m)
    : degree_(m.degree),
      size_(m.matrix.rows()),
      factor_(std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>()) {
  factor_->compute(m.matrix);
  if (factor_->info() != Eigen::Success) {
    throw SolverFailure("mass matrix factorization of degree " + std::to_string(m.degree));
  }
}

Eigen::VectorXd MassSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != size_) throw DimensionMismatch("MassSolver::solve");
  Eigen::VectorXd x = factor_->solve(rhs);
  if (factor_->info() != Eigen::Success) throw SolverFailure("mass matrix solve");
  return x;
}

Eigen::MatrixXd MassSolver::solve(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != size_) throw DimensionMismatch("MassSolver::solve");
  Eigen::MatrixXd x = factor_->solve(rhs);
  if (factor_->info() != Eigen::Success) throw SolverFailure("mass matrix solve");
  return x;
}

DiscreteForm interior_product(const DiscreteForm& rho, const MassSolver& mass,
                              const WedgeMatrix& w) {
  if (rho.degree != w.degree || mass.degree() != w.degree - 1) {
    throw DimensionMismatch("interior_product: degrees of form, mass and wedge matrices differ");
  }
  if (rho.coeffs.size() != w.matrix.cols()) throw DimensionMismatch("interior_product");
  return DiscreteForm(rho.degree - 1, rho.mesh, mass.solve(Eigen::VectorXd(w.matrix * rho.coeffs)));
}

DiscreteForm1D interior_product(const DiscreteForm1D& rho, const MassSolver& mass,
                                const WedgeMatrix& w) {
  if (rho.degree != 1 || mass.degree() != 0) {
    throw DimensionMismatch("1D interior_product needs a 1-form and the 0-form mass matrix");
  }
  if (rho.coeffs.size() != w.matrix.cols()) throw DimensionMismatch("interior_product");
  return DiscreteForm1D(0, rho.mesh, mass.solve(Eigen::VectorXd(w.matrix * rho.coeffs)));
}

void write_coo(std::ostream& os, const SparseMatrix& m) {
  os.precision(17);
  os << "# rows " << m.rows() << " cols " << m.cols() << " nnz " << m.nonZeros() << '\n';
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace mse
