#pragma once

// One-dimensional polynomial machinery on the reference interval [-1, 1]:
// Gauss and Gauss-Lobatto quadrature, the nodal (0-form) Lagrange basis and
// the edge (1-form) basis derived from it.

#include <span>
#include <vector>

namespace mse {

enum class QuadratureKind { gauss, gauss_lobatto };

struct QuadratureRule {
  QuadratureKind kind{QuadratureKind::gauss};
  int order{1};  // p: gauss has p nodes, gauss_lobatto has p + 1
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Highest monomial degree integrated exactly.
  int exactness() const noexcept;
};

/// Legendre polynomial L_n and its first derivative at x.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double x);

/// Roots of (1 - x^2) L'_p, ascending, endpoints exactly +-1.
std::vector<double> gauss_lobatto_nodes(int p);

/// Roots of L_p, ascending.
std::vector<double> gauss_nodes(int p);

QuadratureRule gauss_rule(int p);
QuadratureRule gauss_lobatto_rule(int p);

/// Gauss rule mapped onto [a, b].
QuadratureRule gauss_rule_on(int p, double a, double b);

/// Nodal and edge polynomials of order p on the Gauss-Lobatto nodes.
///
/// Lagrange polynomials l_0..l_p are evaluated with the second (true)
/// barycentric formula. Edge polynomials e_1..e_p are
///   e_i(xi) = - sum_{k=0}^{i-1} dl_k/dxi (xi),
/// so that the integral of e_i over [xi_{j-1}, xi_j] is delta_ij.
class Basis1D {
 public:
  explicit Basis1D(int p);

  int order() const noexcept { return p_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> barycentric_weights() const noexcept { return bary_; }

  double lagrange(int i, double xi) const;
  double lagrange_deriv(int i, double xi) const;
  /// Edge index i runs from 1 to p.
  double edge(int i, double xi) const;

  /// All p + 1 Lagrange values at xi.
  void lagrange_all(double xi, std::span<double> out) const;
  /// All p + 1 Lagrange derivatives at xi.
  void lagrange_deriv_all(double xi, std::span<double> out) const;
  /// All p edge values at xi; out[i - 1] holds e_i.
  void edge_all(double xi, std::span<double> out) const;

  std::vector<double> lagrange_all(double xi) const;
  std::vector<double> edge_all(double xi) const;

 private:
  int node_hit(double xi) const noexcept;

  int p_;
  std::vector<double> nodes_;
  std::vector<double> bary_;
  std::vector<double> diff_;  // (p+1)^2 nodal differentiation matrix, row = evaluation node
};

double lagrange_eval(const Basis1D& basis, int i, double xi);
double lagrange_deriv(const Basis1D& basis, int i, double xi);
double edge_eval(const Basis1D& basis, int i, double xi);

}  // namespace mse
