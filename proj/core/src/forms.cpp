#include "mse/forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mse/errors.hpp"

namespace mse {
namespace {

void check_degree_2d(int degree) {
  if (degree < 0 || degree > 2) {
    throw InvalidArgument("unsupported form degree " + std::to_string(degree));
  }
}

void check_degree_1d(int degree) {
  if (degree < 0 || degree > 1) {
    throw InvalidArgument("unsupported 1D form degree " + std::to_string(degree));
  }
}

// Reference components of a discrete form inside one element on the tensor
// grid tab x tab: (first, second) = (value, -) for 0/2-forms and
// (u_xi, u_eta) for 1-forms. Matrices are indexed (a, b) with a along xi.
struct ElementValues {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;
};

ElementValues element_values(const DiscreteForm& form, int e, const BasisTable& tab) {
  const auto& c = form.mesh->complex();
  const int p = c.order();
  ElementValues out;
  switch (form.degree) {
    case 0: {
      Eigen::MatrixXd coef(p + 1, p + 1);
      for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i) coef(i, j) = form.coeffs[c.node_index(e, i, j)];
      out.first = tab.lagrange * coef * tab.lagrange.transpose();
      break;
    }
    case 1: {
      Eigen::MatrixXd cx(p, p + 1), cy(p + 1, p);
      for (int j = 0; j <= p; ++j)
        for (int i = 1; i <= p; ++i) cx(i - 1, j) = form.coeffs[c.xedge_index(e, i, j)];
      for (int j = 1; j <= p; ++j)
        for (int i = 0; i <= p; ++i) cy(i, j - 1) = form.coeffs[c.yedge_index(e, i, j)];
      out.first = tab.edge * cx * tab.lagrange.transpose();
      out.second = tab.lagrange * cy * tab.edge.transpose();
      break;
    }
    case 2: {
      const auto faces = c.element_faces(e);
      Eigen::MatrixXd coef(p, p);
      for (int j = 1; j <= p; ++j)
        for (int i = 1; i <= p; ++i) coef(i - 1, j - 1) = form.coeffs[faces[c.local_face(i, j)]];
      out.first = tab.edge * coef * tab.edge.transpose();
      break;
    }
    default:
      check_degree_2d(form.degree);
  }
  return out;
}

// Physical components at reference point (xi, eta) from reference components.
Eigen::Vector2d to_physical(int degree, const Jacobian& j, double first, double second) {
  switch (degree) {
    case 0:
      return {first, 0.0};
    case 1: {
      const double det = j.det();
      return {(j.y_eta * first - j.y_xi * second) / det, (-j.x_eta * first + j.x_xi * second) / det};
    }
    default:
      return {first / j.det(), 0.0};
  }
}

}  // namespace

AnalyticForm AnalyticForm::zero_form(ScalarField f) { return {0, std::move(f), {}, {}}; }
AnalyticForm AnalyticForm::one_form(ScalarField fx, ScalarField fy) {
  return {1, {}, std::move(fx), std::move(fy)};
}
AnalyticForm AnalyticForm::two_form(ScalarField f) { return {2, std::move(f), {}, {}}; }

DiscreteForm::DiscreteForm(int degree_, std::shared_ptr<const Mesh2D> mesh_, Eigen::VectorXd c)
    : degree(degree_), mesh(std::move(mesh_)), coeffs(std::move(c)) {
  check_degree_2d(degree);
  if (!mesh) throw InvalidArgument("DiscreteForm without mesh");
  const int expected = mesh->complex().cell_count(degree);
  if (coeffs.size() != expected) {
    throw DimensionMismatch("degree-" + std::to_string(degree) + " form needs " +
                            std::to_string(expected) + " coefficients, got " +
                            std::to_string(coeffs.size()));
  }
}

DiscreteForm::DiscreteForm(int degree_, std::shared_ptr<const Mesh2D> mesh_)
    : DiscreteForm(degree_, mesh_,
                   Eigen::VectorXd::Zero(mesh_ ? mesh_->complex().cell_count(degree_) : 0)) {}

DiscreteForm1D::DiscreteForm1D(int degree_, std::shared_ptr<const Mesh1D> mesh_, Eigen::VectorXd c)
    : degree(degree_), mesh(std::move(mesh_)), coeffs(std::move(c)) {
  check_degree_1d(degree);
  if (!mesh) throw InvalidArgument("DiscreteForm1D without mesh");
  const int expected = degree == 0 ? mesh->complex().node_count() : mesh->complex().edge_count();
  if (coeffs.size() != expected) throw DimensionMismatch("1D form coefficient count");
}

BasisTable tabulate(const Basis1D& basis, std::span<const double> points) {
  const int p = basis.order();
  BasisTable t{Eigen::MatrixXd(points.size(), p + 1), Eigen::MatrixXd(points.size(), p)};
  std::vector<double> l(p + 1), e(p);
  for (std::size_t a = 0; a < points.size(); ++a) {
    basis.lagrange_all(points[a], l);
    basis.edge_all(points[a], e);
    for (int i = 0; i <= p; ++i) t.lagrange(a, i) = l[i];
    for (int i = 0; i < p; ++i) t.edge(a, i) = e[i];
  }
  return t;
}

int default_reduction_points(int p) { return std::max(p + 2, 10); }

DiscreteForm reduce(const AnalyticForm& form, std::shared_ptr<const Mesh2D> mesh,
                    ReductionOptions opts) {
  check_degree_2d(form.degree);
  const auto& c = mesh->complex();
  const int p = c.order();
  const auto nodes = mesh->basis().nodes();
  const int nq = opts.points_per_cell > 0 ? opts.points_per_cell : default_reduction_points(p);
  const auto ref = gauss_rule(nq);

  DiscreteForm out(form.degree, mesh);
  auto& v = out.coeffs;
  for (int e = 0; e < c.element_count(); ++e) {
    const auto& map = mesh->element_map(e);
    switch (form.degree) {
      case 0:
        for (int j = 0; j <= p; ++j) {
          for (int i = 0; i <= p; ++i) {
            const Point2 x = map(nodes[i], nodes[j]);
            v[c.node_index(e, i, j)] = form.f(x.x, x.y);
          }
        }
        break;
      case 1:
        // x-edges: integrate u . dPhi/dxi along xi at fixed eta_j.
        for (int j = 0; j <= p; ++j) {
          for (int i = 1; i <= p; ++i) {
            const double a = nodes[i - 1], b = nodes[i], half = 0.5 * (b - a);
            double acc = 0.0;
            for (std::size_t q = 0; q < ref.size(); ++q) {
              const double xi = a + half * (ref.nodes[q] + 1.0);
              const Point2 x = map(xi, nodes[j]);
              const Jacobian jac = map.jacobian(xi, nodes[j]);
              acc += ref.weights[q] * (form.fx(x.x, x.y) * jac.x_xi + form.fy(x.x, x.y) * jac.y_xi);
            }
            v[c.xedge_index(e, i, j)] = half * acc;
          }
        }
        for (int j = 1; j <= p; ++j) {
          for (int i = 0; i <= p; ++i) {
            const double a = nodes[j - 1], b = nodes[j], half = 0.5 * (b - a);
            double acc = 0.0;
            for (std::size_t q = 0; q < ref.size(); ++q) {
              const double eta = a + half * (ref.nodes[q] + 1.0);
              const Point2 x = map(nodes[i], eta);
              const Jacobian jac = map.jacobian(nodes[i], eta);
              acc += ref.weights[q] *
                     (form.fx(x.x, x.y) * jac.x_eta + form.fy(x.x, x.y) * jac.y_eta);
            }
            v[c.yedge_index(e, i, j)] = half * acc;
          }
        }
        break;
      case 2:
        for (int j = 1; j <= p; ++j) {
          const double c0 = nodes[j - 1], hc = 0.5 * (nodes[j] - c0);
          for (int i = 1; i <= p; ++i) {
            const double a0 = nodes[i - 1], ha = 0.5 * (nodes[i] - a0);
            double acc = 0.0;
            for (std::size_t qb = 0; qb < ref.size(); ++qb) {
              const double eta = c0 + hc * (ref.nodes[qb] + 1.0);
              double row = 0.0;
              for (std::size_t qa = 0; qa < ref.size(); ++qa) {
                const double xi = a0 + ha * (ref.nodes[qa] + 1.0);
                const Point2 x = map(xi, eta);
                row += ref.weights[qa] * form.f(x.x, x.y) * map.jacobian(xi, eta).det();
              }
              acc += ref.weights[qb] * row;
            }
            v[c.face_index(e, i, j)] = ha * hc * acc;
          }
        }
        break;
    }
  }
  return out;
}

DiscreteForm1D reduce(const AnalyticForm1D& form, std::shared_ptr<const Mesh1D> mesh,
                      ReductionOptions opts) {
  check_degree_1d(form.degree);
  const auto& c = mesh->complex();
  const int p = c.order();
  const auto nodes = mesh->basis().nodes();
  const int nq = opts.points_per_cell > 0 ? opts.points_per_cell : default_reduction_points(p);
  const auto ref = gauss_rule(nq);
  const int n = form.degree == 0 ? c.node_count() : c.edge_count();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < c.nx(); ++e) {
    if (form.degree == 0) {
      for (int i = 0; i <= p; ++i) v[c.node_index(e, i)] = form.f(mesh->map(e, nodes[i]));
      continue;
    }
    for (int i = 1; i <= p; ++i) {
      const double a = nodes[i - 1], half = 0.5 * (nodes[i] - a);
      double acc = 0.0;
      for (std::size_t q = 0; q < ref.size(); ++q) {
        acc += ref.weights[q] * form.f(mesh->map(e, a + half * (ref.nodes[q] + 1.0)));
      }
      v[c.edge_index(e, i)] = half * mesh->jacobian() * acc;
    }
  }
  return DiscreteForm1D(form.degree, std::move(mesh), std::move(v));
}

FieldSamples reconstruct(const DiscreteForm& form, std::span<const double> ref) {
  for (double r : ref) {
    if (r < -1.0 || r > 1.0) throw InvalidArgument("reference point outside [-1, 1]");
  }
  const auto& mesh = *form.mesh;
  const auto tab = tabulate(mesh.basis(), ref);
  const int n = static_cast<int>(ref.size());
  FieldSamples out;
  out.components = form.degree == 1 ? 2 : 1;
  out.values.resize(static_cast<Eigen::Index>(mesh.element_count()) * n * n, out.components);
  out.positions.reserve(out.values.rows());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& map = mesh.element_map(e);
    const auto vals = element_values(form, e, tab);
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        const Eigen::Index row = (static_cast<Eigen::Index>(e) * n + b) * n + a;
        const Jacobian j = map.jacobian(ref[a], ref[b]);
        const auto v = to_physical(form.degree, j, vals.first(a, b),
                                   form.degree == 1 ? vals.second(a, b) : 0.0);
        for (int k = 0; k < out.components; ++k) out.values(row, k) = v[k];
        out.positions.push_back(map(ref[a], ref[b]));
      }
    }
  }
  return out;
}

FieldSamples1D reconstruct(const DiscreteForm1D& form, std::span<const double> ref) {
  const auto& mesh = *form.mesh;
  const auto& c = mesh.complex();
  const int p = c.order();
  const auto tab = tabulate(mesh.basis(), ref);
  const int n = static_cast<int>(ref.size());
  FieldSamples1D out;
  out.values.resize(static_cast<Eigen::Index>(c.nx()) * n);
  for (int e = 0; e < c.nx(); ++e) {
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      if (form.degree == 0) {
        for (int i = 0; i <= p; ++i) acc += form.coeffs[c.node_index(e, i)] * tab.lagrange(a, i);
      } else {
        for (int i = 1; i <= p; ++i) acc += form.coeffs[c.edge_index(e, i)] * tab.edge(a, i - 1);
        acc /= mesh.jacobian();
      }
      out.values[static_cast<Eigen::Index>(e) * n + a] = acc;
      out.positions.push_back(mesh.map(e, ref[a]));
    }
  }
  return out;
}

Eigen::Vector2d evaluate(const DiscreteForm& form, int element, double xi, double eta) {
  const std::array<double, 1> px{xi}, py{eta};
  const auto& mesh = *form.mesh;
  const auto tx = tabulate(mesh.basis(), px);
  const auto ty = tabulate(mesh.basis(), py);
  const auto& c = mesh.complex();
  const int p = c.order();
  double first = 0.0, second = 0.0;
  switch (form.degree) {
    case 0:
      for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i)
          first += form.coeffs[c.node_index(element, i, j)] * tx.lagrange(0, i) * ty.lagrange(0, j);
      break;
    case 1:
      for (int j = 0; j <= p; ++j)
        for (int i = 1; i <= p; ++i)
          first += form.coeffs[c.xedge_index(element, i, j)] * tx.edge(0, i - 1) * ty.lagrange(0, j);
      for (int j = 1; j <= p; ++j)
        for (int i = 0; i <= p; ++i)
          second += form.coeffs[c.yedge_index(element, i, j)] * tx.lagrange(0, i) * ty.edge(0, j - 1);
      break;
    default:
      for (int j = 1; j <= p; ++j)
        for (int i = 1; i <= p; ++i)
          first += form.coeffs[c.face_index(element, i, j)] * tx.edge(0, i - 1) * ty.edge(0, j - 1);
  }
  return to_physical(form.degree, mesh.element_map(element).jacobian(xi, eta), first, second);
}

namespace {

double l2_impl(const DiscreteForm& form, const AnalyticForm* exact, int quad_points) {
  const auto& mesh = *form.mesh;
  const int nq = quad_points > 0 ? quad_points : mesh.order() + 3;
  const auto quad = gauss_rule(nq);
  const auto tab = tabulate(mesh.basis(), quad.nodes);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& map = mesh.element_map(e);
    const auto vals = element_values(form, e, tab);
    double acc = 0.0;
    for (int b = 0; b < nq; ++b) {
      for (int a = 0; a < nq; ++a) {
        const Jacobian j = map.jacobian(quad.nodes[a], quad.nodes[b]);
        auto v = to_physical(form.degree, j, vals.first(a, b),
                             form.degree == 1 ? vals.second(a, b) : 0.0);
        if (exact) {
          const Point2 x = map(quad.nodes[a], quad.nodes[b]);
          if (form.degree == 1) {
            v[0] -= exact->fx(x.x, x.y);
            v[1] -= exact->fy(x.x, x.y);
          } else {
            v[0] -= exact->f(x.x, x.y);
          }
        }
        acc += quad.weights[a] * quad.weights[b] * j.det() * v.squaredNorm();
      }
    }
    total += acc;
  }
  return std::sqrt(total);
}

}  // namespace

double l2_error(const DiscreteForm& form, const AnalyticForm& exact, int quad_points) {
  if (form.degree != exact.degree) throw InvalidArgument("l2_error: degree mismatch");
  return l2_impl(form, &exact, quad_points);
}

double l2_norm(const DiscreteForm& form, int quad_points) {
  return l2_impl(form, nullptr, quad_points);
}

double l2_error(const DiscreteForm1D& form, const AnalyticForm1D& exact, int quad_points) {
  if (form.degree != exact.degree) throw InvalidArgument("l2_error: degree mismatch");
  const auto& mesh = *form.mesh;
  const int nq = quad_points > 0 ? quad_points : mesh.order() + 3;
  const auto quad = gauss_rule(nq);
  const auto samples = reconstruct(form, quad.nodes);
  double total = 0.0;
  for (int e = 0; e < mesh.nx(); ++e) {
    for (int a = 0; a < nq; ++a) {
      const auto row = static_cast<Eigen::Index>(e) * nq + a;
      const double d = samples.values[row] - exact.f(samples.positions[row]);
      total += quad.weights[a] * mesh.jacobian() * d * d;
    }
  }
  return std::sqrt(total);
}

// Neumaier-compensated; drift measurements sit near machine precision.
double compensated_sum(const Eigen::VectorXd& v) {
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double total_integral(const DiscreteForm& form) {
  if (form.degree != 2) throw InvalidArgument("total_integral needs a 2-form");
  return compensated_sum(form.coeffs);
}

double total_integral(const DiscreteForm1D& form) {
  if (form.degree != 1) throw InvalidArgument("total_integral needs a 1-form on an interval");
  return compensated_sum(form.coeffs);
}

}  // namespace mse
