#include "mse/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mse/errors.hpp"

namespace mse {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_domain(const Domain& d) {
  if (!(d.width() > 0.0) || !(d.height() > 0.0)) {
    throw InvalidArgument("empty domain [" + std::to_string(d.x0) + ", " + std::to_string(d.x1) +
                          "] x [" + std::to_string(d.y0) + ", " + std::to_string(d.y1) + "]");
  }
}

}  // namespace

ElementMap::ElementMap(Domain cell, Domain domain, double amplitude)
    : cell_(cell), domain_(domain), amplitude_(amplitude) {}

Point2 ElementMap::operator()(double xi, double eta) const noexcept {
  const double s = cell_.x0 + 0.5 * (xi + 1.0) * cell_.width();
  const double t = cell_.y0 + 0.5 * (eta + 1.0) * cell_.height();
  if (amplitude_ == 0.0) return {s, t};
  const double sn = (s - domain_.x0) / domain_.width();
  const double tn = (t - domain_.y0) / domain_.height();
  const double bump = std::sin(kTwoPi * sn) * std::sin(kTwoPi * tn);
  return {s + amplitude_ * domain_.width() * bump, t + amplitude_ * domain_.height() * bump};
}

Jacobian ElementMap::jacobian(double xi, double eta) const noexcept {
  const double hx = 0.5 * cell_.width();
  const double hy = 0.5 * cell_.height();
  if (amplitude_ == 0.0) return {hx, 0.0, 0.0, hy};
  const double s = cell_.x0 + (xi + 1.0) * hx;
  const double t = cell_.y0 + (eta + 1.0) * hy;
  const double lx = domain_.width();
  const double ly = domain_.height();
  const double sn = (s - domain_.x0) / lx;
  const double tn = (t - domain_.y0) / ly;
  // d(bump)/ds and d(bump)/dt in physical units.
  const double bs = kTwoPi / lx * std::cos(kTwoPi * sn) * std::sin(kTwoPi * tn);
  const double bt = kTwoPi / ly * std::sin(kTwoPi * sn) * std::cos(kTwoPi * tn);
  const double a = amplitude_;
  return {(1.0 + a * lx * bs) * hx, a * lx * bt * hy, a * ly * bs * hx, (1.0 + a * ly * bt) * hy};
}

// --- Mesh2D -----------------------------------------------------------------

Mesh2D::Mesh2D(int nx, int ny, int p, Domain domain, bool periodic_x, bool periodic_y,
               double amplitude)
    : domain_(domain),
      amplitude_(amplitude),
      complex_(nx, ny, p, periodic_x, periodic_y),
      basis_(p) {
  check_domain(domain);
  const double hx = domain.width() / nx;
  const double hy = domain.height() / ny;
  maps_.reserve(static_cast<std::size_t>(nx) * ny);
  for (int ey = 0; ey < ny; ++ey) {
    for (int ex = 0; ex < nx; ++ex) {
      // Last cell edge snaps to the domain edge so periodic pairs match bitwise.
      const Domain cell{domain.x0 + ex * hx, ex + 1 == nx ? domain.x1 : domain.x0 + (ex + 1) * hx,
                        domain.y0 + ey * hy, ey + 1 == ny ? domain.y1 : domain.y0 + (ey + 1) * hy};
      maps_.emplace_back(cell, domain, amplitude);
    }
  }
}

double Mesh2D::interface_mismatch(int samples) const {
  const auto rule = gauss_lobatto_nodes(std::max(samples - 1, 1));
  double worst = 0.0;
  auto gap = [&worst](Point2 a, Point2 b, double sx, double sy) {
    worst = std::max({worst, std::abs(a.x - b.x - sx), std::abs(a.y - b.y - sy)});
  };
  for (int ey = 0; ey < ny(); ++ey) {
    for (int ex = 0; ex < nx(); ++ex) {
      const auto& m = element_map(complex_.element(ex, ey));
      if (ex + 1 < nx() || periodic_x()) {
        const bool wraps = ex + 1 == nx();
        const auto& r = element_map(complex_.element(wraps ? 0 : ex + 1, ey));
        for (double s : rule) gap(m(1.0, s), r(-1.0, s), wraps ? domain_.width() : 0.0, 0.0);
      }
      if (ey + 1 < ny() || periodic_y()) {
        const bool wraps = ey + 1 == ny();
        const auto& t = element_map(complex_.element(ex, wraps ? 0 : ey + 1));
        for (double s : rule) gap(m(s, 1.0), t(s, -1.0), 0.0, wraps ? domain_.height() : 0.0);
      }
    }
  }
  return worst;
}

std::shared_ptr<const Mesh2D> build_uniform(int nx, int ny, Domain domain, bool periodic_x,
                                            bool periodic_y, int p) {
  return std::make_shared<const Mesh2D>(nx, ny, p, domain, periodic_x, periodic_y, 0.0);
}

std::shared_ptr<const Mesh2D> build_distorted(int nx, int ny, int p, double amplitude,
                                              Domain domain, bool periodic) {
  auto mesh = std::make_shared<const Mesh2D>(nx, ny, p, domain, periodic, periodic, amplitude);
  const auto quad = gauss_rule(p + 2);
  for (int e = 0; e < mesh->element_count(); ++e) {
    const auto& map = mesh->element_map(e);
    for (double eta : quad.nodes) {
      for (double xi : quad.nodes) {
        const double det = map.jacobian(xi, eta).det();
        if (!(det > 0.0)) {
          throw InvalidDistortion("det J = " + std::to_string(det) + " in element " +
                                  std::to_string(e) + " for amplitude " +
                                  std::to_string(amplitude));
        }
      }
    }
  }
  return mesh;
}

MetricFactors pullback_weights(const Mesh2D& mesh, int element, const QuadratureRule& quad) {
  if (element < 0 || element >= mesh.element_count()) {
    throw IndexOutOfRange("element " + std::to_string(element));
  }
  const auto& map = mesh.element_map(element);
  const std::size_t n = quad.size() * quad.size();
  MetricFactors f;
  f.det.reserve(n);
  f.inv_det.reserve(n);
  f.one_form.reserve(n);
  f.jacobian.reserve(n);
  for (double eta : quad.nodes) {
    for (double xi : quad.nodes) {
      const Jacobian j = map.jacobian(xi, eta);
      const double det = j.det();
      if (!(det > 0.0)) {
        throw SingularJacobian("det J = " + std::to_string(det) + " in element " +
                               std::to_string(element));
      }
      f.det.push_back(det);
      f.inv_det.push_back(1.0 / det);
      f.one_form.push_back({(j.x_eta * j.x_eta + j.y_eta * j.y_eta) / det,
                            -(j.x_xi * j.x_eta + j.y_xi * j.y_eta) / det,
                            (j.x_xi * j.x_xi + j.y_xi * j.y_xi) / det});
      f.jacobian.push_back(j);
    }
  }
  return f;
}

// --- Mesh1D -----------------------------------------------------------------

Mesh1D::Mesh1D(int nx, int p, double x0, double x1, bool periodic)
    : x0_(x0), x1_(x1), complex_(nx, p, periodic), basis_(p) {
  if (!(x1 > x0)) throw InvalidArgument("empty interval");
}

double Mesh1D::map(int e, double xi) const noexcept {
  return x0_ + (e + 0.5 * (xi + 1.0)) * element_size();
}

std::shared_ptr<const Mesh1D> build_interval(int nx, int p, double x0, double x1, bool periodic) {
  return std::make_shared<const Mesh1D>(nx, p, x0, x1, periodic);
}

}  // namespace mse
