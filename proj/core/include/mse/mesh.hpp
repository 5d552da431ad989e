#pragma once

// Physical geometry of spectral elements: reference-to-physical maps with
// analytic Jacobians, periodic rectangular meshes and the metric factors
// that enter L2 inner products.

#include <array>
#include <memory>
#include <vector>

#include "mse/polybasis.hpp"
#include "mse/topology.hpp"

namespace mse {

struct Point2 {
  double x{0.0};
  double y{0.0};
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Domain {
  double x0{0.0}, x1{1.0};
  double y0{0.0}, y1{1.0};

  double width() const noexcept { return x1 - x0; }
  double height() const noexcept { return y1 - y0; }
  double area() const noexcept { return width() * height(); }
};

/// d(x, y) / d(xi, eta).
struct Jacobian {
  double x_xi{1.0}, x_eta{0.0};
  double y_xi{0.0}, y_eta{1.0};

  double det() const noexcept { return x_xi * y_eta - x_eta * y_xi; }
};

enum class MapKind { affine, analytic_distortion };

/// Map from the reference square [-1, 1]^2 to one physical element.
///
/// The element is the image of an axis-aligned cell [a, b] x [c, d] under
/// the global map identity (affine) or
///   x = s + A Lx sin(2 pi s') sin(2 pi t'),  y = t + A Ly sin(2 pi s') sin(2 pi t')
/// with (s', t') the coordinates normalised to the unit square.
class ElementMap {
 public:
  ElementMap(Domain cell, Domain domain, double amplitude);

  MapKind kind() const noexcept { return amplitude_ == 0.0 ? MapKind::affine : MapKind::analytic_distortion; }
  const Domain& cell() const noexcept { return cell_; }

  Point2 operator()(double xi, double eta) const noexcept;
  Jacobian jacobian(double xi, double eta) const noexcept;

 private:
  Domain cell_;
  Domain domain_;
  double amplitude_;
};

/// Reference-quadrature weights for inner products on one element,
/// tensor-product ordered with the xi index fastest.
struct MetricFactors {
  std::vector<double> det;          // 0-form factor, det J
  std::vector<double> inv_det;      // 2-form factor, 1 / det J
  std::vector<std::array<double, 3>> one_form;  // (J^-1 J^-T det J): (xx, xy, yy)
  std::vector<Jacobian> jacobian;
};

class Mesh2D {
 public:
  Mesh2D(int nx, int ny, int p, Domain domain, bool periodic_x, bool periodic_y,
         double amplitude = 0.0);

  int nx() const noexcept { return complex_.nx(); }
  int ny() const noexcept { return complex_.ny(); }
  int order() const noexcept { return complex_.order(); }
  int element_count() const noexcept { return complex_.element_count(); }
  const Domain& domain() const noexcept { return domain_; }
  bool periodic_x() const noexcept { return complex_.periodic_x(); }
  bool periodic_y() const noexcept { return complex_.periodic_y(); }
  double distortion() const noexcept { return amplitude_; }
  const CellComplex2D& complex() const noexcept { return complex_; }
  const Basis1D& basis() const noexcept { return basis_; }

  const ElementMap& element_map(int e) const { return maps_.at(e); }
  /// Largest mismatch of neighbouring element maps along shared edges.
  double interface_mismatch(int samples) const;

 private:
  Domain domain_;
  double amplitude_;
  CellComplex2D complex_;
  Basis1D basis_;
  std::vector<ElementMap> maps_;
};

/// Affine elements tiling the domain.
std::shared_ptr<const Mesh2D> build_uniform(int nx, int ny, Domain domain, bool periodic_x,
                                            bool periodic_y, int p);

/// Sinusoidally distorted elements; throws InvalidDistortion when det J <= 0
/// on the (p + 2)-point Gauss grid of any element.
std::shared_ptr<const Mesh2D> build_distorted(int nx, int ny, int p, double amplitude,
                                              Domain domain = {}, bool periodic = true);

MetricFactors pullback_weights(const Mesh2D& mesh, int element, const QuadratureRule& quad);

/// Uniform periodic or bounded interval mesh for 1D advection.
class Mesh1D {
 public:
  Mesh1D(int nx, int p, double x0, double x1, bool periodic);

  int nx() const noexcept { return complex_.nx(); }
  int order() const noexcept { return complex_.order(); }
  double x0() const noexcept { return x0_; }
  double x1() const noexcept { return x1_; }
  double length() const noexcept { return x1_ - x0_; }
  double element_size() const noexcept { return length() / nx(); }
  /// dx/dxi of every element.
  double jacobian() const noexcept { return 0.5 * element_size(); }
  double map(int e, double xi) const noexcept;
  const CellComplex1D& complex() const noexcept { return complex_; }
  const Basis1D& basis() const noexcept { return basis_; }

 private:
  double x0_, x1_;
  CellComplex1D complex_;
  Basis1D basis_;
};

std::shared_ptr<const Mesh1D> build_interval(int nx, int p, double x0, double x1, bool periodic);

}  // namespace mse
