#pragma once

// Discrete differential forms as cochains: reduction by integration over
// k-cells, reconstruction through the nodal/edge tensor-product basis and
// L2 error measurement.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mse/mesh.hpp"

namespace mse {

using ScalarField = std::function<double(double x, double y)>;
using ScalarField1D = std::function<double(double x)>;

/// A smooth k-form given by its Cartesian components.
///   k = 0: value f;  k = 1: fx dx + fy dy;  k = 2: f dx^dy.
struct AnalyticForm {
  int degree{0};
  ScalarField f;
  ScalarField fx;
  ScalarField fy;

  static AnalyticForm zero_form(ScalarField f);
  static AnalyticForm one_form(ScalarField fx, ScalarField fy);
  static AnalyticForm two_form(ScalarField f);
};

/// k-form on an interval: k = 0 value f, k = 1 density f dx.
struct AnalyticForm1D {
  int degree{0};
  ScalarField1D f;
};

/// One coefficient per global k-cell; faces are stored element by element.
struct DiscreteForm {
  DiscreteForm(int degree, std::shared_ptr<const Mesh2D> mesh, Eigen::VectorXd coeffs);
  DiscreteForm(int degree, std::shared_ptr<const Mesh2D> mesh);

  int degree;
  std::shared_ptr<const Mesh2D> mesh;
  Eigen::VectorXd coeffs;
};

struct DiscreteForm1D {
  DiscreteForm1D(int degree, std::shared_ptr<const Mesh1D> mesh, Eigen::VectorXd coeffs);

  int degree;
  std::shared_ptr<const Mesh1D> mesh;
  Eigen::VectorXd coeffs;
};

/// Basis values at a set of reference points: rows are points.
struct BasisTable {
  Eigen::MatrixXd lagrange;  // n x (p + 1)
  Eigen::MatrixXd edge;      // n x p
};
BasisTable tabulate(const Basis1D& basis, std::span<const double> points);

struct ReductionOptions {
  /// Gauss points per sub-cell direction; 0 selects the default.
  int points_per_cell{0};
};
/// Default sub-cell Gauss count for order p.
int default_reduction_points(int p);

DiscreteForm reduce(const AnalyticForm& form, std::shared_ptr<const Mesh2D> mesh,
                    ReductionOptions opts = {});
DiscreteForm1D reduce(const AnalyticForm1D& form, std::shared_ptr<const Mesh1D> mesh,
                      ReductionOptions opts = {});

/// Reconstructed field on a tensor grid of reference points in every element.
/// Row index = element * n^2 + b * n + a (a runs along xi).
struct FieldSamples {
  int components{1};
  std::vector<Point2> positions;
  Eigen::MatrixXd values;  // rows x components, physical Cartesian components
};
FieldSamples reconstruct(const DiscreteForm& form, std::span<const double> reference_points);

/// Values at reference points of every element, row = element * n + a.
struct FieldSamples1D {
  std::vector<double> positions;
  Eigen::VectorXd values;
};
FieldSamples1D reconstruct(const DiscreteForm1D& form, std::span<const double> reference_points);

/// Reconstructed value(s) at one reference point of one element.
Eigen::Vector2d evaluate(const DiscreteForm& form, int element, double xi, double eta);

/// L2 norm of (reconstruction - exact) with physical metric factors.
/// quad_points = 0 uses p + 3 Gauss points per direction.
double l2_error(const DiscreteForm& form, const AnalyticForm& exact, int quad_points = 0);
double l2_error(const DiscreteForm1D& form, const AnalyticForm1D& exact, int quad_points = 0);
/// L2 norm of a discrete form.
double l2_norm(const DiscreteForm& form, int quad_points = 0);

double compensated_sum(const Eigen::VectorXd& v);

/// Sum of all top-cell coefficients; the integral of a top-degree form.
double total_integral(const DiscreteForm& form);
double total_integral(const DiscreteForm1D& form);

}  // namespace mse
