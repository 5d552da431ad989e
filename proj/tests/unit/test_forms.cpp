#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mse/errors.hpp"
#include "mse/forms.hpp"
#include "mse/topology.hpp"
#include "oracles.hpp"

using namespace mse;

namespace {

constexpr double pi = std::numbers::pi;

double sinsin(double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }

// Integral over a rectangle by nested Simpson rules.
double simpson2(const ScalarField& f, Domain d, int n = 200) {
  return oracle::simpson([&](double y) { return oracle::simpson([&](double x) { return f(x, y); }, d.x0, d.x1, n); },
                         d.y0, d.y1, n);
}

}  // namespace

TEST_CASE("reduction of constants and the unit square integral") {
  const auto m = build_uniform(1, 1, {0, 1, 0, 1}, false, false, 1);
  const auto one = reduce(AnalyticForm::two_form([](double, double) { return 1.0; }), m);
  REQUIRE(one.coeffs.size() == 1);
  CHECK(one.coeffs[0] == doctest::Approx(1.0).epsilon(1e-15));
  const auto s = reduce(AnalyticForm::two_form(sinsin), m);
  CHECK(s.coeffs[0] == doctest::Approx(4.0 / (pi * pi)).epsilon(1e-13));
  const auto n = reduce(AnalyticForm::zero_form([](double x, double y) { return x + 2 * y; }), m);
  CHECK(n.coeffs[m->complex().node_index(0, 1, 1)] == doctest::Approx(3.0));
}

TEST_CASE("total integral of a 2-form on a periodic mesh") {
  const auto m = build_uniform(4, 4, {0, 2, 0, 2}, true, true, 5);
  const auto f = reduce(AnalyticForm::two_form([](double x, double y) { return 1.0 + sinsin(x, y); }), m);
  CHECK(total_integral(f) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(total_integral(reduce(AnalyticForm::zero_form(sinsin), m)), InvalidArgument);
}

TEST_CASE("face DOFs are sub-cell integrals") {
  const auto m = build_uniform(2, 1, {0, 1, 0, 0.5}, false, false, 3);
  const ScalarField f = [](double x, double y) { return std::exp(x) * std::cos(3 * y); };
  const auto r = reduce(AnalyticForm::two_form(f), m);
  const auto& c = m->complex();
  const auto nodes = m->basis().nodes();
  for (int e = 0; e < 2; ++e) {
    const auto cell = m->element_map(e).cell();
    for (int j = 1; j <= 3; ++j) {
      for (int i = 1; i <= 3; ++i) {
        auto at = [](double a, double b, double xi) { return a + 0.5 * (b - a) * (xi + 1.0); };
        const Domain sub{at(cell.x0, cell.x1, nodes[i - 1]), at(cell.x0, cell.x1, nodes[i]),
                         at(cell.y0, cell.y1, nodes[j - 1]), at(cell.y0, cell.y1, nodes[j])};
        CHECK(std::abs(r.coeffs[c.face_index(e, i, j)] - simpson2(f, sub)) < 1e-12);
      }
    }
  }
}

TEST_CASE("reconstruction reproduces polynomials of the basis degree") {
  for (double a : {0.0, 0.04}) {
    const auto m = a == 0.0 ? build_uniform(2, 2, {0, 1, 0, 1}, false, false, 4) : build_distorted(2, 2, 4, a);
    const ScalarField poly = [](double x, double y) { return 1 + x - 2 * x * y + std::pow(x, 4) * std::pow(y, 3); };
    const auto z = reduce(AnalyticForm::zero_form(poly), m);
    // Nodal interpolation is exact on affine elements; the distorted map is not polynomial.
    if (a == 0.0) CHECK(l2_error(z, AnalyticForm::zero_form(poly)) < 1e-13);
    const std::vector<double> ref{-1.0, -0.2, 0.45, 1.0};
    const auto s = reconstruct(z, ref);
    for (int e = 0; e < m->element_count(); ++e) {
      for (int k = 0; k < 16; ++k) {
        const auto row = e * 16 + k;
        const auto& x = s.positions[row];
        if (a == 0.0) CHECK(std::abs(s.values(row, 0) - poly(x.x, x.y)) < 1e-13);
        CHECK(std::abs(s.values(row, 0) - evaluate(z, e, ref[k % 4], ref[k / 4])[0]) < 1e-13);
      }
    }
  }
  const auto m = build_uniform(2, 2, {0, 1, 0, 1}, false, false, 4);
  const ScalarField q = [](double x, double y) { return 2 + x * x * x - y * y * x; };
  CHECK(l2_error(reduce(AnalyticForm::two_form(q), m), AnalyticForm::two_form(q)) < 1e-13);
  const auto one = AnalyticForm::one_form(q, [](double x, double y) { return x * y * y * y; });
  CHECK(l2_error(reduce(one, m), one) < 1e-13);
}

TEST_CASE("spectral accuracy of the reconstruction") {
  const auto m = build_uniform(4, 4, {0, 2, 0, 2}, true, true, 10);
  const auto f = AnalyticForm::two_form(sinsin);
  const auto r = reduce(f, m);
  const std::vector<double> ref{-0.91, -0.33, 0.07, 0.58, 0.99};
  const auto s = reconstruct(r, ref);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < s.values.rows(); ++k) {
    worst = std::max(worst, std::abs(s.values(k, 0) - sinsin(s.positions[k].x, s.positions[k].y)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("L2 error of the zero form against a sine") {
  const auto m = build_uniform(3, 3, {0, 1, 0, 1}, true, true, 3);
  const DiscreteForm zero(2, m);
  CHECK(l2_error(zero, AnalyticForm::two_form(sinsin), 12) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(l2_error(zero, AnalyticForm::zero_form(sinsin)), InvalidArgument);
  CHECK_THROWS_AS(DiscreteForm(2, m, Eigen::VectorXd::Zero(3)), DimensionMismatch);
  CHECK_THROWS_AS(reconstruct(zero, std::vector<double>{1.5}), InvalidArgument);
}

TEST_CASE("reduction commutes with the exterior derivative") {
  // Periodic on the unit square, so the distorted periodic mesh applies too.
  const ScalarField f = [](double x, double y) { return std::sin(2 * pi * x) * std::cos(2 * pi * y); };
  const ScalarField fx = [](double x, double y) { return 2 * pi * std::cos(2 * pi * x) * std::cos(2 * pi * y); };
  const ScalarField fy = [](double x, double y) { return -2 * pi * std::sin(2 * pi * x) * std::sin(2 * pi * y); };
  const ScalarField u = [](double x, double y) { return std::cos(2 * pi * (x + y)); };
  const ScalarField w = [](double x, double y) { return std::sin(2 * pi * x) * std::sin(2 * pi * y); };
  // d(u dx + w dy) = (w_x - u_y) dx^dy
  const ScalarField curl = [](double x, double y) {
    return 2 * pi * std::cos(2 * pi * x) * std::sin(2 * pi * y) + 2 * pi * std::sin(2 * pi * (x + y));
  };
  for (double a : {0.0, 0.05}) {
    for (int p : {2, 5}) {
      const auto m = a == 0.0 ? build_uniform(3, 2, {0, 1, 0, 1}, false, false, p) : build_distorted(3, 3, p, a);
      const auto& c = m->complex();
      const auto r0 = reduce(AnalyticForm::zero_form(f), m);
      const auto r1 = reduce(AnalyticForm::one_form(fx, fy), m);
      CHECK((apply_incidence(incidence_1_0(c), r0.coeffs) - r1.coeffs).lpNorm<Eigen::Infinity>() < 1e-12);
      const auto s1 = reduce(AnalyticForm::one_form(u, w), m);
      const auto s2 = reduce(AnalyticForm::two_form(curl), m);
      CHECK((apply_incidence(incidence_2_1(c), s1.coeffs) - s2.coeffs).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_CASE("1D reduction and reconstruction") {
  const auto m = build_interval(3, 4, 0.0, 1.5, true);
  const auto f = reduce(AnalyticForm1D{1, [](double x) { return std::cos(x); }}, m);
  CHECK(total_integral(f) == doctest::Approx(std::sin(1.5)).epsilon(1e-14));
  const auto b = build_interval(3, 4, 0.0, 1.5, false);
  const auto g = reduce(AnalyticForm1D{0, [](double x) { return x * x * x; }}, b);
  CHECK(l2_error(g, AnalyticForm1D{0, [](double x) { return x * x * x; }}) < 1e-13);
  const auto d = apply_incidence(incidence_1_0(b->complex()), g.coeffs);
  const auto h = reduce(AnalyticForm1D{1, [](double x) { return 3 * x * x; }}, b);
  CHECK((d - h.coeffs).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("default reduction points") {
  CHECK(default_reduction_points(1) == 10);
  CHECK(default_reduction_points(12) == 14);
}
