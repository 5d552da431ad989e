// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 iff every criterion passes. With --allow-known-failures,
// criteria listed in kKnownFailures still print FAIL but do not change the
// exit status; any other failure does.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "mse/experiments.hpp"

using namespace mse;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass{false};
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Measured to be out of reach for this discretisation; see the README.
const std::set<std::string> kKnownFailures{"h-convergence", "error-preservation"};

// --- basis and topology -----------------------------------------------------

Outcome basis_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  long dd = 0;
  for (int p = 1; p <= 12; ++p) {
    const Basis1D b(p);
    const auto x = b.nodes();
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) worst = std::max(worst, std::abs(b.lagrange(i, x[j]) - (i == j)));
    for (int j = 1; j <= p; ++j) {
      const auto q = gauss_rule_on(p + 1, x[j - 1], x[j]);
      for (int i = 1; i <= p; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) s += q.weights[k] * b.edge(i, q.nodes[k]);
        worst = std::max(worst, std::abs(s - (i == j)));
      }
    }
    for (int k = 0; k <= 40; ++k) {
      const double t = -1.0 + k / 20.0;
      double unity = 0.0;
      for (int i = 0; i <= p; ++i) unity += b.lagrange(i, t);
      worst = std::max(worst, std::abs(unity - 1.0));
      for (int i = 0; i <= p; ++i) {
        const double lo = i >= 1 ? b.edge(i, t) : 0.0;
        const double hi = i + 1 <= p ? b.edge(i + 1, t) : 0.0;
        worst = std::max(worst, std::abs(b.lagrange_deriv(i, t) - (lo - hi)));
      }
    }
    const CellComplex2D c(3, 2, p, true, false);
    const auto z = incidence_2_1(c) * incidence_1_0(c);
    for (int k = 0; k < z.outerSize(); ++k)
      for (IncidenceMatrix::Storage::InnerIterator it(z, k); it; ++it) dd += it.value() != 0;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-12 && dd == 0 && secs < 10.0,
          "max deviation " + num(worst) + ", nonzero d.d entries " + std::to_string(dd) + ", " + num(secs) + " s"};
}

// --- commuting diagram --------------------------------------------------------

Outcome commuting_diagram() {
  const double w = 2 * pi;
  // Three 0-forms with gradients and two 1-forms with curls, periodic on the unit square.
  struct Zero {
    ScalarField f, fx, fy;
  };
  struct One {
    ScalarField u, v, curl;
  };
  const std::vector<Zero> zeros{
      {[=](double x, double y) { return std::sin(w * x) * std::cos(w * y); },
       [=](double x, double y) { return w * std::cos(w * x) * std::cos(w * y); },
       [=](double x, double y) { return -w * std::sin(w * x) * std::sin(w * y); }},
      {[=](double x, double y) { return std::exp(std::sin(w * x)); },
       [=](double x, double y) { return w * std::cos(w * x) * std::exp(std::sin(w * x)); },
       [](double, double) { return 0.0; }},
      {[=](double x, double y) { return std::cos(w * (x + 2 * y)); },
       [=](double x, double y) { return -w * std::sin(w * (x + 2 * y)); },
       [=](double x, double y) { return -2 * w * std::sin(w * (x + 2 * y)); }}};
  const std::vector<One> ones{
      {[=](double x, double y) { return std::cos(w * (x + y)); },
       [=](double x, double y) { return std::sin(w * x) * std::sin(w * y); },
       [=](double x, double y) { return w * std::cos(w * x) * std::sin(w * y) + w * std::sin(w * (x + y)); }},
      {[=](double x, double y) { return std::sin(w * y) * std::sin(w * y); },
       [=](double x, double y) { return std::exp(std::cos(w * x)); },
       [=](double x, double y) {
         return -w * std::sin(w * x) * std::exp(std::cos(w * x)) - 2 * w * std::sin(w * y) * std::cos(w * y);
       }}};
  double worst = 0.0;
  for (double a : {0.0, 0.05}) {
    for (int p : {2, 5, 9}) {
      const auto m = build_distorted(4, 4, p, a);
      const auto e10 = incidence_1_0(m->complex());
      const auto e21 = incidence_2_1(m->complex());
      for (const auto& z : zeros) {
        const Eigen::VectorXd d = apply_incidence(e10, reduce(AnalyticForm::zero_form(z.f), m).coeffs) -
                       reduce(AnalyticForm::one_form(z.fx, z.fy), m).coeffs;
        worst = std::max(worst, d.lpNorm<Eigen::Infinity>());
      }
      for (const auto& o : ones) {
        const Eigen::VectorXd d = apply_incidence(e21, reduce(AnalyticForm::one_form(o.u, o.v), m).coeffs) -
                       reduce(AnalyticForm::two_form(o.curl), m).coeffs;
        worst = std::max(worst, d.lpNorm<Eigen::Infinity>());
      }
    }
  }
  return {worst <= 1e-11, "max residual " + num(worst)};
}

// --- interior product ---------------------------------------------------------

// <i_v rho, tau> from reconstructed forms at the operator quadrature:
// i_v (f dx^dy) = -f vy dx + f vx dy.
double pairing(const DiscreteForm& rho, const DiscreteForm& tau, const VelocityField& v) {
  const auto& m = *rho.mesh;
  const int nq = operator_quadrature_points(m.order());
  const auto q = gauss_rule(nq);
  double total = 0.0;
  for (int e = 0; e < m.element_count(); ++e) {
    const auto& map = m.element_map(e);
    for (int b = 0; b < nq; ++b) {
      for (int a = 0; a < nq; ++a) {
        const auto x = map(q.nodes[a], q.nodes[b]);
        const double f = evaluate(rho, e, q.nodes[a], q.nodes[b])[0];
        const auto t = evaluate(tau, e, q.nodes[a], q.nodes[b]);
        total += q.weights[a] * q.weights[b] * map.jacobian(q.nodes[a], q.nodes[b]).det() * f *
                 (-v.vy(x.x, x.y) * t[0] + v.vx(x.x, x.y) * t[1]);
      }
    }
  }
  return total;
}

Outcome adjoint_identity() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  const auto m = build_distorted(4, 4, 4, 0.04);
  const auto v = VelocityField::rudman_vortex();
  const auto w = wedge_matrix(*m, v, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    DiscreteForm rho(2, m), tau(1, m);
    for (auto& c : rho.coeffs) c = g(rng);
    for (auto& c : tau.coeffs) c = g(rng);
    const double lhs = tau.coeffs.dot(w.matrix * rho.coeffs);
    const double rhs = pairing(rho, tau, v);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  // Polynomial density in the discrete space, uniform velocity: the contraction is exact.
  const auto u = build_uniform(3, 3, {0, 1, 0, 1}, false, false, 5);
  const ScalarField f = [](double x, double y) { return 1 + x * y * y - std::pow(x, 4) + 3 * std::pow(y, 4); };
  const double ax = 0.8, ay = -0.6;
  const auto rho = reduce(AnalyticForm::two_form(f), u);
  const auto sigma = interior_product(rho, MassSolver(mass_matrix(*u, 1)), wedge_matrix(*u, VelocityField::uniform(ax, ay), 2));
  const auto exact = AnalyticForm::one_form([&](double x, double y) { return -ay * f(x, y); },
                                            [&](double x, double y) { return ax * f(x, y); });
  const double consistency = (sigma.coeffs - reduce(exact, u).coeffs).lpNorm<Eigen::Infinity>();
  return {worst <= 1e-11 && consistency <= 1e-10,
          "adjoint " + num(worst) + " over 50 pairs, consistency " + num(consistency)};
}

// --- time integration ---------------------------------------------------------

Outcome integrator_order() {
  Eigen::MatrixXd a(1, 1);
  a << -1.0;
  const Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  bool ok = true;
  std::string detail = "orders";
  for (int pt = 1; pt <= 3; ++pt) {
    std::vector<double> lx, ly;
    for (int n : {2, 4, 8, 16}) {
      const double dt = 1.0 / n;
      lx.push_back(std::log(dt));
      ly.push_back(std::log(std::abs(advance(a, y0, dt, n, pt).state[0] - std::exp(-1.0))));
    }
    const double order = exp::fit_line(lx, ly).slope;
    ok = ok && std::abs(order - 2 * pt) <= 0.25;
    detail += " " + num(order);
  }
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXd b(6, 6);
  for (auto& x : b.reshaped()) x = g(rng);
  Eigen::VectorXd y(6);
  for (auto& x : y) x = g(rng);
  const double dt = 0.1;
  const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(6, 6);
  const Eigen::VectorXd mid = (i - 0.5 * dt * b).partialPivLu().solve((i + 0.5 * dt * b) * y);
  const double diff = (CollocationIntegrator(b, build_time_basis(1, dt)).step(y) - mid).lpNorm<Eigen::Infinity>() /
                      mid.lpNorm<Eigen::Infinity>();
  ok = ok && diff <= 1e-14;
  return {ok, detail + ", midpoint deviation " + num(diff)};
}

// --- advection experiments ----------------------------------------------------

Outcome h_convergence() {
  exp::RunConfig c;
  c.pt = 4;
  c.dt = 0.01;
  c.t_end = 0.5;
  bool ok = true;
  std::string detail = "slopes";
  for (int p = 1; p <= 3; ++p) {
    c.p = p;
    const auto h = exp::converge_h(c, {4, 8, 16});
    ok = ok && !h.exact && std::abs(h.slope - (p + 1)) <= 0.4;
    detail += " p" + std::to_string(p) + "=" + num(h.slope) + " (target " + std::to_string(p + 1) + ")";
  }
  return {ok, detail};
}

Outcome p_convergence() {
  exp::RunConfig c;
  c.pt = 4;
  std::vector<int> orders;
  for (int p = 2; p <= 12; ++p) orders.push_back(p);
  const auto r = exp::converge_p(c, orders);
  const double drop = std::log10(r.errors.front() / r.errors.back());
  return {r.fit.correlation <= -0.99 && drop >= 6.0,
          "correlation " + num(r.fit.correlation) + ", error " + num(r.errors.front()) + " -> " +
              num(r.errors.back()) + " (" + num(drop) + " decades)"};
}

Outcome mass_conservation() {
  exp::RunConfig c;
  c.scenario = "sine_bell";
  c.p = 9;
  c.pt = 2;
  c.dt = 0.01;
  const auto r = exp::conservation(c, 20000);
  const double early = r.max_drift(1000), late = r.max_drift(20000);
  return {late < 1e-12 && early <= 1e-13, "max drift " + num(early) + " (10^3 steps), " + num(late) + " (2x10^4 steps)"};
}

Outcome error_preservation() {
  exp::RunConfig c;
  c.p = 10;
  c.pt = 4;
  c.dt = 0.1;
  c.t_end = 10.0;
  const auto r4 = exp::run_scenario(c, {false, 0});
  c.pt = 1;
  const auto r1 = exp::run_scenario(c, {false, 0});
  const double ratio = r4.final_error / r4.initial_error;
  return {ratio <= 2.0 && r1.final_error > r4.final_error,
          "initial " + num(r4.initial_error) + ", final " + num(r4.final_error) + " (ratio " + num(ratio) +
              "), pt=1 final " + num(r1.final_error)};
}

Outcome reversibility() {
  exp::RunConfig c;
  c.scenario = "rudman";
  c.p = 9;
  c.pt = 2;
  c.dt = 0.1;
  const auto r = exp::reverse(c, 100);
  return {r.l2_recovery <= 1e-9, "L2 recovery " + num(r.l2_recovery) + ", distortion " + num(r.mesh->distortion())};
}

Outcome dispersion() {
  exp::RunConfig c;
  c.scenario = "dispersion";
  c.p = 10;
  c.dt = 0.1;
  const std::vector<double> omegas{2 * pi, 4 * pi, 6 * pi, 8 * pi};
  c.pt = 1;
  const auto d1 = exp::dispersion(c, omegas);
  c.pt = 3;
  const auto d3 = exp::dispersion(c, omegas);
  bool ok = true;
  std::string e1 = "pt=1", e3 = "pt=3";
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (i > 0) ok = ok && d1[i].velocity_error >= d1[i - 1].velocity_error && d3[i].velocity_error >= d3[i - 1].velocity_error;
    ok = ok && d3[i].velocity_error < d1[i].velocity_error;
    e1 += " " + num(d1[i].velocity_error);
    e3 += " " + num(d3[i].velocity_error);
  }
  return {ok, "velocity errors " + e1 + "; " + e3};
}

}  // namespace

int main(int argc, char** argv) {
  bool allow_known = false;
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--allow-known-failures") == 0) {
      allow_known = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--allow-known-failures] [--only NAME]\n");
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"basis-topology", basis_suite},
      {"commuting-diagram", commuting_diagram},
      {"adjoint-identity", adjoint_identity},
      {"integrator-order", integrator_order},
      {"h-convergence", h_convergence},
      {"p-convergence", p_convergence},
      {"mass-conservation", mass_conservation},
      {"error-preservation", error_preservation},
      {"reversibility", reversibility},
      {"dispersion", dispersion},
  };
  int unexpected = 0, failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && name != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = kKnownFailures.count(name) > 0;
    std::printf("%s %-20s %s [%.1f s]%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs,
                !o.pass && known ? " (known failure)" : "");
    std::fflush(stdout);
    if (!o.pass) {
      ++failed;
      if (!(allow_known && known)) ++unexpected;
    }
  }
  std::printf("%d failed, %d unexpected\n", failed, unexpected);
  return unexpected == 0 ? 0 : 1;
}
