#include "mse/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mse/errors.hpp"

namespace mse {
namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;
constexpr int kMaxOrder = 32;

struct Legendre2 {
  double value;
  double d1;
  double d2;
};

// L_n, L'_n, L''_n by the three-term recurrence and
// L'_{n+1} = L'_{n-1} + (2n+1) L_n (same for the second derivative).
Legendre2 legendre2(int n, double x) {
  if (n == 0) return {1.0, 0.0, 0.0};
  double l0 = 1.0, l1 = x;
  double d0 = 0.0, d1 = 1.0;
  double s0 = 0.0, s1 = 0.0;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0) * x * l1 - k * l0) / (k + 1.0);
    const double d2 = d0 + (2.0 * k + 1.0) * l1;
    const double s2 = s0 + (2.0 * k + 1.0) * d1;
    l0 = l1;
    l1 = l2;
    d0 = d1;
    d1 = d2;
    s0 = s1;
    s1 = s2;
  }
  return {l1, d1, s1};
}

void check_order(int p, const char* who) {
  if (p < 1 || p > kMaxOrder) {
    throw InvalidOrder(std::string(who) + " requires 1 <= p <= " + std::to_string(kMaxOrder) +
                       ", got " + std::to_string(p));
  }
}

// Safeguarded Newton on f over a sign-change bracket [a, b].
template <class F>
double safeguarded_newton(F&& f, double a, double b, double guess) {
  double fa = f(a).first;
  double x = (guess > a && guess < b) ? guess : 0.5 * (a + b);
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const auto [fx, dfx] = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    double next = (dfx != 0.0) ? x - fx / dfx : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double step = std::abs(next - x);
    x = next;
    if (step < kNewtonTol || b - a < kNewtonTol) break;
  }
  return x;
}

// Roots of f in (-1, 1): brackets from a sign-change scan on a Chebyshev
// grid, refined by Newton started from the Chebyshev guesses.
template <class F>
std::vector<double> interior_roots(F&& f, const std::vector<double>& guesses) {
  const std::size_t count = guesses.size();
  const int samples = 64 * static_cast<int>(count + 2);
  std::vector<double> roots;
  roots.reserve(count);
  double xa = -std::cos(std::numbers::pi * 0.5 / samples);
  double fa = f(xa).first;
  for (int m = 1; m < samples && roots.size() < count; ++m) {
    const double xb = -std::cos(std::numbers::pi * (m + 0.5) / samples);
    const double fb = f(xb).first;
    if (fb == 0.0 || (fa < 0.0) != (fb < 0.0)) {
      const double guess = guesses[roots.size()];
      roots.push_back(fb == 0.0 ? xb : safeguarded_newton(f, xa, xb, guess));
    }
    xa = xb;
    fa = fb;
  }
  if (roots.size() != count) {
    throw Error("root scan found " + std::to_string(roots.size()) + " of " +
                std::to_string(count) + " roots");
  }
  return roots;
}

void symmetrize(std::vector<double>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (x[n - 1 - i] - x[i]);
    x[i] = -a;
    x[n - 1 - i] = a;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

// p Gauss points and p + 1 Gauss-Lobatto points both reach degree 2p - 1.
int QuadratureRule::exactness() const noexcept { return 2 * order - 1; }

LegendreValue legendre(int n, double x) {
  const auto l = legendre2(n, x);
  return {l.value, l.d1};
}

std::vector<double> gauss_lobatto_nodes(int p) {
  check_order(p, "gauss_lobatto_nodes");
  std::vector<double> guesses;
  for (int j = 1; j < p; ++j) guesses.push_back(-std::cos(std::numbers::pi * j / p));
  auto dl = [p](double x) {
    const auto l = legendre2(p, x);
    return std::pair{l.d1, l.d2};
  };
  std::vector<double> nodes{-1.0};
  if (p > 1) {
    const auto inner = interior_roots(dl, guesses);
    nodes.insert(nodes.end(), inner.begin(), inner.end());
  }
  nodes.push_back(1.0);
  symmetrize(nodes);
  return nodes;
}

std::vector<double> gauss_nodes(int p) {
  check_order(p, "gauss_nodes");
  std::vector<double> guesses;
  for (int j = 0; j < p; ++j) {
    guesses.push_back(-std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * p)));
  }
  auto l = [p](double x) {
    const auto v = legendre2(p, x);
    return std::pair{v.value, v.d1};
  };
  auto nodes = interior_roots(l, guesses);
  symmetrize(nodes);
  return nodes;
}

QuadratureRule gauss_rule(int p) {
  QuadratureRule rule;
  rule.kind = QuadratureKind::gauss;
  rule.order = p;
  rule.nodes = gauss_nodes(p);
  rule.weights.reserve(rule.nodes.size());
  for (double x : rule.nodes) {
    const double d = legendre(p, x).derivative;
    rule.weights.push_back(2.0 / ((1.0 - x * x) * d * d));
  }
  return rule;
}

QuadratureRule gauss_lobatto_rule(int p) {
  QuadratureRule rule;
  rule.kind = QuadratureKind::gauss_lobatto;
  rule.order = p;
  rule.nodes = gauss_lobatto_nodes(p);
  rule.weights.reserve(rule.nodes.size());
  for (double x : rule.nodes) {
    const double l = legendre(p, x).value;
    rule.weights.push_back(2.0 / (p * (p + 1.0) * l * l));
  }
  return rule;
}

QuadratureRule gauss_rule_on(int p, double a, double b) {
  auto rule = gauss_rule(p);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (auto& x : rule.nodes) x = mid + half * x;
  for (auto& w : rule.weights) w *= half;
  return rule;
}

// --- Basis1D ----------------------------------------------------------------

Basis1D::Basis1D(int p) : p_(p), nodes_(gauss_lobatto_nodes(p)) {
  const int n = p_ + 1;
  bary_.assign(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) bary_[j] /= (nodes_[j] - nodes_[k]);
    }
  }
  const double scale = *std::max_element(bary_.begin(), bary_.end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); });
  for (auto& w : bary_) w /= std::abs(scale);

  diff_.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
      diff_[i * n + j] = v;
      diag -= v;
    }
    diff_[i * n + i] = diag;
  }
}

int Basis1D::node_hit(double xi) const noexcept {
  for (int j = 0; j <= p_; ++j) {
    if (xi == nodes_[j]) return j;
  }
  return -1;
}

double Basis1D::lagrange(int i, double xi) const {
  if (i < 0 || i > p_) {
    throw IndexOutOfRange("lagrange index " + std::to_string(i) + " not in [0, " +
                          std::to_string(p_) + "]");
  }
  std::vector<double> v(p_ + 1);
  lagrange_all(xi, v);
  return v[i];
}

void Basis1D::lagrange_all(double xi, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(p_ + 1)) {
    throw DimensionMismatch("lagrange_all output size");
  }
  const int hit = node_hit(xi);
  if (hit >= 0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[hit] = 1.0;
    return;
  }
  double denom = 0.0;
  for (int k = 0; k <= p_; ++k) {
    const double t = bary_[k] / (xi - nodes_[k]);
    out[k] = t;
    denom += t;
  }
  for (auto& v : out) v /= denom;
}

std::vector<double> Basis1D::lagrange_all(double xi) const {
  std::vector<double> v(p_ + 1);
  lagrange_all(xi, v);
  return v;
}

void Basis1D::lagrange_deriv_all(double xi, std::span<double> out) const {
  const int n = p_ + 1;
  if (out.size() != static_cast<std::size_t>(n)) {
    throw DimensionMismatch("lagrange_deriv_all output size");
  }
  const int hit = node_hit(xi);
  if (hit >= 0) {
    for (int j = 0; j < n; ++j) out[j] = diff_[hit * n + j];
    return;
  }
  // l_i(x) = w_i prod_{k != i}(x - x_k) and l_i' = l_i * sum_{m != i} 1/(x - x_m);
  // the product form keeps relative accuracy when x sits close to a node.
  std::vector<double> inv(n);
  double full = 0.0;
  for (int k = 0; k < n; ++k) {
    inv[k] = 1.0 / (xi - nodes_[k]);
    full += inv[k];
  }
  // bary_ is rescaled, so normalise by sum_i l_i = 1.
  double sum_l = 0.0;
  for (int i = 0; i < n; ++i) {
    double li = bary_[i];
    for (int k = 0; k < n; ++k) {
      if (k != i) li *= (xi - nodes_[k]);
    }
    sum_l += li;
    out[i] = li * (full - inv[i]);
  }
  for (auto& v : out) v /= sum_l;
}

double Basis1D::lagrange_deriv(int i, double xi) const {
  if (i < 0 || i > p_) {
    throw IndexOutOfRange("lagrange_deriv index " + std::to_string(i) + " not in [0, " +
                          std::to_string(p_) + "]");
  }
  std::vector<double> v(p_ + 1);
  lagrange_deriv_all(xi, v);
  return v[i];
}

void Basis1D::edge_all(double xi, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(p_)) {
    throw DimensionMismatch("edge_all output size");
  }
  std::vector<double> d(p_ + 1);
  lagrange_deriv_all(xi, d);
  double acc = 0.0;
  for (int i = 1; i <= p_; ++i) {
    acc -= d[i - 1];
    out[i - 1] = acc;
  }
}

std::vector<double> Basis1D::edge_all(double xi) const {
  std::vector<double> v(p_);
  edge_all(xi, v);
  return v;
}

double Basis1D::edge(int i, double xi) const {
  if (i < 1 || i > p_) {
    throw IndexOutOfRange("edge index " + std::to_string(i) + " not in [1, " + std::to_string(p_) +
                          "]");
  }
  std::vector<double> v(p_);
  edge_all(xi, v);
  return v[i - 1];
}

double lagrange_eval(const Basis1D& basis, int i, double xi) { return basis.lagrange(i, xi); }
double lagrange_deriv(const Basis1D& basis, int i, double xi) {
  return basis.lagrange_deriv(i, xi);
}
double edge_eval(const Basis1D& basis, int i, double xi) { return basis.edge(i, xi); }

}  // namespace mse
