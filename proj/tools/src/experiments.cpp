#include "mse/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mse/csv.hpp"

namespace mse::exp {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x, double lo, double period) {
  double r = std::fmod(x - lo, period);
  if (r < 0.0) r += period;
  return lo + r;
}

// Compactly supported bump on [0, 1/2]^2, only piecewise smooth.
double sine_bell(double x, double y) {
  if (x < 0.0 || x > 0.5 || y < 0.0 || y > 0.5) return 0.0;
  return std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
}

std::optional<VelocityField> parse_velocity(const std::string& spec) {
  if (spec == "default") return std::nullopt;
  if (spec == "zero") return VelocityField::zero();
  if (spec == "rudman") return VelocityField::rudman_vortex();
  if (spec.rfind("uniform:", 0) == 0) {
    const std::string rest = spec.substr(8);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw ConfigError("velocity uniform:ax,ay needs two components");
    try {
      return VelocityField::uniform(std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw ConfigError("bad velocity components in '" + spec + "'");
    }
  }
  throw ConfigError("unknown velocity '" + spec + "'");
}

AnalyticForm shifted_x(ScalarField f, double shift, double x0, double period) {
  return AnalyticForm::two_form([=](double x, double y) { return f(wrap(x - shift, x0, period), y); });
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"sine_wave", "sine_bell", "rudman", "static", "dispersion"};
  return names;
}

void validate(const RunConfig& cfg) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
    throw ConfigError("unknown scenario '" + cfg.scenario + "'");
  }
  if (cfg.nx < 1 || cfg.ny < 1) throw ConfigError("nx and ny must be positive");
  if (cfg.p < 1) throw ConfigError("p must be at least 1");
  if (cfg.pt < 1) throw ConfigError("pt must be at least 1");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (!(cfg.omega > 0.0)) throw ConfigError("omega must be positive");
  parse_velocity(cfg.velocity);
}

Scenario make_scenario(const RunConfig& cfg) {
  validate(cfg);
  Scenario s;
  s.name = cfg.scenario;
  const ScalarField wave = [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); };
  if (cfg.scenario == "sine_wave" || cfg.scenario == "static") {
    s.domain = {0.0, 2.0, 0.0, 2.0};
    s.initial = AnalyticForm::two_form(wave);
    if (cfg.scenario == "static") {
      s.velocity = VelocityField::zero();
      s.exact = [f = s.initial](double) { return f; };
    } else {
      s.velocity = VelocityField::uniform(1.0, 0.0);
      s.exact = [=](double t) { return shifted_x(wave, t, 0.0, 2.0); };
    }
  } else if (cfg.scenario == "sine_bell") {
    s.domain = {};
    s.initial = AnalyticForm::two_form(sine_bell);
    s.velocity = VelocityField::uniform(1.0, 0.0);
    s.exact = [](double t) { return shifted_x(sine_bell, t, 0.0, 1.0); };
  } else if (cfg.scenario == "rudman") {
    // sin(pi x) sin(pi y) is a function of the stream function, hence steady.
    s.domain = {};
    s.distortion = 0.02;
    s.initial = AnalyticForm::two_form(wave);
    s.velocity = VelocityField::rudman_vortex();
    s.exact = [f = s.initial](double) { return f; };
  } else {
    const double k = cfg.omega / (2.0 * kPi);
    if (std::abs(k - std::round(k)) > 1e-12) throw ConfigError("omega must be a multiple of 2 pi");
    const double w = cfg.omega;
    const ScalarField f = [w](double x, double) { return std::sin(w * x); };
    s.domain = {};
    s.initial = AnalyticForm::two_form(f);
    s.velocity = VelocityField::uniform(1.0, 0.0);
    s.exact = [=](double t) { return shifted_x(f, t, 0.0, 1.0); };
  }
  if (auto v = parse_velocity(cfg.velocity)) {
    s.velocity = *v;
    if (cfg.velocity == "zero") {
      s.exact = [f = s.initial](double) { return f; };
    } else {
      s.exact = nullptr;
    }
  }
  if (cfg.distortion >= 0.0) s.distortion = cfg.distortion;
  return s;
}

std::shared_ptr<const Mesh2D> make_mesh(const RunConfig&, const Scenario& s, int nx, int ny, int p) {
  if (s.distortion > 0.0) return build_distorted(nx, ny, p, s.distortion, s.domain, true);
  return build_uniform(nx, ny, s.domain, true, true, p);
}

// --- single run -------------------------------------------------------------

RunOutcome run_scenario(const RunConfig& cfg, const RunOptions& opts) {
  const Scenario s = make_scenario(cfg);
  RunOutcome out;
  out.mesh = make_mesh(cfg, s, cfg.nx, cfg.ny, cfg.p);
  AdvectionProblem problem{out.mesh, s.velocity, reduce(s.initial, out.mesh), cfg.pt, cfg.dt, cfg.t_end, {}};

  SolveOptions so;
  so.snapshot_stride = opts.snapshot_stride;
  const bool track = opts.track_errors && static_cast<bool>(s.exact);
  if (s.exact) out.initial_error = l2_error(problem.initial, s.initial);
  if (track) {
    out.errors.push_back(out.initial_error);
    so.on_step = [&](const StepInfo& info, const Eigen::VectorXd& y) {
      out.errors.push_back(l2_error(DiscreteForm(2, out.mesh, y), s.exact(info.t)));
    };
  }
  out.result = solve(problem, so);
  if (s.exact) {
    out.final_error = track ? out.errors.back()
                            : l2_error(DiscreteForm(2, out.mesh, out.result.final_state), s.exact(out.result.times.back()));
  } else {
    out.initial_error = out.final_error = std::nan("");
  }
  return out;
}

RunOutcome run_and_write(const RunConfig& cfg) {
  RunOutcome out = run_scenario(cfg);
  const auto& r = out.result;
  {
    auto os = csv::open_output(cfg.out / "history.csv");
    csv::HistoryWriter w(os);
    const auto drift = mass_history(r.mass);
    for (std::size_t n = 0; n < r.times.size(); ++n) {
      const double e = n < out.errors.size() ? out.errors[n] : std::nan("");
      w.row(static_cast<long>(n), r.times[n], e, drift[n]);
    }
  }
  const DiscreteForm first(2, out.mesh, r.snapshots.front().coeffs);
  const DiscreteForm last(2, out.mesh, r.final_state);
  {
    auto os = csv::open_output(cfg.out / "initial_dofs.csv");
    csv::write_dofs(os, first, 0.0);
  }
  {
    auto os = csv::open_output(cfg.out / "final_dofs.csv");
    csv::write_dofs(os, last, r.times.back());
  }
  {
    auto os = csv::open_output(cfg.out / "final_field.csv");
    csv::write_field(os, last, 2 * cfg.p + 2, r.times.back());
  }
  {
    auto os = csv::open_output(cfg.out / "mesh.csv");
    csv::write_mesh_summary(os, *out.mesh);
  }
  auto m = cfg.manifest();
  m["steps"] = std::to_string(r.times.size() - 1);
  m["initial_l2_error"] = csv::number(out.initial_error);
  m["final_l2_error"] = csv::number(out.final_error);
  m["final_mass_drift"] = csv::number(r.mass.back() - r.mass.front());
  csv::write_manifest(cfg.out / "manifest.txt", m);
  return out;
}

// --- sweeps -----------------------------------------------------------------

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return f;
}

HConvergence converge_h(const RunConfig& cfg, const std::vector<int>& counts) {
  if (counts.size() < 3) throw InvalidArgument("h-convergence needs at least three mesh sizes");
  HConvergence h;
  h.p = cfg.p;
  h.counts = counts;
  const Scenario s = make_scenario(cfg);
  if (!s.exact) throw InvalidArgument("h-convergence needs a scenario with an exact solution");
  for (int n : counts) {
    RunConfig c = cfg;
    c.nx = c.ny = n;
    h.h.push_back(s.domain.width() / n);
    h.errors.push_back(run_scenario(c, {false, 0}).final_error);
  }
  h.exact = *std::max_element(h.errors.begin(), h.errors.end()) < 1e-12;
  if (!h.exact) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      lx.push_back(std::log(h.h[i]));
      ly.push_back(std::log(h.errors[i]));
    }
    h.slope = fit_line(lx, ly).slope;
  } else {
    h.slope = std::nan("");
  }
  return h;
}

PConvergence converge_p(const RunConfig& cfg, const std::vector<int>& orders) {
  PConvergence r;
  r.orders = orders;
  std::vector<double> x, y;
  for (int p : orders) {
    RunConfig c = cfg;
    c.p = p;
    const double e = run_scenario(c, {false, 0}).final_error;
    r.errors.push_back(e);
    x.push_back(p);
    y.push_back(std::log(e));
  }
  if (orders.size() >= 2) r.fit = fit_line(x, y);
  return r;
}

DispersionPoint dispersion_point(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.scenario = "dispersion";
  const Scenario sc = make_scenario(c);
  const auto mesh = make_mesh(c, sc, c.nx, c.ny, c.p);
  const AdvectionProblem problem{mesh, sc.velocity, reduce(sc.initial, mesh), c.pt, c.dt, c.t_end, {}};
  if (problem.step_count() < 1) throw InvalidArgument("dispersion needs at least one time step");
  const double w = c.omega;

  // Oversampled profile; the wave does not depend on y.
  const int n = 5 * (c.p + 1);
  std::vector<double> ref(n);
  for (int a = 0; a < n; ++a) ref[a] = -1.0 + (2.0 * a + 1.0) / n;
  const FieldSamples grid = reconstruct(problem.initial, ref);
  const Eigen::Index m = grid.values.rows();
  Eigen::MatrixXd basis(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    basis(i, 0) = std::sin(w * grid.positions[i].x);
    basis(i, 1) = std::cos(w * grid.positions[i].x);
  }
  const auto qr = basis.colPivHouseholderQr();
  Eigen::VectorXd profile;
  // a sin + b cos = R sin(w x + phi).
  auto fit = [&](const Eigen::VectorXd& y, double& amp) {
    profile = reconstruct(DiscreteForm(2, mesh, y), ref).values.col(0);
    const Eigen::Vector2d ab = qr.solve(profile);
    amp = ab.norm();
    return std::atan2(ab[1], ab[0]);
  };

  DispersionPoint d;
  d.omega = w;
  double phase = fit(problem.initial.coeffs, d.amplitude);
  double lag = 0.0;  // accumulated phase error, unwrapped step by step
  SolveOptions so;
  so.on_step = [&](const StepInfo&, const Eigen::VectorXd& y) {
    double amp = 0.0;
    const double next = fit(y, amp);
    if (amp < 1e-3) throw SolverFailure("dispersion fit: degenerate amplitude");
    // Exact advance is -w dt; keep the deviation in (-pi, pi].
    lag += wrap(next - phase + w * c.dt, -kPi, 2.0 * kPi);
    phase = next;
    d.amplitude = amp;
  };
  const AdvectionResult r = solve(problem, so);
  const double t = r.times.back();
  d.speed = 1.0 - lag / (w * t);
  d.velocity_error = std::abs(d.speed - 1.0);

  // Cross-check: peak of the correlation with the initial wave near the fitted shift.
  auto corr = [&](double shift) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) acc += profile[i] * std::sin(w * (grid.positions[i].x - shift));
    return acc;
  };
  const double period = 2.0 * kPi / w;
  const double centre = d.speed * t;
  const int scan = 512;
  double best = centre, best_val = -1e300;
  for (int k = 0; k <= scan; ++k) {
    const double sh = centre - 0.5 * period + period * k / scan;
    const double v = corr(sh);
    if (v > best_val) {
      best_val = v;
      best = sh;
    }
  }
  // Golden-section refinement inside the bracketing scan cells.
  double lo = best - period / scan, hi = best + period / scan;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, t); ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (corr(a) > corr(b)) hi = b; else lo = a;
  }
  d.speed_xcorr = 0.5 * (lo + hi) / t;
  return d;
}

std::vector<DispersionPoint> dispersion(const RunConfig& cfg, const std::vector<double>& omegas) {
  std::vector<DispersionPoint> pts;
  for (double w : omegas) {
    RunConfig c = cfg;
    c.omega = w;
    pts.push_back(dispersion_point(c));
  }
  return pts;
}

double ConservationRun::max_drift(long up_to_step) const {
  double m = 0.0;
  const std::size_t end = std::min<std::size_t>(drift.size(), static_cast<std::size_t>(up_to_step) + 1);
  for (std::size_t i = 0; i < end; ++i) m = std::max(m, std::abs(drift[i]));
  return m;
}

ConservationRun conservation(const RunConfig& cfg, long steps) {
  RunConfig c = cfg;
  c.t_end = steps * cfg.dt;
  const RunOutcome out = run_scenario(c, {false, 0});
  ConservationRun r;
  r.label = std::to_string(c.nx) + "x" + std::to_string(c.ny) + "_p" + std::to_string(c.p);
  r.times = out.result.times;
  r.drift = mass_history(out.result.mass);
  return r;
}

ReversalRun reverse(const RunConfig& cfg, long steps) {
  const Scenario s = make_scenario(cfg);
  ReversalRun r;
  r.steps = steps;
  r.mesh = make_mesh(cfg, s, cfg.nx, cfg.ny, cfg.p);
  const DiscreteForm init = reduce(s.initial, r.mesh);
  r.initial = init.coeffs;
  AdvectionProblem problem{r.mesh, s.velocity, init, cfg.pt, cfg.dt, 2.0 * steps * cfg.dt, steps * cfg.dt};
  r.turned = r.initial;
  SolveOptions so;
  so.on_step = [&](const StepInfo& info, const Eigen::VectorXd& y) {
    if (info.step == steps) r.turned = y;
  };
  r.final = solve(problem, so).final_state;
  const Eigen::VectorXd diff = r.final - r.initial;
  r.l2_recovery = l2_norm(DiscreteForm(2, r.mesh, diff));
  r.max_recovery = diff.lpNorm<Eigen::Infinity>();
  return r;
}

}  // namespace mse::exp
