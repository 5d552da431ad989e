// mse: command line front end of the mimetic advection experiments.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <numbers>

#include "mse/csv.hpp"
#include "mse/experiments.hpp"

namespace {

using mse::exp::RunConfig;

// Raw values of the shared flags; applied after the config file so that
// flags win over file settings.
struct CommonFlags {
  std::map<std::string, std::string> raw;
  std::string config;
  bool check{false};
};

void add_common(CLI::App* sub, CommonFlags& f) {
  static const std::vector<std::pair<std::string, std::string>> flags{
      {"scenario", "Scenario name"},
      {"nx", "Elements in x"},
      {"ny", "Elements in y"},
      {"p", "Polynomial order in space"},
      {"pt", "Polynomial order in time"},
      {"dt", "Time step"},
      {"t-end", "End time"},
      {"velocity", "default | zero | rudman | uniform:ax,ay"},
      {"distortion", "Mesh distortion amplitude (negative: scenario default)"},
      {"out", "Output directory"},
      {"seed", "Seed for randomised checks"},
  };
  for (const auto& [name, help] : flags) {
    sub->add_option_function<std::string>("--" + name, [&f, name](const std::string& v) { f.raw[name] = v; }, help);
  }
  sub->add_option("--config", f.config, "Flat key = value file")->check(CLI::ExistingFile);
  sub->add_flag("--check", f.check, "Exit nonzero when the experiment misses its acceptance threshold");
}

RunConfig resolve(RunConfig defaults, const CommonFlags& f) {
  RunConfig cfg = f.config.empty() ? defaults : mse::exp::load_config(f.config, defaults);
  for (const auto& [k, v] : f.raw) mse::exp::apply_setting(cfg, k, v);
  mse::exp::validate(cfg);
  return cfg;
}

std::string fmt(double v) { return mse::csv::number(v); }

int cmd_run(const RunConfig& cfg) {
  const auto out = mse::exp::run_and_write(cfg);
  const auto& r = out.result;
  std::cout << "scenario " << cfg.scenario << ": " << r.times.size() - 1 << " steps, t = " << r.times.back()
            << "\n  l2 error initial " << fmt(out.initial_error) << " final " << fmt(out.final_error)
            << "\n  mass drift " << fmt(r.mass.back() - r.mass.front()) << "\n  wrote " << cfg.out.string() << "\n";
  return 0;
}

int cmd_converge_h(const RunConfig& cfg, const std::vector<int>& counts, std::vector<int> orders, bool check) {
  if (orders.empty()) orders.push_back(cfg.p);
  auto os = mse::csv::open_output(cfg.out / "converge_h.csv");
  mse::csv::TableWriter errors(os, "converge-h", {"p", "n", "h", "l2_error"});
  auto rs = mse::csv::open_output(cfg.out / "rates.csv");
  mse::csv::TableWriter rates(rs, "rates", {"p", "slope", "exact"});
  bool ok = true;
  for (int p : orders) {
    RunConfig c = cfg;
    c.p = p;
    const auto h = mse::exp::converge_h(c, counts);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      errors.row({std::to_string(p), std::to_string(counts[i]), fmt(h.h[i]), fmt(h.errors[i])});
    }
    rates.row({std::to_string(p), fmt(h.slope), h.exact ? "1" : "0"});
    std::cout << "p = " << p << ": slope " << (h.exact ? std::string("skipped (exact)") : fmt(h.slope)) << "\n";
    if (!h.exact && std::abs(h.slope - (p + 1)) > 0.4) ok = false;
  }
  mse::csv::write_manifest(cfg.out / "manifest.txt", cfg.manifest());
  return check && !ok ? 1 : 0;
}

int cmd_converge_p(const RunConfig& cfg, const std::vector<int>& orders, bool check) {
  const auto r = mse::exp::converge_p(cfg, orders);
  auto os = mse::csv::open_output(cfg.out / "converge_p.csv");
  mse::csv::TableWriter w(os, "converge-p", {"p", "pt", "l2_error"});
  for (std::size_t i = 0; i < orders.size(); ++i) {
    w.row({std::to_string(orders[i]), std::to_string(cfg.pt), fmt(r.errors[i])});
    std::cout << "p = " << orders[i] << ": " << fmt(r.errors[i]) << "\n";
  }
  std::cout << "log-linear correlation " << fmt(r.fit.correlation) << "\n";
  mse::csv::write_manifest(cfg.out / "manifest.txt", cfg.manifest());
  const bool ok = r.fit.correlation <= -0.99 && r.errors.back() <= 1e-6 * r.errors.front();
  return check && !ok ? 1 : 0;
}

int cmd_dispersion(const RunConfig& cfg, const std::vector<int>& modes, bool check) {
  std::vector<double> omegas;
  for (int k : modes) omegas.push_back(2.0 * std::numbers::pi * k);
  const auto pts = mse::exp::dispersion(cfg, omegas);
  auto os = mse::csv::open_output(cfg.out / "dispersion.csv");
  mse::csv::TableWriter w(os, "dispersion", {"omega", "pt", "speed", "speed_xcorr", "velocity_error", "amplitude"});
  bool ok = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& d = pts[i];
    w.row({d.omega, double(cfg.pt), d.speed, d.speed_xcorr, d.velocity_error, d.amplitude});
    std::cout << "omega = " << fmt(d.omega) << ": velocity error " << fmt(d.velocity_error) << "\n";
    if (i > 0 && d.velocity_error < pts[i - 1].velocity_error) ok = false;
  }
  mse::csv::write_manifest(cfg.out / "manifest.txt", cfg.manifest());
  return check && !ok ? 1 : 0;
}

int cmd_conservation(const RunConfig& cfg, long steps, bool check) {
  const auto r = mse::exp::conservation(cfg, steps);
  auto os = mse::csv::open_output(cfg.out / "conservation.csv");
  mse::csv::TableWriter w(os, "conservation", {"step", "t", "mass_drift"});
  for (std::size_t n = 0; n < r.drift.size(); ++n) w.row({double(n), r.times[n], r.drift[n]});
  const double worst = r.max_drift(steps);
  std::cout << r.label << ": max |drift| over " << steps << " steps " << fmt(worst) << "\n";
  mse::csv::write_manifest(cfg.out / "manifest.txt", cfg.manifest());
  return check && !(worst < 1e-12) ? 1 : 0;
}

int cmd_reverse(const RunConfig& cfg, long steps, bool check) {
  const auto r = mse::exp::reverse(cfg, steps);
  const double t = steps * cfg.dt;
  const std::vector<std::pair<std::string, std::pair<const Eigen::VectorXd*, double>>> states{
      {"initial", {&r.initial, 0.0}}, {"turned", {&r.turned, t}}, {"final", {&r.final, 2.0 * t}}};
  for (const auto& [name, st] : states) {
    const mse::DiscreteForm f(2, r.mesh, *st.first);
    auto d = mse::csv::open_output(cfg.out / (name + "_dofs.csv"));
    mse::csv::write_dofs(d, f, st.second);
    auto g = mse::csv::open_output(cfg.out / (name + "_field.csv"));
    mse::csv::write_field(g, f, 2 * cfg.p + 2, st.second);
  }
  {
    auto os = mse::csv::open_output(cfg.out / "mesh.csv");
    mse::csv::write_mesh_summary(os, *r.mesh);
  }
  auto os = mse::csv::open_output(cfg.out / "reverse.csv");
  mse::csv::TableWriter w(os, "reverse", {"steps", "l2_recovery", "max_recovery"});
  w.row({double(steps), r.l2_recovery, r.max_recovery});
  std::cout << "recovery after " << steps << " + " << steps << " steps: l2 " << fmt(r.l2_recovery) << ", max "
            << fmt(r.max_recovery) << "\n";
  mse::csv::write_manifest(cfg.out / "manifest.txt", cfg.manifest());
  return check && !(r.l2_recovery <= 1e-9) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mimetic spectral element advection experiments"};
  app.require_subcommand(1);

  CommonFlags run_f, h_f, p_f, d_f, c_f, r_f;
  auto* run = app.add_subcommand("run", "Advect one scenario and write history, snapshots and mesh");
  add_common(run, run_f);

  auto* ch = app.add_subcommand("converge-h", "Error against element size");
  add_common(ch, h_f);
  std::vector<int> counts{4, 8, 16};
  std::vector<int> h_orders;
  ch->add_option("--counts", counts, "Elements per direction")->delimiter(',');
  ch->add_option("--orders", h_orders, "Polynomial orders (default: --p)")->delimiter(',');

  auto* cp = app.add_subcommand("converge-p", "Error against polynomial order");
  add_common(cp, p_f);
  std::vector<int> p_orders{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  cp->add_option("--orders", p_orders, "Polynomial orders")->delimiter(',');

  auto* dp = app.add_subcommand("dispersion", "Phase speed error of sin(2 pi k x) waves");
  add_common(dp, d_f);
  std::vector<int> modes{1, 2, 3, 4};
  dp->add_option("--modes", modes, "Wave numbers k, omega = 2 pi k")->delimiter(',');

  auto* cs = app.add_subcommand("conservation", "Drift of the total integral of a sine bell");
  add_common(cs, c_f);
  long c_steps = 1000;
  cs->add_option("--steps", c_steps, "Number of time steps")->check(CLI::NonNegativeNumber);

  auto* rv = app.add_subcommand("reverse", "Forward run, velocity reversal, backward run");
  add_common(rv, r_f);
  long r_steps = 100;
  rv->add_option("--steps", r_steps, "Steps in each direction")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(resolve({}, run_f));
    if (ch->parsed()) {
      RunConfig d;
      d.dt = 0.01;
      d.t_end = 0.5;
      return cmd_converge_h(resolve(d, h_f), counts, h_orders, h_f.check);
    }
    if (cp->parsed()) return cmd_converge_p(resolve({}, p_f), p_orders, p_f.check);
    if (dp->parsed()) {
      RunConfig d;
      d.scenario = "dispersion";
      d.p = 10;
      return cmd_dispersion(resolve(d, d_f), modes, d_f.check);
    }
    if (cs->parsed()) {
      RunConfig d;
      d.scenario = "sine_bell";
      d.p = 9;
      d.pt = 2;
      d.dt = 0.01;
      return cmd_conservation(resolve(d, c_f), c_steps, c_f.check);
    }
    if (rv->parsed()) {
      RunConfig d;
      d.scenario = "rudman";
      d.p = 9;
      d.pt = 2;
      return cmd_reverse(resolve(d, r_f), r_steps, r_f.check);
    }
  } catch (const mse::exp::ConfigError& e) {
    std::cerr << "mse: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mse: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
