#pragma once

// Experiment harness shared by the `mse` command and the acceptance suite:
// scenario registry, run configuration and the convergence, dispersion,
// conservation and reversal drivers.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mse/advect.hpp"
#include "mse/errors.hpp"

namespace mse::exp {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string scenario{"sine_wave"};
  int nx{4};
  int ny{4};
  int p{3};
  int pt{4};
  double dt{0.1};
  double t_end{1.0};
  /// "default" (scenario choice), "zero", "rudman" or "uniform:ax,ay".
  std::string velocity{"default"};
  /// Negative selects the scenario default.
  double distortion{-1.0};
  std::filesystem::path out{"out"};
  std::uint64_t seed{1};
  /// Wave number of the dispersion scenario.
  double omega{6.283185307179586};

  std::map<std::string, std::string> manifest() const;
};

/// Sets one field from its textual key; throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// Flat "key = value" file; '#' starts a comment.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
/// Physical parameters positive, scenario registered.
void validate(const RunConfig& cfg);

const std::vector<std::string>& scenario_names();

struct Scenario {
  std::string name;
  Domain domain;
  double distortion{0.0};
  VelocityField velocity;
  AnalyticForm initial;
  /// Exact solution at time t, when known.
  std::function<AnalyticForm(double t)> exact;
};
Scenario make_scenario(const RunConfig& cfg);
std::shared_ptr<const Mesh2D> make_mesh(const RunConfig& cfg, const Scenario& s, int nx, int ny, int p);

// --- single run -------------------------------------------------------------

struct RunOutcome {
  std::shared_ptr<const Mesh2D> mesh;
  AdvectionResult result;
  double initial_error{0.0};
  double final_error{0.0};
  /// Per step 0..n; empty when the scenario has no exact solution or tracking is off.
  std::vector<double> errors;
};

struct RunOptions {
  bool track_errors{true};
  long snapshot_stride{0};
};

RunOutcome run_scenario(const RunConfig& cfg, const RunOptions& opts = {});
/// run_scenario plus history.csv, final_dofs.csv, final_field.csv, mesh.csv, manifest.txt in cfg.out.
RunOutcome run_and_write(const RunConfig& cfg);

// --- sweeps -----------------------------------------------------------------

/// Least-squares slope and correlation of y against x.
struct LineFit {
  double slope{0.0};
  double intercept{0.0};
  double correlation{0.0};
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct HConvergence {
  int p{0};
  std::vector<int> counts;
  std::vector<double> h;
  std::vector<double> errors;
  double slope{0.0};
  /// All errors at roundoff: the data is reproduced exactly and no rate is fitted.
  bool exact{false};
};
HConvergence converge_h(const RunConfig& cfg, const std::vector<int>& counts);

struct PConvergence {
  std::vector<int> orders;
  std::vector<double> errors;
  LineFit fit;  // log(error) against p
};
PConvergence converge_p(const RunConfig& cfg, const std::vector<int>& orders);

struct DispersionPoint {
  double omega{0.0};
  double speed{0.0};
  double speed_xcorr{0.0};
  double velocity_error{0.0};
  double amplitude{0.0};
};
/// Fits A sin(omega (x - c T) + phi) to the final profile of a sin(omega x) wave.
DispersionPoint dispersion_point(const RunConfig& cfg);
std::vector<DispersionPoint> dispersion(const RunConfig& cfg, const std::vector<double>& omegas);

struct ConservationRun {
  std::string label;
  std::vector<double> times;
  std::vector<double> drift;
  double max_drift(long up_to_step) const;
};
ConservationRun conservation(const RunConfig& cfg, long steps);

struct ReversalRun {
  long steps{0};
  Eigen::VectorXd initial;
  Eigen::VectorXd turned;  // state at the reversal
  Eigen::VectorXd final;
  double l2_recovery{0.0};
  double max_recovery{0.0};
  std::shared_ptr<const Mesh2D> mesh;
};
ReversalRun reverse(const RunConfig& cfg, long steps);

}  // namespace mse::exp
