#include <charconv>
#include <fstream>

#include "mse/csv.hpp"
#include "mse/experiments.hpp"

namespace mse::exp {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for doubles is missing on older toolchains.
    char* end = nullptr;
    out = std::strtod(first, &end);
    if (end != last || value.empty()) throw ConfigError("bad number for " + key + ": '" + value + "'");
  } else {
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) throw ConfigError("bad integer for " + key + ": '" + value + "'");
  }
  return out;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scenario") cfg.scenario = value;
  else if (key == "nx") cfg.nx = parse_number<int>(key, value);
  else if (key == "ny") cfg.ny = parse_number<int>(key, value);
  else if (key == "p") cfg.p = parse_number<int>(key, value);
  else if (key == "pt") cfg.pt = parse_number<int>(key, value);
  else if (key == "dt") cfg.dt = parse_number<double>(key, value);
  else if (key == "t_end" || key == "t-end") cfg.t_end = parse_number<double>(key, value);
  else if (key == "velocity") cfg.velocity = value;
  else if (key == "distortion") cfg.distortion = parse_number<double>(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "omega") cfg.omega = parse_number<double>(key, value);
  else throw ConfigError("unknown setting '" + key + "'");
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

std::map<std::string, std::string> RunConfig::manifest() const {
  return {
      {"scenario", scenario},
      {"nx", std::to_string(nx)},
      {"ny", std::to_string(ny)},
      {"p", std::to_string(p)},
      {"pt", std::to_string(pt)},
      {"dt", csv::number(dt)},
      {"t_end", csv::number(t_end)},
      {"velocity", velocity},
      {"distortion", csv::number(distortion)},
      {"out", out.string()},
      {"seed", std::to_string(seed)},
      {"omega", csv::number(omega)},
  };
}

}  // namespace mse::exp
