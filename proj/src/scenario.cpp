#include "swrom/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "swrom/snapshot_io.hpp"

namespace swrom {

namespace {

using nlohmann::json;

const std::set<std::string> kScenarios = {"geostrophic_adjustment", "shear_instability",
                                          "custom"};
const std::set<std::string> kStages = {"fom", "pod", "deim", "report"};

void unknown_scenario(const std::string& name) {
  std::string msg = "unknown scenario \"" + name + "\"; known scenarios:";
  for (const auto& s : kScenarios) msg += " " + s;
  throw std::invalid_argument(msg);
}

CanonicalState gaussian_bump_state(const Grid& grid, const PhysParams& params) {
  ParticleVelocities pv;
  pv.u = Vec::Zero(grid.n);
  pv.v = Vec::Zero(grid.n);
  Vec h(grid.n);
  for (int node = 0; node < grid.n; ++node) {
    const double x = grid.x(grid.x_index(node));
    const double y = grid.y(grid.y_index(node));
    const double sx = 4.0 * x / 5.0;
    const double sy = 4.0 * y / 5.0;
    h[node] = 1.0 + 0.5 * std::exp(-(sx * sx + sy * sy));
  }
  return canonical_from_particle(pv, h, params);
}

CanonicalState sheared_jet_state(const Grid& grid, const PhysParams& params) {
  constexpr double amp_h = 0.2;
  constexpr double amp_y = 0.5;
  const double length = 10.0;
  const double omz = params.omega_hat.z();
  if (omz == 0.0)
    throw std::invalid_argument("shear_instability: requires a nonzero vertical rotation component");

  const double two_pi = 2.0 * std::numbers::pi;
  const double wav = two_pi / length;
  ParticleVelocities pv;
  pv.u.resize(grid.n);
  pv.v.resize(grid.n);
  Vec h(grid.n);
  for (int node = 0; node < grid.n; ++node) {
    const double x = grid.x(grid.x_index(node));
    const double y = grid.y(grid.y_index(node));
    const double theta = wav * (y - amp_y * std::sin(wav * x));
    // Geostrophically balanced jet: velocities follow the height gradient.
    h[node] = 1.0 + amp_h * std::sin(theta);
    pv.u[node] = -(wav * amp_h / omz) * std::cos(theta);
    pv.v[node] = -(wav * wav * amp_h * amp_y / omz) * std::cos(theta) * std::cos(wav * x);
  }
  return canonical_from_particle(pv, h, params);
}

CanonicalState custom_state(const ExperimentConfig& cfg, const Grid& grid) {
  if (!cfg.initial_state_path)
    throw std::invalid_argument("custom scenario requires initial_state");
  const Eigen::MatrixXd m = read_matrix(*cfg.initial_state_path);
  if (m.rows() != grid.n || m.cols() != 3)
    throw std::invalid_argument(*cfg.initial_state_path + ": expected a " +
                                std::to_string(grid.n) + " x 3 state file, got " +
                                std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
  CanonicalState s{m.col(0), m.col(1), m.col(2)};
  kernels::check_positive_depth(s.h, "custom initial state");
  return s;
}

template <typename T>
void read_key(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& into) {
  if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

}  // namespace

bool ExperimentConfig::has_stage(const std::string& name) const {
  return std::find(stages.begin(), stages.end(), name) != stages.end();
}

ExperimentConfig default_config(const std::string& scenario) {
  if (kScenarios.count(scenario) == 0) unknown_scenario(scenario);
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  cfg.phi_lat = std::numbers::pi / 4.0;
  if (scenario == "shear_instability") {
    cfg.a = 0.0;
    cfg.b = 10.0;
    cfg.c = 0.0;
    cfg.d = 10.0;
    cfg.t_end = 50.0;
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (kScenarios.count(cfg.scenario) == 0) unknown_scenario(cfg.scenario);
  if (!(cfg.b > cfg.a) || !(cfg.d > cfg.c))
    throw std::invalid_argument("config: domain must satisfy b > a and d > c");
  if (cfg.nx < 3 || cfg.ny < 3)
    throw std::invalid_argument("config: nx and ny must be at least 3");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw std::invalid_argument("config: dt must be positive");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
    throw std::invalid_argument("config: t_end must be positive");
  if (!(cfg.scales.height > 0.0) || !(cfg.scales.rotation > 0.0) || !(cfg.scales.gravity > 0.0))
    throw std::invalid_argument("config: scales must be positive");
  if (!(cfg.kappa_pod > 0.0 && cfg.kappa_pod < 1.0))
    throw std::invalid_argument("config: kappa_pod must lie in (0, 1)");
  if (!(cfg.kappa_deim > 0.0 && cfg.kappa_deim < 1.0))
    throw std::invalid_argument("config: kappa_deim must lie in (0, 1)");
  if (cfg.n_modes && *cfg.n_modes < 1)
    throw std::invalid_argument("config: n_modes must be positive");
  if (cfg.m_deim && *cfg.m_deim < 1)
    throw std::invalid_argument("config: m_deim must be positive");
  if (!(cfg.fp_tol > 0.0))
    throw std::invalid_argument("config: fp_tol must be positive");
  if (cfg.max_iter < 1)
    throw std::invalid_argument("config: max_iter must be at least 1");
  if (cfg.snapshot_storage != "memory" && cfg.snapshot_storage != "stream")
    throw std::invalid_argument("config: snapshot_storage must be \"memory\" or \"stream\"");
  if (cfg.stages.empty())
    throw std::invalid_argument("config: stages must not be empty");
  for (const auto& s : cfg.stages)
    if (kStages.count(s) == 0)
      throw std::invalid_argument("config: unknown stage \"" + s + "\"");
  if (cfg.out_dir.empty())
    throw std::invalid_argument("config: out_dir must not be empty");
  if (cfg.scenario == "custom" && !cfg.initial_state_path)
    throw std::invalid_argument("config: custom scenario requires initial_state");
  if (cfg.bench_repeats < 1)
    throw std::invalid_argument("config: bench_repeats must be at least 1");
  resolved_steps(cfg);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error(path + ": config must be a JSON object");

  static const std::set<std::string> known = {
      "scenario",   "domain",     "nx",         "ny",           "dt",
      "t_end",      "phi_lat",    "delta",      "scales",       "g_nd",
      "kappa_pod",  "kappa_deim", "n_modes",    "m_deim",       "fp_tol",
      "max_iter",   "snapshot_storage",         "stages",       "out_dir",
      "initial_state",            "bench_repeats"};
  for (const auto& [key, value] : j.items())
    if (known.count(key) == 0)
      throw std::runtime_error(path + ": unknown config key \"" + key + "\"");

  std::string scenario = "geostrophic_adjustment";
  read_key(j, "scenario", scenario);
  ExperimentConfig cfg = default_config(scenario);

  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    if (!d.is_array() || d.size() != 4)
      throw std::runtime_error(path + ": domain must be [a, b, c, d]");
    cfg.a = d[0].get<double>();
    cfg.b = d[1].get<double>();
    cfg.c = d[2].get<double>();
    cfg.d = d[3].get<double>();
  }
  read_key(j, "nx", cfg.nx);
  read_key(j, "ny", cfg.ny);
  read_key(j, "dt", cfg.dt);
  read_key(j, "t_end", cfg.t_end);
  read_key(j, "phi_lat", cfg.phi_lat);
  read_optional(j, "delta", cfg.delta_override);
  if (j.contains("scales")) {
    const auto& s = j.at("scales");
    read_key(s, "height", cfg.scales.height);
    read_key(s, "rotation", cfg.scales.rotation);
    read_key(s, "gravity", cfg.scales.gravity);
  }
  read_key(j, "g_nd", cfg.g_nd);
  read_key(j, "kappa_pod", cfg.kappa_pod);
  read_key(j, "kappa_deim", cfg.kappa_deim);
  read_optional(j, "n_modes", cfg.n_modes);
  read_optional(j, "m_deim", cfg.m_deim);
  read_key(j, "fp_tol", cfg.fp_tol);
  read_key(j, "max_iter", cfg.max_iter);
  read_key(j, "snapshot_storage", cfg.snapshot_storage);
  read_key(j, "stages", cfg.stages);
  read_key(j, "out_dir", cfg.out_dir);
  read_optional(j, "initial_state", cfg.initial_state_path);
  read_key(j, "bench_repeats", cfg.bench_repeats);

  validate_config(cfg);
  return cfg;
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  json j;
  j["scenario"] = cfg.scenario;
  j["domain"] = {cfg.a, cfg.b, cfg.c, cfg.d};
  j["nx"] = cfg.nx;
  j["ny"] = cfg.ny;
  j["dt"] = cfg.dt;
  j["t_end"] = cfg.t_end;
  j["phi_lat"] = cfg.phi_lat;
  if (cfg.delta_override) j["delta"] = *cfg.delta_override;
  j["scales"] = {{"height", cfg.scales.height},
                 {"rotation", cfg.scales.rotation},
                 {"gravity", cfg.scales.gravity}};
  j["g_nd"] = cfg.g_nd;
  j["kappa_pod"] = cfg.kappa_pod;
  j["kappa_deim"] = cfg.kappa_deim;
  if (cfg.n_modes) j["n_modes"] = *cfg.n_modes;
  if (cfg.m_deim) j["m_deim"] = *cfg.m_deim;
  j["fp_tol"] = cfg.fp_tol;
  j["max_iter"] = cfg.max_iter;
  j["snapshot_storage"] = cfg.snapshot_storage;
  j["stages"] = cfg.stages;
  j["out_dir"] = cfg.out_dir;
  if (cfg.initial_state_path) j["initial_state"] = *cfg.initial_state_path;
  j["bench_repeats"] = cfg.bench_repeats;

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot move " + tmp + " to " + path + ": " + ec.message());
}

int resolved_steps(const ExperimentConfig& cfg) {
  const double ratio = cfg.t_end / cfg.dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(rounded)))
    throw std::invalid_argument("config: t_end must be an integer multiple of dt (t_end/dt = " +
                                std::to_string(ratio) + ")");
  if (rounded < 1.0)
    throw std::invalid_argument("config: horizon shorter than one step");
  return static_cast<int>(rounded);
}

PhysParams make_params(const ExperimentConfig& cfg) {
  const double delta = cfg.delta_override ? *cfg.delta_override : cfg.scales.delta();
  return params_from_latitude(cfg.phi_lat, delta, cfg.g_nd);
}

CanonicalState initial_state(const ExperimentConfig& cfg, const Grid& grid,
                             const PhysParams& params) {
  if (cfg.scenario == "geostrophic_adjustment") return gaussian_bump_state(grid, params);
  if (cfg.scenario == "shear_instability") return sheared_jet_state(grid, params);
  if (cfg.scenario == "custom") return custom_state(cfg, grid);
  unknown_scenario(cfg.scenario);
  return {};  // unreachable
}

}  // namespace swrom
