#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swrom/grid.hpp"
#include "swrom/model.hpp"

namespace swrom {

// Full description of one experiment run: discretization, physics, model
// reduction settings, and which pipeline stages to execute. Serializes to
// and from JSON; the executed configuration is echoed next to the outputs.
struct ExperimentConfig {
  std::string scenario = "geostrophic_adjustment";
  double a = -5.0, b = 5.0, c = -5.0, d = 5.0;
  int nx = 100, ny = 100;
  double dt = 0.1;
  double t_end = 100.0;

  double phi_lat = 0.0;  // set by default_config; radians
  std::optional<double> delta_override;
  NondimScales scales;
  double g_nd = 1.0;

  double kappa_pod = 1e-3;
  double kappa_deim = 1e-5;
  std::optional<int> n_modes;
  std::optional<int> m_deim;

  double fp_tol = 1e-11;
  int max_iter = 200;

  std::string snapshot_storage = "memory";  // "memory" or "stream"
  std::vector<std::string> stages = {"fom", "pod", "deim", "report"};
  std::string out_dir = "out";
  std::optional<std::string> initial_state_path;
  int bench_repeats = 3;

  bool has_stage(const std::string& name) const;
};

// Preset for a named scenario: domain, horizon, and step size.
ExperimentConfig default_config(const std::string& scenario);

// Throws std::invalid_argument with the offending field on any bad value.
void validate_config(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// Number of time steps; t_end must be an integer multiple of dt to within
// one part in 1e9.
int resolved_steps(const ExperimentConfig& cfg);

PhysParams make_params(const ExperimentConfig& cfg);

// Initial canonical state for the configured scenario on the given grid.
// Named scenarios are built from their closed-form fields; the "custom"
// scenario reads a three-column matrix file (columns u_tilde, v_tilde, h).
CanonicalState initial_state(const ExperimentConfig& cfg, const Grid& grid,
                             const PhysParams& params);

}  // namespace swrom
