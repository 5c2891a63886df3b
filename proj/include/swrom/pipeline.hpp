#pragma once

#include <optional>
#include <string>

#include "swrom/deim.hpp"
#include "swrom/diagnostics.hpp"
#include "swrom/pod.hpp"
#include "swrom/scenario.hpp"

namespace swrom {

// Everything a finished run leaves in memory. All artifacts are also written
// under cfg.out_dir, so later invocations can pick up where this one ended
// (a reduction stage without a solver stage reads the stored snapshots, the
// report stage reads the stored timing files).
struct PipelineResult {
  ExperimentConfig cfg;
  int n_steps = 0;
  int n_modes = 0;  // 0 when the basis stage did not run
  int m_deim = 0;   // 0 when the interpolation stage did not run

  std::optional<double> fom_seconds;
  std::optional<ConservationDrift> fom_drift, pod_drift, deim_drift;
  std::optional<ComponentErrors> pod_errors, deim_errors;
  std::optional<TimingReport> timing;
};

PipelineResult run_pipeline(const ExperimentConfig& cfg);

// Basis serialization used by the pipeline; kept public so tools and tests
// can reload a stored basis without rerunning the offline stage.
void save_pod_basis(const PodBasis& basis, const std::string& dir);
PodBasis load_pod_basis(const std::string& dir);

}  // namespace swrom
