#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swrom/grid.hpp"
#include "swrom/model.hpp"

namespace swrom {

struct ComponentErrors {
  double u = 0.0;
  double v = 0.0;
  double h = 0.0;
};

// Time-averaged relative L2 error per component, (1/T) sum over the stored
// states after the initial one of |w_k - what_k| / |w_k| in the grid-weighted
// L2 norm. The initial state is skipped because both trajectories start from
// it by construction. Throws when a reference component has zero norm.
class RelativeL2Accumulator {
 public:
  explicit RelativeL2Accumulator(const Grid& grid);

  void add(const Eigen::Ref<const Vec>& z_full, const Eigen::Ref<const Vec>& z_approx);
  ComponentErrors value() const;
  int count() const { return count_; }

 private:
  double weight_;
  double sum_u_ = 0.0, sum_v_ = 0.0, sum_h_ = 0.0;
  int count_ = 0;
};

ComponentErrors time_avg_relative_l2(const std::vector<Vec>& reference,
                                     const std::vector<Vec>& approx, const Grid& grid);

// Conserved quantities sampled along a trajectory.
struct ConservedSeries {
  std::vector<double> time, energy, enstrophy, mass, vorticity;

  void push(double t, const ConservedQuantities& q);
  std::size_t size() const { return time.size(); }
};

struct DriftStats {
  std::vector<double> series;  // |Q_k - Q_0| for every sample
  double mean = 0.0;           // average over samples after the first
};

struct ConservationDrift {
  DriftStats energy, enstrophy, mass, vorticity;
};

// Absolute drift of each conserved quantity from its first sample.
ConservationDrift conservation_drift(const ConservedSeries& series);

struct PhaseTimes {
  std::optional<double> fom_seconds;
  std::optional<double> pod_basis_seconds;
  std::optional<double> pod_online_seconds;
  std::optional<double> deim_basis_seconds;
  std::optional<double> deim_online_seconds;
};

struct TimingReport {
  double fom_seconds = 0.0;
  double pod_basis_seconds = 0.0;
  double pod_online_seconds = 0.0;
  double deim_basis_seconds = 0.0;
  double deim_online_seconds = 0.0;
  double speedup_pod = 0.0;   // fom / pod_online
  double speedup_deim = 0.0;  // fom / deim_online
};

// Requires every phase to be present; a missing phase is an error rather
// than a zero, so a speedup can never be computed against a phantom run.
TimingReport benchmark_report(const PhaseTimes& phases);

double median(std::vector<double> values);

// CSV writers. Quantity files are two columns (name,value); series files are
// one row per sample with a fixed header.
void write_quantity_csv(const std::string& path,
                        const std::vector<std::pair<std::string, double>>& rows);
void write_series_csv(const std::string& path, const ConservedSeries& series);
void write_drift_csv(const std::string& path, const ConservedSeries& series);
void write_timing_csv(const std::string& path, const TimingReport& report);

}  // namespace swrom
