#include "swrom/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace swrom {

namespace {

double weighted_norm(const Eigen::Ref<const Vec>& w, double weight) {
  return std::sqrt(weight) * w.norm();
}

void require_open(const std::ofstream& out, const std::string& path) {
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DriftStats drift_stats(const std::vector<double>& q) {
  DriftStats out;
  out.series.reserve(q.size());
  const double q0 = q.front();
  double sum = 0.0;
  for (double qk : q) {
    const double d = std::abs(qk - q0);
    out.series.push_back(d);
    sum += d;
  }
  // The first sample's drift is identically zero, so the mean is taken over
  // the later samples only.
  out.mean = q.size() > 1 ? sum / static_cast<double>(q.size() - 1) : 0.0;
  return out;
}

}  // namespace

RelativeL2Accumulator::RelativeL2Accumulator(const Grid& grid) : weight_(grid.cell_area()) {}

void RelativeL2Accumulator::add(const Eigen::Ref<const Vec>& z_full,
                                const Eigen::Ref<const Vec>& z_approx) {
  if (z_full.size() != z_approx.size() || z_full.size() % 3 != 0)
    throw std::invalid_argument("RelativeL2Accumulator: state length mismatch");
  const Eigen::Index n = z_full.size() / 3;
  const auto one = [&](Eigen::Index offset, double& sum, const char* name) {
    const double ref = weighted_norm(z_full.segment(offset, n), weight_);
    if (ref == 0.0)
      throw std::invalid_argument(std::string("RelativeL2Accumulator: reference ") + name +
                                  " component has zero norm");
    const double err =
        weighted_norm(z_full.segment(offset, n) - z_approx.segment(offset, n), weight_);
    sum += err / ref;
  };
  one(0, sum_u_, "u");
  one(n, sum_v_, "v");
  one(2 * n, sum_h_, "h");
  ++count_;
}

ComponentErrors RelativeL2Accumulator::value() const {
  if (count_ == 0)
    throw std::logic_error("RelativeL2Accumulator: no samples were added");
  const double inv = 1.0 / static_cast<double>(count_);
  return {sum_u_ * inv, sum_v_ * inv, sum_h_ * inv};
}

ComponentErrors time_avg_relative_l2(const std::vector<Vec>& reference,
                                     const std::vector<Vec>& approx, const Grid& grid) {
  if (reference.size() != approx.size())
    throw std::invalid_argument("time_avg_relative_l2: trajectories differ in length");
  if (reference.size() < 2)
    throw std::invalid_argument("time_avg_relative_l2: need at least 2 stored states");
  RelativeL2Accumulator acc(grid);
  for (std::size_t k = 1; k < reference.size(); ++k) acc.add(reference[k], approx[k]);
  return acc.value();
}

void ConservedSeries::push(double t, const ConservedQuantities& q) {
  time.push_back(t);
  energy.push_back(q.energy);
  enstrophy.push_back(q.enstrophy);
  mass.push_back(q.mass);
  vorticity.push_back(q.vorticity);
}

ConservationDrift conservation_drift(const ConservedSeries& series) {
  if (series.size() == 0)
    throw std::invalid_argument("conservation_drift: empty series");
  ConservationDrift out;
  out.energy = drift_stats(series.energy);
  out.enstrophy = drift_stats(series.enstrophy);
  out.mass = drift_stats(series.mass);
  out.vorticity = drift_stats(series.vorticity);
  return out;
}

TimingReport benchmark_report(const PhaseTimes& phases) {
  const auto need = [](const std::optional<double>& v, const char* name) {
    if (!v) throw std::invalid_argument(std::string("benchmark_report: missing phase ") + name);
    if (!(*v > 0.0))
      throw std::invalid_argument(std::string("benchmark_report: nonpositive time for ") + name);
    return *v;
  };
  TimingReport r;
  r.fom_seconds = need(phases.fom_seconds, "fom");
  r.pod_basis_seconds = need(phases.pod_basis_seconds, "pod_basis");
  r.pod_online_seconds = need(phases.pod_online_seconds, "pod_online");
  r.deim_basis_seconds = need(phases.deim_basis_seconds, "deim_basis");
  r.deim_online_seconds = need(phases.deim_online_seconds, "deim_online");
  r.speedup_pod = r.fom_seconds / r.pod_online_seconds;
  r.speedup_deim = r.fom_seconds / r.deim_online_seconds;
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

void write_quantity_csv(const std::string& path,
                        const std::vector<std::pair<std::string, double>>& rows) {
  std::ofstream out(path);
  require_open(out, path);
  out << "quantity,value\n";
  for (const auto& [name, value] : rows) out << name << ',' << fmt(value) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_series_csv(const std::string& path, const ConservedSeries& series) {
  std::ofstream out(path);
  require_open(out, path);
  out << "time,energy,enstrophy,mass,vorticity\n";
  for (std::size_t k = 0; k < series.size(); ++k)
    out << fmt(series.time[k]) << ',' << fmt(series.energy[k]) << ',' << fmt(series.enstrophy[k])
        << ',' << fmt(series.mass[k]) << ',' << fmt(series.vorticity[k]) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_drift_csv(const std::string& path, const ConservedSeries& series) {
  const ConservationDrift drift = conservation_drift(series);
  std::ofstream out(path);
  require_open(out, path);
  out << "time,energy_drift,enstrophy_drift,mass_drift,vorticity_drift\n";
  for (std::size_t k = 0; k < series.size(); ++k)
    out << fmt(series.time[k]) << ',' << fmt(drift.energy.series[k]) << ','
        << fmt(drift.enstrophy.series[k]) << ',' << fmt(drift.mass.series[k]) << ','
        << fmt(drift.vorticity.series[k]) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_timing_csv(const std::string& path, const TimingReport& report) {
  write_quantity_csv(path, {{"fom_seconds", report.fom_seconds},
                            {"pod_basis_seconds", report.pod_basis_seconds},
                            {"pod_online_seconds", report.pod_online_seconds},
                            {"deim_basis_seconds", report.deim_basis_seconds},
                            {"deim_online_seconds", report.deim_online_seconds},
                            {"speedup_pod", report.speedup_pod},
                            {"speedup_deim", report.speedup_deim}});
}

}  // namespace swrom
