#include "swrom/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "swrom/ntswe_system.hpp"
#include "swrom/snapshot_io.hpp"

namespace swrom {

namespace {

namespace fs = std::filesystem;
using steady = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(steady::time_point t0) {
  return std::chrono::duration<double>(steady::now() - t0).count();
}

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double mean_of(const std::vector<int>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

// Reads a two-column quantity CSV back into a map; empty result if the file
// does not exist.
std::map<std::string, double> read_quantity_csv(const std::string& path) {
  std::map<std::string, double> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return out;
}

std::optional<double> lookup(const std::map<std::string, double>& m, const char* key) {
  const auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

// Raw stored states: the initial flat state plus one matrix per component
// whose columns are the states after it. In-memory mode the matrices are
// populated directly; otherwise they are reloaded from the snapshot files on
// first access, which keeps both modes on one code path (and bit-identical).
struct SnapshotStore {
  Vec initial;
  Eigen::Index big = 0;
  Eigen::Index count = 0;
  std::array<Eigen::MatrixXd, 3> mats;
  std::array<bool, 3> loaded = {false, false, false};
  std::array<std::string, 3> paths;

  const Eigen::MatrixXd& comp(int c) {
    if (!loaded[static_cast<std::size_t>(c)]) {
      Eigen::MatrixXd m = read_matrix(paths[static_cast<std::size_t>(c)]);
      if (m.rows() != big || m.cols() != count)
        throw std::runtime_error(paths[static_cast<std::size_t>(c)] + ": stored shape " +
                                 std::to_string(m.rows()) + " x " + std::to_string(m.cols()) +
                                 " does not match the configured " + std::to_string(big) + " x " +
                                 std::to_string(count));
      mats[static_cast<std::size_t>(c)] = std::move(m);
      loaded[static_cast<std::size_t>(c)] = true;
    }
    return mats[static_cast<std::size_t>(c)];
  }

  Vec state(Eigen::Index k) {
    if (k == 0) return initial;
    Vec z(3 * big);
    z.head(big) = comp(0).col(k - 1);
    z.segment(big, big) = comp(1).col(k - 1);
    z.tail(big) = comp(2).col(k - 1);
    return z;
  }
};

Eigen::MatrixXd final_fields(const NtsweSystem& sys, const Vec& z) {
  const Eigen::Index big = sys.grid().n;
  Eigen::MatrixXd m(big, 4);
  m.col(0) = z.head(big);
  m.col(1) = z.segment(big, big);
  m.col(2) = z.tail(big);
  m.col(3) = sys.vorticity(z);
  return m;
}

ConservedSeries series_from_store(SnapshotStore& store, const NtsweSystem& sys, double dt) {
  ConservedSeries series;
  for (Eigen::Index k = 0; k <= store.count; ++k)
    series.push(static_cast<double>(k) * dt, sys.conserved(store.state(k)));
  return series;
}

void print_drift(const char* tag, const ConservationDrift& d) {
  std::cout << tag << " mean drift: energy " << sci(d.energy.mean) << ", enstrophy "
            << sci(d.enstrophy.mean) << ", mass " << sci(d.mass.mean) << ", vorticity "
            << sci(d.vorticity.mean) << "\n";
}

void update_metadata(const std::string& dir, const std::function<void(json&)>& edit) {
  const fs::path path = fs::path(dir) / "rom_metadata.json";
  json j = json::object();
  if (fs::exists(path)) {
    std::ifstream in(path);
    if (in) in >> j;
    if (!j.is_object()) j = json::object();
  }
  edit(j);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

[[noreturn]] void rethrow_with_stage(const char* stage, const std::exception& e) {
  throw std::runtime_error("stage " + std::string(stage) + ": " + e.what());
}

}  // namespace

void save_pod_basis(const PodBasis& basis, const std::string& dir) {
  write_matrix(join(dir, "pod_basis_u.swrm"), basis.v_u);
  write_matrix(join(dir, "pod_basis_v.swrm"), basis.v_v);
  write_matrix(join(dir, "pod_basis_h.swrm"), basis.v_h);
  Eigen::MatrixXd mean(basis.grid_size(), 3);
  mean.col(0) = basis.mean_u;
  mean.col(1) = basis.mean_v;
  mean.col(2) = basis.mean_h;
  write_matrix(join(dir, "pod_mean.swrm"), mean);
  Eigen::MatrixXd sigma(basis.sigma_u.size(), 3);
  sigma.col(0) = basis.sigma_u;
  sigma.col(1) = basis.sigma_v;
  sigma.col(2) = basis.sigma_h;
  write_matrix(join(dir, "pod_sigma.swrm"), sigma);
}

PodBasis load_pod_basis(const std::string& dir) {
  PodBasis basis;
  basis.v_u = read_matrix(join(dir, "pod_basis_u.swrm"));
  basis.v_v = read_matrix(join(dir, "pod_basis_v.swrm"));
  basis.v_h = read_matrix(join(dir, "pod_basis_h.swrm"));
  const Eigen::MatrixXd mean = read_matrix(join(dir, "pod_mean.swrm"));
  const Eigen::MatrixXd sigma = read_matrix(join(dir, "pod_sigma.swrm"));
  if (mean.cols() != 3 || sigma.cols() != 3)
    throw std::runtime_error(dir + ": malformed basis mean or sigma file");
  basis.mean_u = mean.col(0);
  basis.mean_v = mean.col(1);
  basis.mean_h = mean.col(2);
  basis.sigma_u = sigma.col(0);
  basis.sigma_v = sigma.col(1);
  basis.sigma_h = sigma.col(2);
  basis.n_modes = static_cast<int>(basis.v_u.cols());
  if (basis.v_v.cols() != basis.n_modes || basis.v_h.cols() != basis.n_modes ||
      basis.v_u.rows() != mean.rows() || basis.v_v.rows() != mean.rows() ||
      basis.v_h.rows() != mean.rows())
    throw std::runtime_error(dir + ": stored basis files are inconsistent");
  return basis;
}

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const int n_steps = resolved_steps(cfg);

  fs::create_directories(cfg.out_dir);
  save_config(cfg, join(cfg.out_dir, "config.json"));

  const Grid grid = make_grid(cfg.a, cfg.b, cfg.c, cfg.d, cfg.nx, cfg.ny);
  const DiffOperators ops = build_diff_ops(grid);
  const PhysParams params = make_params(cfg);
  const NtsweSystem fom_sys(grid, ops, params);
  const AvfConfig avf{cfg.dt, cfg.fp_tol, cfg.max_iter};

  PipelineResult result;
  result.cfg = cfg;
  result.n_steps = n_steps;

  SnapshotStore store;
  store.big = grid.n;
  store.count = n_steps;
  store.paths = {join(cfg.out_dir, "snapshots_u.swrm"), join(cfg.out_dir, "snapshots_v.swrm"),
                 join(cfg.out_dir, "snapshots_h.swrm")};

  std::optional<double> pod_basis_seconds, pod_online_seconds;
  std::optional<double> deim_basis_seconds, deim_online_seconds;

  // ---- full-order solve ----------------------------------------------
  if (cfg.has_stage("fom")) {
    try {
      const CanonicalState init = initial_state(cfg, grid, params);
      store.initial = to_flat(init);

      Eigen::MatrixXd init_mat(grid.n, 3);
      init_mat.col(0) = init.u_tilde;
      init_mat.col(1) = init.v_tilde;
      init_mat.col(2) = init.h;
      write_matrix(join(cfg.out_dir, "initial_state.swrm"), init_mat);

      std::cout << "[fom] scenario=" << cfg.scenario << " grid=" << cfg.nx << "x" << cfg.ny
                << " steps=" << n_steps << " dt=" << num(cfg.dt) << " storage="
                << cfg.snapshot_storage << "\n";

      double picard_mean = 0.0;
      if (cfg.snapshot_storage == "memory") {
        Trajectory traj = integrate(fom_sys, store.initial, n_steps, avf);
        result.fom_seconds = traj.solve_seconds;
        picard_mean = mean_of(traj.picard_iterations);
        for (auto& m : store.mats) m.resize(grid.n, n_steps);
        for (int k = 1; k <= n_steps; ++k) {
          const Vec& z = traj.states[static_cast<std::size_t>(k)];
          store.mats[0].col(k - 1) = z.head(grid.n);
          store.mats[1].col(k - 1) = z.segment(grid.n, grid.n);
          store.mats[2].col(k - 1) = z.tail(grid.n);
          traj.states[static_cast<std::size_t>(k)] = Vec();
        }
        store.loaded = {true, true, true};
        for (int c = 0; c < 3; ++c)
          write_matrix(store.paths[static_cast<std::size_t>(c)],
                       store.mats[static_cast<std::size_t>(c)]);
      } else {
        MatrixStreamWriter wu(store.paths[0], grid.n, n_steps);
        MatrixStreamWriter wv(store.paths[1], grid.n, n_steps);
        MatrixStreamWriter wh(store.paths[2], grid.n, n_steps);
        const StateObserver observer = [&](int, double, const Vec& z) {
          wu.append_column(z.head(grid.n));
          wv.append_column(z.segment(grid.n, grid.n));
          wh.append_column(z.tail(grid.n));
        };
        const Trajectory traj =
            integrate(fom_sys, store.initial, n_steps, avf, observer, /*retain_states=*/false);
        wu.finish();
        wv.finish();
        wh.finish();
        result.fom_seconds = traj.solve_seconds;
        picard_mean = mean_of(traj.picard_iterations);
      }

      const ConservedSeries series = series_from_store(store, fom_sys, cfg.dt);
      write_series_csv(join(cfg.out_dir, "fom_conserved.csv"), series);
      write_drift_csv(join(cfg.out_dir, "fom_drift.csv"), series);
      result.fom_drift = conservation_drift(series);
      write_matrix(join(cfg.out_dir, "fom_final_fields.swrm"),
                   final_fields(fom_sys, store.state(n_steps)));
      write_quantity_csv(join(cfg.out_dir, "fom_timing.csv"),
                         {{"fom_seconds", *result.fom_seconds},
                          {"fom_steps", static_cast<double>(n_steps)},
                          {"fom_picard_mean", picard_mean}});

      std::cout << "[fom] solve " << num(*result.fom_seconds) << " s, mean picard iterations "
                << num(picard_mean) << "\n";
      print_drift("[fom]", *result.fom_drift);
    } catch (const std::exception& e) {
      rethrow_with_stage("fom", e);
    }
  }

  const bool want_pod = cfg.has_stage("pod");
  const bool want_deim = cfg.has_stage("deim");

  if ((want_pod || want_deim) && !cfg.has_stage("fom")) {
    const std::string init_path = join(cfg.out_dir, "initial_state.swrm");
    for (const auto& p : store.paths)
      if (!fs::exists(p))
        throw std::runtime_error("stage " + std::string(want_pod ? "pod" : "deim") + ": " + p +
                                 " not found; run the fom stage first");
    if (!fs::exists(init_path))
      throw std::runtime_error("stage " + std::string(want_pod ? "pod" : "deim") + ": " +
                               init_path + " not found; run the fom stage first");
    const Eigen::MatrixXd init_mat = read_matrix(init_path);
    if (init_mat.rows() != grid.n || init_mat.cols() != 3)
      throw std::runtime_error(init_path + ": stored initial state does not match the grid");
    store.initial = to_flat({init_mat.col(0), init_mat.col(1), init_mat.col(2)});
  }

  PodBasis basis;
  bool have_basis = false;

  // ---- projection-based reduction --------------------------------------
  if (want_pod) {
    try {
      const auto t0 = steady::now();
      SnapshotSet snaps = assemble_snapshots(store.initial, store.comp(0), store.comp(1),
                                             store.comp(2));
      const ModeSelection selection = cfg.n_modes ? ModeSelection::count(*cfg.n_modes)
                                                  : ModeSelection::energy(cfg.kappa_pod);
      basis = compute_pod_basis(snaps, selection);
      have_basis = true;
      const int sel_u = select_mode_count(basis.sigma_u, cfg.kappa_pod);
      const int sel_v = select_mode_count(basis.sigma_v, cfg.kappa_pod);
      const int sel_h = select_mode_count(basis.sigma_h, cfg.kappa_pod);
      snaps = SnapshotSet{};
      ReducedOperators red = build_reduced_operators(basis, ops);
      const PodRomSystem rom(grid, ops, params, basis, std::move(red));
      pod_basis_seconds = seconds_since(t0);
      result.n_modes = basis.n_modes;

      save_pod_basis(basis, cfg.out_dir);
      update_metadata(cfg.out_dir, [&](json& j) {
        j["n_modes"] = basis.n_modes;
        j["kappa_pod"] = cfg.kappa_pod;
        j["pod_selected"] = {{"u", sel_u}, {"v", sel_v}, {"h", sel_h}};
      });
      std::cout << "[pod] n=" << basis.n_modes << " (energy counts u=" << sel_u << " v=" << sel_v
                << " h=" << sel_h << "), offline " << num(*pod_basis_seconds) << " s\n";

      const Vec zr0 = project(basis, store.initial);
      std::vector<double> times;
      Trajectory rt;
      for (int rep = 0; rep < cfg.bench_repeats; ++rep) {
        rt = integrate(rom, zr0, n_steps, avf);
        times.push_back(rt.solve_seconds);
      }
      pod_online_seconds = median(times);

      Eigen::MatrixXd reduced(3 * basis.n_modes, n_steps + 1);
      for (int k = 0; k <= n_steps; ++k) reduced.col(k) = rt.states[static_cast<std::size_t>(k)];
      write_matrix(join(cfg.out_dir, "pod_reduced_trajectory.swrm"), reduced);

      ConservedSeries series;
      series.push(0.0, fom_sys.conserved(store.initial));
      for (int k = 1; k <= n_steps; ++k)
        series.push(rt.time(k), rom.conserved(rt.states[static_cast<std::size_t>(k)]));
      write_series_csv(join(cfg.out_dir, "pod_conserved.csv"), series);
      write_drift_csv(join(cfg.out_dir, "pod_drift.csv"), series);
      result.pod_drift = conservation_drift(series);

      RelativeL2Accumulator acc(grid);
      for (int k = 1; k <= n_steps; ++k)
        acc.add(store.state(k), lift(basis, rt.states[static_cast<std::size_t>(k)]));
      result.pod_errors = acc.value();

      write_matrix(join(cfg.out_dir, "pod_final_fields.swrm"),
                   final_fields(fom_sys, lift(basis, rt.states.back())));
      write_quantity_csv(join(cfg.out_dir, "errors_pod.csv"),
                         {{"pod_error_u", result.pod_errors->u},
                          {"pod_error_v", result.pod_errors->v},
                          {"pod_error_h", result.pod_errors->h}});
      write_quantity_csv(join(cfg.out_dir, "pod_timing.csv"),
                         {{"pod_basis_seconds", *pod_basis_seconds},
                          {"pod_online_seconds", *pod_online_seconds},
                          {"pod_online_runs", static_cast<double>(cfg.bench_repeats)},
                          {"pod_picard_mean", mean_of(rt.picard_iterations)}});

      std::cout << "[pod] online " << num(*pod_online_seconds) << " s (median of "
                << cfg.bench_repeats << "), errors u=" << sci(result.pod_errors->u)
                << " v=" << sci(result.pod_errors->v) << " h=" << sci(result.pod_errors->h)
                << "\n";
      print_drift("[pod]", *result.pod_drift);
    } catch (const std::exception& e) {
      rethrow_with_stage("pod", e);
    }
  }

  // ---- interpolation-based hyper-reduction -----------------------------
  if (want_deim) {
    try {
      if (!have_basis) {
        basis = load_pod_basis(cfg.out_dir);
        have_basis = true;
        result.n_modes = basis.n_modes;
      }

      const auto t0 = steady::now();
      NonlinearitySnapshots nl;
      nl.g1.resize(grid.n, n_steps);
      nl.g2.resize(grid.n, n_steps);
      nl.g3.resize(grid.n, n_steps);
      for (int k = 1; k <= n_steps; ++k) {
        const Vec rhs = fom_sys.composite_rhs(store.state(k));
        nl.g1.col(k - 1) = rhs.head(grid.n);
        nl.g2.col(k - 1) = rhs.segment(grid.n, grid.n);
        nl.g3.col(k - 1) = rhs.tail(grid.n);
      }
      const ModeSelection selection = cfg.m_deim ? ModeSelection::count(*cfg.m_deim)
                                                 : ModeSelection::energy(cfg.kappa_deim);
      DeimOperator op = build_deim_operator(basis, nl, selection);
      const int m_sel_1 = select_mode_count(op.sigma_1, cfg.kappa_deim);
      const int m_sel_2 = select_mode_count(op.sigma_2, cfg.kappa_deim);
      const int m_sel_3 = select_mode_count(op.sigma_3, cfg.kappa_deim);
      nl = NonlinearitySnapshots{};
      const DeimRomSystem rom(grid, params, basis, op);
      deim_basis_seconds = seconds_since(t0);
      result.m_deim = op.m_modes;

      write_matrix(join(cfg.out_dir, "deim_basis_1.swrm"), op.c1.basis);
      write_matrix(join(cfg.out_dir, "deim_basis_2.swrm"), op.c2.basis);
      write_matrix(join(cfg.out_dir, "deim_basis_3.swrm"), op.c3.basis);
      write_matrix(join(cfg.out_dir, "deim_projector_1.swrm"), op.c1.projector);
      write_matrix(join(cfg.out_dir, "deim_projector_2.swrm"), op.c2.projector);
      write_matrix(join(cfg.out_dir, "deim_projector_3.swrm"), op.c3.projector);
      update_metadata(cfg.out_dir, [&](json& j) {
        j["m_deim"] = op.m_modes;
        j["kappa_deim"] = cfg.kappa_deim;
        j["deim_selected"] = {{"g1", m_sel_1}, {"g2", m_sel_2}, {"g3", m_sel_3}};
        j["deim_condition"] = {op.c1.condition_number, op.c2.condition_number,
                               op.c3.condition_number};
        j["deim_points"] = {{"g1", op.c1.points}, {"g2", op.c2.points}, {"g3", op.c3.points}};
        j["deim_gathered_rows"] = rom.gathered_rows().size();
      });
      std::cout << "[deim] m=" << op.m_modes << " (energy counts g1=" << m_sel_1
                << " g2=" << m_sel_2 << " g3=" << m_sel_3 << "), gather rows "
                << rom.gathered_rows().size() << ", offline " << num(*deim_basis_seconds)
                << " s\n";
      std::cout << "[deim] interpolation condition numbers " << sci(op.c1.condition_number)
                << ", " << sci(op.c2.condition_number) << ", " << sci(op.c3.condition_number)
                << "\n";

      const Vec zr0 = project(basis, store.initial);
      std::vector<double> times;
      Trajectory rt;
      for (int rep = 0; rep < cfg.bench_repeats; ++rep) {
        rt = integrate(rom, zr0, n_steps, avf);
        times.push_back(rt.solve_seconds);
      }
      deim_online_seconds = median(times);

      Eigen::MatrixXd reduced(3 * basis.n_modes, n_steps + 1);
      for (int k = 0; k <= n_steps; ++k) reduced.col(k) = rt.states[static_cast<std::size_t>(k)];
      write_matrix(join(cfg.out_dir, "deim_reduced_trajectory.swrm"), reduced);

      ConservedSeries series;
      series.push(0.0, fom_sys.conserved(store.initial));
      for (int k = 1; k <= n_steps; ++k)
        series.push(rt.time(k),
                    fom_sys.conserved(lift(basis, rt.states[static_cast<std::size_t>(k)])));
      write_series_csv(join(cfg.out_dir, "deim_conserved.csv"), series);
      write_drift_csv(join(cfg.out_dir, "deim_drift.csv"), series);
      result.deim_drift = conservation_drift(series);

      RelativeL2Accumulator acc(grid);
      for (int k = 1; k <= n_steps; ++k)
        acc.add(store.state(k), lift(basis, rt.states[static_cast<std::size_t>(k)]));
      result.deim_errors = acc.value();

      write_matrix(join(cfg.out_dir, "deim_final_fields.swrm"),
                   final_fields(fom_sys, lift(basis, rt.states.back())));
      write_quantity_csv(join(cfg.out_dir, "errors_deim.csv"),
                         {{"deim_error_u", result.deim_errors->u},
                          {"deim_error_v", result.deim_errors->v},
                          {"deim_error_h", result.deim_errors->h}});
      write_quantity_csv(join(cfg.out_dir, "deim_timing.csv"),
                         {{"deim_basis_seconds", *deim_basis_seconds},
                          {"deim_online_seconds", *deim_online_seconds},
                          {"deim_online_runs", static_cast<double>(cfg.bench_repeats)},
                          {"deim_picard_mean", mean_of(rt.picard_iterations)}});

      std::cout << "[deim] online " << num(*deim_online_seconds) << " s (median of "
                << cfg.bench_repeats << "), errors u=" << sci(result.deim_errors->u)
                << " v=" << sci(result.deim_errors->v) << " h=" << sci(result.deim_errors->h)
                << "\n";
      print_drift("[deim]", *result.deim_drift);
    } catch (const std::exception& e) {
      rethrow_with_stage("deim", e);
    }
  }

  // ---- benchmark aggregation -------------------------------------------
  if (cfg.has_stage("report")) {
    try {
      PhaseTimes phases;
      phases.fom_seconds = result.fom_seconds;
      phases.pod_basis_seconds = pod_basis_seconds;
      phases.pod_online_seconds = pod_online_seconds;
      phases.deim_basis_seconds = deim_basis_seconds;
      phases.deim_online_seconds = deim_online_seconds;

      const auto fom_file = read_quantity_csv(join(cfg.out_dir, "fom_timing.csv"));
      const auto pod_file = read_quantity_csv(join(cfg.out_dir, "pod_timing.csv"));
      const auto deim_file = read_quantity_csv(join(cfg.out_dir, "deim_timing.csv"));
      if (!phases.fom_seconds) phases.fom_seconds = lookup(fom_file, "fom_seconds");
      if (!phases.pod_basis_seconds)
        phases.pod_basis_seconds = lookup(pod_file, "pod_basis_seconds");
      if (!phases.pod_online_seconds)
        phases.pod_online_seconds = lookup(pod_file, "pod_online_seconds");
      if (!phases.deim_basis_seconds)
        phases.deim_basis_seconds = lookup(deim_file, "deim_basis_seconds");
      if (!phases.deim_online_seconds)
        phases.deim_online_seconds = lookup(deim_file, "deim_online_seconds");

      const TimingReport report = benchmark_report(phases);
      result.timing = report;
      write_timing_csv(join(cfg.out_dir, "timings.csv"), report);

      std::vector<std::pair<std::string, double>> error_rows;
      const auto add_errors = [&](const std::optional<ComponentErrors>& mem,
                                  const char* file_name, const char* prefix) {
        if (mem) {
          error_rows.emplace_back(std::string(prefix) + "_error_u", mem->u);
          error_rows.emplace_back(std::string(prefix) + "_error_v", mem->v);
          error_rows.emplace_back(std::string(prefix) + "_error_h", mem->h);
          return;
        }
        const auto file = read_quantity_csv(join(cfg.out_dir, file_name));
        if (file.empty())
          throw std::runtime_error(std::string(file_name) +
                                   " not found; run the matching reduction stage first");
        for (const auto& [key, value] : file) error_rows.emplace_back(key, value);
      };
      add_errors(result.pod_errors, "errors_pod.csv", "pod");
      add_errors(result.deim_errors, "errors_deim.csv", "deim");
      write_quantity_csv(join(cfg.out_dir, "errors.csv"), error_rows);

      std::cout << "[report] fom " << num(report.fom_seconds) << " s, pod online "
                << num(report.pod_online_seconds) << " s (speedup " << num(report.speedup_pod)
                << "), deim online " << num(report.deim_online_seconds) << " s (speedup "
                << num(report.speedup_deim) << ")\n";
    } catch (const std::exception& e) {
      rethrow_with_stage("report", e);
    }
  }

  return result;
}

}  // namespace swrom
