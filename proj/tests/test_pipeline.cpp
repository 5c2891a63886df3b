#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "swrom/pipeline.hpp"
#include "swrom/scenario.hpp"
#include "swrom/snapshot_io.hpp"

using namespace swrom;
using namespace swrom::testing;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "swrom_pipe_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ExperimentConfig desk_config(const std::string& out_dir) {
  ExperimentConfig cfg = default_config("geostrophic_adjustment");
  cfg.nx = 12;
  cfg.ny = 12;
  cfg.dt = 0.1;
  cfg.t_end = 2.0;
  cfg.n_modes = 5;
  cfg.m_deim = 10;
  cfg.bench_repeats = 1;
  cfg.out_dir = out_dir;
  validate_config(cfg);
  return cfg;
}

const std::vector<std::string> kComparableArtifacts = {
    "initial_state.swrm",          "snapshots_u.swrm",
    "snapshots_v.swrm",            "snapshots_h.swrm",
    "pod_basis_u.swrm",            "pod_mean.swrm",
    "pod_sigma.swrm",              "pod_reduced_trajectory.swrm",
    "deim_basis_1.swrm",           "deim_projector_1.swrm",
    "deim_reduced_trajectory.swrm", "fom_final_fields.swrm",
    "errors_pod.csv",              "errors_deim.csv",
    "fom_conserved.csv",           "pod_conserved.csv",
    "deim_conserved.csv"};

}  // namespace

TEST_CASE("matrix container round trip and corruption detection") {
  const auto dir = fresh_dir("io");
  const Eigen::MatrixXd m = random_mat(7, 5, 401);
  const std::string path = (dir / "m.swrm").string();
  write_matrix(path, m);
  CHECK(max_abs_diff(read_matrix(path), m) == 0.0);

  // Rewrites of identical content produce identical bytes.
  const std::string bytes = read_bytes(path);
  write_matrix(path, m);
  CHECK(read_bytes(path) == bytes);

  const Vec v = random_vec(9, 402);
  write_vector((dir / "v.swrm").string(), v);
  CHECK((read_vector((dir / "v.swrm").string()) - v).cwiseAbs().maxCoeff() == 0.0);

  // Wrong magic.
  {
    std::ofstream out(dir / "bad.swrm", std::ios::binary);
    out << "NOPE" << std::string(20, '\0');
  }
  CHECK_THROWS_AS(read_matrix((dir / "bad.swrm").string()), std::runtime_error);

  // Truncated payload.
  fs::copy_file(path, dir / "short.swrm");
  fs::resize_file(dir / "short.swrm", fs::file_size(path) - 8);
  CHECK_THROWS_AS(read_matrix((dir / "short.swrm").string()), std::runtime_error);

  // Trailing garbage.
  {
    std::ofstream out(dir / "long.swrm", std::ios::binary | std::ios::app);
    out.write(bytes.data(), 4);
    fs::copy_file(path, dir / "long2.swrm", fs::copy_options::overwrite_existing);
    std::ofstream app(dir / "long2.swrm", std::ios::binary | std::ios::app);
    app.put('\0');
  }
  CHECK_THROWS_AS(read_matrix((dir / "long2.swrm").string()), std::runtime_error);

  // Unsupported version (byte 4 of the header).
  {
    std::string tampered = bytes;
    tampered[4] = 2;
    std::ofstream out(dir / "vers.swrm", std::ios::binary);
    out.write(tampered.data(), std::streamsize(tampered.size()));
  }
  CHECK_THROWS_AS(read_matrix((dir / "vers.swrm").string()), std::runtime_error);

  CHECK_THROWS_AS(read_matrix((dir / "missing.swrm").string()), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("columnwise writer matches the one-shot writer byte for byte") {
  const auto dir = fresh_dir("stream");
  const Eigen::MatrixXd m = random_mat(11, 4, 403);

  write_matrix((dir / "oneshot.swrm").string(), m);
  {
    MatrixStreamWriter w((dir / "streamed.swrm").string(), 11, 4);
    for (int j = 0; j < 4; ++j) w.append_column(m.col(j));
    CHECK(w.columns_written() == 4);
    w.finish();
  }
  CHECK(read_bytes(dir / "streamed.swrm") == read_bytes(dir / "oneshot.swrm"));

  // Misuse is rejected.
  {
    MatrixStreamWriter w((dir / "bad.swrm").string(), 11, 4);
    CHECK_THROWS_AS(w.append_column(Vec::Zero(5)), std::invalid_argument);
    w.append_column(m.col(0));
    CHECK_THROWS_AS(w.finish(), std::logic_error);  // three columns missing
  }
  // An unfinished writer leaves no file behind.
  CHECK(!fs::exists(dir / "bad.swrm"));
  {
    MatrixStreamWriter w((dir / "over.swrm").string(), 11, 1);
    w.append_column(m.col(0));
    CHECK_THROWS_AS(w.append_column(m.col(1)), std::logic_error);
    w.finish();
  }
  CHECK(fs::exists(dir / "over.swrm"));
  fs::remove_all(dir);
}

TEST_CASE("named initial conditions have their designed features") {
  // Radially symmetric bump of height one half over a resting fluid.
  ExperimentConfig ex1 = default_config("geostrophic_adjustment");
  ex1.nx = ex1.ny = 10;
  const Grid g1 = make_grid(ex1.a, ex1.b, ex1.c, ex1.d, ex1.nx, ex1.ny);
  const PhysParams p1 = make_params(ex1);
  const CanonicalState s1 = initial_state(ex1, g1, p1);
  const int center = g1.node(5, 5);  // x = y = 0
  CHECK(s1.h[center] == 1.5);
  CHECK(s1.h[g1.node(3, 5)] == s1.h[g1.node(7, 5)]);  // even in x
  CHECK(s1.h[g1.node(5, 2)] == s1.h[g1.node(5, 8)]);  // even in y
  // Resting fluid in particle velocities means the canonical shift alone.
  const double want_shift = p1.delta * p1.omega_hat[1] * (s1.h[center] / 2.0);
  CHECK(s1.u_tilde[center] == doctest::Approx(want_shift).epsilon(1e-14));

  // Periodic jet: undisplaced interface at the origin, vanishing streamwise
  // velocity a quarter period up, zero average along the jet.
  ExperimentConfig ex2 = default_config("shear_instability");
  CHECK(ex2.a == 0.0);
  CHECK(ex2.b == 10.0);
  CHECK(ex2.t_end == 50.0);
  ex2.nx = ex2.ny = 16;
  const Grid g2 = make_grid(ex2.a, ex2.b, ex2.c, ex2.d, ex2.nx, ex2.ny);
  const PhysParams p2 = make_params(ex2);
  const CanonicalState s2 = initial_state(ex2, g2, p2);
  CHECK(s2.h[g2.node(0, 0)] == 1.0);
  CHECK(s2.h.minCoeff() >= 0.8);
  CHECK(s2.h.maxCoeff() <= 1.2);
  const ParticleVelocities pv = particle_from_canonical(s2, p2);
  const int quarter = g2.node(0, 4);  // y = 2.5 = L/4
  CHECK(std::abs(pv.u[quarter]) <= 1e-15);
  // Equispaced samples of a full period of the sheared profile cancel.
  CHECK(std::abs(pv.u.sum()) <= 1e-11 * pv.u.cwiseAbs().sum());

  CHECK_THROWS_AS(default_config("bogus"), std::invalid_argument);
  CHECK(throws_with<std::invalid_argument>([&] { default_config("bogus"); },
                                           "geostrophic_adjustment"));
}

TEST_CASE("custom initial state comes from a stored matrix") {
  const auto dir = fresh_dir("custom");
  ExperimentConfig base = default_config("geostrophic_adjustment");
  base.nx = base.ny = 8;
  const Grid g = make_grid(base.a, base.b, base.c, base.d, base.nx, base.ny);
  const CanonicalState want = initial_state(base, g, make_params(base));

  Eigen::MatrixXd cols(g.n, 3);
  cols.col(0) = want.u_tilde;
  cols.col(1) = want.v_tilde;
  cols.col(2) = want.h;
  write_matrix((dir / "init.swrm").string(), cols);

  ExperimentConfig cfg = base;
  cfg.scenario = "custom";
  cfg.initial_state_path = (dir / "init.swrm").string();
  const CanonicalState got = initial_state(cfg, g, make_params(cfg));
  CHECK((got.u_tilde - want.u_tilde).cwiseAbs().maxCoeff() == 0.0);
  CHECK((got.h - want.h).cwiseAbs().maxCoeff() == 0.0);

  ExperimentConfig no_path = cfg;
  no_path.initial_state_path.reset();
  CHECK_THROWS_AS(validate_config(no_path), std::invalid_argument);

  cols.col(2).setConstant(-1.0);
  write_matrix((dir / "sunk.swrm").string(), cols);
  ExperimentConfig sunk = cfg;
  sunk.initial_state_path = (dir / "sunk.swrm").string();
  CHECK_THROWS_AS(initial_state(sunk, g, make_params(sunk)), std::domain_error);
  fs::remove_all(dir);
}

TEST_CASE("configuration files echo back identically") {
  const auto dir = fresh_dir("config");
  ExperimentConfig cfg = desk_config((dir / "out").string());
  cfg.delta_override = 0.2;
  cfg.kappa_pod = 5e-4;
  cfg.stages = {"fom", "pod"};
  cfg.snapshot_storage = "stream";

  const std::string p1 = (dir / "a.json").string();
  const std::string p2 = (dir / "b.json").string();
  save_config(cfg, p1);
  const ExperimentConfig loaded = load_config(p1);
  save_config(loaded, p2);
  CHECK(read_bytes(p1) == read_bytes(p2));
  CHECK(loaded.delta_override.has_value());
  CHECK(*loaded.delta_override == 0.2);
  CHECK(loaded.stages == std::vector<std::string>{"fom", "pod"});
  CHECK(loaded.n_modes.has_value());
  CHECK(*loaded.n_modes == 5);

  // Unknown keys are rejected, not ignored.
  {
    std::ofstream out(dir / "typo.json");
    out << "{\"scenario\": \"geostrophic_adjustment\", \"n_modez\": 4}\n";
  }
  CHECK(throws_with<std::runtime_error>(
      [&] { load_config((dir / "typo.json").string()); }, "n_modez"));
  CHECK_THROWS_AS(load_config((dir / "absent.json").string()), std::runtime_error);

  // Field validation.
  ExperimentConfig bad = cfg;
  bad.dt = 0.3;  // 2.0 / 0.3 is not an integer
  CHECK_THROWS_AS(resolved_steps(bad), std::invalid_argument);
  bad = cfg;
  bad.kappa_pod = 1.0;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.snapshot_storage = "tape";
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.stages = {"fom", "mystery"};
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.bench_repeats = 0;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.nx = 2;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("pipeline runs are deterministic across reruns and storage modes") {
  const auto base = fresh_dir("determinism");
  const auto d1 = base / "run1";
  const auto d2 = base / "run2";
  const auto d3 = base / "run3";

  PipelineResult r1 = run_pipeline(desk_config(d1.string()));
  PipelineResult r2 = run_pipeline(desk_config(d2.string()));
  ExperimentConfig streaming = desk_config(d3.string());
  streaming.snapshot_storage = "stream";
  PipelineResult r3 = run_pipeline(streaming);

  CHECK(r1.n_steps == 20);
  CHECK(r1.n_modes == 5);
  CHECK(r1.m_deim == 10);
  REQUIRE(r1.pod_errors.has_value());
  REQUIRE(r1.deim_errors.has_value());
  REQUIRE(r1.timing.has_value());
  CHECK(r1.timing->speedup_deim > 0.0);
  REQUIRE(r1.fom_drift.has_value());
  CHECK(r1.fom_drift->energy.mean <= 1e-10);
  CHECK(r1.fom_drift->mass.mean <= 1e-12);

  for (const std::string& name : kComparableArtifacts) {
    INFO("artifact " << name);
    REQUIRE(fs::exists(d1 / name));
    CHECK(read_bytes(d1 / name) == read_bytes(d2 / name));
    CHECK(read_bytes(d1 / name) == read_bytes(d3 / name));
  }

  // The stored initial state has one column per component.
  const Eigen::MatrixXd init = read_matrix((d1 / "initial_state.swrm").string());
  CHECK(init.rows() == 144);
  CHECK(init.cols() == 3);

  // Reduced trajectories carry every stored step.
  const Eigen::MatrixXd zr = read_matrix((d1 / "pod_reduced_trajectory.swrm").string());
  CHECK(zr.rows() == 3 * 5);
  CHECK(zr.cols() == 21);

  // The run metadata names the reduction sizes.
  const std::string meta = read_bytes(d1 / "rom_metadata.json");
  CHECK(meta.find("\"n_modes\"") != std::string::npos);
  CHECK(meta.find("\"m_deim\"") != std::string::npos);
  CHECK(meta.find("\"deim_points\"") != std::string::npos);
  fs::remove_all(base);
}

TEST_CASE("stages compose across separate invocations") {
  const auto base = fresh_dir("stages");
  const auto dir = base / "split";
  const auto ref_dir = base / "ref";

  // Reference: everything in one invocation.
  run_pipeline(desk_config(ref_dir.string()));

  ExperimentConfig cfg = desk_config(dir.string());
  cfg.stages = {"fom"};
  run_pipeline(cfg);
  CHECK(fs::exists(dir / "snapshots_u.swrm"));
  CHECK(!fs::exists(dir / "pod_basis_u.swrm"));

  cfg.stages = {"pod"};
  run_pipeline(cfg);
  CHECK(fs::exists(dir / "pod_basis_u.swrm"));
  CHECK(!fs::exists(dir / "deim_basis_1.swrm"));

  cfg.stages = {"deim"};
  run_pipeline(cfg);
  CHECK(fs::exists(dir / "deim_reduced_trajectory.swrm"));

  cfg.stages = {"report"};
  const PipelineResult rep = run_pipeline(cfg);
  REQUIRE(rep.timing.has_value());
  CHECK(fs::exists(dir / "timings.csv"));
  CHECK(fs::exists(dir / "errors.csv"));

  // Splitting the pipeline must not change any numerical artifact.
  for (const std::string& name : kComparableArtifacts) {
    INFO("artifact " << name);
    CHECK(read_bytes(dir / name) == read_bytes(ref_dir / name));
  }

  // Missing prerequisites fail with a pointer to the missing stage.
  ExperimentConfig orphan = desk_config((base / "orphan").string());
  orphan.stages = {"pod"};
  CHECK(throws_with<std::runtime_error>([&] { run_pipeline(orphan); },
                                        "run the fom stage first"));
  ExperimentConfig bare = desk_config((base / "bare").string());
  bare.stages = {"report"};
  CHECK(throws_with<std::runtime_error>([&] { run_pipeline(bare); }, "missing phase"));
  fs::remove_all(base);
}
