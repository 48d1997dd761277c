#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hjgraph/experiment.hpp"
#include "hjgraph/markov.hpp"
#include "test_util.hpp"

using doctest::Approx;
using hjg::ErrorCode;
using hjg::ExperimentConfig;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("hjgraph_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = ExperimentConfig::parse(
      "# reference setup\n"
      "d = 3\n"
      "N = 16   # levels\n"
      "eps = 0.01\n"
      "ratio = 0.05\n"
      "T = 0.4\n"
      "tensor = average\n"
      "noise_intensity = 0.5\n"
      "scheme = implicit\n"
      "resolutions = 4, 8\n"
      "strict_cfl = true\n");
  CHECK(cfg.levels() == 16);
  CHECK(cfg.scheme == "implicit");
  CHECK(cfg.resolutions == std::vector<int>{4, 8});
  CHECK(cfg.strict_cfl);
  CHECK(cfg.to_json()["noise_intensity"] == 0.5);
  CHECK(cfg.to_json()["h"].get<double>() == Approx(0.97 / 16));
  CHECK(ExperimentConfig::parse("resolutions = 4, 8\n").to_json()["N"].is_null());

  CHECK_ERROR_CODE(ExperimentConfig::parse("colour = blue\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("N = 4\nN = 5\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("N = four\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("tensor = geometric\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("initial = nope\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("resolutions = 8, 4\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("N = 4\nh = 0.1\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("just words\n"), ErrorCode::ConfigError);
  CHECK_ERROR_CODE(ExperimentConfig::parse("h = 0.05\n").levels(), ErrorCode::NonIntegerLevels);
  CHECK_ERROR_CODE(ExperimentConfig::load("/nonexistent/file.cfg"), ErrorCode::IoError);
}

TEST_CASE("builtin initial conditions") {
  const std::vector<double> xi{0.2, 0.3, 0.5};
  CHECK(hjg::builtin_initial("squared_l2")(xi) == Approx(0.38));
  CHECK(hjg::builtin_initial("min_cos")(xi) == Approx(0.2 * std::cos(0.38)));
  CHECK(hjg::builtin_initial("neg_min_cos")(xi) == Approx(-0.2 * std::cos(0.38)));
  CHECK(hjg::builtin_initial("centered_squared_l2")(std::vector<double>(3, 1.0 / 3)) == Approx(0.0));
  CHECK(hjg::builtin_initial("constant", 2.5)(xi) == 2.5);
}

TEST_CASE("time step hits T exactly without exceeding the ratio") {
  auto cfg = ExperimentConfig::parse("N = 32\nratio = 0.05\nT = 0.4\n");
  const auto mesh = cfg.make_mesh(32);
  const double tau = cfg.time_step(*mesh);
  CHECK(tau / mesh->h() <= 0.05 + 1e-15);
  CHECK(hjg::step_count(0.4, tau) == 264);
}

TEST_CASE("solve with zero steps writes the sampled initial data") {
  const auto out = scratch("solve0");
  const auto cfg = ExperimentConfig::parse("N = 8\nT = 0\n");
  const auto manifest = hjg::cmd_solve(cfg, out);
  CHECK(manifest["effective"]["steps"] == 0);
  const auto csv = slurp(out / "solution_step000000.csv");
  CHECK(line_count(csv) == 1 + 45);
  CHECK(csv.rfind("i1,i2,xi1,xi2,xi3,bary_x,bary_y,U\n", 0) == 0);
  CHECK(std::filesystem::exists(out / "manifest.json"));
}

TEST_CASE("constant initial data stays constant and output is deterministic") {
  const auto a = scratch("const_a"), b = scratch("const_b");
  const auto cfg = ExperimentConfig::parse("N = 8\nT = 0.2\ninitial = constant\ninitial_value = 0.5\nsnapshot_times = 0.1\n");
  const auto manifest = hjg::cmd_solve(cfg, a);
  hjg::cmd_solve(cfg, b);
  CHECK(manifest["snapshots"].size() == 2);
  for (const auto& s : manifest["snapshots"]) {
    const std::string file = s["file"];
    const auto text = slurp(a / file);
    CHECK(text == slurp(b / file));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) CHECK(line.substr(line.rfind(',') + 1) == "0.5");
  }
}

TEST_CASE("solve on the reference configuration stays within the uniform bound") {
  const auto cfg = ExperimentConfig::parse("N = 16\nT = 0.4\n");
  const auto manifest = hjg::cmd_solve(cfg, {});
  CHECK(manifest["worst_bound_excess"].get<double>() <= 1e-10);
  for (const auto& v : manifest["max_norm"]) CHECK(std::isfinite(v.get<double>()));
}

TEST_CASE("error pipeline pieces") {
  auto cfg = ExperimentConfig::parse("N = 4\nT = 0\n");
  const auto fine = cfg.make_mesh(8);
  const auto coarse = cfg.make_mesh(4);
  hjg::GridFunction U(fine);
  for (std::size_t r = 0; r < fine->size(); ++r) U[r] = hjg::builtin_initial("squared_l2")(fine->point(r));
  const auto restricted = hjg::restrict_to(U, *coarse);
  for (std::size_t r = 0; r < coarse->size(); ++r) CHECK(restricted[r] == Approx(hjg::builtin_initial("squared_l2")(coarse->point(r))).epsilon(1e-14));
  const auto [linf, l1] = hjg::error_norms(restricted, restricted);
  CHECK(linf == 0.0);
  CHECK(l1 == 0.0);
  CHECK_ERROR_CODE(hjg::restrict_to(U, *cfg.make_mesh(3)), ErrorCode::NonNestedMeshes);

  hjg::ErrorReport rep;
  rep.rows = {{16, 0.1, 0.005, 0.04, 0.01, {}, {}, 0.0}, {32, 0.05, 0.0025, 0.01, 0.004, {}, {}, 0.0}};
  hjg::fill_orders(rep);
  CHECK_FALSE(rep.rows[0].linf_order.has_value());
  CHECK(*rep.rows[1].linf_order == Approx(2.0));
  CHECK(*rep.rows[1].l1_order == Approx(std::log2(2.5)));
  CHECK(rep.to_csv().rfind("N,h,tau,Linf_error,Linf_order,L1_error,L1_order\n16,", 0) == 0);
}

TEST_CASE("convergence study") {
  auto bad = ExperimentConfig::parse("N = 4\nresolutions = 4, 6\nreference_N = 16\n");
  CHECK_ERROR_CODE(hjg::cmd_convergence(bad, {}), ErrorCode::NonNestedMeshes);
  const auto out = scratch("conv");
  auto cfg = ExperimentConfig::parse("N = 8\nresolutions = 8, 16\nreference_N = 64\nT = 0.2\n");
  const auto rep = hjg::cmd_convergence(cfg, out);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[1].linf_error < rep.rows[0].linf_error);
  CHECK(std::filesystem::exists(out / "convergence.csv"));
}

TEST_CASE("oracle comparison") {
  auto bad = ExperimentConfig::parse("N = 8\n");
  CHECK_ERROR_CODE(hjg::cmd_oracle_compare(bad, {}), ErrorCode::ConfigNotOracleCompatible);
  auto zero_t = ExperimentConfig::parse(
      "N = 8\nhamiltonian = zero\ntensor = logarithmic\nnoise_intensity = 1\nT = 0\nresolutions = 8, 16\n");
  for (const auto& row : hjg::cmd_oracle_compare(zero_t, {}).rows) {
    CHECK(row.linf_error <= 1e-15);
    CHECK(row.l1_error <= 1e-15);
  }
  auto cfg = ExperimentConfig::parse(
      "N = 8\nhamiltonian = zero\ntensor = logarithmic\nnoise_intensity = 1\nT = 0.4\n"
      "initial = centered_squared_l2\nresolutions = 8, 16, 32\n");
  const auto rep = hjg::cmd_oracle_compare(cfg, {});
  CHECK(rep.rows[1].linf_error < rep.rows[0].linf_error);
  CHECK(rep.rows[2].linf_error < rep.rows[1].linf_error);
}

TEST_CASE("boundary demo without boundary forcing leaves the interior identical") {
  auto cfg = ExperimentConfig::parse("N = 16\neps = 0\nhamiltonian = zero\nnoise_intensity = 0\nT = 0.2\n");
  const auto rep = hjg::cmd_boundary_demo(cfg, {});
  CHECK(std::isfinite(rep.ratio));
  // with nothing driving the interior, both runs keep U0 there
  auto dir = cfg;
  dir.boundary = "dirichlet";
  const auto a = hjg::run_config(dir, 16);
  const auto b = hjg::run_config(cfg, 16);
  for (std::size_t r : a.mesh->interior()) CHECK(a.final_values()[r] == b.final_values()[r]);
}

TEST_CASE("boundary quotient sees a jump at the boundary") {
  auto cfg = ExperimentConfig::parse("N = 8\n");
  const auto mesh = cfg.make_mesh(8);
  hjg::GridFunction U(mesh, 1.0);
  CHECK(hjg::boundary_quotient(U) == 0.0);
  U[*mesh->rank_of(std::vector<int>{0, 1})] = 0.0;
  CHECK(hjg::boundary_quotient(U) == Approx(1.0 / mesh->h()));
}
