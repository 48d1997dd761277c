#include "hjgraph/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hjgraph/error.hpp"
#include "hjgraph/markov.hpp"

namespace hjg {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

void prepare(const std::filesystem::path& out) {
  if (out.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out.string() + "': " + ec.message());
}

std::string snapshot_name(const Snapshot& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "solution_step%06d.csv", s.step);
  return buf;
}

void check_nested(const ExperimentConfig& cfg) {
  for (int n : cfg.resolutions) {
    if (n >= cfg.reference_N || cfg.reference_N % n != 0) {
      throw Error(ErrorCode::NonNestedMeshes, "reference N = " + std::to_string(cfg.reference_N) +
                                                  " is not a larger multiple of N = " + std::to_string(n));
    }
  }
}

}  // namespace

RunOutput run_config(const ExperimentConfig& cfg, int levels, const std::vector<double>& snapshot_times) {
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  out.mesh = cfg.make_mesh(levels);
  out.scheme = cfg.make_scheme_config(*out.mesh);
  DiscreteHamiltonian G = cfg.make_discrete_hamiltonian(*out.mesh);
  if (cfg.strict_cfl && out.scheme.scheme == SchemeKind::Explicit) {
    out.cfl = cfl_validate(G, *out.mesh, out.scheme.tau / out.mesh->h(), cfg.lf_radius, 400, cfg.seed);
    out.scheme.cfl_ratio_limit = out.cfl->ratio_bound;
  }
  SchemeEngine engine(out.mesh, std::move(G), cfg.make_potential(), out.scheme);
  std::vector<double> probes = snapshot_times;
  if (std::find(probes.begin(), probes.end(), cfg.T) == probes.end()) probes.push_back(cfg.T);
  std::sort(probes.begin(), probes.end());
  out.result = engine.run(cfg.make_initial(), probes);
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string ErrorReport::to_csv() const {
  std::ostringstream os;
  os << "N,h,tau,Linf_error,Linf_order,L1_error,L1_order\n";
  for (const auto& r : rows) {
    os << r.N << ',' << fmt(r.h) << ',' << fmt(r.tau) << ',' << fmt(r.linf_error) << ','
       << (r.linf_order ? fmt(*r.linf_order) : "") << ',' << fmt(r.l1_error) << ','
       << (r.l1_order ? fmt(*r.l1_order) : "") << '\n';
  }
  return os.str();
}

nlohmann::json ErrorReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"N", r.N},
                         {"h", r.h},
                         {"tau", r.tau},
                         {"Linf_error", r.linf_error},
                         {"L1_error", r.l1_error},
                         {"Linf_order", r.linf_order ? nlohmann::json(*r.linf_order) : nlohmann::json(nullptr)},
                         {"L1_order", r.l1_order ? nlohmann::json(*r.l1_order) : nlohmann::json(nullptr)},
                         {"runtime_seconds", r.runtime_seconds}});
  }
  return rows_json;
}

void fill_orders(ErrorReport& report) {
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    auto& r = report.rows[i];
    r.linf_order.reset();
    r.l1_order.reset();
    if (i == 0) continue;
    const auto& p = report.rows[i - 1];
    const double scale = std::log(static_cast<double>(r.N) / p.N);
    r.linf_order = std::log(p.linf_error / r.linf_error) / scale;
    r.l1_order = std::log(p.l1_error / r.l1_error) / scale;
  }
}

std::pair<double, double> error_norms(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorCode::BadDimension, "error norms need equal nonempty arrays");
  double mx = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = std::abs(a[i] - b[i]);
    mx = std::max(mx, e);
    sum += e;
  }
  return {mx, sum / static_cast<double>(a.size())};
}

std::vector<double> restrict_to(const GridFunction& fine, const Mesh& coarse) {
  const Mesh& fm = fine.mesh();
  if (fm.d() != coarse.d() || std::abs(fm.eps() - coarse.eps()) > 1e-15 || coarse.levels() > fm.levels() ||
      fm.levels() % coarse.levels() != 0) {
    throw Error(ErrorCode::NonNestedMeshes, "mesh with N = " + std::to_string(coarse.levels()) +
                                                " is not nested in N = " + std::to_string(fm.levels()));
  }
  const int factor = fm.levels() / coarse.levels();
  std::vector<double> out(coarse.size());
  std::vector<int> idx(static_cast<std::size_t>(coarse.d() - 1));
  for (std::size_t r = 0; r < coarse.size(); ++r) {
    const auto ci = coarse.index(r);
    for (std::size_t l = 0; l < idx.size(); ++l) idx[l] = ci[l] * factor;
    out[r] = fine[*fm.rank_of(idx)];
  }
  return out;
}

std::string snapshot_csv(const GridFunction& U) {
  const Mesh& mesh = U.mesh();
  const int d = mesh.d();
  std::ostringstream os;
  for (int l = 1; l < d; ++l) os << 'i' << l << ',';
  for (int l = 1; l <= d; ++l) os << "xi" << l << ',';
  if (d == 3) os << "bary_x,bary_y,";
  os << "U\n";
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  for (std::size_t r = 0; r < mesh.size(); ++r) {
    for (int i : mesh.index(r)) os << i << ',';
    const auto xi = mesh.point(r);
    for (double x : xi) os << fmt(x) << ',';
    if (d == 3) os << fmt(xi[1] + xi[2] / 2.0) << ',' << fmt(half_sqrt3 * xi[2]) << ',';
    os << fmt(U[r]) << '\n';
  }
  return os.str();
}

nlohmann::json solve_manifest(const ExperimentConfig& cfg, const RunOutput& run) {
  nlohmann::json j;
  j["config"] = cfg.to_json();
  j["effective"] = {{"N", run.mesh->levels()},
                    {"h", run.mesh->h()},
                    {"tau", run.scheme.tau},
                    {"ratio", run.scheme.tau / run.mesh->h()},
                    {"steps", run.result.steps},
                    {"nodes", run.mesh->size()},
                    {"interior_nodes", run.mesh->interior().size()}};
  j["max_norm"] = run.result.max_norm;
  j["bound"] = run.result.bound;
  j["worst_bound_excess"] = run.result.worst_bound_excess();
  j["implicit_residuals"] = run.result.implicit_residuals;
  j["implicit_iterations"] = run.result.implicit_iterations;
  if (run.cfl) {
    j["cfl"] = {{"lipschitz_estimate", run.cfl->lipschitz_estimate},
                {"ratio_bound", run.cfl->ratio_bound},
                {"ratio", run.cfl->ratio},
                {"passes", run.cfl->passes}};
  }
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : run.result.snapshots) snaps.push_back({{"time", s.time}, {"step", s.step}, {"file", snapshot_name(s)}});
  j["snapshots"] = snaps;
  j["runtime_seconds"] = run.runtime_seconds;
  return j;
}

nlohmann::json cmd_solve(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  prepare(out);
  const RunOutput run = run_config(cfg, cfg.levels(), cfg.snapshot_times);
  const nlohmann::json manifest = solve_manifest(cfg, run);
  if (!out.empty()) {
    for (const auto& s : run.result.snapshots) write_file(out / snapshot_name(s), snapshot_csv(s.values));
    write_file(out / "manifest.json", manifest.dump(2) + "\n");
  }
  return manifest;
}

ErrorReport cmd_convergence(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  check_nested(cfg);
  prepare(out);
  const RunOutput reference = run_config(cfg, cfg.reference_N);
  ErrorReport report;
  for (int n : cfg.resolutions) {
    const RunOutput run = run_config(cfg, n);
    const auto restricted = restrict_to(reference.final_values(), *run.mesh);
    const auto [linf, l1] = error_norms(run.final_values().values(), restricted);
    report.rows.push_back({n, run.mesh->h(), run.scheme.tau, linf, l1, std::nullopt, std::nullopt, run.runtime_seconds});
  }
  fill_orders(report);
  if (!out.empty()) {
    write_file(out / "convergence.csv", report.to_csv());
    nlohmann::json j;
    j["config"] = cfg.to_json();
    j["reference"] = {{"N", cfg.reference_N},
                      {"tau", reference.scheme.tau},
                      {"steps", reference.result.steps},
                      {"worst_bound_excess", reference.result.worst_bound_excess()},
                      {"runtime_seconds", reference.runtime_seconds}};
    j["rows"] = report.to_json();
    write_file(out / "manifest.json", j.dump(2) + "\n");
  }
  return report;
}

ErrorReport cmd_oracle_compare(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  std::string why;
  if (cfg.hamiltonian != "zero") why = "hamiltonian must be zero";
  else if (cfg.potential != "zero" && cfg.potential_value != 0.0) why = "potential must be zero";
  else if (cfg.tensor != "logarithmic") why = "tensor must be logarithmic";
  else if (cfg.noise_intensity != 1.0) why = "noise_intensity must be 1";
  if (!why.empty()) throw Error(ErrorCode::ConfigNotOracleCompatible, why);
  prepare(out);

  const Eigen::MatrixXd trans = transition(generator(cfg.make_graph()), cfg.T);
  const ScalarField u0 = cfg.make_initial();
  ErrorReport report;
  for (int n : cfg.resolutions) {
    const RunOutput run = run_config(cfg, n);
    const Mesh& mesh = *run.mesh;
    std::vector<double> exact(mesh.size());
    for (std::size_t r = 0; r < mesh.size(); ++r) exact[r] = exact_noise_solution_with(trans, u0, mesh.point(r));
    const auto [linf, l1] = error_norms(run.final_values().values(), exact);
    report.rows.push_back({n, mesh.h(), run.scheme.tau, linf, l1, std::nullopt, std::nullopt, run.runtime_seconds});
  }
  fill_orders(report);
  if (!out.empty()) {
    write_file(out / "oracle.csv", report.to_csv());
    nlohmann::json j;
    j["config"] = cfg.to_json();
    j["rows"] = report.to_json();
    write_file(out / "manifest.json", j.dump(2) + "\n");
  }
  return report;
}

nlohmann::json BoundaryDemoReport::to_json() const {
  return {{"dirichlet_quotient", dirichlet_quotient},
          {"extrapolation_quotient", extrapolation_quotient},
          {"ratio", ratio}};
}

double boundary_quotient(const GridFunction& U) {
  const Mesh& mesh = U.mesh();
  double best = 0.0;
  for (std::size_t r : mesh.interior()) {
    bool adjacent = false;
    for (std::size_t s = 0; s < mesh.slot_count() && !adjacent; ++s) {
      for (int dir : {1, -1}) {
        const std::int64_t y = mesh.neighbor(r, s, dir);
        if (y >= 0 && mesh.is_boundary(static_cast<std::size_t>(y))) adjacent = true;
      }
    }
    if (!adjacent) continue;
    for (std::size_t s = 0; s < mesh.slot_count(); ++s) {
      for (int dir : {1, -1}) {
        const std::int64_t y = mesh.neighbor(r, s, dir);
        if (y < 0) continue;
        best = std::max(best, std::abs(U[static_cast<std::size_t>(y)] - U[r]) / mesh.h());
      }
    }
  }
  return best;
}

BoundaryDemoReport cmd_boundary_demo(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  prepare(out);
  ExperimentConfig dir = cfg;
  dir.boundary = "dirichlet";
  ExperimentConfig ext = cfg;
  ext.boundary = "linear";
  const RunOutput a = run_config(dir, dir.levels());
  const RunOutput b = run_config(ext, ext.levels());
  BoundaryDemoReport rep;
  rep.dirichlet_quotient = boundary_quotient(a.final_values());
  rep.extrapolation_quotient = boundary_quotient(b.final_values());
  rep.ratio = rep.extrapolation_quotient > 0.0 ? rep.dirichlet_quotient / rep.extrapolation_quotient
                                               : std::numeric_limits<double>::infinity();
  if (!out.empty()) {
    write_file(out / "dirichlet.csv", snapshot_csv(a.final_values()));
    write_file(out / "extrapolation.csv", snapshot_csv(b.final_values()));
    nlohmann::json j;
    j["config"] = cfg.to_json();
    j["report"] = rep.to_json();
    j["dirichlet_run"] = solve_manifest(dir, a);
    j["extrapolation_run"] = solve_manifest(ext, b);
    write_file(out / "boundary_demo.json", j.dump(2) + "\n");
  }
  return rep;
}

}  // namespace hjg
