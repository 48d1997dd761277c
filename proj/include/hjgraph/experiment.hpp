#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hjgraph/config.hpp"
#include "hjgraph/scheme.hpp"

namespace hjg {

/// One finished run of the scheme on a given mesh.
struct RunOutput {
  std::shared_ptr<const Mesh> mesh;
  SchemeConfig scheme;
  RunResult result;
  std::optional<CflReport> cfl;
  double runtime_seconds = 0.0;

  /// Values at T (the last snapshot).
  const GridFunction& final_values() const { return result.snapshots.back().values; }
};

/// Runs `cfg` on the mesh with `levels` levels. Snapshots are taken at
/// `snapshot_times` and always at T. With strict_cfl the explicit scheme is
/// refused (CflViolation) when τ/h exceeds the estimated CFL bound.
RunOutput run_config(const ExperimentConfig& cfg, int levels, const std::vector<double>& snapshot_times = {});

struct ErrorRow {
  int N;
  double h;
  double tau;
  double linf_error;
  double l1_error;
  std::optional<double> linf_order;
  std::optional<double> l1_order;
  double runtime_seconds;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;

  /// Header plus one line per row; runtime is left out so that identical
  /// inputs give byte-identical files.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Fills the order columns: log(e_prev/e)/log(N/N_prev), which is
/// log₂(e_N/e_{2N}) when resolutions double.
void fill_orders(ErrorReport& report);

/// Max and mean absolute difference over two equally sized arrays.
std::pair<double, double> error_norms(std::span<const double> a, std::span<const double> b);

/// Values of `fine` at the nodes of `coarse`, by the exact index map
/// i ↦ i·(N_fine/N_coarse). Throws NonNestedMeshes unless N_coarse divides N_fine.
std::vector<double> restrict_to(const GridFunction& fine, const Mesh& coarse);

/// Writes one CSV row per mesh node: index, ξ, barycentric plot coordinates
/// (d = 3 only) and the value.
std::string snapshot_csv(const GridFunction& U);

nlohmann::json solve_manifest(const ExperimentConfig& cfg, const RunOutput& run);

/// Writes snapshot CSVs and manifest.json into `out` (if not empty); returns the manifest.
nlohmann::json cmd_solve(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// Error table against a run on reference_N with the same scheme.
ErrorReport cmd_convergence(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// Error table against the exact pure-noise solution. Throws
/// ConfigNotOracleCompatible unless H = 0, F = 0, logarithmic tensor, λ₁ = 1.
ErrorReport cmd_oracle_compare(const ExperimentConfig& cfg, const std::filesystem::path& out);

struct BoundaryDemoReport {
  double dirichlet_quotient;
  double extrapolation_quotient;
  /// dirichlet_quotient / extrapolation_quotient.
  double ratio;
  nlohmann::json to_json() const;
};

/// max |U(y) − U(x)|/h over interior nodes x with a boundary neighbor and
/// their lattice neighbors y.
double boundary_quotient(const GridFunction& U);

/// Runs `cfg` with Dirichlet(dirichlet_value) and with linear extrapolation.
BoundaryDemoReport cmd_boundary_demo(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace hjg
