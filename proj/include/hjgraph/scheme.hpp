#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hjgraph/calculus.hpp"
#include "hjgraph/hamiltonian.hpp"
#include "hjgraph/simplex_mesh.hpp"

namespace hjg {

/// Scalar function on simplex points (initial data, potential, boundary data).
using ScalarField = std::function<double(std::span<const double>)>;

/// Values attached to every node of a mesh, indexed by rank.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const Mesh> mesh, std::vector<double> values);
  explicit GridFunction(std::shared_ptr<const Mesh> mesh, double fill = 0.0);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t rank) const { return values_[rank]; }
  double& operator[](std::size_t rank) { return values_[rank]; }

  double sup_norm() const;
  bool all_finite() const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> values_;
};

enum class BoundaryMode { Constant, Linear, Dirichlet };

struct BoundaryCondition {
  BoundaryMode mode = BoundaryMode::Linear;
  /// Only read in Dirichlet mode.
  ScalarField dirichlet;

  static BoundaryCondition constant() { return {BoundaryMode::Constant, {}}; }
  static BoundaryCondition linear() { return {BoundaryMode::Linear, {}}; }
  static BoundaryCondition dirichlet_value(ScalarField f) { return {BoundaryMode::Dirichlet, std::move(f)}; }
};

/// Boundary values as functions of the interior values.
///
/// Boundary nodes are processed in breadth-first layers away from the
/// interior. In layer k a node may only read nodes from layers < k (layer 0
/// is the interior), so the result is independent of storage order.
/// Constant mode copies the nearest defined node (every unit lattice step has
/// the same l² length, ties go to the smallest rank). Linear mode reflects
/// through the nearest defined node, U(y) = 2U(a) − U(b) with a = y + m and
/// b = y + 2m, and falls back to Constant when no such pair exists.
class BoundaryFiller {
 public:
  BoundaryFiller(const Mesh& mesh, BoundaryCondition bc);

  BoundaryMode mode() const noexcept { return mode_; }

  /// Overwrites every boundary slot of `values`.
  void fill(std::span<double> values) const;

  /// Value the rule for boundary node `rank` assigns given `values`. The
  /// source nodes of the rule must already hold defined values.
  double extrapolate(std::span<const double> values, std::size_t rank) const;

  struct Rule {
    std::size_t target;
    std::int64_t near = -1;  // a
    std::int64_t far = -1;   // b, -1 for a plain copy
    double value = 0.0;      // Dirichlet data
    int layer = 0;
  };
  const std::vector<Rule>& rules() const noexcept { return rules_; }

 private:
  BoundaryMode mode_;
  std::vector<Rule> rules_;
  std::vector<std::int64_t> rule_of_rank_;
};

enum class SchemeKind { Explicit, Implicit };

/// Picard sweeps U ← Uⁿ − τF − τ𝒢(D⁺U, D⁻U) are the default and only
/// contract while τ/h is inside the explicit CFL range. Nodewise solves, at
/// every interior node, the scalar equation of the implicit scheme with the
/// neighbors frozen (a nonlinear Jacobi sweep). It has the same fixed point
/// and contracts for any τ/h because the local equation is strictly
/// increasing in the center value.
enum class ImplicitSolver { Picard, Nodewise };

struct ImplicitOptions {
  int max_iters = 10;
  double tol = 1e-6;
  ImplicitSolver solver = ImplicitSolver::Picard;
};

struct SchemeConfig {
  double tau = 0.0;
  double T = 0.0;
  BoundaryCondition boundary = BoundaryCondition::linear();
  SchemeKind scheme = SchemeKind::Explicit;
  ImplicitOptions implicit;
  /// When set, the explicit scheme refuses τ/h above this ratio.
  std::optional<double> cfl_ratio_limit;
};

/// N_T = T/τ; throws NonIntegerSteps unless T/τ is within 1e−9 of an integer.
int step_count(double T, double tau);

struct ImplicitStepResult {
  GridFunction values;
  double residual;
  int iterations;
};

struct Snapshot {
  double time;
  int step;
  GridFunction values;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  /// sup over all nodes of |U^n|, n = 0..N_T.
  std::vector<double> max_norm;
  /// ‖U⁰‖_∞ + t_n‖F‖_∞, n = 0..N_T.
  std::vector<double> bound;
  std::vector<double> implicit_residuals;
  std::vector<int> implicit_iterations;
  double tau = 0.0;
  int steps = 0;

  /// Largest max_norm[n] − bound[n]; ≤ 1e−10 means the run stayed bounded.
  double worst_bound_excess() const;
  bool within_bound(double tol = 1e-10) const { return worst_bound_excess() <= tol; }
};

/// Explicit (Jacobi-style) and fully implicit time stepping on one mesh.
///
/// Everything that depends on ξ only (coefficient, metric weights, upwind
/// noise coefficients, potential, neighbor ranks) is cached per interior node
/// at construction; a step reads the frozen previous iterate and writes a new
/// array, then refreshes the boundary slots.
class SchemeEngine {
 public:
  SchemeEngine(std::shared_ptr<const Mesh> mesh, DiscreteHamiltonian hamiltonian, ScalarField potential,
               SchemeConfig config);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const DiscreteHamiltonian& hamiltonian() const noexcept { return hamiltonian_; }
  const SchemeConfig& config() const noexcept { return config_; }
  const BoundaryFiller& boundary() const noexcept { return filler_; }
  int steps() const noexcept { return steps_; }
  /// max over mesh nodes of |F|.
  double potential_sup() const noexcept { return potential_sup_; }

  /// U⁰ at every node; Dirichlet boundaries take their prescribed values.
  GridFunction sample(const ScalarField& initial) const;

  /// (D⁺U, D⁻U) at interior node `rank`; entry (j,k) = sqrt(ω_{j,k})·ΔU/h.
  std::pair<SkewField, SkewField> difference_matrices(const GridFunction& U, std::size_t rank) const;

  GridFunction explicit_step(const GridFunction& U) const;
  ImplicitStepResult implicit_step(const GridFunction& U) const;
  GridFunction step(const GridFunction& U) const;

  /// Advances N_T steps from sampled initial data. Snapshots are taken at the
  /// steps nearest to `probe_times` (and always at T when probes are empty).
  RunResult run(const ScalarField& initial, std::span<const double> probe_times = {}) const;
  RunResult run_from(GridFunction U0, std::span<const double> probe_times = {}) const;

  /// One explicit update at interior node position `pos` (index into
  /// mesh().interior()), reading `u`.
  double explicit_update(std::span<const double> u, std::size_t pos) const noexcept;

  /// Root u of u − base + τF + τ𝒢(D⁺, D⁻) = 0 at interior position `pos`,
  /// where the differences use `u` for the center and `read` elsewhere.
  double local_solve(std::span<const double> read, double base, std::size_t pos) const noexcept;

 private:
  void check_ratio() const;
  void sweep(std::span<const double> read, std::span<const double> base, std::span<double> out) const;
  void nodewise_sweep(std::span<const double> read, std::span<const double> base, std::span<double> out) const;
  double increment(std::span<const double> u, double center, std::size_t pos) const noexcept;

  std::shared_ptr<const Mesh> mesh_;
  DiscreteHamiltonian hamiltonian_;
  SchemeConfig config_;
  BoundaryFiller filler_;
  int steps_;
  std::size_t edges_;
  double inv_h_;
  double potential_sup_ = 0.0;
  // per interior position
  std::vector<double> coeff_;
  std::vector<double> g_;
  std::vector<double> noise_;
  std::vector<double> potential_;
  std::vector<std::int64_t> fwd_;
  std::vector<std::int64_t> bwd_;
  std::vector<double> edge_scale_;  // sqrt(ω_e)/h
};

struct CflReport {
  double lipschitz_estimate;
  double ratio_bound;
  double ratio;
  bool passes;
};

/// Estimates the local Lipschitz constant of G over ‖P‖,‖Q‖ ≤ dR at sampled
/// interior mesh points and compares τ/h with 1/(2C(d²−d)‖sqrt ω‖_∞).
CflReport cfl_validate(const DiscreteHamiltonian& G, const Mesh& mesh, double ratio, double radius,
                       int samples = 400, std::uint64_t seed = 11);

}  // namespace hjg
