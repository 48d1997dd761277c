#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hjgraph/hamiltonian.hpp"
#include "hjgraph/scheme.hpp"
#include "hjgraph/simplex_mesh.hpp"

namespace hjg {

/// Flat key = value experiment description.
///
/// One key per line, '#' starts a comment, lists are comma separated.
/// Unknown keys, malformed values and unknown builtin names are ConfigError.
struct ExperimentConfig {
  // graph
  int d = 3;
  std::string graph = "complete";  // complete | path | matrix
  double edge_weight = 1.0;
  std::vector<double> weights;     // row-major d*d, for graph = matrix

  // mesh
  std::optional<int> N;
  std::optional<double> h;
  double eps = 0.01;

  // time
  std::optional<double> tau;
  double ratio = 0.05;
  double T = 0.4;

  // operators
  std::string tensor = "average";  // average | logarithmic | harmonic | convex
  std::array<double, 3> tensor_weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::string hamiltonian = "power";  // zero | power
  double kappa = 2.0;
  std::string coefficient = "inverse_information";  // inverse_information | inverse_theta | log | constant
  double theta = 1.0;
  double coefficient_value = 1.0;
  double noise_intensity = 0.5;
  std::string discrete_hamiltonian = "osher_sethian";  // osher_sethian | lax_friedrichs
  std::vector<double> lf_gamma;                        // empty: estimated
  double lf_radius = 4.0;

  // scheme
  std::string boundary = "linear";  // linear | constant | dirichlet
  double dirichlet_value = 0.0;
  std::string scheme = "explicit";  // explicit | implicit
  int max_iters = 10;
  double tol = 1e-6;
  std::string implicit_solver = "picard";  // picard | nodewise

  // data
  std::string initial = "squared_l2";
  double initial_value = 1.0;  // for initial = constant
  std::string potential = "zero";  // zero | constant
  double potential_value = 0.0;
  std::uint64_t seed = 1;

  // studies
  std::vector<int> resolutions{16, 32, 64, 128};
  int reference_N = 512;
  std::vector<double> snapshot_times;
  bool strict_cfl = false;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Throws ConfigError on out-of-range values or unknown builtin names.
  void validate() const;

  /// Every effective parameter, defaults included.
  nlohmann::json to_json() const;

  Graph make_graph() const;
  MetricTensor make_tensor() const;
  Hamiltonian make_hamiltonian() const;
  ScalarField make_initial() const;
  ScalarField make_potential() const;

  /// Level count of the primary mesh (from N, or from h).
  int levels() const;
  std::shared_ptr<const Mesh> make_mesh(int levels) const;

  /// Time step for a mesh: tau if given, otherwise T/ceil(T/(ratio·h)) so
  /// that T is hit exactly with τ/h no larger than the requested ratio.
  double time_step(const Mesh& mesh) const;

  /// Discrete Hamiltonian on `mesh`; Lax–Friedrichs γ is estimated on the
  /// interior mesh nodes when not given.
  DiscreteHamiltonian make_discrete_hamiltonian(const Mesh& mesh) const;
  SchemeConfig make_scheme_config(const Mesh& mesh) const;
};

/// Names of the builtin initial conditions.
std::vector<std::string> builtin_initial_names();
ScalarField builtin_initial(const std::string& name, double value = 1.0);

}  // namespace hjg
