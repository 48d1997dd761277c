#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hjgraph/graph.hpp"
#include "hjgraph/scheme.hpp"

namespace hjg {

/// Generator A of the continuous-time random walk on the graph:
/// off-diagonal ω_{j,k}, diagonal −Σ_k ω_{j,k}.
Eigen::MatrixXd generator(const Graph& g);

/// e^{tA} for symmetric A, via a symmetric eigendecomposition.
Eigen::MatrixXd transition(const Eigen::MatrixXd& gen, double t);

/// Pure-noise solution U(t, ξ) = U₀(e^{tA}ξ). Exact for the logarithmic
/// tensor with unit noise intensity, zero Hamiltonian and zero potential.
double exact_noise_solution(const Eigen::MatrixXd& gen, const ScalarField& U0, double t, std::span<const double> xi);

/// Same, with the transition matrix already computed.
double exact_noise_solution_with(const Eigen::MatrixXd& trans, const ScalarField& U0, std::span<const double> xi);

}  // namespace hjg
