#include "hjgraph/markov.hpp"

#include <cmath>

#include "hjgraph/error.hpp"

namespace hjg {

Eigen::MatrixXd generator(const Graph& g) {
  const int d = g.d();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  for (const Edge& e : g.edges()) {
    A(e.j, e.k) = e.weight;
    A(e.k, e.j) = e.weight;
  }
  for (int j = 0; j < d; ++j) A(j, j) = -A.row(j).sum();
  return A;
}

Eigen::MatrixXd transition(const Eigen::MatrixXd& gen, double t) {
  if (gen.rows() != gen.cols()) throw Error(ErrorCode::BadDimension, "generator must be square");
  if (!std::isfinite(t) || t < 0.0) throw Error(ErrorCode::BadParameter, "time must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gen);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NonFiniteValue, "eigendecomposition failed");
  const Eigen::VectorXd expd = (eig.eigenvalues() * t).array().exp();
  return eig.eigenvectors() * expd.asDiagonal() * eig.eigenvectors().transpose();
}

double exact_noise_solution_with(const Eigen::MatrixXd& trans, const ScalarField& U0, std::span<const double> xi) {
  if (static_cast<Eigen::Index>(xi.size()) != trans.rows()) {
    throw Error(ErrorCode::BadDimension, "point has wrong dimension");
  }
  const Eigen::Map<const Eigen::VectorXd> x(xi.data(), static_cast<Eigen::Index>(xi.size()));
  // A is symmetric, so the forward and backward flows agree
  const Eigen::VectorXd y = trans * x;
  return U0(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

double exact_noise_solution(const Eigen::MatrixXd& gen, const ScalarField& U0, double t, std::span<const double> xi) {
  return exact_noise_solution_with(transition(gen, t), U0, xi);
}

}  // namespace hjg
