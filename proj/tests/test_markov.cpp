#include <cmath>
#include <random>

#include "doctest.h"
#include "hjgraph/markov.hpp"
#include "test_util.hpp"

using doctest::Approx;
using hjg::Graph;

namespace {

// e^{tA} by scaling and squaring of a truncated Taylor series.
Eigen::MatrixXd expm_oracle(const Eigen::MatrixXd& A, double t) {
  const int m = 10;
  const Eigen::MatrixXd B = A * (t / std::pow(2.0, m));
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::MatrixXd E = term;
  for (int k = 1; k <= 18; ++k) {
    term = term * B / k;
    E += term;
  }
  for (int i = 0; i < m; ++i) E = E * E;
  return E;
}

double squared_l2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("generator examples") {
  Eigen::MatrixXd tri(3, 3);
  tri << -2, 1, 1, 1, -2, 1, 1, 1, -2;
  CHECK(hjg::generator(Graph::complete(3)).isApprox(tri));
  Eigen::MatrixXd edge(2, 2);
  edge << -1, 1, 1, -1;
  CHECK(hjg::generator(Graph::complete(2)).isApprox(edge));
  Eigen::MatrixXd path(3, 3);
  path << -1, 1, 0, 1, -2, 1, 0, 1, -1;
  CHECK(hjg::generator(Graph::path(3)).isApprox(path));
  const Graph g(4, {0, 0.3, 0, 1.7, 0.3, 0, 2.1, 0, 0, 2.1, 0, 0.9, 1.7, 0, 0.9, 0});
  const auto A = hjg::generator(g);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(A.row(i).sum()) <= 1e-15);
  CHECK(A.isApprox(A.transpose()));
}

TEST_CASE("transition examples") {
  const auto A = hjg::generator(Graph::complete(3));
  CHECK((hjg::transition(A, 0.0) - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3);
  for (double t : {0.1, 0.4, 1.3}) {
    const Eigen::MatrixXd closed = ones + std::exp(-3 * t) * (Eigen::MatrixXd::Identity(3, 3) - ones);
    const auto P = hjg::transition(A, t);
    CHECK((P - closed).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((P - expm_oracle(A, t)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK((hjg::transition(A, 50.0) - ones).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_ERROR_CODE(hjg::transition(A, -1.0), hjg::ErrorCode::BadParameter);
}

TEST_CASE("semigroup, stochasticity, mass conservation and interior preservation") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Graph g(4, {0, 0.3, 0, 1.7, 0.3, 0, 2.1, 0, 0, 2.1, 0, 0.9, 1.7, 0, 0.9, 0});
  const auto A = hjg::generator(g);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng), s = u(rng);
    const auto Pt = hjg::transition(A, t), Ps = hjg::transition(A, s), Pts = hjg::transition(A, t + s);
    CHECK((Pts - Pt * Ps).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((Pt - expm_oracle(A, t)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int r = 0; r < 4; ++r) CHECK(std::abs(Pt.row(r).sum() - 1.0) <= 1e-10);
    CHECK(Pt.minCoeff() >= -1e-12);
    const auto xi = testutil::random_simplex(rng, 4);
    const Eigen::Map<const Eigen::VectorXd> x(xi.data(), 4);
    const Eigen::VectorXd y = Pt * x;
    CHECK(std::abs(y.sum() - 1.0) <= 1e-12);
    // min coordinate bound from the smallest transition probability
    if (t > 0.05) CHECK(y.minCoeff() >= Pt.minCoeff() * x.minCoeff() * 0.999);
  }
}

TEST_CASE("exact noise solution examples") {
  const auto A = hjg::generator(Graph::complete(3));
  const std::vector<double> uni(3, 1.0 / 3);
  CHECK(hjg::exact_noise_solution(A, squared_l2, 0.9, uni) == Approx(1.0 / 3));
  const std::vector<double> xi{0.2, 0.3, 0.5};
  CHECK(hjg::exact_noise_solution(A, squared_l2, 0.0, xi) == Approx(0.38));
  double expect = 0.0;
  for (double v : xi) {
    const double y = 1.0 / 3 + std::exp(-1.2) * (v - 1.0 / 3);
    expect += y * y;
  }
  CHECK(hjg::exact_noise_solution(A, squared_l2, 0.4, xi) == Approx(expect).epsilon(1e-12));
}
