#include <cmath>
#include <random>

#include "doctest.h"
#include "hjgraph/calculus.hpp"
#include "test_util.hpp"

using doctest::Approx;
using hjg::ErrorCode;
using hjg::Graph;
using hjg::MetricTensor;
using hjg::SkewField;

namespace {

std::vector<MetricTensor> all_tensors() {
  return {MetricTensor::average(), MetricTensor::logarithmic(), MetricTensor::harmonic(),
          MetricTensor::convex({0.2, 0.5, 0.3})};
}

SkewField random_field(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  SkewField p(d);
  for (double& v : p.upper()) v = n(rng);
  return p;
}

}  // namespace

TEST_CASE("skew field storage and norms") {
  SkewField p(3, {1.0, -2.0, 0.5});
  CHECK(p.at(0, 1) == 1.0);
  CHECK(p.at(1, 0) == -1.0);
  CHECK(p.at(2, 1) == -0.5);
  CHECK(p.at(1, 1) == 0.0);
  CHECK(p.l2_norm() == Approx(std::sqrt(2.0 * 5.25)));
  CHECK(p.sup_norm() == 2.0);
  p.set(2, 0, 3.0);
  CHECK(p.at(0, 2) == -3.0);
}

TEST_CASE("metric tensor examples") {
  CHECK(hjg::metric_eval(MetricTensor::average(), 0.2, 0.3) == Approx(0.25));
  CHECK(hjg::metric_eval(MetricTensor::logarithmic(), 0.2, 0.3) == Approx(0.1 / std::log(1.5)).epsilon(1e-12));
  CHECK(hjg::metric_eval(MetricTensor::logarithmic(), 0.3, 0.3) == Approx(0.3));
  CHECK(hjg::metric_eval(MetricTensor::logarithmic(), 0.0, 0.3) == 0.0);
  CHECK(hjg::metric_eval(MetricTensor::harmonic(), 0.7, 0.0) == 0.0);
  CHECK(hjg::metric_eval(MetricTensor::harmonic(), 0.2, 0.3) == Approx(2 * 0.06 / 0.5));
  CHECK_ERROR_CODE(hjg::metric_eval(MetricTensor::average(), -0.1, 0.3), ErrorCode::NegativeArgument);
  CHECK_ERROR_CODE(MetricTensor::convex({0.5, 0.6, -0.1}), ErrorCode::BadTensorWeights);
  CHECK_ERROR_CODE(MetricTensor::convex({0.5, 0.6, 0.1}), ErrorCode::BadTensorWeights);
}

TEST_CASE("metric tensor properties on random samples") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  for (const auto& mt : all_tensors()) {
    for (int i = 0; i < 1000; ++i) {
      const double t = u(rng), r = u(rng), t2 = u(rng), r2 = u(rng), lam = u(rng);
      const double g = mt.eval(t, r);
      CHECK(g == Approx(mt.eval(r, t)).epsilon(1e-14));
      CHECK(g >= std::min(t, r) - 1e-12);
      CHECK(g <= std::max(t, r) + 1e-12);
      CHECK(std::abs(mt.eval(lam * t, lam * r) - lam * g) <= 1e-12);
      CHECK(mt.eval((t + t2) / 2, (r + r2) / 2) >= (g + mt.eval(t2, r2)) / 2 - 1e-12);
    }
  }
}

TEST_CASE("logarithmic identity") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  const auto mt = MetricTensor::logarithmic();
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng), r = u(rng);
    CHECK(std::abs(mt.eval(t, r) * (std::log(t) - std::log(r)) - (t - r)) <= 1e-12);
    CHECK(std::abs(mt.log_product(t, r) - (t - r)) <= 1e-15);
  }
  CHECK(mt.log_product(0.0, 0.4) == -0.4);
  CHECK(MetricTensor::harmonic().log_product(0.0, 0.4) == 0.0);
  CHECK_ERROR_CODE(MetricTensor::average().log_product(0.0, 0.4), ErrorCode::SingularLogAtBoundary);
}

TEST_CASE("graph gradient examples") {
  auto p = hjg::graph_gradient(Graph::complete(3), std::vector<double>{1, 0, 0});
  CHECK(p.at(0, 1) == 1.0);
  CHECK(p.at(0, 2) == 1.0);
  CHECK(p.at(1, 2) == 0.0);
  p = hjg::graph_gradient(Graph::complete(4), std::vector<double>(4, 2.5));
  CHECK(p.sup_norm() == 0.0);
  p = hjg::graph_gradient(Graph::path(3), std::vector<double>{0, 1, 3});
  CHECK(p.at(0, 1) == -1.0);
  CHECK(p.at(1, 2) == -2.0);
  CHECK(p.at(0, 2) == 0.0);
}

TEST_CASE("inner product examples") {
  const Graph tri = Graph::complete(3);
  const std::vector<double> uni(3, 1.0 / 3);
  SkewField v(3, {1, 0, 0});
  CHECK(hjg::inner_product(tri, MetricTensor::average(), uni, v, v) == Approx(1.0 / 3));
  CHECK(hjg::inner_product(tri, MetricTensor::average(), uni, v, SkewField(3)) == 0.0);
  const std::vector<double> degenerate{0.0, 0.4, 0.6};
  SkewField w(3, {2.7, 0, 0});
  CHECK(hjg::norm_xi(tri, MetricTensor::harmonic(), degenerate, w) == 0.0);
}

TEST_CASE("inner product is bilinear and symmetric") {
  std::mt19937_64 rng(8);
  const Graph g(4, {0, 1, 0, 2, 1, 0, 3, 0, 0, 3, 0, 1, 2, 0, 1, 0});
  for (const auto& mt : all_tensors()) {
    for (int i = 0; i < 100; ++i) {
      const auto xi = testutil::random_simplex(rng, 4, 0.01);
      const auto a = random_field(rng, 4), b = random_field(rng, 4), c = random_field(rng, 4);
      SkewField ab(4);
      for (std::size_t s = 0; s < ab.upper().size(); ++s) ab.upper()[s] = 2.0 * a.upper()[s] - 3.0 * b.upper()[s];
      const double lhs = hjg::inner_product(g, mt, xi, ab, c);
      const double rhs = 2.0 * hjg::inner_product(g, mt, xi, a, c) - 3.0 * hjg::inner_product(g, mt, xi, b, c);
      CHECK(std::abs(lhs - rhs) <= 1e-12);
      CHECK(hjg::inner_product(g, mt, xi, a, c) == Approx(hjg::inner_product(g, mt, xi, c, a)));
      CHECK(hjg::norm_xi(g, mt, xi, a) >= 0.0);
    }
  }
}

TEST_CASE("divergence examples and adjointness") {
  const Graph tri = Graph::complete(3);
  const std::vector<double> uni(3, 1.0 / 3);
  auto div = hjg::divergence(tri, MetricTensor::average(), uni, SkewField(3, {1, 0, 0}));
  CHECK(div[0] == Approx(-1.0 / 3));
  CHECK(div[1] == Approx(1.0 / 3));
  CHECK(div[2] == Approx(0.0));
  div = hjg::divergence(tri, MetricTensor::average(), uni, SkewField(3));
  for (double v : div) CHECK(v == 0.0);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  const Graph g(4, {0, 1, 0, 2, 1, 0, 3, 0, 0, 3, 0, 1, 2, 0, 1, 0});
  for (int i = 0; i < 200; ++i) {
    const auto& mt = all_tensors()[static_cast<std::size_t>(i % 4)];
    const auto xi = testutil::random_simplex(rng, 4);
    std::vector<double> phi(4);
    for (double& v : phi) v = n(rng);
    const auto v = random_field(rng, 4);
    const auto d = hjg::divergence(g, mt, xi, v);
    double pairing = 0.0;
    for (int k = 0; k < 4; ++k) pairing += phi[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(k)];
    CHECK(std::abs(hjg::inner_product(g, mt, xi, hjg::graph_gradient(g, phi), v) + pairing) <= 1e-12);
  }
}

TEST_CASE("noise term examples and bound") {
  const Graph tri = Graph::complete(3);
  const std::vector<double> uni(3, 1.0 / 3);
  std::mt19937_64 rng(10);
  CHECK(hjg::noise_term(tri, MetricTensor::average(), uni, random_field(rng, 3)) == Approx(0.0));
  const std::vector<double> xi{0.2, 0.3, 0.5};
  CHECK(hjg::noise_term(tri, MetricTensor::logarithmic(), xi, SkewField(3, {1, 0, 0})) == Approx(0.1).epsilon(1e-12));
  CHECK(hjg::noise_term(tri, MetricTensor::average(), xi, SkewField(3)) == 0.0);
  CHECK_ERROR_CODE(hjg::noise_term(tri, MetricTensor::average(), std::vector<double>{0.0, 0.5, 0.5},
                                   SkewField(3, {1, 0, 0})),
                   ErrorCode::SingularLogAtBoundary);

  const Graph g(3, {0, 4, 1, 4, 0, 0.25, 1, 0.25, 0});
  const double C = g.max_sqrt_weight() * 3;
  for (int i = 0; i < 500; ++i) {
    const auto x = testutil::random_simplex(rng, 3, 1e-4);
    const auto p = random_field(rng, 3);
    CHECK(std::abs(hjg::noise_term(g, MetricTensor::logarithmic(), x, p)) <= C * p.l2_norm() + 1e-12);
  }
}

TEST_CASE("information functional") {
  CHECK(hjg::information_functional(std::vector<double>{0.2, 0.3, 0.5}) == Approx(10.0 + 1.0 / 3));
  CHECK(hjg::information_functional(std::vector<double>(3, 1.0 / 3)) == Approx(9.0));
  CHECK(hjg::information_functional(std::vector<double>{0.5, 0.5}) == Approx(4.0));
  CHECK_ERROR_CODE(hjg::information_functional(std::vector<double>{0.0, 1.0}), ErrorCode::ZeroCoordinate);
}
