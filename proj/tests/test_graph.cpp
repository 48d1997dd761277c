#include <queue>
#include <random>

#include "doctest.h"
#include "hjgraph/graph.hpp"
#include "test_util.hpp"

using hjg::ErrorCode;
using hjg::Graph;

TEST_CASE("complete triangle and single edge are valid") {
  Graph tri(3, {0, 1, 1, 1, 0, 1, 1, 1, 0});
  CHECK(tri.edges().size() == 3);
  CHECK(tri.max_sqrt_weight() == doctest::Approx(1.0));
  Graph edge(2, {0, 1, 1, 0});
  CHECK(edge.edges().size() == 1);
  CHECK(edge.edges()[0].j == 0);
  CHECK(edge.edges()[0].k == 1);
}

TEST_CASE("invalid weight matrices are rejected") {
  CHECK_ERROR_CODE(Graph(3, {0, 1, 0, 1, 0, 0, 0, 0, 0}), ErrorCode::Disconnected);
  CHECK_ERROR_CODE(Graph(3, {0, 1, 1, 2, 0, 1, 1, 1, 0}), ErrorCode::AsymmetricWeights);
  CHECK_ERROR_CODE(Graph(3, {0, -1, 1, -1, 0, 1, 1, 1, 0}), ErrorCode::NegativeWeight);
  CHECK_ERROR_CODE(Graph(3, {1, 1, 1, 1, 0, 1, 1, 1, 0}), ErrorCode::SelfLoop);
  CHECK_ERROR_CODE(Graph(1, {0}), ErrorCode::BadDimension);
  CHECK_ERROR_CODE(Graph(3, {0, 1, 1, 0}), ErrorCode::BadDimension);
}

TEST_CASE("neighbors use 1-based labels") {
  const Graph tri = Graph::complete(3);
  CHECK(tri.neighbors(1) == std::vector<int>{2, 3});
  const Graph path = Graph::path(3);
  CHECK(path.neighbors(2) == std::vector<int>{1, 3});
  CHECK(path.neighbors(1) == std::vector<int>{2});
  CHECK_ERROR_CODE(path.neighbors(0), ErrorCode::IndexOutOfRange);
  CHECK_ERROR_CODE(path.neighbors(4), ErrorCode::IndexOutOfRange);
}

TEST_CASE("pair slots enumerate pairs lexicographically") {
  for (int d = 2; d <= 6; ++d) {
    std::size_t expected = 0;
    for (int j = 0; j < d; ++j) {
      for (int k = j + 1; k < d; ++k) CHECK(hjg::pair_slot(d, j, k) == expected++);
    }
  }
}

namespace {

bool bfs_connected(int d, const std::vector<double>& w) {
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int u = 0; u < d; ++u) {
      if (w[static_cast<std::size_t>(v * d + u)] > 0 && !seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = true;
        ++count;
        q.push(u);
      }
    }
  }
  return count == d;
}

}  // namespace

TEST_CASE("connectivity agrees with a reachability oracle and neighbors are symmetric") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dim(rng);
    std::vector<double> w(static_cast<std::size_t>(d * d), 0.0);
    for (int j = 0; j < d; ++j) {
      for (int k = j + 1; k < d; ++k) {
        if (u(rng) < 0.4) {
          const double x = 0.1 + u(rng);
          w[static_cast<std::size_t>(j * d + k)] = x;
          w[static_cast<std::size_t>(k * d + j)] = x;
        }
      }
    }
    const bool expect = bfs_connected(d, w);
    bool built = true;
    try {
      Graph g(d, w);
      for (int i = 1; i <= d; ++i) {
        for (int j : g.neighbors(i)) {
          const auto back = g.neighbors(j);
          CHECK(std::find(back.begin(), back.end(), i) != back.end());
        }
      }
    } catch (const hjg::Error& e) {
      CHECK(e.code() == ErrorCode::Disconnected);
      built = false;
    }
    CHECK(built == expect);
  }
}
