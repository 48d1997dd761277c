#include "hjgraph/graph.hpp"

#include <cmath>
#include <queue>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

Graph::Graph(int d, std::vector<double> weights) : d_(d), weights_(std::move(weights)) {
  if (d_ < 2) throw Error(ErrorCode::BadDimension, "vertex count must be >= 2, got " + std::to_string(d_));
  if (weights_.size() != static_cast<std::size_t>(d_ * d_)) {
    throw Error(ErrorCode::BadDimension, "weight matrix has " + std::to_string(weights_.size()) +
                                             " entries, expected " + std::to_string(d_ * d_));
  }
  for (int j = 0; j < d_; ++j) {
    for (int k = 0; k < d_; ++k) {
      const double w = weight(j, k);
      const std::string where = "(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
      if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::NegativeWeight, "weight at " + where + " is negative or non-finite");
      if (j == k && w != 0.0) throw Error(ErrorCode::SelfLoop, "nonzero diagonal weight at " + where);
      if (w != weight(k, j)) throw Error(ErrorCode::AsymmetricWeights, "weight at " + where + " differs from its transpose");
    }
  }

  // breadth-first reachability from vertex 0
  std::vector<bool> seen(static_cast<std::size_t>(d_), false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u = 0; u < d_; ++u) {
      if (!seen[static_cast<std::size_t>(u)] && weight(v, u) > 0.0) {
        seen[static_cast<std::size_t>(u)] = true;
        ++reached;
        frontier.push(u);
      }
    }
  }
  if (reached != d_) {
    throw Error(ErrorCode::Disconnected, "only " + std::to_string(reached) + " of " + std::to_string(d_) +
                                             " vertices reachable from vertex 1");
  }

  sqrt_weights_.resize(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    sqrt_weights_[i] = std::sqrt(weights_[i]);
    max_sqrt_weight_ = std::max(max_sqrt_weight_, sqrt_weights_[i]);
  }
  for (int j = 0; j < d_; ++j) {
    for (int k = j + 1; k < d_; ++k) {
      if (weight(j, k) > 0.0) edges_.push_back({j, k, weight(j, k), sqrt_weight(j, k)});
    }
  }
}

Graph Graph::complete(int d, double weight) {
  std::vector<double> w(static_cast<std::size_t>(d * d), weight);
  for (int i = 0; i < d; ++i) w[static_cast<std::size_t>(i * d + i)] = 0.0;
  return Graph(d, std::move(w));
}

Graph Graph::path(int d, double weight) {
  std::vector<double> w(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i + 1 < d; ++i) {
    w[static_cast<std::size_t>(i * d + i + 1)] = weight;
    w[static_cast<std::size_t>((i + 1) * d + i)] = weight;
  }
  return Graph(d, std::move(w));
}

std::vector<int> Graph::neighbors(int vertex) const {
  if (vertex < 1 || vertex > d_) {
    throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(vertex) + " not in [1," + std::to_string(d_) + "]");
  }
  std::vector<int> out;
  for (int u = 0; u < d_; ++u) {
    if (weight(vertex - 1, u) > 0.0) out.push_back(u + 1);
  }
  return out;
}

}  // namespace hjg
