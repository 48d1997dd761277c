#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hjg {

/// An edge with storage (0-based) endpoints j < k.
struct Edge {
  int j;
  int k;
  double weight;
  double sqrt_weight;
};

/// Finite weighted undirected connected graph without self-loops.
///
/// Construction is the only validation point, so every Graph in existence is
/// symmetric, nonnegative, loop-free and connected. Numeric accessors use
/// 0-based storage indices; `neighbors` speaks 1-based vertex labels.
class Graph {
 public:
  /// `weights` is the row-major d*d weight matrix.
  Graph(int d, std::vector<double> weights);

  static Graph complete(int d, double weight = 1.0);
  static Graph path(int d, double weight = 1.0);

  int d() const noexcept { return d_; }
  double weight(int j, int k) const { return weights_[static_cast<std::size_t>(j * d_ + k)]; }
  double sqrt_weight(int j, int k) const {
    return sqrt_weights_[static_cast<std::size_t>(j * d_ + k)];
  }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Edges (ω > 0) ordered lexicographically by (j, k), j < k.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// All vertex pairs j < k in lexicographic order, edge or not. Position in
  /// this list is the storage slot used by SkewField.
  std::size_t pair_count() const noexcept {
    return static_cast<std::size_t>(d_ * (d_ - 1) / 2);
  }

  /// 1-based labels of vertices adjacent to 1-based `vertex`, increasing.
  std::vector<int> neighbors(int vertex) const;

  /// max_{j,k} sqrt(ω_{j,k}).
  double max_sqrt_weight() const noexcept { return max_sqrt_weight_; }

 private:
  int d_;
  std::vector<double> weights_;
  std::vector<double> sqrt_weights_;
  std::vector<Edge> edges_;
  double max_sqrt_weight_ = 0.0;
};

/// Storage slot of the pair (j, k), j < k, 0-based, in lexicographic order.
inline std::size_t pair_slot(int d, int j, int k) {
  // pairs before row j: sum_{r<j} (d-1-r)
  return static_cast<std::size_t>(j * (2 * d - j - 1) / 2 + (k - j - 1));
}

}  // namespace hjg
