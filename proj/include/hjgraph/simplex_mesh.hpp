#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hjgraph/graph.hpp"

namespace hjg {

/// Absolute tolerance used when checking that a vector lies on the simplex.
inline constexpr double kSimplexTol = 1e-12;

/// Cumulative-sum coordinates of ξ ∈ P_ε(G): s_l = Σ_{i≤l} ξ_i − l·ε, l = 1..d−1.
std::vector<double> pi_forward(std::span<const double> xi, double eps);

/// Inverse of pi_forward: ξ = (s_1+ε, s_2−s_1+ε, …, 1−s_{d−1}−(d−1)ε).
std::vector<double> pi_inverse(std::span<const double> s, double eps);

/// Unit lattice step attached to the vertex pair (j, k), j < k (0-based).
///
/// On the index lattice it is the multi-index with ones in slots j..k−1; on
/// the simplex it is e_{j,k} = +1 at j, −1 at k.
struct OffsetVector {
  int j;
  int k;

  std::vector<int> as_index_offset(int d) const;
  std::vector<double> as_simplex_offset(int d) const;
};

/// Result of moving one lattice step from a mesh node.
struct ShiftResult {
  enum class Kind { Interior, BoundaryExit };
  Kind kind;
  /// Rank of the target when it is an admissible index (interior or boundary).
  std::optional<std::size_t> rank;
  /// Simplex coordinates of the target point (possibly outside P_ε(G)).
  std::vector<double> target;
};

/// Uniform mesh of P_ε(G) in cumulative-sum coordinates.
///
/// Nodes are the nondecreasing (d−1)-tuples over {0..N}, N = (1 − dε)/h,
/// stored densely in lexicographic order. Ranks are computed by
/// stars-and-bars counting, so lookups are O(d).
class Mesh {
 public:
  /// Throws NonIntegerLevels unless (1 − dε)/h is within 1e−9 of an integer.
  Mesh(Graph graph, double h, double eps);

  /// Mesh with N = levels, h = (1 − dε)/levels.
  static Mesh from_levels(Graph graph, int levels, double eps);

  const Graph& graph() const noexcept { return graph_; }
  int d() const noexcept { return graph_.d(); }
  double h() const noexcept { return h_; }
  double eps() const noexcept { return eps_; }
  int levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const int> index(std::size_t rank) const {
    const auto w = static_cast<std::size_t>(d() - 1);
    return {indices_.data() + rank * w, w};
  }
  std::span<const double> point(std::size_t rank) const {
    const auto w = static_cast<std::size_t>(d());
    return {points_.data() + rank * w, w};
  }
  bool is_boundary(std::size_t rank) const { return boundary_flag_[rank] != 0; }
  const std::vector<std::size_t>& interior() const noexcept { return interior_; }
  const std::vector<std::size_t>& boundary() const noexcept { return boundary_; }

  /// Rank of an admissible index, nullopt if the tuple is not admissible.
  std::optional<std::size_t> rank_of(std::span<const int> idx) const;

  /// Neighbor along pair slot `slot` (see pair_slot) in direction dir = ±1,
  /// or -1 when the shifted index leaves the admissible set.
  std::int64_t neighbor(std::size_t rank, std::size_t slot, int dir) const {
    return neighbors_[(rank * slot_count_ + slot) * 2 + (dir > 0 ? 0 : 1)];
  }
  std::size_t slot_count() const noexcept { return slot_count_; }

  /// One lattice step from `rank` along `off` in direction `dir`. Targets that
  /// are inadmissible or on the boundary come back as BoundaryExit.
  ShiftResult shift_index(std::size_t rank, OffsetVector off, int dir) const;

  /// Closed-form count of nondecreasing (d−1)-tuples over {0..N}.
  static std::uint64_t count_nodes(int d, int levels);

 private:
  Mesh(Graph graph, double h, double eps, int levels);
  void build();

  Graph graph_;
  double h_;
  double eps_;
  int levels_;
  std::size_t size_ = 0;
  std::size_t slot_count_ = 0;
  std::vector<int> indices_;
  std::vector<double> points_;
  std::vector<std::uint8_t> boundary_flag_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<std::int64_t> neighbors_;
  // binom_[n * (d) + r] = C(n, r) for r < d
  std::vector<std::uint64_t> binom_;
};

}  // namespace hjg
