#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hjgraph/graph.hpp"

namespace hjg {

/// d×d skew-symmetric matrix stored by its strict upper triangle.
///
/// Slot order follows pair_slot(d, j, k). Pairs that are not edges are still
/// stored; they contribute nothing wherever a weight or metric multiplies them.
class SkewField {
 public:
  SkewField() = default;
  explicit SkewField(int d) : d_(d), upper_(static_cast<std::size_t>(d * (d - 1) / 2), 0.0) {}
  SkewField(int d, std::vector<double> upper);

  int d() const noexcept { return d_; }

  /// Full-matrix entry (j, k), 0-based; p_{k,j} = −p_{j,k}, zero diagonal.
  double at(int j, int k) const;
  void set(int j, int k, double value);

  std::span<double> upper() noexcept { return upper_; }
  std::span<const double> upper() const noexcept { return upper_; }

  /// Frobenius norm of the full matrix, sqrt(2 Σ_{j<k} p_{j,k}²).
  double l2_norm() const;
  double sup_norm() const;

 private:
  int d_ = 0;
  std::vector<double> upper_;
};

/// Symmetric weight g(t, r) turning ξ into edge weights g_{i,j}(ξ) = g(ξ_i, ξ_j).
class MetricTensor {
 public:
  enum class Kind { Average, Logarithmic, Harmonic, ConvexCombination };

  static MetricTensor average() { return MetricTensor(Kind::Average); }
  static MetricTensor logarithmic() { return MetricTensor(Kind::Logarithmic); }
  static MetricTensor harmonic() { return MetricTensor(Kind::Harmonic); }
  /// Convex combination of (average, logarithmic, harmonic); weights must be
  /// nonnegative and sum to one.
  static MetricTensor convex(std::array<double, 3> weights);

  Kind kind() const noexcept { return kind_; }
  const std::array<double, 3>& weights() const noexcept { return weights_; }

  double eval(double t, double r) const;

  /// g(t, r)·(ln t − ln r), using the continuous extension where one exists
  /// (exactly t − r for the logarithmic mean). Throws SingularLogAtBoundary
  /// for a zero argument when no extension exists.
  double log_product(double t, double r) const;

 private:
  explicit MetricTensor(Kind kind);

  Kind kind_;
  std::array<double, 3> weights_{};
};

double metric_eval(const MetricTensor& mt, double t, double r);

/// (∇_G φ)_{j,k} = sqrt(ω_{j,k})·(φ_j − φ_k).
SkewField graph_gradient(const Graph& g, std::span<const double> phi);

/// (v, w)_ξ = Σ_{(j,k)∈E, j<k} v_{j,k} w_{j,k} g_{j,k}(ξ).
double inner_product(const Graph& g, const MetricTensor& mt, std::span<const double> xi,
                     const SkewField& v, const SkewField& w);

double norm_xi(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& v);

/// div_ξ(v)_i = Σ_j sqrt(ω_{i,j})·v_{j,i}·g_{i,j}(ξ), so that (∇_G φ, v)_ξ = −⟨φ, div_ξ v⟩.
std::vector<double> divergence(const Graph& g, const MetricTensor& mt, std::span<const double> xi,
                               const SkewField& v);

/// Graph individual noise O_ξ(p) = −(p, ∇_G log ξ)_ξ.
double noise_term(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& p);

/// I(ξ) = Σ 1/ξ_i.
double information_functional(std::span<const double> xi);

}  // namespace hjg
