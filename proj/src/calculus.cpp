#include "hjgraph/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

SkewField::SkewField(int d, std::vector<double> upper) : d_(d), upper_(std::move(upper)) {
  if (upper_.size() != static_cast<std::size_t>(d * (d - 1) / 2)) {
    throw Error(ErrorCode::BadDimension, "skew field for d=" + std::to_string(d) + " needs " +
                                             std::to_string(d * (d - 1) / 2) + " entries");
  }
}

double SkewField::at(int j, int k) const {
  if (j == k) return 0.0;
  if (j < k) return upper_[pair_slot(d_, j, k)];
  return -upper_[pair_slot(d_, k, j)];
}

void SkewField::set(int j, int k, double value) {
  if (j == k) throw Error(ErrorCode::IndexOutOfRange, "skew field diagonal is fixed at zero");
  if (j < k) {
    upper_[pair_slot(d_, j, k)] = value;
  } else {
    upper_[pair_slot(d_, k, j)] = -value;
  }
}

double SkewField::l2_norm() const {
  double s = 0.0;
  for (double v : upper_) s += v * v;
  return std::sqrt(2.0 * s);
}

double SkewField::sup_norm() const {
  double m = 0.0;
  for (double v : upper_) m = std::max(m, std::abs(v));
  return m;
}

MetricTensor::MetricTensor(Kind kind) : kind_(kind) {
  switch (kind) {
    case Kind::Average: weights_ = {1.0, 0.0, 0.0}; break;
    case Kind::Logarithmic: weights_ = {0.0, 1.0, 0.0}; break;
    case Kind::Harmonic: weights_ = {0.0, 0.0, 1.0}; break;
    case Kind::ConvexCombination: break;
  }
}

MetricTensor MetricTensor::convex(std::array<double, 3> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::BadTensorWeights, "convex weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::BadTensorWeights, "convex weights must sum to 1");
  MetricTensor mt(Kind::ConvexCombination);
  mt.weights_ = weights;
  return mt;
}

namespace {

double average_mean(double t, double r) { return 0.5 * (t + r); }

double log_mean(double t, double r) {
  if (t == 0.0 || r == 0.0) return 0.0;
  if (t == r) return t;
  if (t < r) std::swap(t, r);
  // log1p keeps the quotient accurate when t and r are close
  return (t - r) / std::log1p((t - r) / r);
}

double harmonic_mean(double t, double r) {
  if (t == 0.0 || r == 0.0) return 0.0;
  return 2.0 * t * r / (t + r);
}

}  // namespace

double MetricTensor::eval(double t, double r) const {
  if (t < 0.0 || r < 0.0) throw Error(ErrorCode::NegativeArgument, "metric tensor arguments must be nonnegative");
  switch (kind_) {
    case Kind::Average: return average_mean(t, r);
    case Kind::Logarithmic: return log_mean(t, r);
    case Kind::Harmonic: return harmonic_mean(t, r);
    case Kind::ConvexCombination:
      return weights_[0] * average_mean(t, r) + weights_[1] * log_mean(t, r) + weights_[2] * harmonic_mean(t, r);
  }
  return 0.0;
}

double MetricTensor::log_product(double t, double r) const {
  if (t < 0.0 || r < 0.0) throw Error(ErrorCode::NegativeArgument, "metric tensor arguments must be nonnegative");
  const bool degenerate = (t == 0.0 || r == 0.0);
  if (t == r) return 0.0;
  double out = 0.0;
  if (weights_[0] != 0.0) {
    if (degenerate) {
      throw Error(ErrorCode::SingularLogAtBoundary, "average tensor has no extension of g*(log t - log r) at zero");
    }
    out += weights_[0] * average_mean(t, r) * std::log(t / r);
  }
  if (weights_[1] != 0.0) out += weights_[1] * (t - r);
  if (weights_[2] != 0.0 && !degenerate) out += weights_[2] * harmonic_mean(t, r) * std::log(t / r);
  return out;
}

double metric_eval(const MetricTensor& mt, double t, double r) { return mt.eval(t, r); }

SkewField graph_gradient(const Graph& g, std::span<const double> phi) {
  const int d = g.d();
  if (phi.size() != static_cast<std::size_t>(d)) throw Error(ErrorCode::BadDimension, "vertex function has wrong length");
  SkewField out(d);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      out.upper()[pair_slot(d, j, k)] = g.sqrt_weight(j, k) * (phi[static_cast<std::size_t>(j)] - phi[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

double inner_product(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& v,
                     const SkewField& w) {
  double s = 0.0;
  for (const Edge& e : g.edges()) {
    const std::size_t slot = pair_slot(g.d(), e.j, e.k);
    s += v.upper()[slot] * w.upper()[slot] * mt.eval(xi[static_cast<std::size_t>(e.j)], xi[static_cast<std::size_t>(e.k)]);
  }
  return s;
}

double norm_xi(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& v) {
  return std::sqrt(std::max(0.0, inner_product(g, mt, xi, v, v)));
}

std::vector<double> divergence(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& v) {
  std::vector<double> out(static_cast<std::size_t>(g.d()), 0.0);
  for (const Edge& e : g.edges()) {
    const double gij = mt.eval(xi[static_cast<std::size_t>(e.j)], xi[static_cast<std::size_t>(e.k)]);
    const double vjk = v.upper()[pair_slot(g.d(), e.j, e.k)];
    // entry j picks up v_{k,j} = −v_{j,k}; entry k picks up v_{j,k}
    out[static_cast<std::size_t>(e.j)] -= e.sqrt_weight * vjk * gij;
    out[static_cast<std::size_t>(e.k)] += e.sqrt_weight * vjk * gij;
  }
  return out;
}

double noise_term(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& p) {
  double s = 0.0;
  for (const Edge& e : g.edges()) {
    const double lp = mt.log_product(xi[static_cast<std::size_t>(e.j)], xi[static_cast<std::size_t>(e.k)]);
    s += p.upper()[pair_slot(g.d(), e.j, e.k)] * e.sqrt_weight * lp;
  }
  return -s;
}

double information_functional(std::span<const double> xi) {
  double s = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] > 0.0)) throw Error(ErrorCode::ZeroCoordinate, "coordinate " + std::to_string(i + 1) + " is not positive");
    s += 1.0 / xi[i];
  }
  return s;
}

}  // namespace hjg
