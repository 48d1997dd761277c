#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hjgraph/calculus.hpp"
#include "hjgraph/graph.hpp"

namespace hjg {

/// Coefficient a(ξ) multiplying ‖p‖_ξ^κ. Any evaluator over interior simplex
/// points can be plugged in; the built-ins cover the usual choices.
struct Coefficient {
  std::string name;
  std::function<double(std::span<const double>)> fn;

  double operator()(std::span<const double> xi) const { return fn(xi); }

  /// I(ξ)^{−κ}
  static Coefficient inverse_information_power(double kappa);
  /// (Σ ξ_i^{−θ})^{−2}
  static Coefficient inverse_theta_power(double theta);
  /// (Σ log ξ_i)^{−2}
  static Coefficient log_power();
  static Coefficient constant(double value);
};

/// H(ξ, p) = a(ξ)·‖p‖_ξ^κ, or H ≡ 0.
class Hamiltonian {
 public:
  static Hamiltonian zero();
  static Hamiltonian power_norm(double kappa, Coefficient coeff);

  bool is_zero() const noexcept { return zero_; }
  double kappa() const noexcept { return kappa_; }
  const Coefficient& coefficient() const noexcept { return coeff_; }

  /// Throws BoundaryPoint unless every coordinate of ξ is positive.
  double eval(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& p) const;

  /// a(ξ)·S^{κ/2} for a precomputed squared norm S = ‖p‖_ξ².
  double from_squared_norm(double coeff, double squared_norm) const noexcept;

 private:
  Hamiltonian() = default;

  bool zero_ = true;
  double kappa_ = 2.0;
  Coefficient coeff_;
};

double ham_eval(const Hamiltonian& H, const Graph& g, const MetricTensor& mt, std::span<const double> xi,
                const SkewField& p);

/// Quantities of the discrete Hamiltonian that depend on ξ only.
///
/// `noise[e]` is λ₁·sqrt(ω_e)·g_e(ξ)·(log ξ_j − log ξ_k) for edge e = (j, k);
/// its sign doubles as the upwind switch (≤ 0 selects P, > 0 selects Q).
struct FrameView {
  double coeff;
  const double* g;
  const double* noise;
};

struct Frame {
  double coeff = 0.0;
  std::vector<double> g;
  std::vector<double> noise;

  FrameView view() const noexcept { return {coeff, g.data(), noise.data()}; }
};

/// Monotone numerical Hamiltonian G(ξ, P, Q) = G_H + λ₁·G_O.
///
/// P plays the role of the forward difference matrix and Q the backward one.
/// Osher–Sethian splits the Hamiltonian with p⁻ and q⁺ clamps; Lax–Friedrichs
/// evaluates H at (P+Q)/2 and subtracts Σ γ_e (p_e − q_e). The noise part is
/// upwinded by the sign of log ξ_j − log ξ_k, using P when ξ_j ≤ ξ_k.
class DiscreteHamiltonian {
 public:
  enum class Kind { OsherSethian, LaxFriedrichs };

  /// `gamma` is per edge (graph().edges() order) and only used by Lax–Friedrichs.
  DiscreteHamiltonian(Kind kind, Graph graph, MetricTensor tensor, Hamiltonian hamiltonian, double noise_intensity,
                      std::vector<double> gamma = {});

  Kind kind() const noexcept { return kind_; }
  const Graph& graph() const noexcept { return graph_; }
  const MetricTensor& tensor() const noexcept { return tensor_; }
  const Hamiltonian& hamiltonian() const noexcept { return hamiltonian_; }
  double noise_intensity() const noexcept { return noise_intensity_; }
  const std::vector<double>& gamma() const noexcept { return gamma_; }
  std::size_t edge_count() const noexcept { return graph_.edges().size(); }

  /// Throws BoundaryPoint unless every coordinate of ξ is positive.
  Frame frame(std::span<const double> xi) const;
  void fill_frame(std::span<const double> xi, double* coeff, double* g, double* noise) const;

  /// G from per-edge entries p[e], q[e].
  double eval(const FrameView& f, const double* p, const double* q) const noexcept {
    const std::size_t E = edge_count();
    double noise = 0.0;
    for (std::size_t e = 0; e < E; ++e) noise += f.noise[e] * (f.noise[e] <= 0.0 ? p[e] : q[e]);
    if (hamiltonian_.is_zero()) return noise;
    double s = 0.0;
    if (kind_ == Kind::OsherSethian) {
      for (std::size_t e = 0; e < E; ++e) {
        const double pm = p[e] < 0.0 ? -p[e] : 0.0;
        const double qp = q[e] > 0.0 ? q[e] : 0.0;
        s += f.g[e] * (pm * pm + qp * qp);
      }
      return hamiltonian_.from_squared_norm(f.coeff, s) + noise;
    }
    double dissipation = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
      const double m = 0.5 * (p[e] + q[e]);
      s += f.g[e] * m * m;
      dissipation += gamma_[e] * (p[e] - q[e]);
    }
    return hamiltonian_.from_squared_norm(f.coeff, s) - dissipation + noise;
  }

  /// discrete_ham_eval on full skew fields.
  double operator()(std::span<const double> xi, const SkewField& P, const SkewField& Q) const;

 private:
  Kind kind_;
  Graph graph_;
  MetricTensor tensor_;
  Hamiltonian hamiltonian_;
  double noise_intensity_;
  std::vector<double> gamma_;
};

double discrete_ham_eval(const DiscreteHamiltonian& G, std::span<const double> xi, const SkewField& P,
                         const SkewField& Q);

/// Per-edge Lax–Friedrichs dissipation γ_e = ½·max |∂H/∂p_e| over the sampled
/// ξ and sampled P with ‖P‖_∞ ≤ R, estimated by central differences.
std::vector<double> lf_gamma_default(const Hamiltonian& H, const Graph& g, const MetricTensor& mt,
                                     std::span<const std::vector<double>> xi_samples, double radius,
                                     int p_samples = 64, std::uint64_t seed = 7);

}  // namespace hjg
