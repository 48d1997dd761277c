#include "hjgraph/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

void require_interior(std::span<const double> xi) {
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] > 0.0)) {
      throw Error(ErrorCode::BoundaryPoint, "coordinate " + std::to_string(i + 1) + " of xi is not positive");
    }
  }
}

}  // namespace

Coefficient Coefficient::inverse_information_power(double kappa) {
  return {"inverse_information_power", [kappa](std::span<const double> xi) {
            return std::pow(information_functional(xi), -kappa);
          }};
}

Coefficient Coefficient::inverse_theta_power(double theta) {
  return {"inverse_theta_power", [theta](std::span<const double> xi) {
            double s = 0.0;
            for (double x : xi) s += std::pow(x, -theta);
            return 1.0 / (s * s);
          }};
}

Coefficient Coefficient::log_power() {
  return {"log_power", [](std::span<const double> xi) {
            double s = 0.0;
            for (double x : xi) s += std::log(x);
            return 1.0 / (s * s);
          }};
}

Coefficient Coefficient::constant(double value) {
  return {"constant", [value](std::span<const double>) { return value; }};
}

Hamiltonian Hamiltonian::zero() { return Hamiltonian(); }

Hamiltonian Hamiltonian::power_norm(double kappa, Coefficient coeff) {
  if (!(kappa > 1.0)) throw Error(ErrorCode::BadParameter, "kappa must exceed 1");
  if (!coeff.fn) throw Error(ErrorCode::BadParameter, "coefficient function is empty");
  Hamiltonian H;
  H.zero_ = false;
  H.kappa_ = kappa;
  H.coeff_ = std::move(coeff);
  return H;
}

double Hamiltonian::from_squared_norm(double coeff, double squared_norm) const noexcept {
  if (zero_) return 0.0;
  if (kappa_ == 2.0) return coeff * squared_norm;
  return coeff * std::pow(squared_norm, 0.5 * kappa_);
}

double Hamiltonian::eval(const Graph& g, const MetricTensor& mt, std::span<const double> xi, const SkewField& p) const {
  require_interior(xi);
  if (zero_) return 0.0;
  return from_squared_norm(coeff_(xi), inner_product(g, mt, xi, p, p));
}

double ham_eval(const Hamiltonian& H, const Graph& g, const MetricTensor& mt, std::span<const double> xi,
                const SkewField& p) {
  return H.eval(g, mt, xi, p);
}

DiscreteHamiltonian::DiscreteHamiltonian(Kind kind, Graph graph, MetricTensor tensor, Hamiltonian hamiltonian,
                                         double noise_intensity, std::vector<double> gamma)
    : kind_(kind),
      graph_(std::move(graph)),
      tensor_(tensor),
      hamiltonian_(std::move(hamiltonian)),
      noise_intensity_(noise_intensity),
      gamma_(std::move(gamma)) {
  if (!std::isfinite(noise_intensity_) || noise_intensity_ < 0.0) {
    throw Error(ErrorCode::BadParameter, "noise intensity must be finite and nonnegative");
  }
  if (kind_ == Kind::LaxFriedrichs) {
    if (gamma_.empty()) gamma_.assign(edge_count(), 0.0);
    if (gamma_.size() != edge_count()) {
      throw Error(ErrorCode::BadParameter, "Lax-Friedrichs needs one dissipation coefficient per edge");
    }
    for (double v : gamma_) {
      if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::BadParameter, "dissipation coefficients must be >= 0");
    }
  }
}

void DiscreteHamiltonian::fill_frame(std::span<const double> xi, double* coeff, double* g, double* noise) const {
  require_interior(xi);
  *coeff = hamiltonian_.is_zero() ? 0.0 : hamiltonian_.coefficient()(xi);
  const auto& edges = graph_.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double a = xi[static_cast<std::size_t>(edges[e].j)];
    const double b = xi[static_cast<std::size_t>(edges[e].k)];
    g[e] = tensor_.eval(a, b);
    noise[e] = a == b ? 0.0 : noise_intensity_ * edges[e].sqrt_weight * tensor_.log_product(a, b);
  }
}

Frame DiscreteHamiltonian::frame(std::span<const double> xi) const {
  Frame f;
  f.g.resize(edge_count());
  f.noise.resize(edge_count());
  fill_frame(xi, &f.coeff, f.g.data(), f.noise.data());
  return f;
}

double DiscreteHamiltonian::operator()(std::span<const double> xi, const SkewField& P, const SkewField& Q) const {
  const Frame f = frame(xi);
  const auto& edges = graph_.edges();
  std::vector<double> p(edges.size()), q(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t slot = pair_slot(graph_.d(), edges[e].j, edges[e].k);
    p[e] = P.upper()[slot];
    q[e] = Q.upper()[slot];
  }
  return eval(f.view(), p.data(), q.data());
}

double discrete_ham_eval(const DiscreteHamiltonian& G, std::span<const double> xi, const SkewField& P,
                         const SkewField& Q) {
  return G(xi, P, Q);
}

std::vector<double> lf_gamma_default(const Hamiltonian& H, const Graph& g, const MetricTensor& mt,
                                     std::span<const std::vector<double>> xi_samples, double radius, int p_samples,
                                     std::uint64_t seed) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadParameter, "radius must be positive");
  const auto& edges = g.edges();
  std::vector<double> gamma(edges.size(), 0.0);
  if (H.is_zero()) return gamma;

  const int d = g.d();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-radius, radius);
  std::vector<SkewField> probes;
  // extreme corners of the box first: all sign patterns when affordable
  const std::size_t E = edges.size();
  if (E <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << E); ++mask) {
      SkewField P(d);
      for (std::size_t e = 0; e < E; ++e) {
        P.upper()[pair_slot(d, edges[e].j, edges[e].k)] = ((mask >> e) & 1U) ? radius : -radius;
      }
      probes.push_back(std::move(P));
    }
  }
  for (int s = 0; s < p_samples; ++s) {
    SkewField P(d);
    for (double& v : P.upper()) v = unif(rng);
    probes.push_back(std::move(P));
  }

  const double step = 1e-6 * std::max(1.0, radius);
  for (const auto& xi : xi_samples) {
    for (const SkewField& P : probes) {
      for (std::size_t e = 0; e < E; ++e) {
        const std::size_t slot = pair_slot(d, edges[e].j, edges[e].k);
        SkewField plus = P, minus = P;
        plus.upper()[slot] += step;
        minus.upper()[slot] -= step;
        const double deriv = (H.eval(g, mt, xi, plus) - H.eval(g, mt, xi, minus)) / (2.0 * step);
        gamma[e] = std::max(gamma[e], 0.5 * std::abs(deriv));
      }
    }
  }
  return gamma;
}

}  // namespace hjg
