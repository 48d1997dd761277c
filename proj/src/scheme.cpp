#include "hjgraph/scheme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

constexpr std::size_t kMaxEdges = 64;
constexpr double kBlowUpFactor = 1e6;

}  // namespace

GridFunction::GridFunction(std::shared_ptr<const Mesh> mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (values_.size() != mesh_->size()) {
    throw Error(ErrorCode::BadDimension, "grid function has " + std::to_string(values_.size()) + " values for " +
                                             std::to_string(mesh_->size()) + " nodes");
  }
}

GridFunction::GridFunction(std::shared_ptr<const Mesh> mesh, double fill)
    : mesh_(std::move(mesh)), values_(mesh_->size(), fill) {}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------

BoundaryFiller::BoundaryFiller(const Mesh& mesh, BoundaryCondition bc) : mode_(bc.mode) {
  const std::size_t n = mesh.size();
  rule_of_rank_.assign(n, -1);
  if (mode_ == BoundaryMode::Dirichlet) {
    if (!bc.dirichlet) throw Error(ErrorCode::BadParameter, "Dirichlet mode needs boundary data");
    for (std::size_t r : mesh.boundary()) {
      rule_of_rank_[r] = static_cast<std::int64_t>(rules_.size());
      rules_.push_back({r, -1, -1, bc.dirichlet(mesh.point(r)), 0});
    }
    return;
  }
  if (mesh.interior().empty() && !mesh.boundary().empty()) {
    throw Error(ErrorCode::NoDefinedNeighbor, "mesh has no interior nodes to extrapolate from");
  }

  std::vector<int> layer_of(n, -1);
  for (std::size_t r : mesh.interior()) layer_of[r] = 0;
  const std::size_t slots = mesh.slot_count();
  std::size_t remaining = mesh.boundary().size();
  for (int layer = 1; remaining > 0; ++layer) {
    auto defined = [&](std::int64_t r) { return r >= 0 && layer_of[static_cast<std::size_t>(r)] >= 0 &&
                                                layer_of[static_cast<std::size_t>(r)] < layer; };
    std::vector<Rule> fresh;
    for (std::size_t y : mesh.boundary()) {
      if (layer_of[y] >= 0) continue;
      std::int64_t best_near = -1;
      std::int64_t best_far = -1;
      std::int64_t nearest = -1;
      for (std::size_t s = 0; s < slots; ++s) {
        for (int dir : {1, -1}) {
          const std::int64_t a = mesh.neighbor(y, s, dir);
          if (!defined(a)) continue;
          if (nearest < 0 || a < nearest) nearest = a;
          if (mode_ == BoundaryMode::Linear) {
            const std::int64_t b = mesh.neighbor(static_cast<std::size_t>(a), s, dir);
            if (!defined(b)) continue;
            if (best_near < 0 || a < best_near || (a == best_near && b < best_far)) {
              best_near = a;
              best_far = b;
            }
          }
        }
      }
      if (nearest < 0) continue;
      if (best_near >= 0) {
        fresh.push_back({y, best_near, best_far, 0.0, layer});
      } else {
        fresh.push_back({y, nearest, -1, 0.0, layer});
      }
    }
    if (fresh.empty()) throw Error(ErrorCode::NoDefinedNeighbor, "boundary nodes unreachable from the interior");
    for (const Rule& rule : fresh) {
      layer_of[rule.target] = layer;
      rule_of_rank_[rule.target] = static_cast<std::int64_t>(rules_.size());
      rules_.push_back(rule);
    }
    remaining -= fresh.size();
  }
}

double BoundaryFiller::extrapolate(std::span<const double> values, std::size_t rank) const {
  const std::int64_t idx = rule_of_rank_.at(rank);
  if (idx < 0) throw Error(ErrorCode::NotInterior, "node " + std::to_string(rank) + " is not a boundary node");
  const Rule& rule = rules_[static_cast<std::size_t>(idx)];
  if (mode_ == BoundaryMode::Dirichlet) return rule.value;
  const double a = values[static_cast<std::size_t>(rule.near)];
  if (rule.far < 0) return a;
  return 2.0 * a - values[static_cast<std::size_t>(rule.far)];
}

void BoundaryFiller::fill(std::span<double> values) const {
  for (const Rule& rule : rules_) {
    if (mode_ == BoundaryMode::Dirichlet) {
      values[rule.target] = rule.value;
    } else if (rule.far < 0) {
      values[rule.target] = values[static_cast<std::size_t>(rule.near)];
    } else {
      values[rule.target] =
          2.0 * values[static_cast<std::size_t>(rule.near)] - values[static_cast<std::size_t>(rule.far)];
    }
  }
}

// ---------------------------------------------------------------------------

int step_count(double T, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::BadParameter, "time step must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorCode::BadParameter, "horizon must be nonnegative");
  const double ratio = T / tau;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) > 1e-9 * std::max(1.0, ratio)) {
    throw Error(ErrorCode::NonIntegerSteps, "T/tau = " + std::to_string(ratio) + " is not an integer");
  }
  return static_cast<int>(nearest);
}

double RunResult::worst_bound_excess() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < max_norm.size() && n < bound.size(); ++n) worst = std::max(worst, max_norm[n] - bound[n]);
  return worst;
}

SchemeEngine::SchemeEngine(std::shared_ptr<const Mesh> mesh, DiscreteHamiltonian hamiltonian, ScalarField potential,
                           SchemeConfig config)
    : mesh_(std::move(mesh)),
      hamiltonian_(std::move(hamiltonian)),
      config_(std::move(config)),
      filler_(*mesh_, config_.boundary),
      steps_(step_count(config_.T, config_.tau)),
      edges_(hamiltonian_.edge_count()),
      inv_h_(1.0 / mesh_->h()) {
  if (edges_ > kMaxEdges) throw Error(ErrorCode::BadParameter, "at most 64 edges are supported by the stepper");
  if (hamiltonian_.graph().d() != mesh_->d()) throw Error(ErrorCode::BadDimension, "Hamiltonian and mesh disagree on d");
  if (config_.implicit.max_iters < 1 || !(config_.implicit.tol >= 0.0)) {
    throw Error(ErrorCode::BadParameter, "implicit solver needs max_iters >= 1 and tol >= 0");
  }
  if (mesh_->interior().empty()) throw Error(ErrorCode::BadMeshSize, "mesh has no interior nodes");

  const auto& interior = mesh_->interior();
  const std::size_t m = interior.size();
  const auto& edges = hamiltonian_.graph().edges();
  coeff_.resize(m);
  g_.resize(m * edges_);
  noise_.resize(m * edges_);
  potential_.resize(m);
  fwd_.resize(m * edges_);
  bwd_.resize(m * edges_);
  edge_scale_.resize(edges_);
  for (std::size_t e = 0; e < edges_; ++e) edge_scale_[e] = edges[e].sqrt_weight * inv_h_;

  for (std::size_t pos = 0; pos < m; ++pos) {
    const std::size_t r = interior[pos];
    const auto xi = mesh_->point(r);
    hamiltonian_.fill_frame(xi, &coeff_[pos], &g_[pos * edges_], &noise_[pos * edges_]);
    for (std::size_t e = 0; e < edges_; ++e) {
      const std::size_t slot = pair_slot(mesh_->d(), edges[e].j, edges[e].k);
      fwd_[pos * edges_ + e] = mesh_->neighbor(r, slot, +1);
      bwd_[pos * edges_ + e] = mesh_->neighbor(r, slot, -1);
    }
  }
  for (std::size_t r = 0; r < mesh_->size(); ++r) {
    const double f = potential ? potential(mesh_->point(r)) : 0.0;
    if (!std::isfinite(f)) throw Error(ErrorCode::NonFiniteValue, "potential is not finite at node " + std::to_string(r));
    potential_sup_ = std::max(potential_sup_, std::abs(f));
    if (!mesh_->is_boundary(r)) {
      // interior positions are increasing in rank
      const auto it = std::lower_bound(interior.begin(), interior.end(), r);
      potential_[static_cast<std::size_t>(it - interior.begin())] = f;
    }
  }
}

GridFunction SchemeEngine::sample(const ScalarField& initial) const {
  std::vector<double> values(mesh_->size());
  for (std::size_t r = 0; r < mesh_->size(); ++r) values[r] = initial(mesh_->point(r));
  if (filler_.mode() == BoundaryMode::Dirichlet) filler_.fill(values);
  return GridFunction(mesh_, std::move(values));
}

std::pair<SkewField, SkewField> SchemeEngine::difference_matrices(const GridFunction& U, std::size_t rank) const {
  if (rank >= mesh_->size() || mesh_->is_boundary(rank)) {
    throw Error(ErrorCode::NotInterior, "difference matrices need an interior node");
  }
  const int d = mesh_->d();
  SkewField plus(d), minus(d);
  const auto u = U.values();
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const std::size_t slot = pair_slot(d, j, k);
      const double scale = mesh_->graph().sqrt_weight(j, k) * inv_h_;
      const auto f = static_cast<std::size_t>(mesh_->neighbor(rank, slot, +1));
      const auto b = static_cast<std::size_t>(mesh_->neighbor(rank, slot, -1));
      plus.upper()[slot] = scale * (u[f] - u[rank]);
      minus.upper()[slot] = scale * (u[rank] - u[b]);
    }
  }
  return {plus, minus};
}

double SchemeEngine::increment(std::span<const double> u, double center, std::size_t pos) const noexcept {
  std::array<double, kMaxEdges> p{};
  std::array<double, kMaxEdges> q{};
  const std::size_t off = pos * edges_;
  for (std::size_t e = 0; e < edges_; ++e) {
    p[e] = edge_scale_[e] * (u[static_cast<std::size_t>(fwd_[off + e])] - center);
    q[e] = edge_scale_[e] * (center - u[static_cast<std::size_t>(bwd_[off + e])]);
  }
  const FrameView frame{coeff_[pos], &g_[off], &noise_[off]};
  return -config_.tau * (potential_[pos] + hamiltonian_.eval(frame, p.data(), q.data()));
}

double SchemeEngine::explicit_update(std::span<const double> u, std::size_t pos) const noexcept {
  return increment(u, u[mesh_->interior()[pos]], pos);
}

double SchemeEngine::local_solve(std::span<const double> read, double base, std::size_t pos) const noexcept {
  // phi(v) = v - base - increment(v) has slope >= 1, so the root lies within
  // |phi(v0)| of any starting point v0.
  auto phi = [&](double v) { return v - base - increment(read, v, pos); };
  const double v0 = read[mesh_->interior()[pos]];
  const double f0 = phi(v0);
  if (f0 == 0.0 || !std::isfinite(f0)) return v0;
  double lo = f0 > 0.0 ? v0 - f0 : v0;
  double hi = f0 > 0.0 ? v0 : v0 - f0;
  double flo = f0 > 0.0 ? phi(lo) : f0;
  double fhi = f0 > 0.0 ? f0 : phi(hi);
  // Illinois variant of regula falsi
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;
    const double v = (lo * fhi - hi * flo) / (fhi - flo);
    const double fv = phi(v);
    if (fv == 0.0 || hi - lo <= 1e-15 * std::max(1.0, std::abs(v))) return v;
    if (fv < 0.0) {
      lo = v;
      flo = fv;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = v;
      fhi = fv;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

void SchemeEngine::nodewise_sweep(std::span<const double> read, std::span<const double> base,
                                  std::span<double> out) const {
  const auto& interior = mesh_->interior();
  const auto m = static_cast<std::int64_t>(interior.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t pos = 0; pos < m; ++pos) {
    const std::size_t r = interior[static_cast<std::size_t>(pos)];
    out[r] = local_solve(read, base[r], static_cast<std::size_t>(pos));
  }
  filler_.fill(out);
}

void SchemeEngine::sweep(std::span<const double> read, std::span<const double> base, std::span<double> out) const {
  const auto& interior = mesh_->interior();
  const auto m = static_cast<std::int64_t>(interior.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t pos = 0; pos < m; ++pos) {
    const std::size_t r = interior[static_cast<std::size_t>(pos)];
    out[r] = base[r] + explicit_update(read, static_cast<std::size_t>(pos));
  }
  filler_.fill(out);
}

void SchemeEngine::check_ratio() const {
  if (config_.cfl_ratio_limit && config_.tau / mesh_->h() > *config_.cfl_ratio_limit) {
    throw Error(ErrorCode::CflViolation, "tau/h = " + std::to_string(config_.tau / mesh_->h()) +
                                             " exceeds the CFL limit " + std::to_string(*config_.cfl_ratio_limit));
  }
}

GridFunction SchemeEngine::explicit_step(const GridFunction& U) const {
  check_ratio();
  GridFunction next(mesh_, std::vector<double>(U.values().begin(), U.values().end()));
  sweep(U.values(), U.values(), next.values());
  if (!next.all_finite()) throw Error(ErrorCode::NonFiniteValue, "explicit step produced a non-finite value");
  return next;
}

ImplicitStepResult SchemeEngine::implicit_step(const GridFunction& U) const {
  const auto base = U.values();
  std::vector<double> current(base.begin(), base.end());
  std::vector<double> next(current);
  double residual = 0.0;
  int iters = 0;
  while (iters < config_.implicit.max_iters) {
    if (config_.implicit.solver == ImplicitSolver::Nodewise) {
      nodewise_sweep(current, base, next);
    } else {
      sweep(current, base, next);
    }
    ++iters;
    residual = 0.0;
    for (std::size_t r = 0; r < next.size(); ++r) {
      const double diff = std::abs(next[r] - current[r]);
      if (!std::isfinite(next[r])) throw Error(ErrorCode::NonFiniteValue, "implicit sweep produced a non-finite value");
      residual = std::max(residual, diff);
    }
    current.swap(next);
    if (residual <= config_.implicit.tol) break;
  }
  return {GridFunction(mesh_, std::move(current)), residual, iters};
}

GridFunction SchemeEngine::step(const GridFunction& U) const {
  if (config_.scheme == SchemeKind::Explicit) return explicit_step(U);
  return implicit_step(U).values;
}

RunResult SchemeEngine::run(const ScalarField& initial, std::span<const double> probe_times) const {
  return run_from(sample(initial), probe_times);
}

RunResult SchemeEngine::run_from(GridFunction U, std::span<const double> probe_times) const {
  if (config_.scheme == SchemeKind::Explicit) check_ratio();
  RunResult out;
  out.tau = config_.tau;
  out.steps = steps_;

  std::vector<int> probe_steps;
  if (probe_times.empty()) {
    probe_steps.push_back(steps_);
  } else {
    for (double t : probe_times) {
      if (!(t >= 0.0) || t > config_.T * (1.0 + 1e-12)) {
        throw Error(ErrorCode::BadParameter, "snapshot time " + std::to_string(t) + " outside [0, T]");
      }
      probe_steps.push_back(static_cast<int>(std::lround(t / config_.tau)));
    }
  }
  auto maybe_snapshot = [&](int n, const GridFunction& values) {
    for (int s : probe_steps) {
      if (s == n) {
        out.snapshots.push_back({n * config_.tau, n, values});
        break;
      }
    }
  };

  const double initial_sup = U.sup_norm();
  const double blow_up = kBlowUpFactor * (initial_sup + 1.0);
  out.max_norm.push_back(initial_sup);
  out.bound.push_back(initial_sup);
  maybe_snapshot(0, U);
  for (int n = 0; n < steps_; ++n) {
    if (config_.scheme == SchemeKind::Explicit) {
      U = explicit_step(U);
    } else {
      auto res = implicit_step(U);
      out.implicit_residuals.push_back(res.residual);
      out.implicit_iterations.push_back(res.iterations);
      U = std::move(res.values);
    }
    const double sup = U.sup_norm();
    if (!std::isfinite(sup) || sup > blow_up) {
      throw Error(ErrorCode::NonFiniteValue, "solution blew up at step " + std::to_string(n + 1) +
                                                 " (sup norm " + std::to_string(sup) + ")");
    }
    out.max_norm.push_back(sup);
    out.bound.push_back(initial_sup + (n + 1) * config_.tau * potential_sup_);
    maybe_snapshot(n + 1, U);
  }
  return out;
}

// ---------------------------------------------------------------------------

CflReport cfl_validate(const DiscreteHamiltonian& G, const Mesh& mesh, double ratio, double radius, int samples,
                       std::uint64_t seed) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadParameter, "radius must be positive");
  const int d = mesh.d();
  const std::size_t E = G.edge_count();
  const auto& interior = mesh.interior();
  CflReport report{0.0, std::numeric_limits<double>::infinity(), ratio, true};
  if (interior.empty() || E == 0) return report;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, interior.size() - 1);
  // P and Q are compared in the Frobenius norm of the full skew matrix
  const double ball = d * radius;
  auto random_field = [&](std::vector<double>& v) {
    double s = 0.0;
    for (double& x : v) {
      x = unif(rng);
      s += 2.0 * x * x;
    }
    const double target = ball * std::sqrt(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const double scale = s > 0.0 ? target / std::sqrt(s) : 0.0;
    for (double& x : v) x *= scale;
  };

  double estimate = 0.0;
  std::vector<double> p(E), q(E), pp(E), qq(E);
  const double step = 1e-6 * std::max(1.0, ball);
  for (int s = 0; s < samples; ++s) {
    // boundary-adjacent nodes carry the largest noise coefficients, so
    // always include the extremes of the mesh ordering
    const std::size_t pos = s == 0 ? 0 : (s == 1 ? interior.size() - 1 : pick(rng));
    const Frame frame = G.frame(mesh.point(interior[pos]));
    const FrameView view = frame.view();
    random_field(p);
    random_field(q);
    double grad_p = 0.0;
    double grad_q = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
      pp = p;
      pp[e] += step;
      const double fp = G.eval(view, pp.data(), q.data());
      pp[e] -= 2.0 * step;
      const double fm = G.eval(view, pp.data(), q.data());
      const double dp = (fp - fm) / (2.0 * step);
      qq = q;
      qq[e] += step;
      const double gp = G.eval(view, p.data(), qq.data());
      qq[e] -= 2.0 * step;
      const double gm = G.eval(view, p.data(), qq.data());
      const double dq = (gp - gm) / (2.0 * step);
      grad_p += dp * dp;
      grad_q += dq * dq;
    }
    // a unit change of one stored entry moves the Frobenius norm by sqrt(2)
    estimate = std::max(estimate, std::sqrt(std::max(grad_p, grad_q) / 2.0));

    // plain secant quotients between two random arguments
    random_field(pp);
    random_field(qq);
    double dpn = 0.0, dqn = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
      dpn += 2.0 * (p[e] - pp[e]) * (p[e] - pp[e]);
      dqn += 2.0 * (q[e] - qq[e]) * (q[e] - qq[e]);
    }
    const double denom = std::sqrt(dpn) + std::sqrt(dqn);
    if (denom > 0.0) {
      estimate = std::max(estimate, std::abs(G.eval(view, p.data(), q.data()) - G.eval(view, pp.data(), qq.data())) / denom);
    }
  }
  report.lipschitz_estimate = estimate;
  if (estimate > 0.0) {
    report.ratio_bound = 1.0 / (2.0 * estimate * (d * d - d) * mesh.graph().max_sqrt_weight());
  }
  report.passes = ratio <= report.ratio_bound;
  return report;
}

}  // namespace hjg
