#include "hjgraph/simplex_mesh.hpp"

#include <cmath>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

std::vector<double> pi_forward(std::span<const double> xi, double eps) {
  const std::size_t d = xi.size();
  if (d < 2) throw Error(ErrorCode::BadDimension, "simplex point needs at least 2 coordinates");
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (xi[i] < eps - kSimplexTol) {
      throw Error(ErrorCode::NotInSimplexEps, "coordinate " + std::to_string(i + 1) + " = " +
                                                  std::to_string(xi[i]) + " is below eps");
    }
    total += xi[i];
  }
  if (std::abs(total - 1.0) > kSimplexTol * static_cast<double>(d)) {
    throw Error(ErrorCode::NotInSimplexEps, "coordinates sum to " + std::to_string(total));
  }
  std::vector<double> s(d - 1);
  double acc = 0.0;
  for (std::size_t l = 0; l + 1 < d; ++l) {
    acc += xi[l];
    s[l] = acc - static_cast<double>(l + 1) * eps;
  }
  return s;
}

std::vector<double> pi_inverse(std::span<const double> s, double eps) {
  const std::size_t m = s.size();
  if (m < 1) throw Error(ErrorCode::BadDimension, "need at least one cumulative coordinate");
  const double d = static_cast<double>(m + 1);
  const double top = 1.0 - d * eps;
  if (s[0] < -kSimplexTol || s[m - 1] > top + kSimplexTol) {
    throw Error(ErrorCode::OutOfRange, "cumulative coordinates leave [0, 1 - d*eps]");
  }
  for (std::size_t l = 1; l < m; ++l) {
    if (s[l] < s[l - 1] - kSimplexTol) {
      throw Error(ErrorCode::NotNondecreasing, "s_" + std::to_string(l + 1) + " < s_" + std::to_string(l));
    }
  }
  std::vector<double> xi(m + 1);
  xi[0] = s[0] + eps;
  for (std::size_t l = 1; l < m; ++l) xi[l] = s[l] - s[l - 1] + eps;
  xi[m] = 1.0 - s[m - 1] - static_cast<double>(m) * eps;
  return xi;
}

std::vector<int> OffsetVector::as_index_offset(int d) const {
  std::vector<int> m(static_cast<std::size_t>(d - 1), 0);
  for (int l = j; l < k; ++l) m[static_cast<std::size_t>(l)] = 1;
  return m;
}

std::vector<double> OffsetVector::as_simplex_offset(int d) const {
  std::vector<double> e(static_cast<std::size_t>(d), 0.0);
  e[static_cast<std::size_t>(j)] = 1.0;
  e[static_cast<std::size_t>(k)] = -1.0;
  return e;
}

namespace {

constexpr std::uint64_t kMaxNodes = 200'000'000ULL;

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    out = out * (n - r + i) / i;
    if (out > kMaxNodes * 64) return kMaxNodes * 64;
  }
  return out;
}

}  // namespace

std::uint64_t Mesh::count_nodes(int d, int levels) {
  // nondecreasing (d-1)-tuples over levels+1 values
  return binomial(static_cast<std::uint64_t>(levels + d - 1), static_cast<std::uint64_t>(d - 1));
}

Mesh::Mesh(Graph graph, double h, double eps) : graph_(std::move(graph)), h_(h), eps_(eps), levels_(0) {
  const int d = graph_.d();
  if (!std::isfinite(eps) || eps < 0.0 || eps * d >= 1.0) {
    throw Error(ErrorCode::BadMeshSize, "eps must lie in [0, 1/d), got " + std::to_string(eps));
  }
  const double span = 1.0 - d * eps;
  if (!std::isfinite(h) || h <= 0.0 || h > span * (1.0 + 1e-12)) {
    throw Error(ErrorCode::BadMeshSize, "mesh size h must lie in (0, 1 - d*eps], got " + std::to_string(h));
  }
  const double ratio = span / h;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) > 1e-9) {
    throw Error(ErrorCode::NonIntegerLevels, "(1 - d*eps)/h = " + std::to_string(ratio) + " is not an integer");
  }
  levels_ = static_cast<int>(nearest);
  build();
}

Mesh::Mesh(Graph graph, double h, double eps, int levels)
    : graph_(std::move(graph)), h_(h), eps_(eps), levels_(levels) {
  build();
}

Mesh Mesh::from_levels(Graph graph, int levels, double eps) {
  const int d = graph.d();
  if (!std::isfinite(eps) || eps < 0.0 || eps * d >= 1.0) {
    throw Error(ErrorCode::BadMeshSize, "eps must lie in [0, 1/d), got " + std::to_string(eps));
  }
  if (levels < 1) throw Error(ErrorCode::BadMeshSize, "level count must be >= 1");
  const double h = (1.0 - d * eps) / levels;
  return Mesh(std::move(graph), h, eps, levels);
}

void Mesh::build() {
  const int d = graph_.d();
  const int N = levels_;
  const std::size_t w = static_cast<std::size_t>(d - 1);
  const std::uint64_t count = count_nodes(d, N);
  if (count > kMaxNodes) {
    throw Error(ErrorCode::BadMeshSize, "mesh would have " + std::to_string(count) + " nodes");
  }
  size_ = static_cast<std::size_t>(count);
  slot_count_ = graph_.pair_count();

  const std::size_t rows = static_cast<std::size_t>(N + d + 1);
  binom_.assign(rows * static_cast<std::size_t>(d), 0);
  for (std::size_t n = 0; n < rows; ++n) {
    for (std::size_t r = 0; r < static_cast<std::size_t>(d); ++r) binom_[n * d + r] = binomial(n, r);
  }

  indices_.resize(size_ * w);
  points_.resize(size_ * static_cast<std::size_t>(d));
  boundary_flag_.assign(size_, 0);

  std::vector<int> idx(w, 0);
  for (std::size_t rank = 0; rank < size_; ++rank) {
    std::copy(idx.begin(), idx.end(), indices_.begin() + static_cast<std::ptrdiff_t>(rank * w));
    // coordinates from integer gaps: ξ_l = (i_l − i_{l−1})h + ε with i_0 = 0, i_d = N
    double* xi = points_.data() + rank * static_cast<std::size_t>(d);
    int prev = 0;
    bool on_boundary = false;
    for (std::size_t l = 0; l <= w; ++l) {
      const int cur = (l < w) ? idx[l] : N;
      const int gap = cur - prev;
      if (gap == 0) on_boundary = true;
      xi[l] = gap * h_ + eps_;
      prev = cur;
    }
    boundary_flag_[rank] = on_boundary ? 1 : 0;
    (on_boundary ? boundary_ : interior_).push_back(rank);

    // next nondecreasing tuple in lexicographic order
    for (std::size_t p = w; p-- > 0;) {
      if (idx[p] < N) {
        ++idx[p];
        for (std::size_t q = p + 1; q < w; ++q) idx[q] = idx[p];
        break;
      }
    }
  }

  neighbors_.assign(size_ * slot_count_ * 2, -1);
  std::vector<int> target(w);
  for (std::size_t rank = 0; rank < size_; ++rank) {
    const auto base = index(rank);
    for (int j = 0; j < d; ++j) {
      for (int k = j + 1; k < d; ++k) {
        const std::size_t slot = pair_slot(d, j, k);
        for (int dir : {1, -1}) {
          std::copy(base.begin(), base.end(), target.begin());
          for (int l = j; l < k; ++l) target[static_cast<std::size_t>(l)] += dir;
          const auto r = rank_of(target);
          if (r) neighbors_[(rank * slot_count_ + slot) * 2 + (dir > 0 ? 0 : 1)] = static_cast<std::int64_t>(*r);
        }
      }
    }
  }
}

std::optional<std::size_t> Mesh::rank_of(std::span<const int> idx) const {
  const int d = graph_.d();
  const int N = levels_;
  if (idx.size() != static_cast<std::size_t>(d - 1)) return std::nullopt;
  int prev = 0;
  for (int v : idx) {
    if (v < prev || v > N) return std::nullopt;
    prev = v;
  }
  auto C = [&](int n, int r) { return binom_[static_cast<std::size_t>(n) * d + static_cast<std::size_t>(r)]; };
  std::uint64_t rank = 0;
  prev = 0;
  for (std::size_t l = 0; l < idx.size(); ++l) {
    const int rem = static_cast<int>(idx.size() - 1 - l);
    const int a = prev;
    const int b = idx[l];
    if (b > a) {
      // Σ_{v=a}^{b−1} C(N−v+rem, rem) = C(N−a+rem+1, rem+1) − C(N−b+rem+1, rem+1)
      rank += C(N - a + rem + 1, rem + 1) - C(N - b + rem + 1, rem + 1);
    }
    prev = b;
  }
  return static_cast<std::size_t>(rank);
}

ShiftResult Mesh::shift_index(std::size_t rank, OffsetVector off, int dir) const {
  const int d = graph_.d();
  if (off.j < 0 || off.k >= d || off.j >= off.k) {
    throw Error(ErrorCode::IndexOutOfRange, "offset pair must satisfy 1 <= j < k <= d");
  }
  ShiftResult out;
  const auto p = point(rank);
  out.target.assign(p.begin(), p.end());
  out.target[static_cast<std::size_t>(off.j)] += dir * h_;
  out.target[static_cast<std::size_t>(off.k)] -= dir * h_;
  const std::int64_t r = neighbor(rank, pair_slot(d, off.j, off.k), dir);
  if (r >= 0) {
    out.rank = static_cast<std::size_t>(r);
    out.kind = is_boundary(out.rank.value()) ? ShiftResult::Kind::BoundaryExit : ShiftResult::Kind::Interior;
    // use the integer-reconstructed coordinates for admissible targets
    const auto q = point(*out.rank);
    out.target.assign(q.begin(), q.end());
  } else {
    out.kind = ShiftResult::Kind::BoundaryExit;
  }
  return out;
}

}  // namespace hjg
