#include "resistweave/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "resistweave/io.hpp"

namespace resistweave {

namespace {

using Eigen::Index;

Index idx(VertexId v) { return static_cast<Index>(v); }

void require_connected(const WeightedMultigraph& g, const char* what) {
  if (g.num_vertices() == 0 || !g.is_connected()) {
    throw GraphError(std::string(what) + ": graph is disconnected");
  }
}

// Sum of w * mult between each pair, loops excluded.
Eigen::MatrixXd adjacency_without_loops(const WeightedMultigraph& g) {
  const Index n = idx(g.num_vertices());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    const double mass = e.w * static_cast<double>(e.mult);
    a(idx(e.u), idx(e.v)) += mass;
    a(idx(e.v), idx(e.u)) += mass;
  }
  return a;
}

}  // namespace

Eigen::MatrixXd laplacian(const WeightedMultigraph& g) {
  Eigen::MatrixXd l = -adjacency_without_loops(g);
  for (Index i = 0; i < l.rows(); ++i) l(i, i) = -l.row(i).sum();
  return l;
}

Eigen::MatrixXd normalized_laplacian(const WeightedMultigraph& g) {
  const auto& deg = g.weighted_degrees();
  Eigen::VectorXd inv_sqrt(idx(g.num_vertices()));
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!(deg[v] > 0.0)) throw GraphError("normalized Laplacian: vertex " + std::to_string(v) + " is isolated");
    inv_sqrt(idx(v)) = 1.0 / std::sqrt(deg[v]);
  }
  // I - D^{-1/2} A D^{-1/2}, with A carrying loops as 2w on the diagonal.
  Eigen::MatrixXd a = adjacency_without_loops(g);
  for (const auto& e : g.edges()) {
    if (e.is_loop()) a(idx(e.u), idx(e.u)) += 2.0 * e.w * static_cast<double>(e.mult);
  }
  Eigen::MatrixXd nl = -(inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal());
  nl.diagonal().array() += 1.0;
  return nl;
}

Eigen::VectorXd normalized_spectrum(const WeightedMultigraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_laplacian(g), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double lambda2(const WeightedMultigraph& g) {
  if (g.num_vertices() < 2) throw GraphError("lambda2: need at least two vertices");
  Eigen::MatrixXd nl = normalized_laplacian(g);
  if (!g.is_connected()) return 0.0;

  Eigen::VectorXd q(idx(g.num_vertices()));
  for (VertexId v = 0; v < g.num_vertices(); ++v) q(idx(v)) = std::sqrt(g.weighted_degree(v));
  q.normalize();
  // The spectrum lies in [0, 2]; shifting the null direction to 3 makes
  // lambda2 the smallest eigenvalue.
  nl.noalias() += 3.0 * q * q.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(nl, Eigen::EigenvaluesOnly);
  return std::max(0.0, solver.eigenvalues()(0));
}

Eigen::MatrixXd laplacian_pseudo_inverse(const WeightedMultigraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g));
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double cutoff = 1e-12 * std::max(values.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  Eigen::VectorXd inv = values.unaryExpr([cutoff](double x) { return std::abs(x) > cutoff ? 1.0 / x : 0.0; });
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  return vecs * inv.asDiagonal() * vecs.transpose();
}

double effective_resistance(const WeightedMultigraph& g, VertexId u, VertexId v) {
  if (u >= g.num_vertices() || v >= g.num_vertices()) throw GraphError("effective_resistance: vertex out of range");
  if (u == v) return 0.0;
  require_connected(g, "effective_resistance");
  const Eigen::MatrixXd p = laplacian_pseudo_inverse(g);
  return p(idx(u), idx(u)) + p(idx(v), idx(v)) - 2.0 * p(idx(u), idx(v));
}

ResistanceTable all_resistances(const WeightedMultigraph& g) {
  require_connected(g, "all_resistances");
  const Index n = idx(g.num_vertices());
  Eigen::MatrixXd m = laplacian(g);
  m.array() += 1.0 / static_cast<double>(n);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw GraphError("all_resistances: factorization failed");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));

  Eigen::MatrixXd r(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) r(i, j) = inv(i, i) + inv(j, j) - 2.0 * inv(i, j);
  }
  // Exact symmetry and zero diagonal, independent of rounding.
  r = 0.5 * (r + r.transpose()).eval();
  r.diagonal().setZero();
  return ResistanceTable(std::move(r));
}

void ResistanceTable::write_csv(std::ostream& out) const {
  out << "u,v,R\n";
  for (Index u = 0; u < r_.rows(); ++u) {
    for (Index v = u + 1; v < r_.cols(); ++v) out << u << ',' << v << ',' << format_double(r_(u, v)) << '\n';
  }
}

CheegerResult cheeger_bruteforce(const WeightedMultigraph& g) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw GraphError("cheeger_bruteforce: need at least two vertices");
  if (n > kCheegerMaxVertices) {
    throw GraphError("cheeger_bruteforce: n = " + std::to_string(n) + " exceeds " +
                     std::to_string(kCheegerMaxVertices));
  }

  // Gray-code walk over all subsets; flipping one vertex changes the cut by
  // the weight to neighbors on its old side minus the weight to the other side.
  std::uint32_t mask = 0;
  std::size_t size = 0;
  double cut = 0.0;
  CheegerResult best{std::numeric_limits<double>::infinity(), {}};
  std::uint32_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto x = static_cast<VertexId>(std::countr_zero(step));
    const bool was_in = (mask >> x) & 1u;
    for (const auto& nb : g.neighbors(x)) {
      if (nb.v == x) continue;
      const double mass = nb.w * static_cast<double>(nb.mult);
      const bool other_in = (mask >> nb.v) & 1u;
      cut += (other_in == was_in) ? mass : -mass;
    }
    mask ^= (1u << x);
    if (was_in) {
      --size;
    } else {
      ++size;
    }
    if (size == 0 || size == n) continue;
    const std::size_t smaller = std::min(size, n - size);
    const double ratio = std::max(cut, 0.0) / static_cast<double>(smaller);
    if (ratio < best.phi) {
      best.phi = ratio;
      best_mask = (2 * size <= n) ? mask : ~mask & static_cast<std::uint32_t>(total - 1);
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if ((best_mask >> v) & 1u) best.witness.push_back(v);
  }
  // Recompute the winner exactly to shed Gray-code rounding drift.
  best.phi = cut_weight(g, best.witness) / static_cast<double>(best.witness.size());
  return best;
}

HittingTimes hitting_times(const WeightedMultigraph& g) {
  require_connected(g, "hitting_times");
  const Index n = idx(g.num_vertices());
  const Eigen::MatrixXd l = laplacian(g);
  Eigen::VectorXd deg(n);
  for (Index i = 0; i < n; ++i) deg(i) = g.weighted_degree(static_cast<VertexId>(i));

  HittingTimes out;
  out.steps = Eigen::MatrixXd::Zero(n, n);
  out.total_weight = g.total_weight();
  if (n == 1) return out;

  // deg(u) h(u) - Σ_{x≠target} A(u,x) h(x) = deg(u) for u ≠ target. Loops
  // appear on both sides and cancel, which is the lazy-step convention.
  Eigen::MatrixXd grounded(n - 1, n - 1);
  Eigen::VectorXd rhs(n - 1);
  for (Index target = 0; target < n; ++target) {
    for (Index i = 0, ri = 0; i < n; ++i) {
      if (i == target) continue;
      rhs(ri) = deg(i);
      for (Index j = 0, rj = 0; j < n; ++j) {
        if (j == target) continue;
        grounded(ri, rj++) = l(i, j);
      }
      ++ri;
    }
    const Eigen::VectorXd h = grounded.llt().solve(rhs);
    for (Index i = 0, ri = 0; i < n; ++i) {
      if (i != target) out.steps(i, target) = h(ri++);
    }
  }
  return out;
}

WeightedMultigraph bipartite_square(const WeightedMultigraph& g, std::span<const VertexId> side, double d) {
  const std::size_t n = g.num_vertices();
  const auto in_side = membership_mask(n, side);
  if (side.empty() || side.size() == n) throw GraphError("bipartite_square: side must be a proper part");
  for (const auto& e : g.edges()) {
    if (in_side[e.u] == in_side[e.v]) throw GraphError("bipartite_square: side is not a part of a bipartition");
  }
  for (VertexId v = 0; v < n; ++v) {
    if (std::abs(g.weighted_degree(v) - d) > 1e-9 * std::max(1.0, d)) {
      throw GraphError("bipartite_square: graph is not d-regular in weighted degrees");
    }
  }

  std::vector<Index> other_index(n, -1);
  Index other_count = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (!in_side[v]) other_index[v] = other_count++;
  }
  const Index s = idx(side.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(s, other_count);
  for (Index i = 0; i < s; ++i) {
    for (const auto& nb : g.neighbors(side[static_cast<std::size_t>(i)])) {
      b(i, other_index[nb.v]) += nb.w * static_cast<double>(nb.mult);
    }
  }
  const Eigen::MatrixXd w1 = (b * b.transpose()) / d;

  std::vector<Edge> edges;
  for (Index i = 0; i < s; ++i) {
    // A loop of weight x adds 2x to the degree, so half the return mass.
    if (w1(i, i) > 0.0) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i), 0.5 * w1(i, i), 1});
    for (Index j = i + 1; j < s; ++j) {
      if (w1(i, j) > 0.0) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), w1(i, j), 1});
    }
  }
  return WeightedMultigraph(side.size(), std::move(edges));
}

ResistanceInterval vlrh_bound(double d_u, double d_v, double lambda2, double w_max, double d_min) {
  return {1.0 / d_u + 1.0 / d_v, 2.0 * (1.0 / lambda2 + 2.0) * w_max / (d_min * d_min)};
}

ResistanceInterval vlrh_regular_bound(double d, double lambda2, double w_max) {
  return {2.0 / d, 12.0 * (1.0 / lambda2 + 2.0) * w_max / (d * d)};
}

}  // namespace resistweave
