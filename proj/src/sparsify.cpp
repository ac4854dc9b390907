#include "resistweave/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace resistweave {

namespace {

std::size_t require_regular_degree(const WeightedMultigraph& g) {
  const std::size_t d = g.num_vertices() == 0 ? 0 : g.unweighted_degree(0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.unweighted_degree(v) != d) throw GraphError("graph is not regular");
  }
  for (const auto& e : g.edges()) {
    if (e.w != 1.0 || e.mult != 1 || e.is_loop()) throw GraphError("graph must be simple with unit weights");
  }
  return d;
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

std::vector<std::pair<VertexId, VertexId>> choose_pairs(std::size_t n, std::size_t budget, Rng& rng, bool& all) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  const std::size_t total = n * (n - 1) / 2;
  all = n <= kExactPairsMaxVertices || budget >= total;
  if (all) {
    pairs.reserve(total);
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    }
    return pairs;
  }
  // Pair index p enumerates (u, v), u < v, row by row.
  for (std::size_t p : sample_without_replacement(total, budget, rng)) {
    VertexId u = 0;
    std::size_t row = n - 1;
    while (p >= row) {
      p -= row;
      ++u;
      --row;
    }
    pairs.emplace_back(u, u + 1 + p);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

ResistanceCertificate check_intervals(const WeightedMultigraph& h, const ResistanceTable* table, bool regular_form) {
  if (!h.is_connected()) throw GraphError("certificate: graph is disconnected");
  ResistanceCertificate cert;
  cert.lambda2 = lambda2(h);
  cert.w_max = h.max_weight();
  cert.degree = regular_form ? h.regular_degree() : h.min_degree();
  if (regular_form && cert.degree < 0.0) throw GraphError("thm9_certificate: graph is not regular");

  ResistanceTable local;
  if (table == nullptr) {
    local = all_resistances(h);
    table = &local;
  }
  const std::size_t n = h.num_vertices();
  const ResistanceInterval fixed = vlrh_regular_bound(cert.degree, cert.lambda2, cert.w_max);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      const ResistanceInterval iv =
          regular_form ? fixed
                       : vlrh_bound(h.weighted_degree(u), h.weighted_degree(v), cert.lambda2, cert.w_max, cert.degree);
      const double r = (*table)(u, v);
      const double slack = iv.radius - std::abs(r - iv.center);
      if (slack < cert.margin) {
        cert.margin = slack;
        cert.worst = {u, v};
      }
      if (slack < 0.0) ++cert.violations;
    }
  }
  cert.holds = cert.violations == 0;
  return cert;
}

}  // namespace

MatchingDecomposition double_cover_decomposition(const WeightedMultigraph& g) {
  require_regular_degree(g);
  return matching_decomposition(double_cover(g));
}

SparsifierResult regular_expander_subgraph(const WeightedMultigraph& g, std::size_t d_target, Rng& rng,
                                           const MatchingDecomposition* cached) {
  const std::size_t degree = require_regular_degree(g);
  if (d_target == 0 || d_target > degree) {
    throw GraphError("d_target must lie in [1, " + std::to_string(degree) + "], got " + std::to_string(d_target));
  }
  MatchingDecomposition local;
  if (cached == nullptr) {
    local = double_cover_decomposition(g);
    cached = &local;
  }
  if (cached->num_vertices != 2 * g.num_vertices() || cached->size() != degree) {
    throw GraphError("cached decomposition does not belong to this graph");
  }

  SparsifierResult out;
  out.d_target = d_target;
  for (int attempt = 0; attempt <= kDisconnectedResampleCap; ++attempt) {
    auto picked = sample_without_replacement(cached->size(), d_target, rng);
    std::sort(picked.begin(), picked.end());
    std::vector<Edge> lifted;
    lifted.reserve(d_target * g.num_vertices());
    for (std::size_t i : picked) {
      for (const auto& [a, b] : cached->matchings[i]) lifted.push_back({a, b, 1.0, 1});
    }
    out.graph = unfold_double_cover(WeightedMultigraph(2 * g.num_vertices(), std::move(lifted)));
    out.matchings = std::move(picked);
    out.resamples = static_cast<std::size_t>(attempt);
    out.connected = out.graph.is_connected();
    if (out.connected) break;
  }
  out.lambda2 = out.connected ? lambda2(out.graph) : 0.0;
  return out;
}

std::size_t sparsifier_degree(double epsilon, double c0) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw GraphError("epsilon must lie in (0, 1)");
  if (!(c0 > 0.0)) throw GraphError("c0 must be positive");
  return static_cast<std::size_t>(std::ceil(c0 / epsilon));
}

SparsifierResult resistance_sparsifier_with_degree(const WeightedMultigraph& g, std::size_t d_target, Rng& rng,
                                                   const MatchingDecomposition* cached) {
  SparsifierResult out = regular_expander_subgraph(g, d_target, rng, cached);
  const double degree = g.weighted_degree(0);
  out.scale = degree / out.graph.weighted_degree(0);
  out.graph = scale_weights(out.graph, out.scale);
  return out;
}

SparsifierResult resistance_sparsifier(const WeightedMultigraph& g, double epsilon, Rng& rng,
                                       const SparsifyOptions& options) {
  const std::size_t d_target = sparsifier_degree(epsilon, options.c0);
  const std::size_t degree = require_regular_degree(g);
  if (d_target > degree) {
    throw GraphError("epsilon too small: needs " + std::to_string(d_target) + " matchings, only " +
                     std::to_string(degree) + " available");
  }
  return resistance_sparsifier_with_degree(g, d_target, rng, options.decomposition);
}

ErrorReport compare_tables(const ResistanceTable& g_table, const ResistanceTable& h_table, std::size_t pair_budget,
                           Rng& rng) {
  if (g_table.size() != h_table.size()) throw GraphError("verify_sparsifier: vertex counts differ");
  ErrorReport rep;
  rep.pair_seed = rng();
  Rng pair_rng(rep.pair_seed);
  rep.pairs = choose_pairs(g_table.size(), pair_budget, pair_rng, rep.all_pairs);
  for (const auto& [u, v] : rep.pairs) {
    const double rg = g_table(u, v);
    const double rh = h_table(u, v);
    rep.r_g.push_back(rg);
    rep.r_h.push_back(rh);
    rep.errors.push_back(std::abs(rh / rg - 1.0));
  }
  if (!rep.errors.empty()) {
    rep.max = *std::max_element(rep.errors.begin(), rep.errors.end());
    rep.median = quantile(rep.errors, 0.5);
    rep.p95 = quantile(rep.errors, 0.95);
  }
  return rep;
}

ErrorReport verify_sparsifier(const ResistanceTable& g_table, const WeightedMultigraph& h, std::size_t pair_budget,
                              Rng& rng) {
  if (g_table.size() != h.num_vertices()) throw GraphError("verify_sparsifier: vertex counts differ");
  if (!h.is_connected()) {
    ErrorReport rep;
    rep.pair_seed = rng();
    Rng pair_rng(rep.pair_seed);
    rep.pairs = choose_pairs(h.num_vertices(), pair_budget, pair_rng, rep.all_pairs);
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& [u, v] : rep.pairs) {
      rep.r_g.push_back(g_table(u, v));
      rep.r_h.push_back(inf);
      rep.errors.push_back(inf);
    }
    rep.max = rep.median = rep.p95 = inf;
    rep.connected = false;
    return rep;
  }
  return compare_tables(g_table, all_resistances(h), pair_budget, rng);
}

ErrorReport verify_sparsifier(const WeightedMultigraph& g, const WeightedMultigraph& h, std::size_t pair_budget,
                              Rng& rng) {
  if (!g.is_connected() || !h.is_connected()) throw GraphError("verify_sparsifier: inputs must be connected");
  return verify_sparsifier(all_resistances(g), h, pair_budget, rng);
}

SparsifierResult independent_sample_baseline(const WeightedMultigraph& g, std::size_t edge_budget, Rng& rng) {
  const std::size_t m = g.num_edges();
  const double p = m == 0 ? 1.0 : std::min(1.0, static_cast<double>(edge_budget) / static_cast<double>(m));
  std::bernoulli_distribution keep(p);
  std::vector<Edge> kept;
  for (const auto& e : g.edges()) {
    std::size_t copies = 0;
    for (std::size_t c = 0; c < e.mult; ++c) copies += keep(rng) ? 1 : 0;
    if (copies > 0 && p > 0.0) kept.push_back({e.u, e.v, e.w / p, copies});
  }
  SparsifierResult out;
  out.graph = WeightedMultigraph(g.num_vertices(), std::move(kept));
  out.scale = p > 0.0 ? 1.0 / p : 0.0;
  out.connected = out.graph.is_connected();
  out.lambda2 = out.connected ? lambda2(out.graph) : 0.0;
  return out;
}

ResistanceCertificate thm9_certificate(const WeightedMultigraph& h, const ResistanceTable* table) {
  return check_intervals(h, table, true);
}

ResistanceCertificate degree_certificate(const WeightedMultigraph& h, const ResistanceTable* table) {
  // The underlying bound is only proved for non-bipartite graphs.
  if (h.is_bipartite()) throw GraphError("degree_certificate needs a non-bipartite graph; use thm9_certificate");
  return check_intervals(h, table, false);
}

}  // namespace resistweave
