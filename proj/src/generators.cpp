#include "resistweave/generators.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

namespace resistweave {

namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

WeightedMultigraph from_pairs(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back({a, b, 1.0, 1});
  return WeightedMultigraph(n, std::move(edges));
}

constexpr int kRestartCap = 100;

// Pairing model followed by targeted double-edge switches; false if the
// switch budget runs out.
bool try_random_regular(std::size_t n, std::size_t degree, Rng& rng,
                        std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<VertexId> points;
  points.reserve(n * degree);
  for (VertexId v = 0; v < n; ++v) points.insert(points.end(), degree, v);
  std::shuffle(points.begin(), points.end(), rng);
  edges.clear();
  for (std::size_t i = 0; i < points.size(); i += 2) edges.emplace_back(points[i], points[i + 1]);

  std::unordered_map<std::uint64_t, int> count;
  for (const auto& [a, b] : edges) ++count[pair_key(a, b)];
  auto bad = [&](std::size_t i) {
    const auto& [a, b] = edges[i];
    return a == b || count[pair_key(a, b)] > 1;
  };

  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::bernoulli_distribution coin(0.5);
  const std::size_t budget = 200 * edges.size() + 1000;
  std::size_t steps = 0;
  // A switch may break an edge that an earlier sweep already fixed, so sweep
  // until one pass finds nothing to repair.
  for (bool dirty = true; dirty;) {
    dirty = false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      while (bad(i)) {
        dirty = true;
        if (++steps > budget) return false;
        const std::size_t j = pick(rng);
        if (j == i) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (coin(rng)) std::swap(c, d);
        // (a,b),(c,d) -> (a,c),(b,d)
        if (a == c || b == d) continue;
        if (count[pair_key(a, c)] > 0 || count[pair_key(b, d)] > 0 || pair_key(a, c) == pair_key(b, d)) continue;
        --count[pair_key(a, b)];
        --count[pair_key(edges[j].first, edges[j].second)];
        edges[i] = {a, c};
        edges[j] = {b, d};
        ++count[pair_key(a, c)];
        ++count[pair_key(b, d)];
      }
    }
  }
  return true;
}

}  // namespace

WeightedMultigraph complete_graph(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  return from_pairs(n, pairs);
}

WeightedMultigraph cycle_graph(std::size_t n) {
  if (n < 3) throw GraphError("cycle_graph: need n >= 3");
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (VertexId v = 0; v < n; ++v) pairs.emplace_back(v, (v + 1) % n);
  return from_pairs(n, pairs);
}

WeightedMultigraph hypercube(std::size_t dimension) {
  if (dimension > 20) throw GraphError("hypercube: dimension too large");
  const std::size_t n = std::size_t{1} << dimension;
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (VertexId v = 0; v < n; ++v) {
    for (std::size_t bit = 0; bit < dimension; ++bit) {
      const VertexId u = v ^ (VertexId{1} << bit);
      if (v < u) pairs.emplace_back(v, u);
    }
  }
  return from_pairs(n, pairs);
}

WeightedMultigraph circulant(std::size_t n, const std::vector<std::size_t>& offsets) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::size_t s : offsets) {
    if (s == 0 || s > n / 2) throw GraphError("circulant: offsets must lie in [1, n/2]");
    for (VertexId v = 0; v < n; ++v) {
      const VertexId u = (v + s) % n;
      if (2 * s == n && u < v) continue;
      pairs.emplace_back(v, u);
    }
  }
  return from_pairs(n, pairs);
}

WeightedMultigraph random_regular(std::size_t n, std::size_t degree, Rng& rng) {
  if ((n * degree) % 2 != 0) throw GraphError("random_regular: n * D must be even");
  if (degree >= n) throw GraphError("random_regular: need D < n");
  if (degree == n - 1) return complete_graph(n);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int attempt = 0; attempt < kRestartCap; ++attempt) {
    if (try_random_regular(n, degree, rng, edges)) return from_pairs(n, edges);
  }
  throw GraphError("random_regular: no simple graph after " + std::to_string(kRestartCap) + " restarts");
}

WeightedMultigraph random_regular_bipartite(std::size_t side, std::size_t degree, Rng& rng) {
  if (degree > side) throw GraphError("random_regular_bipartite: need D <= side");
  for (int attempt = 0; attempt < kRestartCap; ++attempt) {
    std::vector<std::vector<char>> used(side, std::vector<char>(side, 0));
    std::vector<std::pair<VertexId, VertexId>> pairs;
    bool ok = true;
    for (std::size_t k = 0; k < degree && ok; ++k) {
      std::vector<VertexId> sigma(side);
      std::iota(sigma.begin(), sigma.end(), VertexId{0});
      std::shuffle(sigma.begin(), sigma.end(), rng);
      // Swap targets until no left vertex repeats an existing neighbor.
      std::uniform_int_distribution<std::size_t> pick(0, side - 1);
      std::size_t budget = 1000 * side;
      for (std::size_t l = 0; l < side && ok; ++l) {
        while (used[l][sigma[l]]) {
          if (budget-- == 0) {
            ok = false;
            break;
          }
          const std::size_t j = pick(rng);
          if (!used[l][sigma[j]] && !used[j][sigma[l]]) std::swap(sigma[l], sigma[j]);
        }
      }
      if (!ok) break;
      for (std::size_t l = 0; l < side; ++l) {
        used[l][sigma[l]] = 1;
        pairs.emplace_back(l, side + sigma[l]);
      }
    }
    if (ok) return from_pairs(2 * side, pairs);
  }
  throw GraphError("random_regular_bipartite: construction failed");
}

WeightedMultigraph random_weighted_regular_bipartite(std::size_t side, std::size_t terms, Rng& rng) {
  std::uniform_real_distribution<double> weight(0.25, 2.0);
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<VertexId> sigma(side);
    std::iota(sigma.begin(), sigma.end(), VertexId{0});
    std::shuffle(sigma.begin(), sigma.end(), rng);
    const double w = weight(rng);
    for (std::size_t l = 0; l < side; ++l) edges.push_back({l, side + sigma[l], w, 1});
  }
  return WeightedMultigraph(2 * side, std::move(edges));
}

WeightedMultigraph random_connected_graph(std::size_t n, double p, Rng& rng, double w_lo, double w_hi) {
  std::bernoulli_distribution keep(p);
  std::uniform_real_distribution<double> weight(w_lo, w_hi);
  for (int attempt = 0; attempt < 10 * kRestartCap; ++attempt) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) {
        if (keep(rng)) edges.push_back({u, v, w_lo == w_hi ? w_lo : weight(rng), 1});
      }
    }
    WeightedMultigraph g(n, std::move(edges));
    if (g.is_connected()) return g;
  }
  throw GraphError("random_connected_graph: p too small to reach a connected sample");
}

}  // namespace resistweave
