#include "resistweave/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace resistweave {

namespace {

constexpr std::uint32_t kFree = UINT32_MAX;

// Bipartite matcher on local ids: left 0..L-1, right 0..R-1. `adj[l]` may
// list a right vertex several times (parallel edges).
class BipartiteMatcher {
 public:
  BipartiteMatcher(const std::vector<std::vector<std::uint32_t>>& adj, std::size_t right_count)
      : adj_(adj),
        mate_left_(adj.size(), kFree),
        mate_right_(right_count, kFree),
        seen_left_(adj.size(), 0),
        seen_right_(right_count, 0),
        parent_(right_count, kFree) {}

  // Returns true on success; otherwise fills `witness` with left ids whose
  // neighborhood is too small.
  bool run(std::vector<std::uint32_t>& witness) {
    const auto left_count = static_cast<std::uint32_t>(adj_.size());
    for (std::uint32_t l = 0; l < left_count; ++l) {
      for (std::uint32_t r : adj_[l]) {
        if (mate_right_[r] == kFree) {
          mate_left_[l] = r;
          mate_right_[r] = l;
          break;
        }
      }
    }
    for (std::uint32_t l = 0; l < left_count; ++l) {
      if (mate_left_[l] != kFree) continue;
      if (!augment_from(l)) {
        witness.clear();
        for (std::uint32_t x = 0; x < left_count; ++x) {
          if (seen_left_[x] == stamp_) witness.push_back(x);
        }
        return false;
      }
    }
    return true;
  }

  const std::vector<std::uint32_t>& mate_left() const { return mate_left_; }

 private:
  bool augment_from(std::uint32_t root) {
    ++stamp_;
    queue_.clear();
    queue_.push_back(root);
    seen_left_[root] = stamp_;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::uint32_t x = queue_[head];
      for (std::uint32_t r : adj_[x]) {
        if (seen_right_[r] == stamp_) continue;
        seen_right_[r] = stamp_;
        parent_[r] = x;
        if (mate_right_[r] == kFree) {
          flip_path(r);
          return true;
        }
        const std::uint32_t next = mate_right_[r];
        if (seen_left_[next] != stamp_) {
          seen_left_[next] = stamp_;
          queue_.push_back(next);
        }
      }
    }
    return false;
  }

  void flip_path(std::uint32_t r) {
    while (r != kFree) {
      const std::uint32_t l = parent_[r];
      const std::uint32_t previous = mate_left_[l];
      mate_left_[l] = r;
      mate_right_[r] = l;
      r = previous;
    }
  }

  const std::vector<std::vector<std::uint32_t>>& adj_;
  std::vector<std::uint32_t> mate_left_;
  std::vector<std::uint32_t> mate_right_;
  std::vector<std::uint32_t> seen_left_;
  std::vector<std::uint32_t> seen_right_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> queue_;
  std::uint32_t stamp_ = 0;
};

struct LocalSides {
  VertexSet left;
  VertexSet right;
  std::vector<std::uint32_t> local;  // global -> index within its side
};

LocalSides split_sides(std::size_t n, const std::vector<char>& is_left) {
  LocalSides s;
  s.local.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    auto& side = is_left[v] ? s.left : s.right;
    s.local[v] = static_cast<std::uint32_t>(side.size());
    side.push_back(v);
  }
  return s;
}

std::vector<std::vector<std::uint32_t>> left_adjacency(const WeightedMultigraph& g, const LocalSides& sides,
                                                       const std::vector<char>& is_left) {
  std::vector<std::vector<std::uint32_t>> adj(sides.left.size());
  for (const auto& e : g.edges()) {
    if (is_left[e.u] == is_left[e.v]) {
      throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") does not cross the sides");
    }
    const VertexId l = is_left[e.u] ? e.u : e.v;
    const VertexId r = is_left[e.u] ? e.v : e.u;
    for (std::size_t c = 0; c < e.mult; ++c) adj[sides.local[l]].push_back(sides.local[r]);
  }
  return adj;
}

Matching to_matching(const LocalSides& sides, const std::vector<std::uint32_t>& mate_left) {
  Matching m;
  m.reserve(mate_left.size());
  for (std::size_t l = 0; l < mate_left.size(); ++l) m.emplace_back(sides.left[l], sides.right[mate_left[l]]);
  return m;
}

WeightedMultigraph pairs_graph(std::size_t n, const Matching& m) {
  std::vector<Edge> edges;
  edges.reserve(m.size());
  for (const auto& [a, b] : m) edges.push_back({a, b, 1.0, 1});
  return WeightedMultigraph(n, std::move(edges));
}

}  // namespace

WeightedMultigraph MatchingDecomposition::matching_graph(std::size_t i) const {
  return pairs_graph(num_vertices, matchings.at(i));
}

std::vector<WeightedMultigraph> MatchingDecomposition::as_graphs() const {
  std::vector<WeightedMultigraph> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(matching_graph(i));
  return out;
}

WeightedMultigraph CycleDecomposition::cycle_graph(std::size_t i) const {
  const auto& c = cycles.at(i);
  std::vector<Edge> edges;
  edges.reserve(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) edges.push_back({c[j], c[(j + 1) % c.size()], 1.0, 1});
  return WeightedMultigraph(num_vertices, std::move(edges));
}

std::vector<WeightedMultigraph> CycleDecomposition::as_graphs() const {
  std::vector<WeightedMultigraph> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(cycle_graph(i));
  return out;
}

Matching perfect_matching(const WeightedMultigraph& g, std::span<const VertexId> left) {
  const std::size_t n = g.num_vertices();
  const auto is_left = membership_mask(n, left);
  if (2 * left.size() != n) throw GraphError("perfect_matching: sides have unequal sizes");
  const LocalSides sides = split_sides(n, is_left);
  const auto adj = left_adjacency(g, sides, is_left);

  BipartiteMatcher matcher(adj, sides.right.size());
  std::vector<std::uint32_t> witness;
  if (!matcher.run(witness)) {
    VertexSet global;
    for (auto l : witness) global.push_back(sides.left[l]);
    throw HallViolation("no perfect matching: Hall's condition fails on a set of " + std::to_string(global.size()) +
                            " left vertices",
                        std::move(global));
  }
  return to_matching(sides, matcher.mate_left());
}

MatchingDecomposition matching_decomposition(const WeightedMultigraph& g) {
  const std::size_t n = g.num_vertices();
  const auto color = g.bipartition();
  if (n == 0 || color.empty()) throw GraphError("matching_decomposition: graph is not bipartite");
  for (const auto& e : g.edges()) {
    if (e.w != 1.0) throw GraphError("matching_decomposition: only unit-weight graphs are supported");
  }
  const std::size_t degree = g.unweighted_degree(0);
  for (VertexId v = 0; v < n; ++v) {
    if (g.unweighted_degree(v) != degree) throw GraphError("matching_decomposition: graph is not regular");
  }

  std::vector<char> is_left(n);
  for (VertexId v = 0; v < n; ++v) is_left[v] = color[v] == 0;
  const LocalSides sides = split_sides(n, is_left);
  if (sides.left.size() != sides.right.size()) throw GraphError("matching_decomposition: unbalanced sides");
  auto adj = left_adjacency(g, sides, is_left);

  MatchingDecomposition out;
  out.num_vertices = n;
  out.matchings.reserve(degree);
  for (std::size_t round = 0; round < degree; ++round) {
    BipartiteMatcher matcher(adj, sides.right.size());
    std::vector<std::uint32_t> witness;
    if (!matcher.run(witness)) {
      // Cannot happen for a regular bipartite graph.
      throw GraphError("matching_decomposition: extraction failed in round " + std::to_string(round));
    }
    const auto& mate = matcher.mate_left();
    for (std::size_t l = 0; l < adj.size(); ++l) {
      auto& list = adj[l];
      auto it = std::find(list.begin(), list.end(), mate[l]);
      *it = list.back();
      list.pop_back();
    }
    out.matchings.push_back(to_matching(sides, mate));
  }

  out.partner.assign(out.matchings.size(), std::vector<VertexId>(n));
  for (std::size_t i = 0; i < out.matchings.size(); ++i) {
    for (const auto& [a, b] : out.matchings[i]) {
      out.partner[i][a] = b;
      out.partner[i][b] = a;
    }
  }
  return out;
}

CycleDecomposition walecki_decomposition(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw GraphError("walecki_decomposition: n must be odd and at least 3");
  // Vertices 0..m-1 sit on a circle, vertex m is the hub. Each cycle is the
  // hub followed by the zigzag i, i+1, i-1, i+2, i-2, ... around the circle.
  const std::size_t m = n - 1;
  CycleDecomposition out;
  out.num_vertices = n;
  for (std::size_t i = 0; i < m / 2; ++i) {
    VertexSet cycle{m, i};
    for (std::size_t j = 1; cycle.size() < n; ++j) {
      cycle.push_back((i + j) % m);
      if (cycle.size() < n) cycle.push_back((i + m - j) % m);
    }
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

std::size_t set_cover_sample_count(std::size_t universe_size, double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) throw GraphError("set cover density mu must lie in (0, 1]");
  const double q = std::ceil(1.1 / mu * std::log(static_cast<double>(std::max<std::size_t>(universe_size, 1))));
  return std::max<std::size_t>(1, static_cast<std::size_t>(q));
}

std::vector<std::size_t> dense_set_cover(std::size_t universe_size,
                                         const std::function<bool(std::size_t, std::size_t)>& member,
                                         std::size_t family_size, double mu, Rng& rng,
                                         std::optional<std::size_t> samples) {
  if (family_size == 0) throw CoverFailure("dense_set_cover: empty family");
  const std::size_t q = samples.value_or(set_cover_sample_count(universe_size, mu));
  std::size_t best_uncovered = universe_size;
  for (int attempt = 0; attempt < kCoverRetryCap; ++attempt) {
    Rng stream(rng());
    std::uniform_int_distribution<std::size_t> pick(0, family_size - 1);
    std::vector<std::size_t> chosen(q);
    for (auto& c : chosen) c = pick(stream);
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

    std::size_t uncovered = 0;
    for (std::size_t x = 0; x < universe_size; ++x) {
      const bool hit = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t s) { return member(x, s); });
      if (!hit) ++uncovered;
    }
    if (uncovered == 0) return chosen;
    best_uncovered = std::min(best_uncovered, uncovered);
  }
  throw CoverFailure("dense_set_cover: no cover after " + std::to_string(kCoverRetryCap) + " attempts of " +
                     std::to_string(q) + " samples (best attempt left " + std::to_string(best_uncovered) +
                     " elements uncovered)");
}

namespace {

// crossing[j][i]: element j has an edge at the i-th vertex of `side` that
// crosses the bisection.
std::vector<std::vector<char>> crossing_table(const Bisection& b, const VertexSet& side,
                                              std::span<const WeightedMultigraph> elements) {
  std::vector<std::size_t> position(b.num_vertices(), SIZE_MAX);
  for (std::size_t i = 0; i < side.size(); ++i) position[side[i]] = i;
  std::vector<std::vector<char>> table(elements.size(), std::vector<char>(side.size(), 0));
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (elements[j].num_vertices() != b.num_vertices()) throw GraphError("cover: element has wrong vertex count");
    for (const auto& e : elements[j].edges()) {
      if (!b.crosses(e.u, e.v)) continue;
      if (position[e.u] != SIZE_MAX) table[j][position[e.u]] = 1;
      if (position[e.v] != SIZE_MAX) table[j][position[e.v]] = 1;
    }
  }
  return table;
}

}  // namespace

double side_cover_density(const Bisection& b, Side side, std::span<const WeightedMultigraph> elements) {
  const VertexSet& members = side == Side::S ? b.side_s() : b.side_t();
  if (elements.empty() || members.empty()) return 0.0;
  const auto table = crossing_table(b, members, elements);
  std::size_t worst = elements.size();
  for (std::size_t i = 0; i < members.size(); ++i) {
    std::size_t count = 0;
    for (const auto& row : table) count += row[i] ? 1 : 0;
    worst = std::min(worst, count);
  }
  return static_cast<double>(worst) / static_cast<double>(elements.size());
}

std::vector<std::size_t> cover_side(const Bisection& b, Side side, std::span<const WeightedMultigraph> elements,
                                    double mu, Rng& rng, std::optional<std::size_t> samples) {
  const VertexSet& members = side == Side::S ? b.side_s() : b.side_t();
  const auto table = crossing_table(b, members, elements);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const bool coverable = std::any_of(table.begin(), table.end(), [i](const auto& row) { return row[i] != 0; });
    if (!coverable) {
      throw CoverFailure("cover_side: vertex " + std::to_string(members[i]) + " has no crossing edge in any element");
    }
  }
  return dense_set_cover(
      members.size(), [&table](std::size_t x, std::size_t s) { return table[s][x] != 0; }, elements.size(), mu, rng,
      samples);
}

}  // namespace resistweave
