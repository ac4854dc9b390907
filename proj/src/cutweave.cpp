#include "resistweave/cutweave.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace resistweave {

namespace {

void require_r_regular(const WeightedMultigraph& weave, int r) {
  if (r <= 0) throw GraphError("weave degree r must be positive");
  const double tol = 1e-9 * static_cast<double>(r);
  for (VertexId v = 0; v < weave.num_vertices(); ++v) {
    if (std::abs(weave.weighted_degree(v) - r) > tol) {
      throw GraphError("weave is not " + std::to_string(r) + "-regular: vertex " + std::to_string(v) + " has degree " +
                       std::to_string(weave.weighted_degree(v)));
    }
  }
}

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace

Eigen::VectorXd lazy_walk_apply(const WeightedMultigraph& weave, int r, const Eigen::VectorXd& x) {
  require_r_regular(weave, r);
  if (static_cast<std::size_t>(x.size()) != weave.num_vertices()) throw GraphError("lazy_walk_apply: size mismatch");
  Eigen::VectorXd y = 0.5 * x;
  const double step = 1.0 / (2.0 * r);
  for (const auto& e : weave.edges()) {
    const double a = step * e.w * static_cast<double>(e.mult);
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    if (e.is_loop()) {
      y(u) += 2.0 * a * x(u);
    } else {
      y(u) += a * x(v);
      y(v) += a * x(u);
    }
  }
  return y;
}

void lazy_walk_apply_rows(const WeightedMultigraph& weave, int r, RowMatrix& p) {
  require_r_regular(weave, r);
  if (static_cast<std::size_t>(p.rows()) != weave.num_vertices()) throw GraphError("lazy_walk_apply: size mismatch");
  RowMatrix out = 0.5 * p;
  const double step = 1.0 / (2.0 * r);
  for (const auto& e : weave.edges()) {
    const double a = step * e.w * static_cast<double>(e.mult);
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    if (e.is_loop()) {
      out.row(u) += 2.0 * a * p.row(u);
    } else {
      out.row(u) += a * p.row(v);
      out.row(v) += a * p.row(u);
    }
  }
  p = std::move(out);
}

GameState::GameState(std::size_t n) : n_(n), union_graph_(n) {
  if (n < 2) throw GraphError("game needs at least 2 vertices");
  const auto ni = static_cast<Eigen::Index>(n);
  p_ = RowMatrix::Identity(ni, ni);
  psi_ = potential(p_);
}

double GameState::potential(const RowMatrix& p) {
  const double c = 1.0 / static_cast<double>(p.rows());
  return (p.array() - c).square().sum();
}

void GameState::apply(const WeightedMultigraph& weave, int r, const Bisection& b) {
  if (weave.num_vertices() != n_ || b.num_vertices() != n_) throw GraphError("game_step: vertex counts differ");
  require_r_regular(weave, r);
  if (!is_weave(weave, b)) throw GraphError("game_step: answer is not a weave on the bisection");

  RoundRecord rec;
  rec.round = weaves_.size() + 1;
  rec.bisection_hash = bisection_hash(b);
  rec.weave_edges = weave.num_edges();
  rec.r = r;
  rec.psi_before = psi_;
  for (const auto& e : weave.edges()) {
    if (e.is_loop()) continue;
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    rec.edge_spread += e.w * static_cast<double>(e.mult) * (p_.row(u) - p_.row(v)).squaredNorm();
  }

  lazy_walk_apply_rows(weave, r, p_);
  psi_ = potential(p_);
  rec.psi_after = psi_;

  union_graph_ = graph_sum(union_graph_, weave);
  weaves_.push_back(weave);
  degrees_.push_back(r);
  history_.push_back(rec);
}

CutQuery cut_player_query(const GameState& state, Rng& rng) {
  const std::size_t n = state.num_vertices();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(rng);
    z.array() -= z.mean();
  } while (z.norm() == 0.0);
  z.normalize();

  Eigen::VectorXd u = z;
  for (std::size_t t = 0; t < state.weaves().size(); ++t) {
    u = lazy_walk_apply(state.weaves()[t], state.weave_degrees()[t], u);
  }

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    const double ua = u(static_cast<Eigen::Index>(a));
    const double ub = u(static_cast<Eigen::Index>(b));
    return ua < ub || (ua == ub && a < b);
  });
  order.resize(n / 2);
  return CutQuery{Bisection(n, std::move(order)), std::move(z), std::move(u)};
}

Bisection cut_player_bisection(const GameState& state, Rng& rng) { return cut_player_query(state, rng).bisection; }

GameState game_step(GameState state, const WeightedMultigraph& weave, int r, const Bisection& b) {
  state.apply(weave, r, b);
  return state;
}

std::uint64_t bisection_hash(const Bisection& b) {
  // FNV-1a over the sorted S side, prefixed by n.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(b.num_vertices());
  for (VertexId v : b.side_s()) mix(v);
  return h;
}

std::size_t default_round_cap(std::size_t n, int r, double constant) {
  const double ln = std::log(static_cast<double>(n));
  return static_cast<std::size_t>(std::ceil(constant * r * ln * ln));
}

WeightedMultigraph weave_player_answer(std::span<const WeightedMultigraph> elements, std::size_t count,
                                       const Bisection& b, Rng& rng) {
  if (count == 0 || count > elements.size()) {
    throw GraphError("weave player needs between 1 and " + std::to_string(elements.size()) + " elements, got " +
                     std::to_string(count));
  }
  const std::size_t n = b.num_vertices();
  const std::size_t s_samples = (count + 1) / 2;
  const std::size_t t_samples = count / 2;
  const double mu_s = side_cover_density(b, Side::S, elements);
  const double mu_t = side_cover_density(b, Side::T, elements);

  for (int attempt = 0; attempt < kCoverRetryCap; ++attempt) {
    std::vector<std::size_t> chosen = cover_side(b, Side::S, elements, mu_s, rng, s_samples);
    if (t_samples > 0) {
      const auto t_cover = cover_side(b, Side::T, elements, mu_t, rng, t_samples);
      chosen.insert(chosen.end(), t_cover.begin(), t_cover.end());
      std::sort(chosen.begin(), chosen.end());
      chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    }

    WeightedMultigraph weave(n);
    for (std::size_t i : chosen) weave = graph_sum(weave, elements[i]);
    if (!is_weave(weave, b)) continue;  // only possible when the T side was not sampled

    std::vector<char> used(elements.size(), 0);
    for (std::size_t i : chosen) used[i] = 1;
    std::vector<std::size_t> spare;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (!used[i]) spare.push_back(i);
    }
    const auto pad = sample_without_replacement(spare.size(), count - chosen.size(), rng);
    for (std::size_t j : pad) weave = graph_sum(weave, elements[spare[j]]);
    return weave;
  }
  throw CoverFailure("weave player: no single-sample cover of both sides after " + std::to_string(kCoverRetryCap) +
                     " attempts");
}

WeightedMultigraph matching_weave(const Bisection& b, int r, Rng& rng) {
  if (b.side_s().size() != b.side_t().size()) throw GraphError("matching_weave needs an even bisection");
  if (r <= 0) throw GraphError("matching_weave needs r >= 1");
  std::vector<Edge> edges;
  VertexSet t = b.side_t();
  for (int i = 0; i < r; ++i) {
    std::shuffle(t.begin(), t.end(), rng);
    for (std::size_t j = 0; j < t.size(); ++j) edges.push_back({b.side_s()[j], t[j], 1.0, 1});
  }
  return WeightedMultigraph(b.num_vertices(), std::move(edges));
}

GameResult play_game(std::span<const WeightedMultigraph> elements, int r, std::size_t round_cap, Rng& rng) {
  if (elements.empty()) throw GraphError("play_game: no elements");
  const std::size_t n = elements.front().num_vertices();
  const double elem_degree = elements.front().regular_degree();
  if (elem_degree <= 0.0) throw GraphError("play_game: elements must be regular");
  for (const auto& el : elements) {
    if (el.num_vertices() != n || std::abs(el.regular_degree() - elem_degree) > 1e-9 * elem_degree) {
      throw GraphError("play_game: elements must share vertex count and degree");
    }
  }
  const double ratio = r / elem_degree;
  const auto count = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(count)) > 1e-9 || count == 0) {
    throw GraphError("play_game: r must be a positive multiple of the element degree");
  }

  GameResult result;
  result.state = GameState(n);
  result.r = r;
  result.round_cap = round_cap;
  const double threshold = potential_threshold(n);
  while (result.state.psi() >= threshold && result.state.round() < round_cap) {
    const Bisection b = cut_player_bisection(result.state, rng);
    WeightedMultigraph weave;
    try {
      weave = weave_player_answer(elements, count, b, rng);
    } catch (const CoverFailure&) {
      if (n % 2 != 0) throw;
      weave = matching_weave(b, r, rng);
      result.fallback_rounds.push_back(result.state.round() + 1);
    }
    result.state.apply(weave, r, b);
  }
  result.certified = result.state.psi() < threshold;
  if (result.certified) {
    result.certified_expansion = 0.5 * r;
    result.status = "certified";
  } else {
    result.status = "round cap exhausted";
  }
  return result;
}

// ---------------------------------------------------------------------------
// Embeddings

void Embedding::add(VertexId u, VertexId v, VertexSet path) {
  if (path.empty() || path.front() != u || path.back() != v) {
    throw GraphError("embedding path endpoints do not match guest edge (" + std::to_string(u) + ", " +
                     std::to_string(v) + ")");
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) ++load_[pair_key(path[i], path[i + 1])];
  guest_.push_back({u, v, std::move(path)});
}

WeightedMultigraph Embedding::guest_graph() const {
  std::vector<Edge> edges;
  edges.reserve(guest_.size());
  for (const auto& g : guest_) edges.push_back({g.u, g.v, 1.0, 1});
  return WeightedMultigraph(host_.num_vertices(), std::move(edges));
}

std::size_t Embedding::congestion() const {
  std::size_t c = 0;
  for (const auto& [key, load] : load_) c = std::max(c, load);
  return c;
}

std::size_t Embedding::recount_congestion() const {
  std::unordered_map<std::uint64_t, std::size_t> load;
  for (const auto& g : guest_) {
    for (std::size_t i = 0; i + 1 < g.path.size(); ++i) ++load[pair_key(g.path[i], g.path[i + 1])];
  }
  std::size_t c = 0;
  for (const auto& [key, l] : load) c = std::max(c, l);
  return c;
}

bool Embedding::is_valid() const {
  const std::size_t n = host_.num_vertices();
  for (const auto& g : guest_) {
    if (g.path.empty() || g.path.front() != g.u || g.path.back() != g.v) return false;
    for (std::size_t i = 0; i + 1 < g.path.size(); ++i) {
      const VertexId a = g.path[i];
      const VertexId b = g.path[i + 1];
      if (a >= n || b >= n) return false;
      const auto& nbrs = host_.neighbors(a);
      if (std::none_of(nbrs.begin(), nbrs.end(), [b](const Neighbor& nb) { return nb.v == b; })) return false;
    }
  }
  return true;
}

double embedding_expansion_transfer(const Embedding& emb, double phi_guest) {
  const std::size_t c = emb.congestion();
  if (c == 0) return 0.0;
  return phi_guest / static_cast<double>(c);
}

// ---------------------------------------------------------------------------
// Embedded weave

LevelPartition level_partition(const WeightedMultigraph& g, const Bisection& b, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw GraphError("level_partition: mu must lie in (0, 1)");
  if (g.num_vertices() != b.num_vertices()) throw GraphError("level_partition: vertex counts differ");
  const std::size_t n = g.num_vertices();
  const std::size_t degree = n == 0 ? 0 : g.unweighted_degree(0);
  for (VertexId v = 0; v < n; ++v) {
    if (g.unweighted_degree(v) != degree) throw GraphError("level_partition: graph is not regular");
  }

  LevelPartition lp;
  lp.mu = mu;
  lp.degree = degree;
  lp.levels.push_back(b.side_t());
  std::vector<int> level_of(n, -1);
  for (VertexId v : b.side_t()) level_of[v] = 0;
  VertexSet remaining = b.side_s();
  const double threshold = mu * static_cast<double>(degree);

  while (!remaining.empty()) {
    const int prev = static_cast<int>(lp.levels.size()) - 1;
    VertexSet next, rest;
    for (VertexId v : remaining) {
      std::size_t into_prev = 0;
      for (const auto& nb : g.neighbors(v)) {
        if (nb.v != v && level_of[nb.v] == prev) into_prev += nb.mult;
      }
      (static_cast<double>(into_prev) >= threshold ? next : rest).push_back(v);
    }
    if (next.empty()) {
      throw LevelPartitionStall("level_partition stalled after " + std::to_string(prev) + " levels with " +
                                    std::to_string(rest.size()) + " vertices left",
                                std::move(rest));
    }
    for (VertexId v : next) level_of[v] = prev + 1;
    lp.levels.push_back(std::move(next));
    remaining = std::move(rest);
  }
  return lp;
}

LevelCovers build_level_covers(const WeightedMultigraph& g, const LevelPartition& lp, const MatchingDecomposition& m,
                               std::size_t k, Rng& rng) {
  const std::size_t n = g.num_vertices();
  if (m.num_vertices != n) throw GraphError("build_level_covers: decomposition size differs from graph");
  if (k == 0) throw GraphError("build_level_covers: k must be positive");

  std::vector<int> level_of(n, -1);
  for (std::size_t i = 0; i < lp.levels.size(); ++i) {
    for (VertexId v : lp.levels[i]) level_of[v] = static_cast<int>(i);
  }

  LevelCovers out;
  out.k = k;
  out.union_graph = WeightedMultigraph(n);
  std::vector<std::size_t> pool(m.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});

  for (std::size_t i = 1; i < lp.levels.size(); ++i) {
    if (pool.size() < k) {
      throw CoverFailure("build_level_covers: only " + std::to_string(pool.size()) + " matchings left for level " +
                         std::to_string(i) + ", need " + std::to_string(k));
    }
    const VertexSet& level = lp.levels[i];
    const int target = static_cast<int>(i) - 1;
    auto member = [&](std::size_t element, std::size_t set) {
      return level_of[m.partner[pool[set]][level[element]]] == target;
    };
    std::vector<std::size_t> picked = dense_set_cover(level.size(), member, pool.size(), lp.mu, rng, k);

    std::vector<char> used(pool.size(), 0);
    for (std::size_t s : picked) used[s] = 1;
    std::vector<std::size_t> spare;
    for (std::size_t s = 0; s < pool.size(); ++s) {
      if (!used[s]) spare.push_back(s);
    }
    for (std::size_t j : sample_without_replacement(spare.size(), k - picked.size(), rng)) picked.push_back(spare[j]);

    std::vector<std::size_t> indices;
    WeightedMultigraph level_graph(n);
    for (std::size_t s : picked) {
      indices.push_back(pool[s]);
      level_graph = graph_sum(level_graph, m.matching_graph(pool[s]));
    }
    std::sort(indices.begin(), indices.end());
    std::erase_if(pool, [&](std::size_t idx) { return std::binary_search(indices.begin(), indices.end(), idx); });

    out.union_graph = graph_sum(out.union_graph, level_graph);
    out.matching_indices.push_back(std::move(indices));
    out.levels.push_back(std::move(level_graph));
  }
  return out;
}

std::vector<std::size_t> kstar_regularity(std::size_t k, std::size_t t) {
  std::vector<std::size_t> rho;
  std::size_t prev = 0;
  for (std::size_t i = 1; i <= t; ++i) {
    prev = k * (1 + prev);
    rho.push_back(prev);
  }
  return rho;
}

std::vector<std::size_t> kstar_congestion(std::size_t k, std::size_t t) {
  std::vector<std::size_t> c;
  std::size_t prev = 0;
  for (std::size_t i = 1; i <= t; ++i) {
    prev = 1 + k * prev;
    c.push_back(prev);
  }
  return c;
}

namespace {

struct Instance {
  VertexId u;
  VertexId v;
  VertexSet path;  // walk in K from u to v
};

// Walk of `e` starting at `from`.
VertexSet oriented(const Instance& e, VertexId from) {
  if (e.path.front() == from) return e.path;
  VertexSet p(e.path.rbegin(), e.path.rend());
  return p;
}

WeightedMultigraph instances_graph(std::size_t n, const std::vector<Instance>& inst) {
  std::vector<Edge> edges;
  edges.reserve(inst.size());
  for (const auto& e : inst) edges.push_back({e.u, e.v, 1.0, 1});
  return WeightedMultigraph(n, std::move(edges));
}

std::size_t measured_regularity(const WeightedMultigraph& g) {
  const std::size_t d = g.num_vertices() == 0 ? 0 : g.unweighted_degree(0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.unweighted_degree(v) != d) throw GraphError("K* level is not regular");
  }
  return d;
}

}  // namespace

KStar build_kstar(const LevelPartition& lp, const LevelCovers& covers, std::size_t k) {
  const std::size_t t = lp.depth();
  if (covers.levels.size() != t) throw GraphError("build_kstar: covers do not match the level partition");
  const std::size_t n = covers.union_graph.num_vertices();

  std::vector<int> level_of(n, -1);
  for (std::size_t i = 0; i < lp.levels.size(); ++i) {
    for (VertexId v : lp.levels[i]) level_of[v] = static_cast<int>(i);
  }

  KStar out;
  out.rho = kstar_regularity(k, t);
  out.c = kstar_congestion(k, t);
  out.graph = WeightedMultigraph(n);
  out.embedding = Embedding(covers.union_graph);

  std::vector<Instance> prev;            // K*_{i-1}
  std::vector<std::size_t> cross(n, 0);  // index into prev of v's edge to S_0

  for (std::size_t i = 1; i <= t; ++i) {
    std::vector<Instance> cur;
    std::vector<std::size_t> cur_cross(n, 0);

    // k copies of K*_{i-1}; copy j of instance e sits at j * prev.size() + e.
    for (std::size_t j = 0; j < (i == 1 ? 0 : k); ++j) cur.insert(cur.end(), prev.begin(), prev.end());
    const std::size_t base = cur.size();
    for (const auto& e : covers.levels[i - 1].edges()) {
      for (std::size_t c = 0; c < e.mult; ++c) cur.push_back({e.u, e.v, {e.u, e.v}});
    }

    // For each vertex of S_i, one K_i edge into S_{i-1}.
    std::vector<std::size_t> to_prev(n, SIZE_MAX);
    for (std::size_t id = base; id < cur.size(); ++id) {
      const auto& e = cur[id];
      if (level_of[e.u] == static_cast<int>(i) && level_of[e.v] == static_cast<int>(i) - 1 && to_prev[e.u] == SIZE_MAX)
        to_prev[e.u] = id;
      if (level_of[e.v] == static_cast<int>(i) && level_of[e.u] == static_cast<int>(i) - 1 && to_prev[e.v] == SIZE_MAX)
        to_prev[e.v] = id;
    }
    for (VertexId v : lp.levels[i]) {
      if (to_prev[v] == SIZE_MAX) {
        throw GraphError("build_kstar: vertex " + std::to_string(v) + " of level " + std::to_string(i) +
                         " has no cover edge into the previous level");
      }
    }

    if (i == 1) {
      for (VertexId v : lp.levels[1]) cur_cross[v] = to_prev[v];
    } else {
      std::vector<char> removed(cur.size(), 0);
      std::vector<std::size_t> copies_used(n, 0);
      std::vector<Instance> added;
      for (VertexId v : lp.levels[i]) {
        const Instance& vw = cur[to_prev[v]];
        const VertexId w = vw.u == v ? vw.v : vw.u;
        if (copies_used[w] >= k) {
          throw GraphError("build_kstar: crossing at vertex " + std::to_string(w) + " needs more than " +
                           std::to_string(k) + " copies");
        }
        const std::size_t wu_id = copies_used[w]++ * prev.size() + cross[w];
        const Instance& wu = cur[wu_id];
        const VertexId u = wu.u == w ? wu.v : wu.u;
        removed[to_prev[v]] = 1;
        removed[wu_id] = 1;

        VertexSet path{v};
        const VertexSet tail = oriented(wu, w);
        path.insert(path.end(), tail.begin(), tail.end());
        cur_cross[v] = added.size();
        added.push_back({v, u, std::move(path)});
        added.push_back({w, w, {w}});
      }
      std::vector<Instance> kept;
      kept.reserve(cur.size() - 2 * lp.levels[i].size() + added.size());
      for (std::size_t id = 0; id < cur.size(); ++id) {
        if (!removed[id]) kept.push_back(std::move(cur[id]));
      }
      const std::size_t offset = kept.size();
      for (VertexId v : lp.levels[i]) cur_cross[v] += offset;
      for (auto& e : added) kept.push_back(std::move(e));
      cur = std::move(kept);
    }

    Embedding level_emb(covers.union_graph);
    for (const auto& e : cur) {
      level_emb.add(e.u, e.v, e.path);
      out.embedding.add(e.u, e.v, e.path);
    }
    WeightedMultigraph level_graph = instances_graph(n, cur);
    for (VertexId v : lp.levels[i]) {
      const VertexId u = cur[cur_cross[v]].u == v ? cur[cur_cross[v]].v : cur[cur_cross[v]].u;
      if (level_of[u] != 0) throw GraphError("build_kstar: crossing edge does not reach S_0");
    }
    out.measured_regularity.push_back(measured_regularity(level_graph));
    out.measured_congestion.push_back(level_emb.congestion());
    out.graph = graph_sum(out.graph, level_graph);
    out.levels.push_back(std::move(level_graph));

    prev = std::move(cur);
    cross = std::move(cur_cross);
  }
  return out;
}

EmbeddedWeave embedded_weave(const WeightedMultigraph& g, const Bisection& b, const MatchingDecomposition& m,
                             const EmbeddedWeaveParams& params, Rng& rng) {
  EmbeddedWeave out;
  auto run_side = [&](const Bisection& side) {
    EmbeddedWeaveSide s;
    s.partition = level_partition(g, side, params.mu);
    s.covers = build_level_covers(g, s.partition, m, params.k, rng);
    s.kstar = build_kstar(s.partition, s.covers, params.k);
    return s;
  };
  out.s_side = run_side(b);
  out.t_side = run_side(b.swapped());

  out.weave = graph_sum(out.s_side.kstar.graph, out.t_side.kstar.graph);
  out.embedding = Embedding(graph_union(out.s_side.covers.union_graph, out.t_side.covers.union_graph));
  for (const auto* side : {&out.s_side, &out.t_side}) {
    for (const auto& e : side->kstar.embedding.guest_edges()) out.embedding.add(e.u, e.v, e.path);
    for (std::size_t x : side->kstar.rho) out.r += x;
    for (std::size_t x : side->kstar.c) out.c += x;
  }
  return out;
}

}  // namespace resistweave
