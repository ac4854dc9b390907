#include "resistweave/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>
#include <utility>

namespace resistweave {

namespace {

bool key_less(const Edge& a, const Edge& b) {
  return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
}

bool same_key(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v && a.w == b.w; }

void require_same_order(const WeightedMultigraph& a, const WeightedMultigraph& b) {
  if (a.num_vertices() != b.num_vertices()) {
    throw GraphError("vertex counts differ: " + std::to_string(a.num_vertices()) + " vs " +
                     std::to_string(b.num_vertices()));
  }
}

// Merges two canonical record lists; `combine` decides the multiplicity of a
// record present in both.
template <class Combine>
std::vector<Edge> merge_records(std::span<const Edge> a, std::span<const Edge> b, Combine combine) {
  std::vector<Edge> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && key_less(a[i], b[j]))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || key_less(b[j], a[i])) {
      out.push_back(b[j++]);
    } else {
      Edge e = a[i];
      e.mult = combine(a[i].mult, b[j].mult);
      out.push_back(e);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

WeightedMultigraph::WeightedMultigraph(std::size_t n) : n_(n), degree_(n, 0.0), adj_(n) {}

WeightedMultigraph::WeightedMultigraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), degree_(n, 0.0), adj_(n) {
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw GraphError("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                       std::to_string(e.v) + ") with n = " + std::to_string(n));
    }
    if (!std::isfinite(e.w) || e.w < 0.0) {
      throw GraphError("edge weights must be finite and nonnegative");
    }
    if (e.mult == 0) {
      throw GraphError("edge multiplicity must be positive");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::erase_if(edges, [](const Edge& e) { return e.w == 0.0; });
  std::sort(edges.begin(), edges.end(), key_less);

  for (const auto& e : edges) {
    if (!edges_.empty() && same_key(edges_.back(), e)) {
      edges_.back().mult += e.mult;
    } else {
      edges_.push_back(e);
    }
  }

  for (const auto& e : edges_) {
    const double mass = e.w * static_cast<double>(e.mult);
    if (e.is_loop()) {
      degree_[e.u] += 2.0 * mass;
      adj_[e.u].push_back({e.u, e.w, e.mult});
    } else {
      degree_[e.u] += mass;
      degree_[e.v] += mass;
      adj_[e.u].push_back({e.v, e.w, e.mult});
      adj_[e.v].push_back({e.u, e.w, e.mult});
    }
  }
}

std::size_t WeightedMultigraph::num_edges() const {
  std::size_t m = 0;
  for (const auto& e : edges_) m += e.mult;
  return m;
}

std::size_t WeightedMultigraph::unweighted_degree(VertexId v) const {
  std::size_t d = 0;
  for (const auto& nb : adj_.at(v)) d += (nb.v == v ? 2 : 1) * nb.mult;
  return d;
}

double WeightedMultigraph::total_weight() const {
  double w = 0.0;
  for (const auto& e : edges_) w += e.w * static_cast<double>(e.mult);
  return w;
}

double WeightedMultigraph::max_weight() const {
  double w = 0.0;
  for (const auto& e : edges_) w = std::max(w, e.w);
  return w;
}

double WeightedMultigraph::min_degree() const {
  if (degree_.empty()) return 0.0;
  return *std::min_element(degree_.begin(), degree_.end());
}

bool WeightedMultigraph::has_self_loops() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_loop(); });
}

double WeightedMultigraph::regular_degree(double tol) const {
  if (n_ == 0) return 0.0;
  const auto [lo, hi] = std::minmax_element(degree_.begin(), degree_.end());
  if (*hi - *lo > tol * std::max(1.0, *hi)) return -1.0;
  return *hi;
}

std::size_t WeightedMultigraph::component_count() const {
  std::vector<char> seen(n_, 0);
  std::size_t components = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId x = stack.back();
      stack.pop_back();
      for (const auto& nb : adj_[x]) {
        if (!seen[nb.v]) {
          seen[nb.v] = 1;
          stack.push_back(nb.v);
        }
      }
    }
  }
  return components;
}

std::vector<int> WeightedMultigraph::bipartition() const {
  std::vector<int> color(n_, -1);
  std::queue<VertexId> queue;
  for (VertexId s = 0; s < n_; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
      const VertexId x = queue.front();
      queue.pop();
      for (const auto& nb : adj_[x]) {
        if (color[nb.v] < 0) {
          color[nb.v] = 1 - color[x];
          queue.push(nb.v);
        } else if (color[nb.v] == color[x]) {
          return {};
        }
      }
    }
  }
  return color;
}

std::vector<char> membership_mask(std::size_t n, std::span<const VertexId> s) {
  std::vector<char> mask(n, 0);
  for (VertexId v : s) {
    if (v >= n) throw GraphError("vertex id out of range: " + std::to_string(v));
    if (mask[v]) throw GraphError("repeated vertex id in set: " + std::to_string(v));
    mask[v] = 1;
  }
  return mask;
}

Bisection::Bisection(std::size_t n, VertexSet side_s) : side_s_(std::move(side_s)) {
  in_s_ = membership_mask(n, side_s_);
  const std::size_t k = side_s_.size();
  if (k != n / 2 && k != (n + 1) / 2) {
    throw GraphError("bisection side has size " + std::to_string(k) + ", expected floor or ceil of " +
                     std::to_string(n) + "/2");
  }
  std::sort(side_s_.begin(), side_s_.end());
  for (VertexId v = 0; v < n; ++v) {
    if (!in_s_[v]) side_t_.push_back(v);
  }
}

Bisection Bisection::swapped() const { return Bisection(num_vertices(), side_t_); }

WeightedMultigraph graph_union(const WeightedMultigraph& a, const WeightedMultigraph& b) {
  require_same_order(a, b);
  return WeightedMultigraph(a.num_vertices(), merge_records(a.edges(), b.edges(), [](std::size_t x, std::size_t y) {
                              return std::max(x, y);
                            }));
}

WeightedMultigraph graph_sum(const WeightedMultigraph& a, const WeightedMultigraph& b) {
  require_same_order(a, b);
  return WeightedMultigraph(a.num_vertices(), merge_records(a.edges(), b.edges(), std::plus<>{}));
}

WeightedMultigraph graph_difference(const WeightedMultigraph& g, const WeightedMultigraph& sub) {
  require_same_order(g, sub);
  std::vector<Edge> out(g.edges().begin(), g.edges().end());
  std::size_t i = 0;
  for (const auto& e : sub.edges()) {
    while (i < out.size() && key_less(out[i], e)) ++i;
    if (i == out.size() || !same_key(out[i], e) || out[i].mult < e.mult) {
      throw GraphError("graph_difference: subtrahend is not a subgraph");
    }
    out[i].mult -= e.mult;
  }
  std::erase_if(out, [](const Edge& e) { return e.mult == 0; });
  return WeightedMultigraph(g.num_vertices(), std::move(out));
}

double cut_weight(const WeightedMultigraph& g, std::span<const VertexId> s) {
  const auto mask = membership_mask(g.num_vertices(), s);
  if (s.empty() || s.size() == g.num_vertices()) {
    throw GraphError("cut_weight needs a nonempty proper subset");
  }
  double w = 0.0;
  for (const auto& e : g.edges()) {
    if (mask[e.u] != mask[e.v]) w += e.w * static_cast<double>(e.mult);
  }
  return w;
}

WeightedMultigraph double_cover(const WeightedMultigraph& g) {
  if (g.has_self_loops()) throw GraphError("double_cover: self-loops are not supported");
  const std::size_t n = g.num_vertices();
  std::vector<Edge> out;
  out.reserve(2 * g.num_records());
  for (const auto& e : g.edges()) {
    out.push_back({e.u, e.v + n, e.w, e.mult});
    out.push_back({e.v, e.u + n, e.w, e.mult});
  }
  return WeightedMultigraph(2 * n, std::move(out));
}

WeightedMultigraph unfold_double_cover(const WeightedMultigraph& h2) {
  if (h2.num_vertices() % 2 != 0) throw GraphError("unfold_double_cover: odd vertex count");
  const std::size_t n = h2.num_vertices() / 2;
  std::map<std::pair<VertexId, VertexId>, double> weight;
  for (const auto& e : h2.edges()) {
    // Canonical records have e.u <= e.v, so a cross edge has e.u < n <= e.v.
    if (e.u >= n || e.v < n) {
      throw GraphError("unfold_double_cover: edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") lies within one side");
    }
    const VertexId a = e.u;
    const VertexId b = e.v - n;
    weight[{std::min(a, b), std::max(a, b)}] += e.w * static_cast<double>(e.mult);
  }
  std::vector<Edge> out;
  out.reserve(weight.size());
  for (const auto& [key, w] : weight) out.push_back({key.first, key.second, w, 1});
  return WeightedMultigraph(n, std::move(out));
}

bool is_weave(const WeightedMultigraph& g, const Bisection& b) {
  if (g.num_vertices() != b.num_vertices()) throw GraphError("is_weave: vertex counts differ");
  std::vector<char> touched(g.num_vertices(), 0);
  for (const auto& e : g.edges()) {
    if (b.crosses(e.u, e.v)) touched[e.u] = touched[e.v] = 1;
  }
  return std::all_of(touched.begin(), touched.end(), [](char c) { return c != 0; });
}

WeightedMultigraph scale_weights(const WeightedMultigraph& g, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw GraphError("scale_weights: factor must be positive");
  std::vector<Edge> out(g.edges().begin(), g.edges().end());
  for (auto& e : out) e.w *= factor;
  return WeightedMultigraph(g.num_vertices(), std::move(out));
}

}  // namespace resistweave
