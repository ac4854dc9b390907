#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace resistweave {

using VertexId = std::size_t;
using VertexSet = std::vector<VertexId>;

/// One edge record. Endpoints are stored canonically (u <= v); a record with
/// u == v is a self-loop. `mult` counts parallel copies of the same weight.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 1.0;
  std::size_t mult = 1;

  bool is_loop() const { return u == v; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  VertexId v;
  double w;          // weight of a single copy
  std::size_t mult;  // parallel copies
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected weighted multigraph with self-loops. Immutable after
/// construction.
///
/// Records are merged on the key (min endpoint, max endpoint, weight), so
/// parallel copies of equal weight share one record with a multiplicity
/// counter. A self-loop of weight w contributes 2w to its vertex's weighted
/// degree.
class WeightedMultigraph {
 public:
  WeightedMultigraph() = default;
  explicit WeightedMultigraph(std::size_t n);
  WeightedMultigraph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_vertices() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t num_records() const { return edges_.size(); }
  /// Edge count with multiplicity.
  std::size_t num_edges() const;

  double weighted_degree(VertexId v) const { return degree_.at(v); }
  const std::vector<double>& weighted_degrees() const { return degree_; }
  /// Number of incident edge endpoints, with multiplicity; loops count 2.
  std::size_t unweighted_degree(VertexId v) const;

  /// Sum of w * mult over all records (loops counted once).
  double total_weight() const;
  double max_weight() const;
  double min_degree() const;
  bool has_self_loops() const;

  const std::vector<Neighbor>& neighbors(VertexId v) const { return adj_.at(v); }

  /// The common weighted degree if all weighted degrees agree within `tol`
  /// (relative to the largest degree), negative otherwise.
  double regular_degree(double tol = 1e-9) const;
  bool is_regular(double tol = 1e-9) const { return regular_degree(tol) >= 0.0; }

  std::size_t component_count() const;
  bool is_connected() const { return component_count() <= 1; }

  /// Two-coloring if the graph is bipartite (self-loops make it
  /// non-bipartite); empty vector otherwise.
  std::vector<int> bipartition() const;
  bool is_bipartite() const { return n_ == 0 || !bipartition().empty(); }

  friend bool operator==(const WeightedMultigraph& a, const WeightedMultigraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> degree_;
  std::vector<std::vector<Neighbor>> adj_;
};

/// Two-sided vertex partition with |S| in {floor(n/2), ceil(n/2)}.
class Bisection {
 public:
  Bisection() = default;
  /// Builds (S, complement). Throws GraphError unless |S| is floor or ceil
  /// of n/2 and all ids are distinct and in range.
  Bisection(std::size_t n, VertexSet side_s);

  std::size_t num_vertices() const { return in_s_.size(); }
  const VertexSet& side_s() const { return side_s_; }
  const VertexSet& side_t() const { return side_t_; }
  bool in_s(VertexId v) const { return in_s_.at(v) != 0; }
  bool crosses(VertexId a, VertexId b) const { return in_s(a) != in_s(b); }
  /// Same partition with the roles of S and its complement exchanged.
  Bisection swapped() const;

 private:
  VertexSet side_s_;
  VertexSet side_t_;
  std::vector<char> in_s_;
};

/// Set union of edge records. Multiplicities combine by max, so
/// graph_union(M, M) == M.
WeightedMultigraph graph_union(const WeightedMultigraph& a, const WeightedMultigraph& b);

/// Multiset sum: multiplicities add, weighted degrees add exactly.
WeightedMultigraph graph_sum(const WeightedMultigraph& a, const WeightedMultigraph& b);

/// Total weight of edges with exactly one endpoint in `s`.
double cut_weight(const WeightedMultigraph& g, std::span<const VertexId> s);

/// Bipartite lift on 2n vertices; (v,0) -> v, (v,1) -> v + n.
WeightedMultigraph double_cover(const WeightedMultigraph& g);

/// Folds a subgraph of a double cover back onto n = h2.num_vertices()/2
/// vertices. Edge uv gets weight |{(u,0)(v,1), (v,0)(u,1)} ∩ E(h2)|, scaled
/// by the weight of the lifted records.
WeightedMultigraph unfold_double_cover(const WeightedMultigraph& h2);

/// True iff every vertex has at least one incident edge crossing `b`.
bool is_weave(const WeightedMultigraph& g, const Bisection& b);

WeightedMultigraph scale_weights(const WeightedMultigraph& g, double factor);

/// Removes all records of `sub` (by multiplicity) from `g`. Throws if `sub`
/// is not contained in `g`.
WeightedMultigraph graph_difference(const WeightedMultigraph& g, const WeightedMultigraph& sub);

/// Indicator vector for a vertex set; throws on out-of-range or repeated ids.
std::vector<char> membership_mask(std::size_t n, std::span<const VertexId> s);

}  // namespace resistweave
