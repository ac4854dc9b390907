#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "resistweave/graph.hpp"
#include "resistweave/rng.hpp"

namespace resistweave {

/// Matched pairs (left, right), sorted by left endpoint.
using Matching = std::vector<std::pair<VertexId, VertexId>>;

/// Raised when no perfect matching exists. `witness` is a set of left
/// vertices whose neighborhood is smaller than the set itself.
class HallViolation : public GraphError {
 public:
  HallViolation(const std::string& what, VertexSet witness) : GraphError(what), witness(std::move(witness)) {}
  VertexSet witness;
};

class CoverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Disjoint perfect matchings partitioning the edges of a regular bipartite
/// graph.
struct MatchingDecomposition {
  std::size_t num_vertices = 0;
  std::vector<Matching> matchings;
  /// partner[i][v]: the vertex matched to v in matching i.
  std::vector<std::vector<VertexId>> partner;

  std::size_t size() const { return matchings.size(); }
  WeightedMultigraph matching_graph(std::size_t i) const;
  std::vector<WeightedMultigraph> as_graphs() const;
};

/// Edge-disjoint Hamiltonian cycles (vertex sequences, closing edge implied).
struct CycleDecomposition {
  std::size_t num_vertices = 0;
  std::vector<VertexSet> cycles;

  std::size_t size() const { return cycles.size(); }
  WeightedMultigraph cycle_graph(std::size_t i) const;
  std::vector<WeightedMultigraph> as_graphs() const;
};

/// Perfect matching between `left` and its complement by breadth-first
/// augmenting paths, scanning left vertices in index order. Throws
/// HallViolation when none exists, GraphError if an edge does not cross.
Matching perfect_matching(const WeightedMultigraph& g, std::span<const VertexId> left);

/// Repeatedly extracts perfect matchings from a D-regular bipartite
/// unit-weight multigraph; returns exactly D of them. The left side is the
/// color class of vertex 0 in each component.
MatchingDecomposition matching_decomposition(const WeightedMultigraph& g);

/// Walecki's (n-1)/2 Hamiltonian cycles of K_n for odd n >= 3.
CycleDecomposition walecki_decomposition(std::size_t n);

/// ceil((1.1 / mu) * ln n), at least 1.
std::size_t set_cover_sample_count(std::size_t universe_size, double mu);

/// Samples set indices uniformly with replacement, deduplicates, and returns
/// them (sorted) once every element is covered. Each of up to
/// kCoverRetryCap attempts draws a fresh sub-stream from `rng`. The sample
/// count defaults to set_cover_sample_count.
std::vector<std::size_t> dense_set_cover(std::size_t universe_size,
                                         const std::function<bool(std::size_t element, std::size_t set)>& member,
                                         std::size_t family_size, double mu, Rng& rng,
                                         std::optional<std::size_t> samples = std::nullopt);

inline constexpr int kCoverRetryCap = 100;

enum class Side { S, T };

/// Element indices whose union gives every vertex on `side` an incident
/// edge crossing `b`. Thin wrapper over dense_set_cover with the crossing-edge
/// membership predicate.
std::vector<std::size_t> cover_side(const Bisection& b, Side side, std::span<const WeightedMultigraph> elements,
                                    double mu, Rng& rng, std::optional<std::size_t> samples = std::nullopt);

/// Fraction of elements offering a crossing edge to the worst-off vertex on
/// `side`; the largest mu for which cover_side's precondition holds.
double side_cover_density(const Bisection& b, Side side, std::span<const WeightedMultigraph> elements);

}  // namespace resistweave
