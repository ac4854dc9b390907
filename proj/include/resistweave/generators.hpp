#pragma once

#include <cstddef>
#include <vector>

#include "resistweave/graph.hpp"
#include "resistweave/rng.hpp"

namespace resistweave {

WeightedMultigraph complete_graph(std::size_t n);
WeightedMultigraph cycle_graph(std::size_t n);
/// Q_k on 2^k vertices.
WeightedMultigraph hypercube(std::size_t dimension);
/// v ~ v ± s (mod n) for every offset s; an offset of n/2 gives a single edge.
WeightedMultigraph circulant(std::size_t n, const std::vector<std::size_t>& offsets);

/// Simple D-regular graph: configuration-model pairing, then degree-preserving
/// switches that target loops and repeated edges. Restarts up to 100 times.
/// Throws if n*D is odd or D >= n.
WeightedMultigraph random_regular(std::size_t n, std::size_t degree, Rng& rng);

/// Simple D-regular bipartite graph on sides [0, m) and [m, 2m): a union of
/// D random permutation matchings, each repaired by swaps to avoid repeats.
WeightedMultigraph random_regular_bipartite(std::size_t side, std::size_t degree, Rng& rng);

/// Sum of `terms` random permutation matchings between [0, m) and [m, 2m)
/// with random positive weights; regular in weighted degrees, not in general
/// simple.
WeightedMultigraph random_weighted_regular_bipartite(std::size_t side, std::size_t terms, Rng& rng);

/// Erdos-Renyi G(n, p) with uniform weights in [w_lo, w_hi], conditioned on
/// connectivity (retries, then throws).
WeightedMultigraph random_connected_graph(std::size_t n, double p, Rng& rng, double w_lo = 1.0, double w_hi = 1.0);

}  // namespace resistweave
