#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "resistweave/decompose.hpp"
#include "resistweave/graph.hpp"
#include "resistweave/rng.hpp"
#include "resistweave/spectral.hpp"

namespace resistweave {

/// Relative errors |R_H(u,v) / R_G(u,v) - 1| over all or sampled pairs.
struct ErrorReport {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::vector<double> r_g;
  std::vector<double> r_h;
  std::vector<double> errors;
  double max = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  bool all_pairs = true;
  bool connected = true;  // false: H disconnected, every statistic is +inf
  std::uint64_t pair_seed = 0;

  std::size_t count() const { return pairs.size(); }
};

struct SparsifierResult {
  WeightedMultigraph graph;
  std::vector<std::size_t> matchings;  // indices into the double-cover decomposition
  double scale = 1.0;
  std::size_t d_target = 0;
  double lambda2 = 0.0;
  double max_error = std::numeric_limits<double>::quiet_NaN();
  double median_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t resamples = 0;  // extra draws taken because H was disconnected
  bool connected = true;

  std::size_t edge_count() const { return graph.num_edges(); }
  void attach(const ErrorReport& report) {
    max_error = report.max;
    median_error = report.median;
  }
};

/// Edge-disjoint perfect matchings of double_cover(g); expensive for dense
/// graphs, so callers running many seeds compute it once.
MatchingDecomposition double_cover_decomposition(const WeightedMultigraph& g);

inline constexpr int kDisconnectedResampleCap = 10;

/// Samples d_target matchings of the double cover without replacement and
/// unfolds their union. Weights are 1 or 2, every weighted degree is
/// 2·d_target. A disconnected draw is retried up to 10 times, then returned
/// with connected = false.
SparsifierResult regular_expander_subgraph(const WeightedMultigraph& g, std::size_t d_target, Rng& rng,
                                           const MatchingDecomposition* cached = nullptr);

struct SparsifyOptions {
  double c0 = 3.0;
  const MatchingDecomposition* decomposition = nullptr;
};

/// ceil(c0 / epsilon).
std::size_t sparsifier_degree(double epsilon, double c0 = 3.0);

/// regular_expander_subgraph with weights rescaled so every weighted degree
/// equals D exactly.
SparsifierResult resistance_sparsifier(const WeightedMultigraph& g, double epsilon, Rng& rng,
                                       const SparsifyOptions& options = {});
SparsifierResult resistance_sparsifier_with_degree(const WeightedMultigraph& g, std::size_t d_target, Rng& rng,
                                                   const MatchingDecomposition* cached = nullptr);

inline constexpr std::size_t kExactPairsMaxVertices = 300;
inline constexpr std::size_t kDefaultPairBudget = 2000;

/// Exact resistances of both graphs on all pairs when n <= 300, otherwise on
/// pair_budget pairs drawn uniformly without replacement.
ErrorReport verify_sparsifier(const WeightedMultigraph& g, const WeightedMultigraph& h, std::size_t pair_budget,
                              Rng& rng);
/// Same, reusing a table for g. A disconnected h yields an all-infinite
/// report instead of an exception.
ErrorReport verify_sparsifier(const ResistanceTable& g_table, const WeightedMultigraph& h, std::size_t pair_budget,
                              Rng& rng);
ErrorReport compare_tables(const ResistanceTable& g_table, const ResistanceTable& h_table, std::size_t pair_budget,
                           Rng& rng);

/// Keeps each edge copy independently with p = min(1, edge_budget / m) and
/// weight w / p. No resampling: a disconnected outcome is reported through
/// `connected`.
SparsifierResult independent_sample_baseline(const WeightedMultigraph& g, std::size_t edge_budget, Rng& rng);

struct ResistanceCertificate {
  bool holds = true;
  /// Smallest radius - |R - center| over all pairs; negative when violated.
  double margin = std::numeric_limits<double>::infinity();
  double lambda2 = 0.0;
  double degree = 0.0;
  double w_max = 0.0;
  std::pair<VertexId, VertexId> worst{0, 0};
  std::size_t violations = 0;
};

/// Checks every pair of h against |R - 2/d| <= 12(1/λ2 + 2) w_max / d² with
/// λ2 measured on h. Requires h regular in weighted degrees and connected.
ResistanceCertificate thm9_certificate(const WeightedMultigraph& h, const ResistanceTable* table = nullptr);

/// Per-pair non-bipartite form: |R - (1/d_u + 1/d_v)| <= 2(1/λ2 + 2) w_max / d_min².
ResistanceCertificate degree_certificate(const WeightedMultigraph& h, const ResistanceTable* table = nullptr);

}  // namespace resistweave
