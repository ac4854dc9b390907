#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "resistweave/decompose.hpp"
#include "resistweave/graph.hpp"
#include "resistweave/rng.hpp"

namespace resistweave {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Lazy walks and the game state

/// One step of the lazy walk on an r-regular weave: stay with probability
/// 1/2, move along each incident edge copy with probability 1/(2r). A loop of
/// weight w counts 2w, matching its degree contribution, so the operator is
/// doubly stochastic. Throws if the weave is not r-regular.
Eigen::VectorXd lazy_walk_apply(const WeightedMultigraph& weave, int r, const Eigen::VectorXd& x);

/// In-place P <- M P for the weave's lazy-walk operator M.
void lazy_walk_apply_rows(const WeightedMultigraph& weave, int r, RowMatrix& p);

/// Per-round bookkeeping for the transcript.
struct RoundRecord {
  std::size_t round = 0;  // 1-based index of the weave just added
  std::uint64_t bisection_hash = 0;
  std::size_t weave_edges = 0;  // with multiplicity
  int r = 0;
  double psi_before = 0.0;
  double psi_after = 0.0;
  /// Σ over weave edges (with multiplicity) of ‖P_i - P_j‖², measured
  /// before the step.
  double edge_spread = 0.0;

  double drop() const { return psi_before - psi_after; }
  /// edge_spread / r: the reduction bound as commonly stated.
  double stated_bound() const { return edge_spread / r; }
  /// edge_spread / (2r): what the vertex-splitting argument actually yields
  /// (a single matching on two vertices attains it).
  double proven_bound() const { return edge_spread / (2.0 * r); }
};

/// Evolving state of the Cut-Weave game. P(i, j) is the probability that the
/// composed lazy walk started at j sits at i.
class GameState {
 public:
  GameState() = default;
  explicit GameState(std::size_t n);

  std::size_t num_vertices() const { return n_; }
  std::size_t round() const { return weaves_.size(); }
  /// Sum of all weaves so far (parallel copies kept).
  const WeightedMultigraph& union_graph() const { return union_graph_; }
  const std::vector<WeightedMultigraph>& weaves() const { return weaves_; }
  const std::vector<int>& weave_degrees() const { return degrees_; }
  const RowMatrix& probabilities() const { return p_; }
  double psi() const { return psi_; }
  const std::vector<RoundRecord>& history() const { return history_; }

  /// Validates that `weave` is an r-regular weave on `b`, then adds it.
  void apply(const WeightedMultigraph& weave, int r, const Bisection& b);

  /// Σ (P_ij - 1/n)².
  static double potential(const RowMatrix& p);

 private:
  std::size_t n_ = 0;
  WeightedMultigraph union_graph_;
  std::vector<WeightedMultigraph> weaves_;
  std::vector<int> degrees_;
  RowMatrix p_;
  double psi_ = 0.0;
  std::vector<RoundRecord> history_;
};

/// Cut player's query together with the vectors it was derived from.
struct CutQuery {
  Bisection bisection;
  Eigen::VectorXd z;  // random unit vector orthogonal to 1
  Eigen::VectorXd u;  // M_t ... M_1 z
};

/// Draws z, pushes it through the stored weaves in order, and puts the
/// floor(n/2) smallest entries of u in S (ties by vertex index).
CutQuery cut_player_query(const GameState& state, Rng& rng);
Bisection cut_player_bisection(const GameState& state, Rng& rng);

GameState game_step(GameState state, const WeightedMultigraph& weave, int r, const Bisection& b);

std::uint64_t bisection_hash(const Bisection& b);

/// ceil(C r (ln n)^2).
std::size_t default_round_cap(std::size_t n, int r, double constant = 10.0);

struct GameResult {
  GameState state;
  bool certified = false;
  /// Guaranteed edge expansion of state.union_graph() when certified: r/2.
  double certified_expansion = 0.0;
  int r = 0;
  std::size_t round_cap = 0;
  std::string status;
  /// 1-based rounds answered with matching_weave because the elements could
  /// not cover the bisection. H then certifies itself but is no longer a
  /// union of host elements.
  std::vector<std::size_t> fallback_rounds;
};

/// Sum of exactly `count` distinct elements forming a weave on `b`: a
/// cover_side sample of ceil(count/2) for S and floor(count/2) for the
/// complement, padded with unused elements.
WeightedMultigraph weave_player_answer(std::span<const WeightedMultigraph> elements, std::size_t count,
                                       const Bisection& b, Rng& rng);

/// Sum of r uniformly random perfect matchings between the two sides of an
/// even bisection: an r-regular weave that ignores any host graph.
WeightedMultigraph matching_weave(const Bisection& b, int r, Rng& rng);

/// Plays the game with the cover-based weave player: each round it covers
/// both sides of the query with elements (cover_side, r/(2·element degree)
/// samples per side), pads the union to exactly r/(element degree) distinct
/// elements, and answers with their sum. A bisection the elements cannot
/// cover (for n even) is answered with matching_weave and logged. Stops once Ψ < 1/(4n²) or after
/// `round_cap` rounds (a soft failure reported in `status`). All elements
/// must be regular of one common degree dividing r.
GameResult play_game(std::span<const WeightedMultigraph> elements, int r, std::size_t round_cap, Rng& rng);

/// Termination threshold 1/(4n²).
inline double potential_threshold(std::size_t n) { return 1.0 / (4.0 * static_cast<double>(n) * static_cast<double>(n)); }

// ---------------------------------------------------------------------------
// Embeddings

/// Maps guest edges to walks in a host graph and tracks per-host-edge
/// congestion.
class Embedding {
 public:
  struct GuestEdge {
    VertexId u;
    VertexId v;
    VertexSet path;  // path.front() == u, path.back() == v
  };

  Embedding() = default;
  explicit Embedding(WeightedMultigraph host) : host_(std::move(host)) {}

  void add(VertexId u, VertexId v, VertexSet path);

  const WeightedMultigraph& host() const { return host_; }
  const std::vector<GuestEdge>& guest_edges() const { return guest_; }
  WeightedMultigraph guest_graph() const;

  /// Max over host edges of the incremental counters.
  std::size_t congestion() const;
  /// Congestion recounted from the stored paths.
  std::size_t recount_congestion() const;
  /// Endpoints match and every path step is a host edge.
  bool is_valid() const;

 private:
  WeightedMultigraph host_;
  std::vector<GuestEdge> guest_;
  std::unordered_map<std::uint64_t, std::size_t> load_;
};

/// Lower bound phi_guest / congestion on the host's edge expansion.
double embedding_expansion_transfer(const Embedding& emb, double phi_guest);

// ---------------------------------------------------------------------------
// Embedded weave construction

/// S_0 = complement of S, then S_i = vertices still unassigned with at least
/// mu·D neighbors in S_{i-1}.
struct LevelPartition {
  std::vector<VertexSet> levels;  // levels[0] = S_0
  double mu = 0.0;
  std::size_t degree = 0;

  std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
};

class LevelPartitionStall : public GraphError {
 public:
  LevelPartitionStall(const std::string& what, VertexSet stuck) : GraphError(what), stuck(std::move(stuck)) {}
  VertexSet stuck;
};

LevelPartition level_partition(const WeightedMultigraph& g, const Bisection& b, double mu);

/// K_i for each level: k disjoint matchings such that every vertex of S_i is
/// matched into S_{i-1}. Matchings are never reused across levels.
struct LevelCovers {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> matching_indices;  // [i-1] for level i
  std::vector<WeightedMultigraph> levels;                  // K_1..K_t
  WeightedMultigraph union_graph;                          // K
};

LevelCovers build_level_covers(const WeightedMultigraph& g, const LevelPartition& lp, const MatchingDecomposition& m,
                               std::size_t k, Rng& rng);

/// rho_i = k(1 + rho_{i-1}), rho_0 = 0.
std::vector<std::size_t> kstar_regularity(std::size_t k, std::size_t t);
/// c_i = 1 + k c_{i-1}, c_0 = 0.
std::vector<std::size_t> kstar_congestion(std::size_t k, std::size_t t);

struct KStar {
  std::vector<WeightedMultigraph> levels;  // K*_1..K*_t
  std::vector<std::size_t> measured_regularity;
  std::vector<std::size_t> measured_congestion;
  std::vector<std::size_t> rho;  // recurrence values
  std::vector<std::size_t> c;
  WeightedMultigraph graph;  // Σ K*_i
  Embedding embedding;       // of `graph` into K
};

/// Inductive K*_i construction with the crossing operation (remove vw, wu;
/// add vu and a loop at w). Throws if a crossing lacks a spare copy.
KStar build_kstar(const LevelPartition& lp, const LevelCovers& covers, std::size_t k);

struct EmbeddedWeaveParams {
  double mu = 0.25;
  std::size_t k = 3;
};

struct EmbeddedWeaveSide {
  LevelPartition partition;
  LevelCovers covers;
  KStar kstar;
};

struct EmbeddedWeave {
  WeightedMultigraph weave;  // K* + K̄*
  Embedding embedding;       // into K ∪ K̄
  std::size_t r = 0;         // Σρ over both sides
  std::size_t c = 0;         // Σc over both sides
  EmbeddedWeaveSide s_side;
  EmbeddedWeaveSide t_side;
};

/// Runs level partition, covers and K* for S, then again with the sides
/// exchanged, and returns the summed weave with its embedding into g.
EmbeddedWeave embedded_weave(const WeightedMultigraph& g, const Bisection& b, const MatchingDecomposition& m,
                             const EmbeddedWeaveParams& params, Rng& rng);

}  // namespace resistweave
