#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <iosfwd>
#include <span>

#include "resistweave/graph.hpp"

namespace resistweave {

/// Combinatorial Laplacian D - A. Self-loops cancel out of L.
Eigen::MatrixXd laplacian(const WeightedMultigraph& g);

/// D^{-1/2} L D^{-1/2}, where D includes self-loop mass. Throws on isolated
/// vertices.
Eigen::MatrixXd normalized_laplacian(const WeightedMultigraph& g);

/// Second-smallest eigenvalue of the normalized Laplacian. The known null
/// vector D^{1/2}·1 is deflated by a rank-one shift before the symmetric
/// eigensolve. Returns exactly 0 for disconnected graphs.
double lambda2(const WeightedMultigraph& g);

/// All normalized-Laplacian eigenvalues, ascending.
Eigen::VectorXd normalized_spectrum(const WeightedMultigraph& g);

/// Moore-Penrose pseudo-inverse of the Laplacian via symmetric
/// eigendecomposition; eigenvalues below 1e-12 * lambda_max count as zero.
Eigen::MatrixXd laplacian_pseudo_inverse(const WeightedMultigraph& g);

/// (e_u - e_v)^T L^+ (e_u - e_v). Zero when u == v; throws on disconnected
/// graphs.
double effective_resistance(const WeightedMultigraph& g, VertexId u, VertexId v);

/// Symmetric n x n table of pairwise effective resistances.
class ResistanceTable {
 public:
  ResistanceTable() = default;
  explicit ResistanceTable(Eigen::MatrixXd r) : r_(std::move(r)) {}

  std::size_t size() const { return static_cast<std::size_t>(r_.rows()); }
  double operator()(VertexId u, VertexId v) const {
    return r_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }
  const Eigen::MatrixXd& matrix() const { return r_; }

  /// Rows `u,v,R` for u < v.
  void write_csv(std::ostream& out) const;

 private:
  Eigen::MatrixXd r_;
};

/// All pairwise resistances from a single factorization: for a connected
/// graph (L + J/n)^{-1} = L^+ + J/n, so the diagonal-difference formula
/// applies directly.
ResistanceTable all_resistances(const WeightedMultigraph& g);

struct CheegerResult {
  double phi = 0.0;
  VertexSet witness;  // attaining S with 0 < |S| <= n/2
};

/// Exact edge expansion min w(S, S̄)/|S| by Gray-code enumeration of all
/// subsets. Requires 2 <= n <= 22.
CheegerResult cheeger_bruteforce(const WeightedMultigraph& g);

inline constexpr std::size_t kCheegerMaxVertices = 22;

/// Expected hitting times of the weighted random walk. Self-loops act as
/// lazy steps.
struct HittingTimes {
  Eigen::MatrixXd steps;      // H(u, v)
  double total_weight = 0.0;  // W

  /// h(u, v) = H(u, v) / (2W).
  double normalized(VertexId u, VertexId v) const {
    return steps(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) / (2.0 * total_weight);
  }
};

/// One grounded-Laplacian solve per target vertex. Throws on disconnected
/// graphs.
HittingTimes hitting_times(const WeightedMultigraph& g);

/// Two-step graph on one side of a bipartite graph that is d-regular in
/// weighted degrees: w1(i,j) = (1/d) Σ_k w(i,k) w(j,k). Return walks i→k→i
/// are kept as self-loops so every weighted degree is exactly d. Vertex i of
/// the result is side[i].
WeightedMultigraph bipartite_square(const WeightedMultigraph& g, std::span<const VertexId> side, double d);

/// Predicted interval for R(u, v): |R - center| <= radius.
struct ResistanceInterval {
  double center = 0.0;
  double radius = 0.0;

  bool contains(double r, double slack = 0.0) const { return std::abs(r - center) <= radius + slack; }
};

/// Non-bipartite form: center 1/d_u + 1/d_v, radius 2(1/λ2 + 2) w_max / d_min².
ResistanceInterval vlrh_bound(double d_u, double d_v, double lambda2, double w_max, double d_min);

/// Regular form valid for bipartite graphs too: center 2/d, radius
/// 12(1/λ2 + 2) w_max / d².
ResistanceInterval vlrh_regular_bound(double d, double lambda2, double w_max);

}  // namespace resistweave
