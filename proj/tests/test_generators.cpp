#include "doctest.h"

#include "resistweave/generators.hpp"

using namespace resistweave;

namespace {

bool simple(const WeightedMultigraph& g) { return !g.has_self_loops() && g.num_records() == g.num_edges(); }

}  // namespace

TEST_CASE("deterministic families") {
  const auto k5 = complete_graph(5);
  CHECK(k5.num_vertices() == 5);
  CHECK(k5.num_edges() == 10);

  const auto q3 = hypercube(3);
  CHECK(q3.num_vertices() == 8);
  CHECK(q3.num_edges() == 12);
  CHECK(q3.regular_degree() == 3.0);
  CHECK(q3.is_bipartite());

  const auto c7 = cycle_graph(7);
  CHECK(c7.regular_degree() == 2.0);
  CHECK(c7.is_connected());

  const auto circ = circulant(12, {1, 6});
  CHECK(circ.regular_degree() == 3.0);  // offset n/2 contributes one neighbour
  CHECK(simple(circ));
}

TEST_CASE("random regular") {
  Rng rng(2024);
  const auto g = random_regular(100, 20, rng);
  CHECK(g.regular_degree() == 20.0);
  CHECK(simple(g));

  for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{10, 3}, {16, 5}, {50, 7}, {9, 8}, {200, 40}}) {
    const auto h = random_regular(n, d, rng);
    CHECK(h.num_vertices() == n);
    CHECK(h.regular_degree() == static_cast<double>(d));
    CHECK(simple(h));
  }
  CHECK_THROWS_AS(random_regular(7, 3, rng), GraphError);
  CHECK_THROWS_AS(random_regular(5, 5, rng), GraphError);

  Rng a(77), b(77);
  CHECK(random_regular(40, 6, a) == random_regular(40, 6, b));
}

TEST_CASE("random bipartite families") {
  Rng rng(8);
  const auto g = random_regular_bipartite(12, 4, rng);
  CHECK(g.num_vertices() == 24);
  CHECK(g.regular_degree() == 4.0);
  CHECK(g.is_bipartite());
  CHECK(simple(g));

  const auto w = random_weighted_regular_bipartite(6, 3, rng);
  CHECK(w.is_bipartite());
  CHECK(w.is_regular(1e-9));

  const auto c = random_connected_graph(15, 0.1, rng, 1.0, 2.0);
  CHECK(c.is_connected());
  for (const auto& e : c.edges()) {
    CHECK(e.w >= 1.0);
    CHECK(e.w <= 2.0);
  }
}
