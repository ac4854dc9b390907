#include "doctest.h"

#include <sstream>

#include "resistweave/generators.hpp"
#include "resistweave/graph.hpp"
#include "resistweave/io.hpp"
#include "resistweave/spectral.hpp"
#include "support/oracles.hpp"

using namespace resistweave;

namespace {

WeightedMultigraph matching(std::size_t n, std::vector<std::pair<VertexId, VertexId>> pairs) {
  std::vector<Edge> e;
  for (auto [a, b] : pairs) e.push_back({a, b, 1.0, 1});
  return WeightedMultigraph(n, e);
}

}  // namespace

TEST_CASE("records are canonical and merged") {
  WeightedMultigraph g(3, {{2, 0, 1.5, 1}, {0, 2, 1.5, 2}, {1, 1, 2.0, 1}, {0, 1, 0.0, 1}});
  REQUIRE(g.num_records() == 2);
  CHECK(g.edges()[0] == Edge{0, 2, 1.5, 3});
  CHECK(g.num_edges() == 4);
  CHECK(g.weighted_degree(0) == doctest::Approx(4.5));
  // A loop of weight 2 adds 4 to its vertex.
  CHECK(g.weighted_degree(1) == doctest::Approx(4.0));
  CHECK(g.unweighted_degree(1) == 2);
  CHECK(g.has_self_loops());
}

TEST_CASE("invalid edges are rejected") {
  CHECK_THROWS_AS(WeightedMultigraph(2, {{0, 2, 1.0, 1}}), GraphError);
  CHECK_THROWS_AS(WeightedMultigraph(2, {{0, 1, -1.0, 1}}), GraphError);
  CHECK_THROWS_AS(WeightedMultigraph(2, {{0, 1, 1.0, 0}}), GraphError);
}

TEST_CASE("union") {
  const auto g = complete_graph(4);
  CHECK(graph_union(g, WeightedMultigraph(4)) == g);

  const auto m1 = matching(4, {{0, 1}, {2, 3}});
  const auto m2 = matching(4, {{0, 2}, {1, 3}});
  const auto u = graph_union(m1, m2);
  CHECK(u.regular_degree() == doctest::Approx(2.0));
  CHECK(graph_union(m1, m1) == m1);
  CHECK_THROWS_AS(graph_union(m1, WeightedMultigraph(5)), GraphError);
}

TEST_CASE("sum") {
  const auto m = matching(4, {{0, 1}, {2, 3}});
  const auto mm = graph_sum(m, m);
  CHECK(mm.regular_degree() == doctest::Approx(2.0));
  for (const auto& e : mm.edges()) CHECK(e.mult == 2);
  CHECK(graph_sum(complete_graph(5), WeightedMultigraph(5)) == complete_graph(5));

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_connected_graph(8, 0.4, rng, 0.5, 2.0);
    const auto b = random_connected_graph(8, 0.4, rng, 0.5, 2.0);
    const auto s = graph_sum(a, b);
    auto recount = [](const WeightedMultigraph& g, VertexId v) {
      double d = 0.0;
      for (const auto& e : g.edges()) d += e.w * static_cast<double>(e.mult) * ((e.u == v) + (e.v == v));
      return d;
    };
    for (VertexId v = 0; v < 8; ++v) {
      CHECK(s.weighted_degree(v) == doctest::Approx(recount(a, v) + recount(b, v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("union degrees add on edge-disjoint inputs") {
  Rng rng(5);
  const auto g = random_regular(12, 4, rng);
  std::vector<Edge> first, second;
  for (std::size_t i = 0; i < g.edges().size(); ++i) (i % 2 ? first : second).push_back(g.edges()[i]);
  const WeightedMultigraph a(12, first), b(12, second);
  const auto u = graph_union(a, b);
  for (VertexId v = 0; v < 12; ++v) CHECK(u.weighted_degree(v) == a.weighted_degree(v) + b.weighted_degree(v));
}

TEST_CASE("cut weight") {
  const VertexSet half{0, 1};
  CHECK(cut_weight(complete_graph(4), half) == 4.0);

  const WeightedMultigraph two_triangles(6, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 1}, {3, 4, 1, 1}, {4, 5, 1, 1}, {3, 5, 1, 1}});
  const VertexSet tri{0, 1, 2};
  CHECK(cut_weight(two_triangles, tri) == 0.0);

  const WeightedMultigraph single(2, {{0, 1, 3.0, 1}});
  const VertexSet u{0};
  CHECK(cut_weight(single, u) == 3.0);

  const WeightedMultigraph loops(3, {{0, 0, 5.0, 1}, {0, 1, 1.0, 2}});
  CHECK(cut_weight(loops, u) == 2.0);

  CHECK_THROWS_AS(cut_weight(single, VertexSet{}), GraphError);
  CHECK_THROWS_AS(cut_weight(single, VertexSet{0, 1}), GraphError);

  // Symmetric in the complement.
  Rng rng(3);
  const auto g = random_connected_graph(9, 0.5, rng, 0.1, 3.0);
  const VertexSet s{0, 4, 7}, t{1, 2, 3, 5, 6, 8};
  CHECK(cut_weight(g, s) == doctest::Approx(cut_weight(g, t)));
}

TEST_CASE("double cover") {
  const WeightedMultigraph edge(2, {{0, 1, 1.0, 1}});
  const auto dc = double_cover(edge);
  CHECK(dc.num_vertices() == 4);
  CHECK(dc.num_edges() == 2);
  CHECK(dc.regular_degree() == 1.0);
  CHECK(dc.component_count() == 2);

  // K3 lifts to a 6-cycle: connected, 2-regular, bipartite, 6 edges.
  const auto c6 = double_cover(complete_graph(3));
  CHECK(c6.num_edges() == 6);
  CHECK(c6.regular_degree() == 2.0);
  CHECK(c6.is_connected());
  CHECK(c6.is_bipartite());
  CHECK(oracle::lambda2(c6) == doctest::Approx(0.5));

  CHECK_THROWS_AS(double_cover(WeightedMultigraph(2, {{0, 0, 1.0, 1}})), GraphError);

  Rng rng(8);
  const auto g = random_regular(10, 3, rng);
  CHECK(double_cover(g).regular_degree() == 3.0);
}

TEST_CASE("double cover spectrum identity") {
  // The normalized spectrum of the lift is {1 - mu} ∪ {1 + mu} over the
  // base's walk eigenvalues mu, so its lambda2 is min(lambda2, 2 - lambda_max).
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_connected_graph(9, 0.5, rng, 0.5, 2.0);
    const auto spec = oracle::walk_spectrum(g);
    const double expected = std::min(spec[1], 2.0 - spec.back());
    CHECK(lambda2(double_cover(g)) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("unfold double cover") {
  const WeightedMultigraph both(4, {{0, 3, 1.0, 1}, {1, 2, 1.0, 1}});  // (0,0)(1,1) and (1,0)(0,1)
  const auto h = unfold_double_cover(both);
  REQUIRE(h.num_records() == 1);
  CHECK(h.edges()[0] == Edge{0, 1, 2.0, 1});

  const WeightedMultigraph one(4, {{0, 3, 1.0, 1}});
  CHECK(unfold_double_cover(one).edges()[0] == Edge{0, 1, 1.0, 1});

  CHECK(unfold_double_cover(double_cover(complete_graph(3))) == scale_weights(complete_graph(3), 2.0));
  CHECK_THROWS_AS(unfold_double_cover(WeightedMultigraph(4, {{0, 1, 1.0, 1}})), GraphError);

  // Degrees fold additively.
  std::vector<Edge> partial;
  const auto dc = double_cover(complete_graph(6));
  for (std::size_t i = 0; i < dc.edges().size(); i += 3) partial.push_back(dc.edges()[i]);
  const WeightedMultigraph h2(12, partial);
  const auto folded = unfold_double_cover(h2);
  for (VertexId v = 0; v < 6; ++v) {
    CHECK(folded.weighted_degree(v) == h2.weighted_degree(v) + h2.weighted_degree(v + 6));
  }

  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = random_regular(14, 4, rng);
    CHECK(unfold_double_cover(double_cover(g)) == scale_weights(g, 2.0));
  }
}

TEST_CASE("weaves") {
  const Bisection b(4, {0, 1});
  CHECK(is_weave(matching(4, {{0, 2}, {1, 3}}), b));
  CHECK_FALSE(is_weave(WeightedMultigraph(4), b));
  CHECK_FALSE(is_weave(matching(4, {{0, 1}, {2, 3}}), b));

  // Hamiltonian cycle alternating sides: 0 (S), 3 (T), 1 (S), 2 (T).
  const WeightedMultigraph ham(4, {{0, 3, 1, 1}, {3, 1, 1, 1}, {1, 2, 1, 1}, {2, 0, 1, 1}});
  CHECK(is_weave(ham, b));

  // Agrees with the crossing-count definition.
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_connected_graph(10, 0.15, rng);
    const Bisection bb(10, sample_without_replacement(10, 5, rng));
    std::size_t min_cross = SIZE_MAX;
    for (VertexId v = 0; v < 10; ++v) {
      std::size_t c = 0;
      for (const auto& nb : g.neighbors(v)) c += bb.crosses(v, nb.v) ? nb.mult : 0;
      min_cross = std::min(min_cross, c);
    }
    CHECK(is_weave(g, bb) == (min_cross >= 1));
  }
}

TEST_CASE("bisection sizes") {
  CHECK_NOTHROW(Bisection(5, {0, 1}));
  CHECK_NOTHROW(Bisection(5, {0, 1, 2}));
  CHECK_THROWS_AS(Bisection(5, {0}), GraphError);
  CHECK_THROWS_AS(Bisection(4, {0, 0}), GraphError);
  const Bisection b(5, {4, 1});
  CHECK(b.side_s() == VertexSet{1, 4});
  CHECK(b.side_t() == VertexSet{0, 2, 3});
  CHECK(b.swapped().side_s() == VertexSet{0, 2, 3});
}

TEST_CASE("scale weights") {
  const auto g = complete_graph(5);
  CHECK(scale_weights(g, 1.0) == g);
  Rng rng(4);
  const auto r = random_regular(12, 3, rng);
  CHECK(scale_weights(r, 10.0 / 3.0).regular_degree() == doctest::Approx(10.0));
  CHECK_THROWS_AS(scale_weights(g, 0.0), GraphError);
  CHECK_THROWS_AS(scale_weights(g, -2.0), GraphError);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = random_connected_graph(8, 0.5, rng, 0.2, 4.0);
    CHECK(oracle::lambda2(scale_weights(h, 7.5)) == doctest::Approx(oracle::lambda2(h)).epsilon(1e-9));
  }
}

TEST_CASE("graph difference") {
  const auto k4 = complete_graph(4);
  const auto m = matching(4, {{0, 1}, {2, 3}});
  const auto rest = graph_difference(k4, m);
  CHECK(rest.num_edges() == 4);
  CHECK(graph_sum(rest, m) == k4);
  CHECK_THROWS_AS(graph_difference(m, k4), GraphError);
}

TEST_CASE("edge list round trip is bit exact") {
  Rng rng(99);
  const auto g = random_connected_graph(12, 0.3, rng, 0.1, 10.0);
  const WeightedMultigraph with_extras = graph_sum(g, WeightedMultigraph(12, {{3, 3, 0.1, 2}, {0, 1, 1.0 / 3.0, 4}}));
  std::stringstream ss;
  write_edge_list(ss, with_extras);
  CHECK(read_edge_list(ss) == with_extras);

  std::stringstream text("# comment\n3 2\n0 1 2.5\n2 2 1 3  # loop with multiplicity\n");
  const auto parsed = read_edge_list(text);
  CHECK(parsed.num_vertices() == 3);
  CHECK(parsed.weighted_degree(2) == 6.0);

  std::stringstream bad("3 2\n0 1 1\n");
  CHECK_THROWS(read_edge_list(bad));

  std::stringstream blocks;
  write_edge_list_blocks(blocks, {complete_graph(3), cycle_graph(4)});
  const auto back = read_edge_list_blocks(blocks);
  REQUIRE(back.size() == 2);
  CHECK(back[1] == cycle_graph(4));
}
