#include <doctest.h>

#include "helpers.hpp"
#include "netmp/loopy.hpp"
#include "netmp/oracles.hpp"
#include "netmp/percolation.hpp"

using namespace netmp;
using netmp::test::graph_of;
using netmp::test::max_abs_diff;
using Cycles = std::vector<std::vector<NodeId>>;

TEST_SUITE("loopy") {
  TEST_CASE("primitive cycles") {
    CHECK(primitive_cycles(make_complete(3), 0, 3) == Cycles{{0, 1, 2}});
    CHECK(primitive_cycles(make_complete(3), 0, 2).empty());
    CHECK(primitive_cycles(make_cycle(4), 0, 3).empty());
    CHECK(primitive_cycles(make_cycle(4), 0, 4) == Cycles{{0, 1, 2, 3}});
    CHECK(primitive_cycles(make_cycle(4), 2, 4) == Cycles{{2, 1, 0, 3}});
    // every 4-cycle of K4 is covered by its triangles
    CHECK(primitive_cycles(make_complete(4), 0, 4) == Cycles{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}});
    // two triangles sharing node 0: the figure-eight walk returns to 0 midway
    auto fig8 = graph_of(5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}});
    CHECK(primitive_cycles(fig8, 0, 6) == Cycles{{0, 1, 2}, {0, 3, 4}});
    // from 1 the closed walk through both triangles repeats node 0 but no edge
    CHECK(primitive_cycles(fig8, 1, 5) == Cycles{{1, 0, 2}});
    CHECK(primitive_cycles(fig8, 1, 6) == Cycles{{1, 0, 2}, {1, 0, 3, 4, 0, 2}});
    // square with a chord: the outer 4-cycle is not primitive from 0 but the triangles are
    auto chord = graph_of(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}});
    CHECK(primitive_cycles(chord, 0, 4) == Cycles{{0, 1, 2}, {0, 2, 3}});
    // from 1 the chord is not incident: the 4-cycle through 3 adds edges 2-3 and 3-0
    CHECK(primitive_cycles(chord, 1, 4) == Cycles{{1, 0, 2}, {1, 0, 3, 2}});
    CHECK(primitive_cycles(generate_random_tree(20, 1), 3, 8).empty());
  }

  TEST_CASE("neighborhoods") {
    auto k4 = make_complete(4);
    auto nb = build_neighborhood(k4, 0, 3);
    CHECK(nb.nodes == std::vector<NodeId>{1, 2, 3});
    CHECK(nb.internal_edges.size() == 6);

    auto t = make_star(3);
    auto s = build_neighborhood(t, 0, 5);
    CHECK(s.nodes == std::vector<NodeId>{1, 2, 3});
    CHECK(s.internal_edges == std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});

    // C5 with r=5: the neighborhood is the whole cycle
    auto c5 = build_neighborhood(make_cycle(5), 0, 5);
    CHECK(c5.nodes == std::vector<NodeId>{1, 2, 3, 4});
    CHECK(c5.internal_edges.size() == 5);
    auto c5r4 = build_neighborhood(make_cycle(5), 0, 4);
    CHECK(c5r4.nodes == std::vector<NodeId>{1, 4});
  }

  TEST_CASE("message neighborhoods") {
    // triangle 0-1-2 with a pendant 3 on node 1
    auto g = graph_of(4, {{0, 1}, {1, 2}, {0, 2}, {1, 3}});
    auto n0 = build_neighborhood(g, 0, 3), n1 = build_neighborhood(g, 1, 3);
    auto m = build_message_neighborhood(n0, n1);
    CHECK(m.receiver == 0);
    CHECK(m.sender == 1);
    CHECK(m.nodes == std::vector<NodeId>{3});
    CHECK(m.edges == std::vector<Edge>{{1, 3}});
    CHECK(m.overlap_edges == 0);

    // K4: everything around 1 is already in N_0
    auto k4 = make_complete(4);
    auto k = build_message_neighborhood(build_neighborhood(k4, 0, 3), build_neighborhood(k4, 1, 3));
    CHECK(k.nodes.empty());
    CHECK(k.edges.empty());

    // C5 at r=3: a tree locally; N_{0<-1} = {2} via edge 1-2
    auto c5 = make_cycle(5);
    auto c = build_message_neighborhood(build_neighborhood(c5, 0, 3), build_neighborhood(c5, 1, 3));
    CHECK(c.nodes == std::vector<NodeId>{2});
    CHECK(c.edges == std::vector<Edge>{{1, 2}});
  }

  TEST_CASE("reachability") {
    auto star = build_neighborhood(make_star(3), 0, 3);
    CHECK(reachability(star, {0b000}) == std::vector<bool>{false, false, false});
    CHECK(reachability(star, {0b101}) == std::vector<bool>{true, false, true});

    // triangle: 1 reaches 0 through 2
    auto tri = build_neighborhood(make_complete(3), 0, 3);
    REQUIRE(tri.internal_edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(reachability(tri, {0b110}) == std::vector<bool>{true, true});
    CHECK(reachability(tri, {0b100}) == std::vector<bool>{false, false});

    // adding occupied edges never disconnects
    auto nb = build_neighborhood(make_complete(5), 0, 3);
    const std::size_t k = nb.internal_edges.size();
    for (std::uint64_t mask = 0; mask < (1ull << k); mask += 7) {
      auto base = reachability(nb, {mask});
      for (std::size_t e = 0; e < k; ++e) {
        auto more = reachability(nb, {mask | (1ull << e)});
        for (std::size_t t = 0; t < base.size(); ++t) CHECK((!base[t] || more[t]));
      }
    }
    EdgeConfiguration cfg{0b1011};
    CHECK(cfg.occupied() == 3);
  }

  TEST_CASE("without short cycles it reduces to standard percolation") {
    auto tree = generate_random_tree(80, 2);
    auto sparse = netmp::test::girth_at_least_5(generate_er(200, 0.02, 9));
    for (double p : {0.3, 0.6, 0.9}) {
      const auto b = percolate(sparse, p).node_probabilities;
      for (std::size_t r : {2, 4}) {
        LoopyPercolation lp(sparse, r);
        CHECK(lp.overlap_edges() == 0);
        CHECK(max_abs_diff(lp.solve(p).node_probabilities, b) < 1e-10);
      }

      auto c = loopy_percolation(tree, p, 6);
      CHECK(max_abs_diff(c.node_probabilities, percolate(tree, p).node_probabilities) < 1e-10);
      CHECK(max_abs_diff(c.node_probabilities, oracle::tree_percolation_dp(tree, p)) < 1e-10);
    }
    // r below the girth
    LoopyPercolation lp(make_cycle(9), 8);
    CHECK(lp.max_neighborhood_edges() == 2);
    auto d = lp.solve(0.7);
    CHECK(max_abs_diff(d.node_probabilities, percolate(make_cycle(9), 0.7).node_probabilities) < 1e-10);
  }

  TEST_CASE("triangles break the reduction at r = 2") {
    // a common neighbour of i and j lies in N_i, so its edge to j leaves N_{i<-j}
    auto g = make_complete(4);
    LoopyPercolation lp(g, 2);
    CHECK(lp.overlap_edges() > 0);
    CHECK(max_abs_diff(lp.solve(0.6).node_probabilities, percolate(g, 0.6).node_probabilities) > 1e-3);
  }

  TEST_CASE("p = 0 leaves every node outside") {
    auto g = generate_clustered(60, 1, 1, 5);
    auto r = loopy_percolation(g, 0.0, 3);
    CHECK(r.report.converged);
    for (double x : r.node_probabilities) CHECK(x == 1.0);
    CHECK(r.giant_cluster_fraction == 0.0);
  }

  TEST_CASE("a graph covered by one neighborhood has nothing outside to connect to") {
    auto r = loopy_percolation(make_complete(3), 0.5, 3);
    CHECK(r.report.converged);
    for (double x : r.node_probabilities) CHECK(x == 1.0);
  }

  TEST_CASE("monte carlo mode agrees with exact mode") {
    auto g = generate_clustered(90, 1, 1, 7);
    LoopyPercolation exact(g, 3);
    REQUIRE(exact.max_neighborhood_edges() <= 12);
    const double p = 0.85;
    const double s_exact = exact.solve(p).giant_cluster_fraction;
    const std::size_t seeds = 20;
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t s = 0; s < seeds; ++s) {
      LoopyPercolation mc(g, 3, LoopyMode::monte_carlo(200, s));
      const double v = mc.solve(p).giant_cluster_fraction;
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt(std::max(0.0, sum2 / seeds - mean * mean) / (seeds - 1));
    CHECK(std::abs(mean - s_exact) < 3.0 * se + 1e-12);
  }

  TEST_CASE("monte carlo is reproducible") {
    auto g = generate_clustered(60, 1, 1, 2);
    auto a = loopy_percolation(g, 0.7, 3, {}, LoopyMode::monte_carlo(30, 4));
    auto b = loopy_percolation(g, 0.7, 3, {}, LoopyMode::monte_carlo(30, 4));
    CHECK(a.node_probabilities == b.node_probabilities);
  }

  TEST_CASE("size limits") {
    CHECK_THROWS_AS(LoopyPercolation(make_complete(8), 3), std::invalid_argument);
    CHECK_NOTHROW(LoopyPercolation(make_complete(8), 3, LoopyMode::monte_carlo(5, 1)));
    CHECK_THROWS_AS(LoopyPercolation(make_cycle(5), 1), std::invalid_argument);
    CHECK_THROWS(LoopyPercolation(make_cycle(5), 3, LoopyMode::monte_carlo(0, 1)));
  }

  TEST_CASE("sweep is monotone") {
    auto g = generate_clustered(120, 1, 2, 3);
    LoopyPercolation lp(g, 3);
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(0.1 * k);
    auto res = lp.sweep(grid);
    for (std::size_t k = 1; k < res.size(); ++k)
      CHECK(res[k].giant_cluster_fraction >= res[k - 1].giant_cluster_fraction - 1e-9);
    CHECK(res.back().giant_cluster_fraction == doctest::Approx(1.0));
  }
}
