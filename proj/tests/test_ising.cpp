#include <doctest.h>

#include "helpers.hpp"
#include "netmp/ising.hpp"
#include "netmp/oracles.hpp"

using namespace netmp;
using netmp::test::graph_of;

TEST_SUITE("ising") {
  TEST_CASE("beta = 0 gives uniform messages and marginals") {
    auto g = generate_er(50, 0.1, 1);
    auto r = solve_ising(g, {0.0});
    for (const auto& m : r.marginals) {
      CHECK(m[0] == doctest::Approx(0.5));
      CHECK(m[1] == doctest::Approx(0.5));
    }
    CHECK(r.report.iterations <= 2);
    CHECK_FALSE(r.free_energy.has_value());
    CHECK(r.log_z == doctest::Approx(50 * std::log(2.0)));
  }

  TEST_CASE("large beta on K4 polarizes") {
    auto g = make_complete(4);
    auto tilt = ising_tilted_field(g, 0.6);
    auto r = solve_ising(g, {50.0}, {}, &tilt);
    CHECK(r.report.converged);
    for (const auto& m : r.marginals) CHECK(m[0] > 1.0 - 1e-12);
    auto down = ising_tilted_field(g, 0.4);
    auto r2 = solve_ising(g, {50.0}, {}, &down);
    for (const auto& m : r2.marginals) CHECK(m[1] > 1.0 - 1e-12);
    // no overflow far beyond
    auto r3 = solve_ising(g, {500.0}, {}, &tilt);
    CHECK(std::isfinite(r3.log_z));
  }

  TEST_CASE("single edge") {
    auto g = graph_of(2, {{0, 1}});
    for (double beta : {0.3, 1.0, 4.0}) {
      auto sol = ising_messages(g, {beta});
      for (EdgeId e = 0; e < 2; ++e) {
        CHECK(sol.messages[e][0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(sol.messages[e][1] == doctest::Approx(0.5).epsilon(1e-14));
      }
    }
    auto r = solve_ising(g, {1.0});
    CHECK(r.marginals[0][0] == doctest::Approx(0.5));
    CHECK(std::exp(r.log_z) == doctest::Approx(4 * std::cosh(1.0)).epsilon(1e-12));
    CHECK(r.log_z == doctest::Approx(1.820075).epsilon(1e-6));
    CHECK(*r.free_energy == doctest::Approx(-r.log_z).epsilon(1e-12));
  }

  TEST_CASE("isolated node") {
    auto r = solve_ising(Graph::from_edges(1, {}), {0.8});
    CHECK(std::exp(r.log_z) == doctest::Approx(2.0));
  }

  TEST_CASE("enumeration oracle values") {
    auto e = oracle::ising_enumerate(graph_of(2, {{0, 1}}), 1.0);
    CHECK(std::exp(e.log_z) == doctest::Approx(6.17232).epsilon(1e-6));
    auto t = oracle::ising_enumerate(make_complete(3), 1.0);
    CHECK(std::exp(t.log_z) == doctest::Approx(2 * std::exp(3.0) + 6 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::exp(t.log_z) == doctest::Approx(42.378).epsilon(1e-4));
    auto z = oracle::ising_enumerate(generate_er(8, 0.4, 2), 0.0);
    CHECK(z.log_z == doctest::Approx(8 * std::log(2.0)));
    CHECK_THROWS(oracle::ising_enumerate(make_path(21), 0.5));
  }

  TEST_CASE("tree exactness") {
    for (std::uint64_t s = 0; s < 15; ++s) {
      auto t = generate_random_tree(2 + s % 13, s);
      for (double beta : {0.5, 0.7}) {
        auto mp = solve_ising(t, {beta});
        auto ex = oracle::ising_enumerate(t, beta);
        CHECK(std::abs(mp.log_z - ex.log_z) < 1e-8);
        for (NodeId i = 0; i < t.num_nodes(); ++i) CHECK(std::abs(mp.marginals[i][0] - ex.marginals[i][0]) < 1e-8);
      }
    }
  }

  TEST_CASE("anchored partition function differs from the exact one") {
    // path a-b-c: the anchored product misses a factor 2
    auto g = make_path(3);
    auto r = solve_ising(g, {0.7});
    auto ex = oracle::ising_enumerate(g, 0.7);
    CHECK(r.log_z == doctest::Approx(ex.log_z).epsilon(1e-12));
    CHECK(std::abs(r.log_z_anchored - ex.log_z) > 0.5);
  }

  TEST_CASE("normalization and ranges") {
    auto g = generate_regular(300, 3, 5);
    auto r = solve_ising(g, {0.8});
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      CHECK(std::abs(r.marginals[i][0] + r.marginals[i][1] - 1.0) < 1e-12);
      CHECK(std::abs(r.magnetization_per_node[i]) <= 1.0);
    }
    CHECK(std::abs(*r.free_energy + r.log_z / 0.8) < 1e-9);
  }

  TEST_CASE("symmetric point is a fixed point") {
    auto g = generate_er(200, 0.02, 7);
    FixedPointConfig cfg;
    cfg.init = InitKind::uniform_simplex;
    for (double beta : {0.1, 1.0, 10.0}) {
      auto sol = ising_messages(g, {beta}, cfg);
      CHECK(sol.report.iterations == 1);
      CHECK(sol.report.residual == 0.0);
    }
  }

  TEST_CASE("up-down symmetry") {
    auto g = generate_regular(200, 3, 9);
    auto up = ising_tilted_field(g, 0.51), down = ising_tilted_field(g, 0.49);
    auto a = solve_ising(g, {0.8}, {}, &up), b = solve_ising(g, {0.8}, {}, &down);
    CHECK(a.magnetization > 0.1);
    CHECK(a.magnetization == doctest::Approx(-b.magnetization).epsilon(1e-9));
  }

  TEST_CASE("critical temperature") {
    auto k4 = ising_critical_temperature(make_complete(4));
    CHECK(*k4.beta_c == doctest::Approx(std::atanh(0.5)).epsilon(1e-9));
    CHECK(*k4.t_c == doctest::Approx(1.82048).epsilon(1e-5));
    CHECK_FALSE(ising_critical_temperature(make_cycle(6)).beta_c.has_value());
    CHECK_FALSE(ising_critical_temperature(generate_random_tree(20, 3)).beta_c.has_value());
    CHECK_THROWS(ising_critical_temperature(Graph::from_edges(3, {})));
  }

  TEST_CASE("temperature extremes") {
    auto g = generate_regular(200, 3, 4);
    const double hot[] = {20.0};
    CHECK(sweep_magnetization(g, hot).abs_magnetization[0] < 1e-6);
    const double cold[] = {0.1};
    CHECK(sweep_magnetization(g, cold).abs_magnetization[0] > 0.99);
  }

  TEST_CASE("linear stability of the symmetric point") {
    auto g = generate_regular(1000, 3, 6);
    const double beta_c = *ising_critical_temperature(g).beta_c;
    auto deviation_after = [&](double beta) {
      auto start = ising_tilted_field(g, 0.5 + 1e-6);
      FixedPointConfig cfg;
      cfg.max_iter = 60;
      auto sol = ising_messages(g, {beta}, cfg, &start);
      double dev = 0.0;
      for (EdgeId e = 0; e < sol.messages.num_edges(); ++e) dev = std::max(dev, std::abs(sol.messages[e][0] - 0.5));
      return dev;
    };
    CHECK(deviation_after(0.9 * beta_c) < 1e-7);
    CHECK(deviation_after(1.1 * beta_c) > 1e-5);
  }
}
