#include <cmath>
#include <limits>

#include <doctest.h>

#include "meanfield/errors.hpp"
#include "meanfield/model.hpp"
#include "meanfield/rng.hpp"

using namespace meanfield;

TEST_SUITE("model") {

TEST_CASE("state space rejects duplicates and empty labels") {
  CHECK_THROWS_AS(StateSpace({"a", "a"}), ValidationError);
  CHECK_THROWS_AS(StateSpace({"a", ""}), ValidationError);
  CHECK_THROWS_AS(StateSpace({}), ValidationError);

  const StateSpace s({"S", "I"});
  CHECK(s.size() == 2);
  CHECK(s.index_of("I") == 1);
  CHECK_THROWS_AS(s.index_of("R"), ValidationError);
}

TEST_CASE("transition graph structural validation") {
  CHECK_THROWS_AS(TransitionGraph(1, {}), ValidationError);            // too small
  CHECK_THROWS_AS(TransitionGraph(2, {{0, 0}}), ValidationError);      // self loop
  CHECK_THROWS_AS(TransitionGraph(2, {{0, 1}, {0, 1}}), ValidationError);  // duplicate
  CHECK_THROWS_AS(TransitionGraph(2, {{0, 2}}), ValidationError);      // out of range
  CHECK_THROWS_AS(TransitionGraph(3, {{0, 1}, {1, 0}}), ValidationError);  // state 2 isolated
  CHECK_THROWS_AS(TransitionGraph(3, {{0, 1}, {1, 2}}), ValidationError);  // no way back

  const TransitionGraph g(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(g.num_edges() == 3);
  CHECK(g.edge(1) == std::pair<int, int>(1, 2));
}

TEST_CASE("wlan model edge ordering and rates at a vertex") {
  const auto model = wlan_model({1.0, 0.5, 0.25});
  CHECK(model.num_states() == 3);
  CHECK(model.states().labels() == std::vector<std::string>{"0", "1", "2"});
  // Forward chain first, then resets by source stage.
  REQUIRE(model.graph().num_edges() == 4);
  CHECK(model.graph().edge(0) == std::pair<int, int>(0, 1));
  CHECK(model.graph().edge(1) == std::pair<int, int>(1, 2));
  CHECK(model.graph().edge(2) == std::pair<int, int>(1, 0));
  CHECK(model.graph().edge(3) == std::pair<int, int>(2, 0));

  // Everyone at stage 0: <c, xi> = 1.
  const auto xi = SimplexPoint::vertex(3, 0);
  const double collide = 1.0 - std::exp(-1.0);
  CHECK(model.rate(0, xi) == doctest::Approx(1.0 * collide).epsilon(1e-15));
  CHECK(model.rate(1, xi) == doctest::Approx(0.5 * collide).epsilon(1e-15));
  CHECK(model.rate(2, xi) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(model.rate(3, xi) == doctest::Approx(0.25 * std::exp(-1.0)).epsilon(1e-15));

  CHECK_THROWS_AS(wlan_model({1.0}), ValidationError);
  CHECK_THROWS_AS(wlan_model({1.0, -0.5}), ValidationError);
  CHECK_THROWS_AS(wlan_model({1.0, 0.0}), ValidationError);
}

TEST_CASE("sis model rates and drift") {
  const auto model = sis_model(2.0, 1.0);
  CHECK(model.states().labels() == std::vector<std::string>{"S", "I"});
  REQUIRE(model.graph().num_edges() == 2);

  SUBCASE("infection rate scales with the infected fraction") {
    const SimplexPoint xi(Vector{{0.7, 0.3}});
    CHECK(model.rate(0, xi) == doctest::Approx(2.0 * 0.3).epsilon(1e-15));
    CHECK(model.rate(1, xi) == doctest::Approx(1.0).epsilon(1e-15));

    const Vector d = drift(model, xi);
    CHECK(d(1) == doctest::Approx(2.0 * 0.7 * 0.3 - 0.3).epsilon(1e-13));
    CHECK(d(0) == doctest::Approx(-d(1)).epsilon(1e-15));
  }

  SUBCASE("drift vanishes at the endemic point") {
    const Vector d = drift(model, SimplexPoint(Vector{{0.5, 0.5}}));
    CHECK(std::abs(d(0)) < 1e-15);
    CHECK(std::abs(d(1)) < 1e-15);
  }

  CHECK_THROWS_AS(sis_model(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(sis_model(1.0, -1.0), ValidationError);
}

TEST_CASE("rate matrix rows sum to zero with nonnegative off-diagonals") {
  const auto model = wlan_model({2.0, 1.0, 0.5});
  const Matrix L = build_rate_matrix(model, SimplexPoint(Vector{{0.2, 0.3, 0.5}}));
  REQUIRE(L.rows() == 3);
  for (int z = 0; z < 3; ++z) {
    CHECK(std::abs(L.row(z).sum()) < 1e-14);
    for (int w = 0; w < 3; ++w) {
      if (w != z) CHECK(L(z, w) >= 0.0);
    }
  }
}

TEST_CASE("drift conserves total mass everywhere") {
  const auto model = wlan_model({1.0, 0.5, 0.25, 0.125});
  RngStream rng(7);
  for (int k = 0; k < 50; ++k) {
    Vector w(4);
    for (int i = 0; i < 4; ++i) w(i) = rng.uniform();
    w /= w.sum();
    CHECK(std::abs(drift(model, SimplexPoint(w)).sum()) < 1e-14);
  }
}

TEST_CASE("negative or non-finite rates are rejected at evaluation") {
  const StateSpace states({"a", "b"});
  const TransitionGraph graph(2, {{0, 1}, {1, 0}});
  const MeanFieldModel bad("bad", states, graph,
                           [](int e, const Vector&) { return e == 0 ? -1.0 : 1.0; });
  CHECK_THROWS_AS(bad.rate(0, SimplexPoint::uniform(2)), ModelError);
  CHECK(bad.rate(1, SimplexPoint::uniform(2)) == 1.0);

  const MeanFieldModel nan_model("nan", states, graph, [](int, const Vector&) {
    return std::numeric_limits<double>::quiet_NaN();
  });
  CHECK_THROWS_AS(drift(nan_model, SimplexPoint::uniform(2)), ModelError);
}

TEST_CASE("drift_raw tolerates rounding-level negative components") {
  const auto model = sis_model(2.0, 1.0);
  Vector w(2);
  w << 1.0 + 1e-13, -1e-13;
  const Vector d = drift_raw(model, w);
  CHECK(std::isfinite(d(0)));
  // Clipped to the S vertex: no infected, no flux.
  CHECK(std::abs(d(1)) < 1e-12);
}

TEST_CASE("custom models with population-coupled kinds") {
  const StateSpace states({"idle", "busy"});
  std::vector<EdgeSpec> edges;
  edges.push_back({0, 1, RateExpr{RateExpr::Kind::collide, 1.0, -1}});
  edges.push_back({1, 0, RateExpr{RateExpr::Kind::constant, 2.0, -1}});

  SUBCASE("collide requires weights") {
    CHECK_THROWS_AS(custom_model("m", states, edges), ValidationError);
  }

  SUBCASE("collide rate is coeff * (1 - exp(-<w, xi>))") {
    const auto model = custom_model("m", states, edges, {1.0, 3.0});
    const SimplexPoint xi(Vector{{0.5, 0.5}});
    CHECK(model.rate(0, xi) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-15));
    CHECK(model.rate(1, xi) == doctest::Approx(2.0).epsilon(1e-15));
  }

  SUBCASE("linear kind reads one component") {
    std::vector<EdgeSpec> lin;
    lin.push_back({0, 1, RateExpr{RateExpr::Kind::linear, 4.0, 1}});
    lin.push_back({1, 0, RateExpr{RateExpr::Kind::constant, 1.0, -1}});
    const auto model = custom_model("m", states, lin);
    CHECK(model.rate(0, SimplexPoint(Vector{{0.75, 0.25}})) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

}  // TEST_SUITE
