#include <cmath>
#include <vector>

#include <doctest.h>

#include "meanfield/equilibria.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/wlan.hpp"

using namespace meanfield;

namespace {

// Golden collision probabilities from an independent 1e-14 bisection oracle
// over the scalar consistency equation, frozen before this solver existed.
struct Golden {
  std::vector<double> c;
  double gamma_star;
};

const Golden kGolden[] = {
    {{1.0, 0.5, 0.25}, 0.42749152492914533},
    {{0.5, 0.25}, 0.31608102080442213},
    {{0.5, 0.25, 0.125}, 0.2902077648472452},
    {{0.5, 0.25, 0.125, 0.0625, 0.03125}, 0.27496276593396751},
    {{1.0, 0.5}, 0.48908553703622459},
    {{1.0, 0.5, 0.25, 0.125, 0.0625}, 0.38281859492460124},
    {{2.0, 1.0}, 0.6931080426215035},
    {{2.0, 1.0, 0.5}, 0.58548389539251322},
    {{2.0, 1.0, 0.5, 0.25, 0.125}, 0.49373736627518416},
};

}  // namespace

TEST_SUITE("wlan") {

TEST_CASE("backoff parameter validation") {
  CHECK_THROWS_AS(BackoffParameters({1.0}), ValidationError);
  CHECK_THROWS_AS(BackoffParameters({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(BackoffParameters({1.0, -0.5}), ValidationError);
  const BackoffParameters p({1.0, 0.5, 0.25});
  CHECK(p.K() == 2);
  CHECK(p.strictly_decreasing());
  CHECK_FALSE(BackoffParameters({1.0, 1.0}).strictly_decreasing());
}

TEST_CASE("uniform attempt rates collapse the cycle average") {
  // With every stage at rate c the stage mix cancels: beta(gamma) = c for
  // all gamma, so the consistency equation has the closed-form root
  // gamma* = 1 - exp(-c).
  const double c = std::log(2.0);
  const BackoffParameters uniform({c, c, c, c});
  for (double g : {0.0, 0.1, 0.5, 0.9, 0.999}) {
    CHECK(attempt_rate(g, uniform) == doctest::Approx(c).epsilon(1e-13));
  }
  const auto report = solve_gamma_star(uniform);
  CHECK(std::abs(report.gamma_star - 0.5) < 1e-10);
  CHECK_FALSE(report.uniqueness_guaranteed);  // not strictly decreasing
}

TEST_CASE("attempt rate domain and monotone ingredients") {
  const BackoffParameters p({1.0, 0.5, 0.25});
  CHECK_THROWS_AS(attempt_rate(1.0, p), ValidationError);
  CHECK_THROWS_AS(attempt_rate(-0.1, p), ValidationError);
  // gamma = 0: never collide, always attempt at the head rate.
  CHECK(attempt_rate(0.0, p) == doctest::Approx(1.0).epsilon(1e-14));
  // gamma -> 1: stuck at the deepest stage.
  CHECK(attempt_rate(1.0 - 1e-13, p) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(collision_response(0.0, p) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("golden collision probabilities") {
  for (const auto& g : kGolden) {
    const auto report = solve_gamma_star(BackoffParameters(g.c));
    CHECK(std::abs(report.gamma_star - g.gamma_star) < 1e-10);
    CHECK(report.uniqueness_guaranteed);
    CHECK(report.grid_sign_changes == 1);
    CHECK(report.iterations > 0);
    CHECK(report.final_bracket <= 1e-10);
    // The root actually solves gamma = G(gamma).
    CHECK(std::abs(report.gamma_star - collision_response(report.gamma_star, BackoffParameters(g.c))) <
          1e-9);
    // And beta was reported at the root.
    CHECK(report.beta_at_gamma_star ==
          doctest::Approx(attempt_rate(report.gamma_star, BackoffParameters(g.c))).epsilon(1e-12));
  }
}

TEST_CASE("solver tolerance steers the bracket width") {
  const BackoffParameters p({1.0, 0.5, 0.25});
  const auto coarse = solve_gamma_star(p, 1e-4);
  const auto fine = solve_gamma_star(p, 1e-12);
  CHECK(coarse.final_bracket <= 1e-4);
  CHECK(fine.final_bracket <= 1e-12);
  CHECK(coarse.iterations < fine.iterations);
  CHECK(std::abs(fine.gamma_star - 0.42749152492914533) < 1e-11);
}

TEST_CASE("macro collision probability agrees with the chain equilibrium") {
  const auto report = cross_level_check(BackoffParameters({1.0, 0.5, 0.25}));
  CHECK(report.passed);
  CHECK(report.attempt_residual < 1e-8);
  CHECK(report.gamma_residual < 1e-8);
  CHECK(std::abs(report.level1.gamma_star - 0.42749152492914533) < 1e-10);
  // Chain equilibrium frozen from an independent stationary solve.
  CHECK(std::abs(report.fixed_point[0] - 0.31930386) < 1e-7);
  CHECK(std::abs(report.fixed_point[1] - 0.27299939) < 1e-7);
  CHECK(std::abs(report.fixed_point[2] - 0.40769676) < 1e-7);
  CHECK(std::abs(report.mean_attempt_rate - 0.55772774004610159) < 1e-8);
}

TEST_CASE("cross-level identity holds across the halving family") {
  for (double c0 : {0.5, 1.0, 2.0}) {
    for (int K : {1, 2, 4}) {
      std::vector<double> c(K + 1);
      c[0] = c0;
      for (int i = 1; i <= K; ++i) c[i] = c[i - 1] / 2.0;
      const auto report = cross_level_check(BackoffParameters(c));
      CHECK(report.passed);
      CHECK(report.attempt_residual < 1e-6);
      CHECK(report.gamma_residual < 1e-6);
    }
  }
}

}  // TEST_SUITE
