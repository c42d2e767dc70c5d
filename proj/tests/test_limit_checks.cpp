#include <cmath>

#include <doctest.h>

#include "meanfield/errors.hpp"
#include "meanfield/limit_checks.hpp"

using namespace meanfield;

TEST_SUITE("limit_checks") {

TEST_CASE("preconditions are enforced") {
  const auto model = sis_model(2.0, 1.0);
  const SimplexPoint init(Vector{{0.7, 0.3}});

  CHECK_THROWS_AS(lln_test(model, init, 1.0, {10, 100}, 5, 1), ValidationError);
  CHECK_THROWS_AS(lln_test(model, init, 1.0, {100, 10}, 30, 1), ValidationError);
  CHECK_THROWS_AS(lln_test(model, init, 1.0, {1, 10}, 30, 1), ValidationError);
  CHECK_THROWS_AS(lln_test(model, init, 0.0, {10, 100}, 30, 1), ValidationError);
  CHECK_THROWS_AS(lln_test(model, init, 1.0, {}, 30, 1), ValidationError);

  CHECK_THROWS_AS(decoupling_test(model, init, 1.0, {10}, 499, 1), ValidationError);
  CHECK_THROWS_AS(decoupling_test(model, init, -1.0, {10}, 500, 1), ValidationError);

  CHECK_THROWS_AS(level4_marginal_test(model, init, 1.0, 499, 1), ValidationError);
  CHECK_THROWS_AS(level4_marginal_test(model, init, 0.0, 500, 1), ValidationError);
}

TEST_CASE("empirical-measure statistic decays with N") {
  const auto model = sis_model(2.0, 1.0);
  const SimplexPoint init(Vector{{0.7, 0.3}});
  const auto table = lln_test(model, init, 2.0, {20, 2000}, 40, 7);

  CHECK(table.index_name == "N");
  CHECK(table.statistic_name == "median sup-grid TV(empirical, flow)");
  REQUIRE(table.index.size() == 2);
  REQUIRE(table.statistic.size() == 2);
  REQUIRE(table.std_error.size() == 2);
  CHECK(table.horizon == 2.0);
  CHECK(table.replicas == 40);
  CHECK(table.index[0] == 20.0);
  CHECK(table.index[1] == 2000.0);
  for (double s : table.statistic) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
  for (double e : table.std_error) CHECK(e >= 0.0);
  // A hundredfold N gain must show: fluctuations scale like 1/sqrt(N).
  CHECK(table.statistic[1] < table.statistic[0]);
  CHECK(table.statistic[0] / table.statistic[1] > 2.0);
}

TEST_CASE("limit tests are deterministic in the seed and the worker count") {
  const auto model = sis_model(2.0, 1.0);
  const SimplexPoint init(Vector{{0.7, 0.3}});

  LimitTestOptions serial;
  serial.workers = 1;
  LimitTestOptions threaded;
  threaded.workers = 4;

  const auto a = lln_test(model, init, 1.0, {10, 50}, 30, 99, serial);
  const auto b = lln_test(model, init, 1.0, {10, 50}, 30, 99, threaded);
  CHECK(a.statistic == b.statistic);
  CHECK(a.std_error == b.std_error);

  const auto c = lln_test(model, init, 1.0, {10, 50}, 30, 100, serial);
  CHECK(a.statistic != c.statistic);

  const auto d1 = decoupling_test(model, init, 1.0, {10}, 500, 5, serial);
  const auto d2 = decoupling_test(model, init, 1.0, {10}, 500, 5, threaded);
  CHECK(d1.statistic == d2.statistic);

  const auto l1 = level4_marginal_test(model, init, 1.0, 500, 5, serial);
  const auto l2 = level4_marginal_test(model, init, 1.0, 500, 5, threaded);
  CHECK(l1.statistic == l2.statistic);
}

TEST_CASE("independent particles at time zero") {
  // At T=0 the two tagged particles are iid draws from init, so the joint
  // law already factorizes; the statistic only carries resampling noise.
  const auto model = sis_model(2.0, 1.0);
  const SimplexPoint init(Vector{{0.6, 0.4}});
  const int replicas = 2000;
  const auto table = decoupling_test(model, init, 0.0, {2, 64}, replicas, 21);
  REQUIRE(table.statistic.size() == 2);
  for (double s : table.statistic) {
    CHECK(s <= 3.0 / std::sqrt(static_cast<double>(replicas)));
  }
}

TEST_CASE("single-particle marginal tracks the flow at every grid time") {
  const auto model = sis_model(2.0, 1.0);
  const SimplexPoint init(Vector{{0.9, 0.1}});
  const auto table = level4_marginal_test(model, init, 3.0, 600, 11);

  CHECK(table.index_name == "time");
  REQUIRE(table.index.size() == 50);
  CHECK(table.index.front() == 0.0);
  CHECK(table.index.back() == doctest::Approx(3.0).epsilon(1e-12));
  // At t=0 the marginal is exact up to the initial-state draw.
  CHECK(table.statistic.front() < 3.0 / std::sqrt(600.0));
  for (double s : table.statistic) CHECK(s < 0.08);
}

}  // TEST_SUITE
