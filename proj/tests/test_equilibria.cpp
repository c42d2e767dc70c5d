#include <cmath>

#include <doctest.h>

#include "meanfield/equilibria.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/flow.hpp"
#include "meanfield/rng.hpp"

using namespace meanfield;

namespace {

// Frozen-rate three-state loop a -> b -> c -> a; stationary law is
// proportional to the inverse rates.
MeanFieldModel loop_model(double r_ab, double r_bc, double r_ca) {
  return MeanFieldModel("loop", StateSpace({"a", "b", "c"}),
                        TransitionGraph(3, {{0, 1}, {1, 2}, {2, 0}}),
                        [=](int e, const Vector&) {
                          return e == 0 ? r_ab : (e == 1 ? r_bc : r_ca);
                        });
}

}  // namespace

TEST_SUITE("equilibria") {

TEST_CASE("stationary law of a frozen chain solves the balance equations") {
  const auto model = loop_model(1.0, 2.0, 4.0);
  const SimplexPoint m = equilibrium_response(model, SimplexPoint::uniform(3));
  // pi proportional to (1/1, 1/2, 1/4).
  CHECK(m[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  CHECK(m[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
  CHECK(m[2] == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

  // xi-independent rates: the response is constant in xi.
  const SimplexPoint other = equilibrium_response(model, SimplexPoint::vertex(3, 1));
  CHECK(tv_distance(m, other) < 1e-14);

  // Full balance residual, all rows.
  const Matrix L = build_rate_matrix(model, SimplexPoint::uniform(3));
  CHECK((L.transpose() * m.weights()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-state frozen chain balance") {
  const auto model = sis_model(2.0, 1.0);
  // At xi(I)=0.5 the frozen rates are 1 both ways.
  const SimplexPoint m = equilibrium_response(model, SimplexPoint(Vector{{0.5, 0.5}}));
  CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-12));

  // At xi(I)=0 the infection edge is dead and S absorbs: no unique law.
  CHECK_THROWS_AS(equilibrium_response(model, SimplexPoint::vertex(2, 0)), ReducibilityError);
}

TEST_CASE("epidemic fixed points, classified") {
  const auto model = sis_model(2.0, 1.0);
  const auto reports = find_fixed_points(model, {});
  REQUIRE(reports.size() == 2);

  // Sorted lexicographically: (0.5, 0.5) before (1, 0).
  const auto& endemic = reports[0];
  const auto& disease_free = reports[1];
  CHECK(std::abs(endemic.point[1] - 0.5) < 1e-8);
  CHECK(std::abs(disease_free.point[1] - 0.0) < 1e-8);
  CHECK(endemic.stability == Stability::stable);
  CHECK(disease_free.stability == Stability::unstable);
  REQUIRE(endemic.spectrum.size() == 1);
  REQUIRE(disease_free.spectrum.size() == 1);
  CHECK(std::abs(endemic.spectrum[0].real() + 1.0) < 1e-4);
  CHECK(std::abs(disease_free.spectrum[0].real() - 1.0) < 1e-4);
  CHECK(std::abs(endemic.spectrum[0].imag()) < 1e-6);
  for (const auto& r : reports) {
    CHECK(r.residual < 1e-10);
    CHECK(r.starts_converged > 0);
  }
}

TEST_CASE("subcritical epidemic has only the disease-free point") {
  const auto model = sis_model(1.0, 2.0);
  const auto reports = find_fixed_points(model, {});
  REQUIRE(reports.size() == 1);
  CHECK(std::abs(reports[0].point[1]) < 1e-8);
  CHECK(reports[0].stability == Stability::stable);
  // Linearized growth rate tau - rho = -1.
  REQUIRE(reports[0].spectrum.size() == 1);
  CHECK(std::abs(reports[0].spectrum[0].real() + 1.0) < 1e-4);
}

TEST_CASE("frozen-rate model spectrum equals the generator's nonzero eigenvalues") {
  const auto model = loop_model(1.0, 2.0, 4.0);
  const auto reports = find_fixed_points(model, {});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].stability == Stability::stable);
  REQUIRE(reports[0].spectrum.size() == 2);

  // Eigenvalues of the transposed generator restricted off the kernel:
  // lambda^2 - tr lambda + (sum of principal 2x2 minors) with tr = -7,
  // minors sum = 2 + 4 + 8 = 14: lambda = (-7 +- sqrt(49-56))/2.
  const double re = -3.5;
  const double im = std::sqrt(7.0) / 2.0;
  for (const auto& ev : reports[0].spectrum) {
    CHECK(ev.real() == doctest::Approx(re).epsilon(1e-5));
    CHECK(std::abs(ev.imag()) == doctest::Approx(im).epsilon(1e-5));
    CHECK(ev.real() < 0.0);
  }
}

TEST_CASE("reported fixed points are flow-stationary") {
  const auto model = wlan_model({1.0, 0.5, 0.25});
  const auto reports = find_fixed_points(model, {});
  REQUIRE(reports.size() == 1);
  const auto& fp = reports[0];
  CHECK(fp.residual < 1e-10);
  CHECK(fp.stability == Stability::stable);

  const Flow settle = integrate(model, fp.point, 100.0);
  double worst = 0.0;
  for (const auto& p : settle.points()) worst = std::max(worst, tv_distance(p, fp.point));
  CHECK(worst < 1e-8);
}

TEST_CASE("stable points attract and unstable points repel nearby flows") {
  const auto model = sis_model(2.0, 1.0);
  const auto reports = find_fixed_points(model, {});
  REQUIRE(reports.size() == 2);
  RngStream rng(314);

  for (const auto& report : reports) {
    for (int k = 0; k < 20; ++k) {
      // l-infinity perturbation of size 1e-3 along the only tangent direction,
      // kept inside the simplex.
      double delta = (rng.uniform() < 0.5 ? -1.0 : 1.0) * 1e-3;
      Vector w = report.point.weights();
      if (w(1) + delta < 0.0 || w(1) + delta > 1.0) delta = -delta;
      w(1) += delta;
      w(0) -= delta;

      const Flow flow = integrate(model, SimplexPoint(w), 60.0);
      const double dist = (flow.at(60.0).weights() - report.point.weights())
                              .cwiseAbs()
                              .maxCoeff();
      if (report.stability == Stability::stable) {
        CHECK(dist < 1e-6);
      } else {
        CHECK(dist > 1e-2);
      }
    }
  }
}

TEST_CASE("finite-difference jacobian is Richardson-consistent") {
  const auto model = wlan_model({1.0, 0.5, 0.25});
  const auto reports = find_fixed_points(model, {});
  REQUIRE(reports.size() == 1);
  const Vector x = reports[0].point.weights();

  Vector v(3);
  v << 0.6, -0.2, -0.4;  // tangent: components sum to zero
  auto directional = [&](double h) {
    return Vector((drift_raw(model, x + h * v) - drift_raw(model, x - h * v)) / (2.0 * h));
  };
  const Vector d1 = directional(1e-3);
  const Vector d2 = directional(5e-4);
  const Vector d3 = directional(2.5e-4);
  // Central differences are O(h^2): the defect shrinks about 4x per halving.
  const double defect1 = (d1 - d2).cwiseAbs().maxCoeff();
  const double defect2 = (d2 - d3).cwiseAbs().maxCoeff();
  CHECK(defect1 < 1e-5);
  CHECK(defect2 < 0.3 * defect1);
}

TEST_CASE("fixed point search options are validated") {
  const auto model = sis_model(2.0, 1.0);
  FixedPointOptions bad;
  bad.n_starts = -1;
  CHECK_THROWS_AS(find_fixed_points(model, bad), ValidationError);
  bad = {};
  bad.tol = -1.0;
  CHECK_THROWS_AS(find_fixed_points(model, bad), ValidationError);
}

}  // TEST_SUITE
