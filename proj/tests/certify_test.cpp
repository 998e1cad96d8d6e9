// SPDX-License-Identifier: Apache-2.0
//
// Unit tests for the certification machinery.  Derivatives are checked
// against central finite differences of g_value (the independent oracle
// for the closed forms); frozen constants come from a 50-digit evaluation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "boundlab/certify.hpp"
#include "doctest.h"

using namespace boundlab;
using namespace boundlab::certify;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace

TEST_CASE("g_value limits and frozen points") {
  CHECK(g_value({0.0, 0.0, 0.0}) == 0.0);
  CHECK(rel_err(g_value({0.5, 0.0, 2.0}), 0.025525352929473063) < 1e-12);
  CHECK(g_value({0.5, 0.0, 0.0}) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(rel_err(g_value({1.0, 0.0, 4.0}), 0.33015036649068099) < 1e-12);
}

TEST_CASE("g_value is continuous through the series seam and at z = 0") {
  for (double x : {0.0, 0.3, 1.0, 2.5}) {
    for (double y : {-0.45, -0.1, 0.0, 0.4, 2.0}) {
      const double at_zero = g_value({x, y, 0.0});
      const double near_zero = g_value({x, y, 1e-8});
      CHECK(std::abs(near_zero - at_zero) <= 1e-6);
      // The probes sit 2e-12 apart in z, so |dG/dz| (up to ~(x-y)/(2y+1))
      // contributes genuinely; 1e-9 still catches a broken series branch.
      const double below_seam = g_value({x, y, 1e-4 - 1e-12});
      const double above_seam = g_value({x, y, 1e-4 + 1e-12});
      CHECK(std::abs(below_seam - above_seam) <= 1e-9);
    }
  }
}

TEST_CASE("g_derivs closed forms match finite differences") {
  CHECK(g_derivs({0.5, 0.0, 2.0}).dGdx == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g_derivs({1.7, 0.0, 0.3}).d2Gdx2 == doctest::Approx(-4.0));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double step = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    const double x = 4.0 * u01(rng);
    const double y = -0.45 + 3.45 * u01(rng);
    const double z = 8.0 * u01(rng);
    const auto d = g_derivs({x, y, z});
    const double fd =
        (g_value({x + step, y, z}) - g_value({x - step, y, z})) / (2.0 * step);
    CHECK(std::abs(fd - d.dGdx) < 1e-6);
    // G is quadratic in x, so the second difference is truncation-free;
    // a wider step keeps the roundoff term small.
    const double step2 = 1e-4;
    const double fd2 = (g_value({x + step2, y, z}) - 2.0 * g_value({x, y, z}) +
                        g_value({x - step2, y, z})) /
                       (step2 * step2);
    CHECK(std::abs(fd2 - d.d2Gdx2) < 1e-3);
  }
}

TEST_CASE("z0_solve anchors and closed-form residuals") {
  CHECK(z0_solve(0.0) == 0.0);

  // Forward-evaluated anchors: both closed forms give z = 1 exactly at
  // y = 1/(2(e-1)) - {0, 1/2}.
  const double y_plus = 1.0 / (2.0 * (std::exp(1.0) - 1.0));
  const double y_minus = y_plus - 0.5;
  CHECK(std::abs(z0_solve(y_plus) - 1.0) <= 1e-9);
  CHECK(std::abs(z0_solve(y_minus) - 1.0) <= 1e-9);

  auto forward = [](double z, bool positive) {
    if (positive) return z / (2.0 * (-std::expm1(-z))) - 0.5;
    return -0.5 + z / (2.0 * std::expm1(z));
  };
  for (int i = 1; i <= 1000; ++i) {
    const double y = -0.499 + 3.499 * static_cast<double>(i) / 1000.0;
    const double z = z0_solve(y);
    CHECK(std::abs(forward(z, y > 0.0) - y) <= 1e-12);
    // The root closes the boundary identity.
    CHECK(std::abs(g_value({std::abs(y), y, z})) <= 1e-9);
  }
  CHECK_THROWS_AS((void)z0_solve(-0.5), DomainError);
}

TEST_CASE("z1_region classifies the plateau and the curve") {
  auto origin = z1_region(0.5, 0.0);
  CHECK(origin.tag == Region::two);
  CHECK(origin.z1 == doctest::Approx(2.0).epsilon(1e-14));

  const double y_plus = 1.0 / (2.0 * (std::exp(1.0) - 1.0));
  auto plateau = z1_region(0.30, y_plus);
  CHECK(plateau.tag == Region::one);
  CHECK(plateau.z1 == doctest::Approx(1.0).epsilon(1e-9));

  auto curve = z1_region(0.31, y_plus);
  CHECK(curve.tag == Region::two);
  CHECK(rel_err(curve.z1, 1.0182456308406669) < 1e-9);

  CHECK(to_string(plateau.tag) == "regionI");
  CHECK(to_string(curve.tag) == "regionII");

  CHECK_THROWS_AS((void)z1_region(0.2, 0.3), DomainError);
  CHECK_THROWS_AS((void)z1_region(1.0, -0.6), DomainError);
}

TEST_CASE("grad_along_curve frozen values and limits") {
  CHECK(rel_err(grad_along_curve(0.5, 0.0), 0.19598217993529572) < 1e-10);
  CHECK(grad_along_curve(0.0, 0.7) == 0.0);
  CHECK(grad_along_curve(0.0, -0.3) == 0.0);
  const double at_one = grad_along_curve(1.0, 0.0);
  CHECK(at_one > 0.0);
  CHECK(rel_err(at_one, 1.1548284364420920) < 1e-10);
}

TEST_CASE("grad_along_curve equals the finite-difference total derivative") {
  const double step = 1e-5;
  auto along = [](double x, double y) {
    const double s2 = (4.0 * y + 3.0) * (4.0 * y + 3.0);
    return g_value({x, y, 36.0 * x * (2.0 * y + 1.0) / s2});
  };
  for (double y : {-0.4, -0.1, 0.0, 0.3, 1.0, 2.5}) {
    for (double x : {0.05, 0.5, 1.0, 2.0, 3.5}) {
      const double fd = (along(x + step, y) - along(x - step, y)) / (2.0 * step);
      CHECK(std::abs(fd - grad_along_curve(x, y)) < 1e-6);
    }
  }
  // Continuity through the series/direct seam at w = 1 (y = 0 puts the
  // seam at x = 0.5); d(grad)/dx ~ 2 here, so keep the probes tight.
  const double below = grad_along_curve(0.5 - 1e-12, 0.0);
  const double above = grad_along_curve(0.5 + 1e-12, 0.0);
  CHECK(std::abs(below - above) < 1e-9);
}

TEST_CASE("taylor_check identities") {
  auto at_one = taylor_check(1.0, 40);
  CHECK(rel_err(at_one.f1, 0.071562870129474492) < 1e-12);
  CHECK(rel_err(at_one.f2, 0.64381015862620662) < 1e-12);
  CHECK(std::abs(at_one.f1 - at_one.f1_series) <= 1e-10);
  CHECK(std::abs(at_one.f2 - at_one.f2_series) <= 1e-10);

  for (double w : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    auto t = taylor_check(w, 40);
    CHECK(std::abs(t.f1 - t.f1_series) <= 1e-10);
    CHECK(std::abs(t.f2 - t.f2_series) <= 1e-10);
    CHECK(t.f1_series > 0.0);
    CHECK(t.f2_series > 0.0);
  }

  auto tiny = taylor_check(0.01, 40);
  CHECK(tiny.f1_series > 0.0);
  CHECK(tiny.f2_series > 0.0);

  CHECK_THROWS_AS((void)taylor_check(0.0, 40), UsageError);
  CHECK_THROWS_AS((void)taylor_check(1.0, 0), UsageError);
}

TEST_CASE("chernoff_step closed form, clipping, and limits") {
  auto tight = chernoff_step(1.0, 1.0);
  CHECK(rel_err(tight.p_star, 0.58197670686932642) < 1e-12);
  CHECK(tight.gap >= -1e-12);
  CHECK(tight.gap <= 1e-9);

  auto clipped = chernoff_step(5.0, 0.2);
  CHECK(rel_err(clipped.lhs, 54.598150033144239) < 1e-12);
  CHECK(rel_err(clipped.rhs, 126.69346108017267) < 1e-12);
  CHECK(rel_err(clipped.gap, 72.095311047028427) < 1e-10);

  // lambda -> 0+ with alpha < 1: gap tends to alpha e^{1/alpha - 1} - 1.
  CHECK(std::abs(chernoff_step_gap(1e-9, 0.5) - 0.35914091422952262) < 1e-6);

  CHECK_THROWS_AS((void)chernoff_step(0.0, 1.0), UsageError);
  CHECK_THROWS_AS((void)chernoff_step(1.0, -1.0), UsageError);
}

TEST_CASE("chernoff_step scan agrees with the closed-form optimum") {
  for (double lambda : {0.3, 1.0, 2.5, 5.0}) {
    for (double alpha : {0.1, 0.5, 1.0, 2.0}) {
      const auto step = chernoff_step(lambda, alpha);
      const double scanned = chernoff_step_lhs_scan(lambda, alpha, 1e-4);
      CHECK(scanned <= step.lhs + 1e-12);
      CHECK(step.lhs - scanned <= 1e-4);
    }
  }
}

TEST_CASE("certify_grid single point and argument checking") {
  CertGridSpec point;
  point.y_min = 0.0;
  point.y_max = 0.0;
  point.y_step = 1.0;
  point.x_span = 1.0;
  point.x_step = 1.0;
  point.slack = 1e-9;
  const auto report = certify_grid(point);
  CHECK(report.passed);
  REQUIRE(report.checks.size() == 5);
  const auto& master = report.checks.back();
  CHECK(master.condition == "exponent_gap_nonnegative");
  CHECK(master.points == 1);
  CHECK(rel_err(master.min_margin, 0.33015036649068099) < 1e-9);

  CertGridSpec bad = point;
  bad.y_min = -0.6;
  CHECK_THROWS_AS((void)certify_grid(bad), UsageError);
  bad = point;
  bad.x_span = 0.5;  // below one x step: no x points
  CHECK_THROWS_AS((void)certify_grid(bad), UsageError);
  bad = point;
  bad.y_step = -1.0;
  CHECK_THROWS_AS((void)certify_grid(bad), UsageError);
}

TEST_CASE("certify_grid reduction is thread-count independent") {
  CertGridSpec spec;
  spec.y_min = -0.49;
  spec.y_max = 1.0;
  spec.y_step = 0.05;
  spec.x_span = 2.0;
  spec.x_step = 0.05;
  spec.slack = 1e-9;
  spec.threads = 1;
  const auto serial = certify_grid(spec);
  spec.threads = 4;
  const auto parallel = certify_grid(spec);
  CHECK(serial.passed);
  CHECK(parallel.passed);
  REQUIRE(serial.checks.size() == parallel.checks.size());
  for (std::size_t i = 0; i < serial.checks.size(); ++i) {
    CHECK(serial.checks[i].min_margin == parallel.checks[i].min_margin);
    CHECK(serial.checks[i].worst_x == parallel.checks[i].worst_x);
    CHECK(serial.checks[i].worst_y == parallel.checks[i].worst_y);
    CHECK(serial.checks[i].points == parallel.checks[i].points);
  }
}

TEST_CASE("GPoint accessors") {
  GPoint p{1.0, 0.5, 2.0};
  CHECK(p.alpha() == 2.0);
  CHECK(p.beta_over_n() == 0.5);
  CHECK(p.lambda() == 1.0);
  CHECK(p.w() == doctest::Approx(18.0 * 2.0 / 25.0));
  CHECK_THROWS_AS((GPoint{1.0, -0.6, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS((GPoint{1.0, 0.0, -1.0}).validate(), DomainError);
}
