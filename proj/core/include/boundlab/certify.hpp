// SPDX-License-Identifier: Apache-2.0
//
// Numerical certification of the analytic machinery behind the
// adaptive-threshold bound.  The scaled exponent gap
//
//   G(x, y, z) = -18(x^2-y^2)/(4y+3)^2 + 1 + (x-y)z/(2y+1)
//                - z/((1-e^{-z})(2y+1)) - log((1-e^{-z})(2y+1)/z)
//
// (x = b/sqrt(n), y = a/sqrt(n), z = lambda*alpha) must admit, for every
// x > |y|, y > -1/2, a z >= 0 with G >= 0.  certify_grid verifies the
// sufficient conditions on a grid with explicit slack: evidence, not proof.

#pragma once

#include <string>
#include <vector>

#include "boundlab/errors.hpp"

namespace boundlab::certify {

/// Scaled evaluation point.  y > -1/2, z >= 0.
struct GPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double alpha() const { return 1.0 + 2.0 * y; }
  double beta_over_n() const { return x - y; }
  double lambda() const { return z / alpha(); }
  /// Curve parameter w = 18 x (2y+1)/(4y+3)^2 (half the stationary z).
  double w() const;
  void validate() const;
};

enum class Region { one, two };

std::string to_string(Region r);  // "regionI" / "regionII"

/// G(x, y, z); below z = 1e-4 the z-dependent terms are evaluated by
/// series so the z -> 0 limit is exact.
double g_value(const GPoint& p);

struct GDerivs {
  double dGdx = 0.0;
  double d2Gdx2 = 0.0;
};

/// Closed-form first and second x-derivatives of G.
GDerivs g_derivs(const GPoint& p);

/// Canonical root z0(y) >= 0 with G(|y|, y, z0(y)) = 0:  0 at y = 0,
/// otherwise the solution of the sign-matched closed form
///   y > 0:  y = z/(2(1-e^{-z})) - 1/2
///   y < 0:  y = -1/2 + z/(2(e^z - 1)).
/// Residual against the closed form <= 1e-12.
double z0_solve(double y);

struct RegionPoint {
  Region tag = Region::one;
  double z1 = 0.0;
};

/// Region classification and the witness z1(x,y): the plateau value z0(y)
/// in region I (x <= (4y+3)^2 z0(y) / (36(2y+1))), the stationary-curve
/// value 36 x (2y+1)/(4y+3)^2 in region II.  Requires x > |y|, y > -1/2.
RegionPoint z1_region(double x, double y);

/// Total derivative d/dx of G along the stationary curve
/// z = 36 x (2y+1)/(4y+3)^2, evaluated as a sum of three nonnegative
/// terms (series-safe near w = 0).
double grad_along_curve(double x, double y);

struct TaylorCheck {
  double f1 = 0.0;        // (3/w + w) sinh w - 3 cosh w
  double f2 = 0.0;        // 4w + 2w cosh 2w - 3 sinh 2w
  double f1_series = 0.0; // sum_{n>=2} 4n(n-1)/(2n+1)! w^{2n}
  double f2_series = 0.0; // sum_{n>=2} 4^{n+1}(n-1)/(2n+1)! w^{2n+1}
};

/// Direct vs truncated-series evaluation of the two positive factors in
/// grad_along_curve.
TaylorCheck taylor_check(double w, int terms);

struct ChernoffStep {
  double lhs = 0.0;     // max_{p in [0,1]} p e^{lambda(p-alpha)} + (1-p) e^{lambda p}
  double rhs = 0.0;     // ((1-e^{-lambda alpha})/lambda) e^{lambda/(1-e^{-lambda alpha}) - 1}
  double p_star = 0.0;  // interior stationary point, before clipping
  double gap = 0.0;     // rhs - lhs, >= 0
};

/// One step of the product-bound chain: the per-step moment bound and its
/// closed-form relaxation.  The interior optimum is
/// p* = 1/(1-e^{-lambda alpha}) - 1/lambda, clipped to [0,1]; the gap is
/// exactly 0 whenever p* is interior.
ChernoffStep chernoff_step(double lambda, double alpha);

double chernoff_step_gap(double lambda, double alpha);

/// Grid-scan evaluation of the same maximum (independent check of the
/// closed-form optimum).
double chernoff_step_lhs_scan(double lambda, double alpha, double p_step);

/// Grid specification: y from y_min to y_max in steps of y_step, and for
/// each y, x from |y| + x_step up to |y| + x_span in steps of x_step.
struct CertGridSpec {
  double y_min = -0.499;
  double y_max = 3.0;
  double y_step = 0.01;
  double x_span = 4.0;
  double x_step = 0.01;
  double slack = 1e-9;  ///< tolerance: a check passes iff margin >= -slack
  int threads = 1;

  void validate() const;
};

/// One certified condition: margins are oriented so that pass means
/// margin >= -slack.
struct CheckResult {
  std::string condition;
  long long points = 0;
  double min_margin = 0.0;
  double worst_x = 0.0;
  double worst_y = 0.0;
};

struct CertReport {
  std::vector<CheckResult> checks;
  double slack = 0.0;
  bool passed = false;
};

/// Verify on the grid: the boundary root identity |G(|y|,y,z0(y))| <= slack,
/// the stationarity identity |dG/dx| at the curve <= slack, concavity
/// d2G/dx2 <= 0, the curve gradient >= -slack, and the master property
/// G(x, y, z1(x,y)) >= -slack.  The reduction is deterministic and
/// independent of the thread partition (min margin; ties broken by the
/// lexicographically smallest (y, x)).
CertReport certify_grid(const CertGridSpec& spec);

}  // namespace boundlab::certify
