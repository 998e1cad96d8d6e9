// SPDX-License-Identifier: Apache-2.0

#include "boundlab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace boundlab::certify {

namespace {

// z / (1 - e^{-z}) for z >= 0; series below 1e-4 so the z -> 0 limit is
// exact (value 1).
double z_over_em(double z) {
  if (z < 1e-4)
    return 1.0 + z / 2.0 + z * z / 12.0 - z * z * z * z / 720.0;
  return z / (-std::expm1(-z));
}

// (1 - e^{-z})/z - 1 for z >= 0, exact at z = 0; used inside log1p.
double em_over_z_minus_one(double z) {
  if (z < 1e-4)
    return -z / 2.0 + z * z / 6.0 - z * z * z / 24.0 + z * z * z * z / 120.0;
  return -std::expm1(-z) / z - 1.0;
}

// z / (e^z - 1) with the limit value 1 at z = 0.
double z_over_expm1(double z) {
  if (z == 0.0) return 1.0;
  return z / std::expm1(z);
}

double f1_direct(double w) {
  return (3.0 / w + w) * std::sinh(w) - 3.0 * std::cosh(w);
}

double f2_direct(double w) {
  return 4.0 * w + 2.0 * w * std::cosh(2.0 * w) - 3.0 * std::sinh(2.0 * w);
}

// sum_{n=2..terms} 4n(n-1)/(2n+1)! w^{2n}; all terms positive, so the sum
// is cancellation-free.
double f1_series(double w, int terms) {
  if (terms < 2) return 0.0;
  const double w2 = w * w;
  double term = (8.0 / 120.0) * w2 * w2;  // n = 2
  double sum = term;
  for (int n = 2; n < terms; ++n) {
    term *= (static_cast<double>(n + 1) / (n - 1)) * w2 /
            ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    sum += term;
  }
  return sum;
}

// sum_{n=2..terms} 4^{n+1}(n-1)/(2n+1)! w^{2n+1}.
double f2_series(double w, int terms) {
  if (terms < 2) return 0.0;
  const double w2 = w * w;
  double term = (64.0 / 120.0) * w2 * w2 * w;  // n = 2
  double sum = term;
  for (int n = 2; n < terms; ++n) {
    term *= (4.0 * n / (n - 1.0)) * w2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    sum += term;
  }
  return sum;
}

// Direct evaluation of f1/f2 loses all significant digits against the
// leading w^4 / w^5 behavior once w is small; switch to the series there.
double f1_eval(double w) { return w <= 1.0 ? f1_series(w, 48) : f1_direct(w); }
double f2_eval(double w) { return w <= 1.0 ? f2_series(w, 48) : f2_direct(w); }

}  // namespace

double GPoint::w() const {
  const double s = 4.0 * y + 3.0;
  return 18.0 * x * (2.0 * y + 1.0) / (s * s);
}

void GPoint::validate() const {
  if (!(y > -0.5)) throw DomainError("requires y > -1/2");
  if (!(x >= 0.0)) throw DomainError("requires x >= 0");
  if (!(z >= 0.0)) throw DomainError("requires z >= 0");
}

std::string to_string(Region r) {
  return r == Region::one ? "regionI" : "regionII";
}

double g_value(const GPoint& p) {
  p.validate();
  const double s = 4.0 * p.y + 3.0;
  const double a1 = 2.0 * p.y + 1.0;
  const double quad = -18.0 * (p.x * p.x - p.y * p.y) / (s * s);
  if (p.z < 1e-4) {
    return quad + 1.0 + (p.x - p.y) * p.z / a1 - z_over_em(p.z) / a1 -
           std::log(a1) - std::log1p(em_over_z_minus_one(p.z));
  }
  const double em = -std::expm1(-p.z);
  return quad + 1.0 + (p.x - p.y) * p.z / a1 - p.z / (em * a1) -
         std::log(em * a1 / p.z);
}

GDerivs g_derivs(const GPoint& p) {
  p.validate();
  const double s = 4.0 * p.y + 3.0;
  return GDerivs{-36.0 * p.x / (s * s) + p.z / (2.0 * p.y + 1.0),
                 -36.0 / (s * s)};
}

double z0_solve(double y) {
  if (!(y > -0.5)) throw DomainError("requires y > -1/2");
  if (y == 0.0) return 0.0;

  // Both closed forms are monotone in z on z > 0; bracket by doubling,
  // then bisect.
  const bool positive = y > 0.0;
  auto value = [&](double z) {
    return positive ? 0.5 * z_over_em(z) - 0.5 : -0.5 + 0.5 * z_over_expm1(z);
  };
  // value() is increasing for y > 0 and decreasing for y < 0.
  auto past_target = [&](double z) {
    return positive ? value(z) >= y : value(z) <= y;
  };

  double hi = 1.0;
  while (!past_target(hi) && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (past_target(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

RegionPoint z1_region(double x, double y) {
  if (!(y > -0.5)) throw DomainError("requires y > -1/2");
  if (!(x > std::abs(y))) throw DomainError("requires x > |y|");
  const double z0 = z0_solve(y);
  const double s = 4.0 * y + 3.0;
  const double x_star = s * s * z0 / (36.0 * (2.0 * y + 1.0));
  if (x <= x_star) return RegionPoint{Region::one, z0};
  return RegionPoint{Region::two, 36.0 * x * (2.0 * y + 1.0) / (s * s)};
}

double grad_along_curve(double x, double y) {
  if (!(y > -0.5)) throw DomainError("requires y > -1/2");
  if (!(x >= 0.0)) throw DomainError("requires x >= 0");
  const double s2 = (4.0 * y + 3.0) * (4.0 * y + 3.0);
  const double a1 = 2.0 * y + 1.0;
  const double w = 18.0 * x * a1 / s2;
  if (w == 0.0) return 0.0;
  const double sh = std::sinh(w);
  const double term1 = f1_eval(w) * 6.0 * a1 / (s2 * sh);
  const double term2 = f2_eval(w) * 3.0 / (s2 * sh * sh);
  const double term3 = 8.0 * w * y * y / (a1 * s2);
  return term1 + term2 + term3;
}

TaylorCheck taylor_check(double w, int terms) {
  if (!(w > 0.0)) throw UsageError("requires w > 0");
  if (terms < 1) throw UsageError("terms must be positive");
  return TaylorCheck{f1_direct(w), f2_direct(w), f1_series(w, terms),
                     f2_series(w, terms)};
}

ChernoffStep chernoff_step(double lambda, double alpha) {
  if (!(lambda > 0.0) || !(alpha > 0.0))
    throw UsageError("requires lambda > 0 and alpha > 0");
  const double c = -std::expm1(-lambda * alpha);  // 1 - e^{-lambda alpha}
  const double p_star = 1.0 / c - 1.0 / lambda;
  auto phi = [&](double p) { return std::exp(lambda * p) * (1.0 - c * p); };
  double lhs = std::max(phi(0.0), phi(1.0));
  if (p_star > 0.0 && p_star < 1.0) lhs = std::max(lhs, phi(p_star));
  const double rhs = (c / lambda) * std::exp(lambda / c - 1.0);
  return ChernoffStep{lhs, rhs, p_star, rhs - lhs};
}

double chernoff_step_gap(double lambda, double alpha) {
  return chernoff_step(lambda, alpha).gap;
}

double chernoff_step_lhs_scan(double lambda, double alpha, double p_step) {
  if (!(lambda > 0.0) || !(alpha > 0.0))
    throw UsageError("requires lambda > 0 and alpha > 0");
  if (!(p_step > 0.0 && p_step <= 1.0))
    throw UsageError("p_step must lie in (0, 1]");
  const double c = -std::expm1(-lambda * alpha);
  double best = -std::numeric_limits<double>::infinity();
  const long long steps = static_cast<long long>(std::floor(1.0 / p_step + 1e-9));
  for (long long k = 0; k <= steps; ++k) {
    const double p = std::min(1.0, k * p_step);
    best = std::max(best, std::exp(lambda * p) * (1.0 - c * p));
  }
  best = std::max(best, std::exp(lambda) * (1.0 - c));  // p = 1 endpoint
  return best;
}

void CertGridSpec::validate() const {
  if (!(y_min > -0.5)) throw UsageError("y_min must be > -1/2");
  if (!(y_step > 0.0) || !(x_step > 0.0)) throw UsageError("steps must be > 0");
  if (!(y_max >= y_min)) throw UsageError("empty grid: y_max < y_min");
  if (!(x_span >= x_step)) throw UsageError("empty grid: x_span < x_step");
  if (!(slack >= 0.0)) throw UsageError("slack must be >= 0");
  if (threads < 1) throw UsageError("threads must be >= 1");
}

namespace {

struct Accum {
  double min_margin = std::numeric_limits<double>::infinity();
  double worst_x = 0.0;
  double worst_y = 0.0;
  long long points = 0;

  void feed(double margin, double x, double y) {
    ++points;
    if (margin < min_margin ||
        (margin == min_margin &&
         (y < worst_y || (y == worst_y && x < worst_x)))) {
      min_margin = margin;
      worst_x = x;
      worst_y = y;
    }
  }
  void merge(const Accum& o) {
    points += o.points;
    if (o.min_margin < min_margin ||
        (o.min_margin == min_margin &&
         (o.worst_y < worst_y ||
          (o.worst_y == worst_y && o.worst_x < worst_x)))) {
      min_margin = o.min_margin;
      worst_x = o.worst_x;
      worst_y = o.worst_y;
    }
  }
};

// Per-thread pass over a contiguous block of y rows.  Margins are
// oriented so that "pass" means margin >= -slack.
struct RowChecker {
  Accum boundary_root;   // -|G(|y|, y, z0(y))|
  Accum stationarity;    // -|dG/dx| at z = 36 x (2y+1)/(4y+3)^2
  Accum concavity;       // -d2G/dx2
  Accum curve_gradient;  // grad_along_curve(x, y)
  Accum master;          // G(x, y, z1(x, y))

  void run(const CertGridSpec& spec, long long y_begin, long long y_end,
           long long nx) {
    for (long long j = y_begin; j < y_end; ++j) {
      const double y = spec.y_min + static_cast<double>(j) * spec.y_step;
      const double ay = std::abs(y);
      const double z0 = z0_solve(y);
      const double s2 = (4.0 * y + 3.0) * (4.0 * y + 3.0);
      const double a1 = 2.0 * y + 1.0;
      const double x_star = s2 * z0 / (36.0 * a1);

      boundary_root.feed(-std::abs(g_value(GPoint{ay, y, z0})), ay, y);
      concavity.feed(36.0 / s2, ay, y);

      for (long long k = 1; k <= nx; ++k) {
        const double x = ay + static_cast<double>(k) * spec.x_step;
        const double z_curve = 36.0 * x * a1 / s2;
        stationarity.feed(-std::abs(-36.0 * x / s2 + z_curve / a1), x, y);
        curve_gradient.feed(grad_along_curve(x, y), x, y);
        const double z1 = x <= x_star ? z0 : z_curve;
        master.feed(g_value(GPoint{x, y, z1}), x, y);
      }
    }
  }

  void merge(const RowChecker& o) {
    boundary_root.merge(o.boundary_root);
    stationarity.merge(o.stationarity);
    concavity.merge(o.concavity);
    curve_gradient.merge(o.curve_gradient);
    master.merge(o.master);
  }
};

CheckResult to_result(const char* name, const Accum& a) {
  return CheckResult{name, a.points, a.min_margin, a.worst_x, a.worst_y};
}

}  // namespace

CertReport certify_grid(const CertGridSpec& spec) {
  spec.validate();
  const long long ny = static_cast<long long>(
                           std::floor((spec.y_max - spec.y_min) / spec.y_step + 1e-9)) +
                       1;
  const long long nx =
      static_cast<long long>(std::floor(spec.x_span / spec.x_step + 1e-9));
  if (ny < 1 || nx < 1) throw UsageError("empty grid");

  const int workers =
      static_cast<int>(std::min<long long>(spec.threads, ny));
  std::vector<RowChecker> parts(workers);
  if (workers == 1) {
    parts[0].run(spec, 0, ny, nx);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (ny + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      const long long b = t * chunk;
      const long long e = std::min<long long>(ny, b + chunk);
      pool.emplace_back([&spec, &parts, t, b, e, nx] {
        parts[t].run(spec, b, e, nx);
      });
    }
    for (auto& th : pool) th.join();
    for (int t = 1; t < workers; ++t) parts[0].merge(parts[t]);
  }

  const RowChecker& all = parts[0];
  CertReport report;
  report.slack = spec.slack;
  report.checks = {
      to_result("boundary_root_identity", all.boundary_root),
      to_result("stationary_point_identity", all.stationarity),
      to_result("concavity_in_x", all.concavity),
      to_result("curve_gradient_nonnegative", all.curve_gradient),
      to_result("exponent_gap_nonnegative", all.master),
  };
  report.passed = true;
  for (const auto& c : report.checks)
    if (!(c.min_margin >= -spec.slack)) report.passed = false;
  return report;
}

}  // namespace boundlab::certify
