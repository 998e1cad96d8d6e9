// SPDX-License-Identifier: Apache-2.0

#include "boundlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace boundlab::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sqrt_n(long long n) { return std::sqrt(static_cast<double>(n)); }

[[noreturn]] void fail_domain(const std::string& msg) { throw DomainError(msg); }
[[noreturn]] void fail_usage(const std::string& msg) { throw UsageError(msg); }

void require_delta_stat(double delta, const char* name) {
  if (!(delta >= -1.0 && delta <= 1.0)) {
    std::ostringstream os;
    os << name << " = " << delta << " outside [-1, 1]";
    fail_usage(os.str());
  }
}

}  // namespace

void TheoremQuery::validate() const {
  if (n < 1) fail_usage("n must be >= 1");
  if (!(b >= 0.0)) fail_usage("b must be >= 0");
  if (!std::isfinite(a) || !std::isfinite(b)) fail_usage("a, b must be finite");
}

void CorollaryQuery::validate() const {
  if (n < 1) fail_usage("n must be >= 1");
  if (!(epsilon >= 0.0)) fail_usage("epsilon must be >= 0");
  if (!std::isfinite(delta)) fail_usage("delta must be finite");
}

void MeanKnownQuery::validate() const {
  if (n < 1) fail_usage("n must be >= 1");
  if (!(epsilon >= 0.0)) fail_usage("epsilon must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) fail_domain("p must lie in [0, 1]");
}

BoundValue BoundValue::from_log(double log_rhs, bool event_impossible) {
  BoundValue v;
  v.log_rhs = log_rhs;
  v.rhs = std::exp(log_rhs);
  v.vacuous = log_rhs >= 0.0;
  v.event_impossible = event_impossible;
  return v;
}

long long ThresholdSpec::n() const {
  return std::llround(scale * scale);
}

bool ThresholdSpec::negative_possible() const {
  return std::min(at_delta(-1.0), at_delta(1.0)) < 0.0;
}

void MartingaleView::validate() const {
  if (increments.empty()) fail_usage("martingale view is empty");
  if (increments.size() != biases.size())
    fail_usage("increments/biases length mismatch");
  for (std::size_t m = 0; m < increments.size(); ++m) {
    const double bias = biases[m];
    if (!(bias >= -1.0 && bias <= 1.0))
      fail_domain("predictable bias outside [-1, 1]");
    const double lo = 0.5 * (bias - 1.0);
    const double hi = 0.5 * (bias + 1.0);
    if (!(increments[m] >= lo - 1e-12 && increments[m] <= hi + 1e-12))
      fail_domain("increment outside its unit-width band");
  }
}

double MartingaleView::delta_prime() const {
  double acc = 0.0;
  for (double bias : biases) acc += bias;
  return acc / static_cast<double>(biases.size());
}

double MartingaleView::deviation() const {
  double acc = 0.0;
  for (double inc : increments) acc += inc;
  return -acc;  // Y_0 - Y_n
}

BoundValue theorem1_rhs(const TheoremQuery& q) {
  q.validate();
  const double rn = sqrt_n(q.n);
  const double denom = 1.0 + 4.0 * q.a / (3.0 * rn);
  if (denom == 0.0)
    fail_domain("singular parameterization: 1 + 4a/(3 sqrt n) = 0");
  const bool impossible = q.a <= -0.5 * rn && q.b > -q.a;
  const double log_rhs = -2.0 * (q.b * q.b - q.a * q.a) / (denom * denom);
  return BoundValue::from_log(log_rhs, impossible);
}

ThresholdSpec theorem1_threshold(const TheoremQuery& q) {
  q.validate();
  return ThresholdSpec{q.b, -q.a, sqrt_n(q.n)};
}

namespace {

// Shifted bias t = delta - 4 s eps / (3 sqrt n) and the validity
// denominator 1 - delta * t shared by the bias-guess form.
struct Cor1Terms {
  double t = 0.0;
  double denom = 0.0;
};

Cor1Terms cor1_terms(const CorollaryQuery& q) {
  const double t =
      q.delta - 4.0 * sign_value(q.s) * q.epsilon / (3.0 * sqrt_n(q.n));
  return {t, 1.0 - q.delta * t};
}

// exp(-2 eps^2 / (1 - t^2)) with the degenerate t^2 == 1 point mapped to
// the trivial bound 1 (the exponent is 0/0-undefined there).
BoundValue squeeze_bound(double epsilon, double t) {
  const double one_minus_t2 = 1.0 - t * t;
  if (one_minus_t2 == 0.0) return BoundValue{1.0, 0.0, true, false};
  return BoundValue::from_log(-2.0 * epsilon * epsilon / one_minus_t2);
}

}  // namespace

Cor1Result cor1_eval(const CorollaryQuery& q, double Delta) {
  q.validate();
  require_delta_stat(Delta, "Delta");
  const auto [t, denom] = cor1_terms(q);
  if (!(denom > 0.0))
    fail_domain("validity predicate 1 - delta(delta - 4 s eps/(3 sqrt n)) > 0 violated");
  Cor1Result r;
  r.threshold = q.epsilon * sqrt_n(q.n) * (1.0 - Delta * t) / denom;
  r.bound = squeeze_bound(q.epsilon, t);
  return r;
}

ThresholdSpec cor1_threshold(const CorollaryQuery& q) {
  q.validate();
  const auto [t, denom] = cor1_terms(q);
  if (!(denom > 0.0))
    fail_domain("validity predicate 1 - delta(delta - 4 s eps/(3 sqrt n)) > 0 violated");
  return ThresholdSpec{q.epsilon / denom, -q.epsilon * t / denom, sqrt_n(q.n)};
}

TheoremQuery cor1_to_theorem1(const CorollaryQuery& q) {
  q.validate();
  if (q.s != Sign::plus)
    fail_usage(
        "cor1_to_theorem1 is defined for s = plus; for s = minus flip the "
        "variables (x -> 1-x) and negate delta first");
  const auto [t, denom] = cor1_terms(q);
  if (!(denom > 0.0))
    fail_domain("validity predicate 1 - delta(delta - 4 eps/(3 sqrt n)) > 0 violated");
  return TheoremQuery{q.n, q.epsilon * t / denom, q.epsilon / denom};
}

Cor2Result cor2_eval(const CorollaryQuery& q, double DeltaPrime) {
  q.validate();
  require_delta_stat(DeltaPrime, "Delta'");
  const double rn = sqrt_n(q.n);
  const double u = q.delta + 2.0 * sign_value(q.s) * q.epsilon / (3.0 * rn);
  const double denom = 1.0 - q.delta * u;

  Cor2Result r;
  r.threshold = q.epsilon * rn * (1.0 - DeltaPrime * u) / denom;
  if (u * u >= 1.0) {
    // Trivial regime: the claimed bound is not less than 1.
    r.bound = squeeze_bound(q.epsilon, u);
    return r;
  }
  if (!(denom > 0.0))
    fail_domain("1 - delta'(delta' + 2 s eps/(3 sqrt n)) <= 0 outside the trivial regimes");
  r.bound = squeeze_bound(q.epsilon, u);
  // The realized threshold exceeds the reachable deviation range: the event
  // is empty.
  r.event_impossible = (u / denom) * 2.0 * q.epsilon / rn >= 1.0;
  r.bound.event_impossible = r.event_impossible;
  return r;
}

ThresholdSpec cor2_threshold(const CorollaryQuery& q) {
  q.validate();
  const double rn = sqrt_n(q.n);
  const double u = q.delta + 2.0 * sign_value(q.s) * q.epsilon / (3.0 * rn);
  const double denom = 1.0 - q.delta * u;
  if (!(denom > 0.0))
    fail_domain("1 - delta'(delta' + 2 s eps/(3 sqrt n)) <= 0");
  return ThresholdSpec{q.epsilon / denom, -q.epsilon * u / denom, rn};
}

BoundValue cor3_rhs(const MeanKnownQuery& q) {
  q.validate();
  const double shift = sign_value(q.s) * q.epsilon / (3.0 * sqrt_n(q.n));
  const double lo_factor = q.p - shift;
  const double hi_factor = 1.0 - q.p + shift;
  const double prod = lo_factor * hi_factor;
  if (prod == 0.0) return BoundValue{1.0, 0.0, true, false};
  // prod < 0 gives a positive exponent, i.e. a vacuous bound, as-is.
  return BoundValue::from_log(-q.epsilon * q.epsilon / (2.0 * prod));
}

double c_of(double p, Sign s) {
  if (!(p >= 0.0 && p <= 1.0)) fail_domain("p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  if (p == 0.5) return 0.25;
  const bool favorable = (p < 0.5 && s == Sign::plus) || (p > 0.5 && s == Sign::minus);
  if (favorable) return p * (1.0 - p);
  // log((1-p)/p) via log1p for accuracy near p = 1/2.
  return (1.0 - 2.0 * p) / (2.0 * std::log1p((1.0 - 2.0 * p) / p));
}

BoundValue rs13_rhs(std::span<const double> means, double epsilon, Sign s) {
  if (means.empty()) fail_usage("means list must be nonempty");
  if (!(epsilon >= 0.0)) fail_usage("epsilon must be >= 0");
  double acc = 0.0;
  for (double p : means) acc += c_of(p, s);
  const double mean_c = acc / static_cast<double>(means.size());
  if (epsilon == 0.0) return BoundValue::from_log(0.0);
  if (mean_c == 0.0) {
    // Every variable is deterministic; the deviation event has probability 0.
    BoundValue v;
    v.rhs = 0.0;
    v.log_rhs = -kInf;
    v.vacuous = false;
    v.event_impossible = true;
    return v;
  }
  return BoundValue::from_log(-epsilon * epsilon / (2.0 * mean_c));
}

BoundValue chernoff_mult_rhs(double np, double delta, Sign s) {
  if (!(np > 0.0)) fail_usage("np must be > 0");
  if (!(delta > 0.0 && delta < 1.0))
    fail_domain("delta must lie in (0, 1)");
  const double sd = sign_value(s) * delta;
  const double log_rhs = np * (-sd - (1.0 - sd) * std::log1p(-sd));
  return BoundValue::from_log(log_rhs);
}

BoundValue chernoff_mult_rhs_scaled(long long n, double p, double epsilon,
                                    Sign s) {
  if (n < 1) fail_usage("n must be >= 1");
  if (!(p > 0.0)) fail_usage("p must be > 0");
  if (!(epsilon >= 0.0)) fail_usage("epsilon must be >= 0");
  if (epsilon == 0.0) return BoundValue::from_log(0.0);
  const double rn = sqrt_n(n);
  const double delta = epsilon / (rn * p);
  if (!(delta < 1.0)) fail_domain("eps/(sqrt(n) p) must be < 1");
  const double sv = sign_value(s);
  const double log_rhs = -sv * rn * epsilon +
                         (-n * p + sv * rn * epsilon) * std::log1p(-sv * delta);
  return BoundValue::from_log(log_rhs);
}

BoundValue baseline_rhs(Baseline kind, long long n, double epsilon,
                        std::optional<double> variance) {
  if (n < 1) fail_usage("n must be >= 1");
  if (!(epsilon >= 0.0)) fail_usage("epsilon must be >= 0");
  switch (kind) {
    case Baseline::azuma:
    case Baseline::hoeffding:
      return BoundValue::from_log(-2.0 * epsilon * epsilon);
    case Baseline::bernstein: {
      if (!variance) fail_usage("bernstein requires a per-step variance");
      const double v = *variance;
      if (!(v >= 0.0)) fail_usage("variance must be >= 0");
      if (epsilon == 0.0) return BoundValue::from_log(0.0);
      const double denom = 2.0 * (v + epsilon / (3.0 * sqrt_n(n)));
      return BoundValue::from_log(-epsilon * epsilon / denom);
    }
    case Baseline::bennett: {
      if (!variance) fail_usage("bennett requires a per-step variance");
      const double v = *variance;
      if (!(v >= 0.0)) fail_usage("variance must be >= 0");
      if (epsilon == 0.0) return BoundValue::from_log(0.0);
      if (v == 0.0) {
        BoundValue b;
        b.rhs = 0.0;
        b.log_rhs = -kInf;
        b.vacuous = false;
        b.event_impossible = true;
        return b;
      }
      const double u = epsilon / (sqrt_n(n) * v);
      const double h = (1.0 + u) * std::log1p(u) - u;
      return BoundValue::from_log(-static_cast<double>(n) * v * h);
    }
  }
  fail_usage("unknown baseline kind");
}

double invert_epsilon(const std::function<BoundValue(double)>& rhs_of_eps,
                      double target) {
  if (!(target > 0.0 && target <= 1.0))
    fail_usage("inversion target must lie in (0, 1]");
  if (target == 1.0) return 0.0;
  const double log_target = std::log(target);

  // Classify a point: +1 while rhs is above the target inside the valid,
  // non-vacuous branch starting at eps = 0; -1 once past the solution or
  // outside the domain.
  enum class Side { above, below };
  auto side_of = [&](double eps) -> Side {
    double lg;
    try {
      lg = rhs_of_eps(eps).log_rhs;
    } catch (const Error&) {
      return Side::below;
    }
    if (eps > 0.0 && lg >= 0.0) return Side::below;  // vacuous branch re-entered
    return lg > log_target ? Side::above : Side::below;
  };

  try {
    (void)rhs_of_eps(0.0);
  } catch (const Error&) {
    fail_domain("bound family has empty validity domain at eps = 0");
  }

  double lo = 0.0;
  double hi = 1.0;
  int expansions = 0;
  while (side_of(hi) == Side::above) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 64) fail_domain("inversion target unreachable: rhs stays above it");
  }

  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (side_of(mid) == Side::above ? lo : hi) = mid;
  }

  // Secant polish in log space, guarded inside the bracket.
  double eps = 0.5 * (lo + hi);
  auto log_at = [&](double e) -> double { return rhs_of_eps(e).log_rhs; };
  try {
    double e0 = lo, e1 = eps;
    double g0 = log_at(e0) - log_target;
    for (int i = 0; i < 4; ++i) {
      const double g1 = log_at(e1) - log_target;
      if (g1 == g0) break;
      const double e2 = e1 - g1 * (e1 - e0) / (g1 - g0);
      if (!(e2 >= lo && e2 <= hi)) break;
      e0 = e1;
      g0 = g1;
      e1 = e2;
    }
    eps = e1;
  } catch (const Error&) {
    eps = lo;  // converged onto the domain edge; verify below
  }

  double achieved_log;
  try {
    achieved_log = log_at(eps);
  } catch (const Error&) {
    eps = lo;
    achieved_log = log_at(eps);
  }
  if (std::abs(achieved_log - log_target) <= 1e-9 * std::max(1.0, std::abs(log_target)))
    return eps;

  std::ostringstream os;
  os << "inversion target " << target
     << " unreachable on the validity domain; attainable range ("
     << std::exp(achieved_log) << ", 1]";
  fail_domain(os.str());
}

std::vector<double> normalize_range(std::span<const double> samples, double lo,
                                    double hi) {
  if (!(hi > lo)) fail_usage("range requires hi > lo");
  std::vector<double> out;
  out.reserve(samples.size());
  const double width = hi - lo;
  for (double x : samples) {
    if (!(x >= lo && x <= hi)) fail_domain("sample outside [lo, hi]");
    out.push_back((x - lo) / width);
  }
  return out;
}

std::vector<double> normalize_range(std::span<const double> samples,
                                    std::span<const double> lo,
                                    std::span<const double> hi) {
  if (samples.size() != lo.size() || samples.size() != hi.size())
    fail_usage("samples/lo/hi length mismatch");
  if (samples.empty()) return {};
  const double width0 = hi[0] - lo[0];
  if (!(width0 > 0.0)) fail_usage("range requires hi > lo");
  for (std::size_t m = 0; m < samples.size(); ++m) {
    const double width = hi[m] - lo[m];
    if (!(width > 0.0)) fail_usage("range requires hi > lo");
    if (std::abs(width - width0) > 1e-12 * std::max(std::abs(width), std::abs(width0)))
      throw UnsupportedError("per-index ranges must share a common width");
  }
  std::vector<double> out;
  out.reserve(samples.size());
  for (std::size_t m = 0; m < samples.size(); ++m) {
    if (!(samples[m] >= lo[m] && samples[m] <= hi[m]))
      fail_domain("sample outside [lo, hi]");
    out.push_back((samples[m] - lo[m]) / width0);
  }
  return out;
}

}  // namespace boundlab::bounds
