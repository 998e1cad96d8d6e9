// SPDX-License-Identifier: Apache-2.0
//
// Concentration-bound evaluators.
//
// The central family bounds P(sum of (conditional mean - observed) >=
// threshold) for [0,1]-valued sequences, where the threshold is affine in
// the observed mean bias Delta = 1 - 2*S/n.  A correct a-priori guess of
// Delta tightens the realized threshold; a wrong guess never invalidates
// the bound.  Classical fixed-threshold bounds (Azuma/Hoeffding, Bernstein,
// Bennett, multiplicative Chernoff, and a sub-Gaussian variance-proxy
// bound) are provided for comparison.
//
// All bounds are computed in log space (log_rhs is primary, rhs derived)
// so large-n evaluation does not underflow.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "boundlab/errors.hpp"

namespace boundlab::bounds {

/// Side of the deviation event: s = +1 bounds the downward-observation
/// event (means exceed observations), s = -1 the mirrored one.
enum class Sign { plus, minus };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

/// Parameters of the base inequality: length n, threshold slope a and
/// offset b (threshold (b + a(2S/n - 1))*sqrt(n), affine in the sum S).
struct TheoremQuery {
  long long n = 1;  ///< sequence length, n >= 1
  double a = 0.0;   ///< slope parameter
  double b = 0.0;   ///< offset parameter, b >= 0

  void validate() const;
};

/// Parameters of the rewritten forms: deviation scale epsilon and an
/// a-priori bias guess delta (read as delta' for the martingale form).
struct CorollaryQuery {
  long long n = 1;
  double epsilon = 0.0;  ///< deviation scale, >= 0
  double delta = 0.0;    ///< a-priori guess of the bias statistic
  Sign s = Sign::plus;

  void validate() const;
};

/// Parameters of the known-mean form: p is the average of the expected
/// values of n independent [0,1] variables.
struct MeanKnownQuery {
  long long n = 1;
  double p = 0.5;  ///< average of expected values, in [0,1]
  double epsilon = 0.0;
  Sign s = Sign::plus;

  void validate() const;
};

/// A probability upper bound.  log_rhs is the primary representation;
/// rhs = exp(log_rhs) (0 past double underflow).  vacuous <=> log_rhs >= 0.
/// event_impossible marks parameterizations under which the bounded event
/// provably has probability zero.
struct BoundValue {
  double rhs = 1.0;
  double log_rhs = 0.0;
  bool vacuous = true;
  bool event_impossible = false;

  static BoundValue from_log(double log_rhs, bool event_impossible = false);
};

/// Affine threshold threshold(Delta) = (base + slope*Delta) * scale with
/// scale = sqrt(n).  Also evaluable in terms of the sum S via
/// Delta = 1 - 2S/n.
struct ThresholdSpec {
  double base = 0.0;
  double slope = 0.0;
  double scale = 1.0;

  double at_delta(double delta) const { return (base + slope * delta) * scale; }
  double at_sum(double sum, long long n) const {
    return at_delta(1.0 - 2.0 * sum / static_cast<double>(n));
  }
  /// Sequence length this threshold was built from (scale = sqrt(n)).
  long long n() const;
  /// True if threshold(Delta) < 0 for some Delta in [-1, 1].  Such a
  /// threshold keeps the inequality valid but weak.
  bool negative_possible() const;
};

/// A martingale difference view: increments Y_m - Y_{m-1} together with
/// predictable biases Delta_m in [-1,1] satisfying
/// (Delta_m - 1)/2 <= Y_m - Y_{m-1} <= (Delta_m + 1)/2.
struct MartingaleView {
  std::vector<double> increments;
  std::vector<double> biases;

  void validate() const;
  /// Mean of the predictable biases (the statistic the martingale-form
  /// threshold consumes).
  double delta_prime() const;
  /// Y_0 - Y_n, the deviation the martingale-form inequality bounds.
  double deviation() const;
};

// --- the adaptive-threshold family ---

/// Right-hand side exp(-2(b^2-a^2)/(1 + 4a/(3 sqrt n))^2).  Vacuous iff
/// b <= |a|; event_impossible iff a <= -sqrt(n)/2 and b > -a.
/// Throws DomainError on the singular parameterization 1 + 4a/(3 sqrt n) = 0.
BoundValue theorem1_rhs(const TheoremQuery& q);

/// Threshold (b + a(2S/n - 1))*sqrt(n) as an affine function of the bias
/// Delta = 1 - 2S/n:  (b - a*Delta)*sqrt(n).
ThresholdSpec theorem1_threshold(const TheoremQuery& q);

struct Cor1Result {
  double threshold = 0.0;
  BoundValue bound;
};

/// Bias-guess form.  Requires 1 - delta*(delta - 4 s eps/(3 sqrt n)) > 0
/// (DomainError otherwise).  Vacuous when |delta - 4 s eps/(3 sqrt n)| >= 1.
Cor1Result cor1_eval(const CorollaryQuery& q, double Delta);

/// The threshold of cor1_eval as an affine function of Delta.
ThresholdSpec cor1_threshold(const CorollaryQuery& q);

/// Parameter map from the bias-guess form onto the base form (s = plus
/// only; for s = minus flip the variables and the guess first).
/// theorem1_rhs at the result reproduces cor1_eval's bound and the two
/// thresholds agree as affine functions of Delta.
TheoremQuery cor1_to_theorem1(const CorollaryQuery& q);

struct Cor2Result {
  double threshold = 0.0;
  BoundValue bound;
  bool event_impossible = false;
};

/// Martingale form; q.delta is read as the guess delta' of the mean
/// predictable bias.  All parameter regimes are handled: vacuous when
/// (delta' + 2 s eps/(3 sqrt n))^2 >= 1, event_impossible in the regime
/// where the threshold provably exceeds the martingale's range, and
/// DomainError only outside those two special cases when
/// 1 - delta'(delta' + 2 s eps/(3 sqrt n)) <= 0.
Cor2Result cor2_eval(const CorollaryQuery& q, double DeltaPrime);

/// The threshold of cor2_eval as an affine function of Delta'.
ThresholdSpec cor2_threshold(const CorollaryQuery& q);

/// Known-mean form for independent variables:
/// exp(-eps^2 / (2 (p - s eps/(3 sqrt n)) (1 - p + s eps/(3 sqrt n)))),
/// vacuous when the denominator factors are not both positive.
BoundValue cor3_rhs(const MeanKnownQuery& q);

// --- comparison bounds ---

/// Per-variable sub-Gaussian variance proxy c(p, s): 0 at p in {0,1},
/// 1/4 at p = 1/2, p(1-p) on the side where small deviations are
/// favorable, (1-2p)/(2 log((1-p)/p)) on the other side.
double c_of(double p, Sign s);

/// Variance-proxy bound exp(-eps^2 / (2 mean_m c(means[m], s))).  When
/// every proxy is zero the variables are deterministic and the bound is
/// the certain-event bound 0 (log_rhs = -inf, event_impossible set).
BoundValue rs13_rhs(std::span<const double> means, double epsilon, Sign s);

/// Multiplicative Chernoff bound (e^{-s delta}/(1-s delta)^{1-s delta})^{np}
/// for independent [0,1] variables with mean sum np.  Requires 0 < delta < 1.
BoundValue chernoff_mult_rhs(double np, double delta, Sign s);

/// The multiplicative Chernoff bound reparameterized to the sqrt(n)
/// deviation scale (delta = eps/(sqrt(n) p)); agrees with
/// chernoff_mult_rhs at that substitution.
BoundValue chernoff_mult_rhs_scaled(long long n, double p, double epsilon,
                                    Sign s);

enum class Baseline { azuma, hoeffding, bernstein, bennett };

/// Classical unit-range single-sided baselines at deviation eps*sqrt(n):
/// azuma = hoeffding = exp(-2 eps^2); bernstein and bennett take the
/// per-step variance.  UsageError when the variance is required but absent.
BoundValue baseline_rhs(Baseline kind, long long n, double epsilon,
                        std::optional<double> variance = std::nullopt);

/// Solve rhs(eps) = target for a bound family that is continuous and
/// strictly decreasing in eps on its validity domain.  Bracketed bisection
/// with doubling expansion; 1e-12 absolute tolerance on eps.  DomainError
/// when the target is unreachable, reporting the attainable range.
double invert_epsilon(const std::function<BoundValue(double)>& rhs_of_eps,
                      double target);

/// Affine map of samples from [lo, hi] onto [0, 1].
std::vector<double> normalize_range(std::span<const double> samples, double lo,
                                    double hi);

/// Batch variant with per-index ranges; all widths hi[m]-lo[m] must be
/// equal (UnsupportedError otherwise).
std::vector<double> normalize_range(std::span<const double> samples,
                                    std::span<const double> lo,
                                    std::span<const double> hi);

}  // namespace boundlab::bounds
