// SPDX-License-Identifier: Apache-2.0
//
// History-dependent [0,1]-valued processes with exactly known conditional
// means, seeded Monte-Carlo estimation of threshold-violation
// probabilities, and exact tail computation by enumeration on small
// instances.
//
// Reproducibility contract: a trial's trajectory is a pure function of
// (spec, n, seed).  estimate_tail derives per-trial seeds from
// (master_seed, trial index) with the splitmix64 finalizer, so results do
// not depend on the number of worker threads.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boundlab/bounds.hpp"
#include "boundlab/errors.hpp"

namespace boundlab::sim {

enum class ProcessKind {
  iid_bernoulli,     // Bernoulli(p) each step
  point_mass,        // deterministic mu each step
  two_point,         // mu +- c with probability 1/2 each
  mean_reverting,    // Bernoulli(clip(p0 + kappa(p0 - running mean), 0, 1))
  polya_like,        // Bernoulli((a0 + #ones)/(a0 + b0 + m - 1))
  adversarial_flip,  // Bernoulli(p_hi if running deviation > 0 else p_lo)
};

/// Declarative process description.  Every kind defines a conditional-mean
/// function of the history and a sampling kernel whose conditional mean is
/// exactly that value.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::iid_bernoulli;
  double param1 = 0.5;
  double param2 = 0.0;

  static ProcessSpec iid_bernoulli(double p);
  static ProcessSpec point_mass(double mu);
  static ProcessSpec two_point(double mu, double c);  // requires c <= min(mu, 1-mu)
  static ProcessSpec mean_reverting(double p0, double kappa);
  static ProcessSpec polya_like(double a0, double b0);
  static ProcessSpec adversarial_flip(double p_lo, double p_hi);

  void validate() const;
  /// Canonical text form, e.g. "two_point(0.9,0.05)".  parse() inverts it.
  std::string to_text() const;
  static ProcessSpec parse(const std::string& text);
};

/// One realized path: samples x_1..x_n with their conditional means
/// mu_1..mu_n (mu_m depends only on x_1..x_{m-1}).
struct Trajectory {
  std::vector<double> samples;
  std::vector<double> cond_means;
  std::uint64_t seed = 0;

  long long n() const { return static_cast<long long>(samples.size()); }
  double sum() const;        // S
  double delta() const;      // 1 - 2S/n
  double deviation() const;  // D = sum(mu_m - x_m)
};

/// splitmix64 finalizer mix of (master seed, trial index); the per-trial
/// seed contract for estimate_tail.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic in (spec, n, seed).  Sampling uses std::mt19937_64 with
/// uniforms (engine() >> 11) * 2^-53.
Trajectory generate(const ProcessSpec& spec, long long n, std::uint64_t seed);

/// True iff D >= threshold(Delta) with D and Delta taken from the
/// trajectory itself.  The threshold must have been built from the same n.
bool violation_check(const Trajectory& t, const bounds::ThresholdSpec& thr);

/// Martingale-form event Y_0 - Y_n >= threshold(Delta'); for the mirrored
/// side flip the view (increments and biases negated) first.
bool violation_check(const bounds::MartingaleView& v,
                     const bounds::ThresholdSpec& thr);

bounds::MartingaleView to_martingale_view(const Trajectory& t);

/// Monte-Carlo estimate of the violation probability, with the exact
/// one-sided binomial upper confidence limit and a soundness verdict
/// against the claimed bound.
struct TailEstimate {
  long long trials = 0;
  long long violations = 0;
  double freq = 0.0;
  double ci_upper = 1.0;   // one-sided upper limit at `level`
  double bound_rhs = 1.0;
  bool sound = true;
  double level = 0.99;
};

/// Level of the exact lower confidence limit used for the soundness
/// verdict (sound <=> lower limit <= bound rhs).
inline constexpr double kSoundnessLevel = 0.999;

TailEstimate estimate_tail(const ProcessSpec& spec, long long n,
                           long long trials, const bounds::ThresholdSpec& thr,
                           const bounds::BoundValue& bound,
                           std::uint64_t master_seed, double level,
                           int threads = 1);

struct EnumResult {
  double exact_prob = 0.0;
  long long outcomes = 0;  // atoms with nonzero probability
};

/// Exact P(D >= threshold(Delta)) by full enumeration of all outcome
/// sequences; kernels with more than two support points per step, or
/// n > 20, are rejected.
EnumResult enumerate_exact(const ProcessSpec& spec, long long n,
                           const bounds::ThresholdSpec& thr);

/// Exact one-sided upper confidence limit for a binomial proportion:
/// smallest p with P(Bin(n,p) <= k) <= 1 - level (1 when k = n).
double ci_upper(long long k, long long n, double level);

/// Exact one-sided lower confidence limit: largest p with
/// P(Bin(n,p) >= k) <= 1 - level (0 when k = 0).
double ci_lower(long long k, long long n, double level);

/// The default six-process battery used by simulation campaigns.
std::vector<ProcessSpec> default_battery();

/// The eight non-vacuous threshold configurations paired with the battery
/// (slope/offset parameters of the adaptive-threshold inequality).
std::vector<bounds::TheoremQuery> default_battery_bounds(long long n);

}  // namespace boundlab::sim
