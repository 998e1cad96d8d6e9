// SPDX-License-Identifier: Apache-2.0

#include "boundlab/simulate.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace boundlab::sim {

namespace {

[[noreturn]] void fail_usage(const std::string& msg) { throw UsageError(msg); }

void require_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << name << " = " << v << " outside [0, 1]";
    fail_usage(os.str());
  }
}

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Incremental history summary sufficient for every kernel's
// conditional-mean function.
struct KernelState {
  long long step = 0;  // number of observed samples
  double sum_x = 0.0;  // running sum of samples
  double dev = 0.0;    // running deviation sum(mu - x)

  void observe(double x, double mu) {
    ++step;
    sum_x += x;
    dev += mu - x;
  }
};

double conditional_mean(const ProcessSpec& s, const KernelState& st) {
  switch (s.kind) {
    case ProcessKind::iid_bernoulli:
    case ProcessKind::point_mass:
    case ProcessKind::two_point:
      return s.param1;
    case ProcessKind::mean_reverting: {
      // Running mean of an empty past is taken to be p0 itself.
      const double running =
          st.step == 0 ? s.param1 : st.sum_x / static_cast<double>(st.step);
      return clip01(s.param1 + s.param2 * (s.param1 - running));
    }
    case ProcessKind::polya_like:
      return (s.param1 + st.sum_x) /
             (s.param1 + s.param2 + static_cast<double>(st.step));
    case ProcessKind::adversarial_flip:
      return st.dev > 0.0 ? s.param2 : s.param1;
  }
  fail_usage("unknown process kind");
}

struct Support {
  int count = 0;
  std::array<double, 2> value{};
  std::array<double, 2> prob{};
};

// Support of the sampling kernel at conditional mean mu; at most two
// points by construction, zero-probability points dropped.
Support support_at(const ProcessSpec& s, double mu) {
  Support sup;
  auto add = [&sup](double v, double p) {
    if (p > 0.0) {
      sup.value[sup.count] = v;
      sup.prob[sup.count] = p;
      ++sup.count;
    }
  };
  switch (s.kind) {
    case ProcessKind::point_mass:
      add(mu, 1.0);
      break;
    case ProcessKind::two_point:
      if (s.param2 == 0.0) {
        add(mu, 1.0);
      } else {
        add(mu - s.param2, 0.5);
        add(mu + s.param2, 0.5);
      }
      break;
    default:  // Bernoulli kernels
      add(1.0, mu);
      add(0.0, 1.0 - mu);
      break;
  }
  return sup;
}

double draw(const ProcessSpec& s, double mu, std::mt19937_64& engine) {
  // Uniform in [0,1) from the top 53 bits; stable across implementations.
  auto uniform = [&engine] {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };
  switch (s.kind) {
    case ProcessKind::point_mass:
      return mu;  // consumes no randomness
    case ProcessKind::two_point:
      return uniform() < 0.5 ? mu - s.param2 : mu + s.param2;
    default:
      return uniform() < mu ? 1.0 : 0.0;
  }
}

void require_matching(const Trajectory& t, const bounds::ThresholdSpec& thr) {
  if (t.samples.empty()) fail_usage("empty trajectory");
  if (t.samples.size() != t.cond_means.size())
    fail_usage("samples/cond_means length mismatch");
  if (thr.n() != t.n())
    fail_usage("threshold was built for a different n");
}

}  // namespace

ProcessSpec ProcessSpec::iid_bernoulli(double p) {
  return ProcessSpec{ProcessKind::iid_bernoulli, p, 0.0};
}
ProcessSpec ProcessSpec::point_mass(double mu) {
  return ProcessSpec{ProcessKind::point_mass, mu, 0.0};
}
ProcessSpec ProcessSpec::two_point(double mu, double c) {
  return ProcessSpec{ProcessKind::two_point, mu, c};
}
ProcessSpec ProcessSpec::mean_reverting(double p0, double kappa) {
  return ProcessSpec{ProcessKind::mean_reverting, p0, kappa};
}
ProcessSpec ProcessSpec::polya_like(double a0, double b0) {
  return ProcessSpec{ProcessKind::polya_like, a0, b0};
}
ProcessSpec ProcessSpec::adversarial_flip(double p_lo, double p_hi) {
  return ProcessSpec{ProcessKind::adversarial_flip, p_lo, p_hi};
}

void ProcessSpec::validate() const {
  switch (kind) {
    case ProcessKind::iid_bernoulli:
      require_prob(param1, "p");
      break;
    case ProcessKind::point_mass:
      require_prob(param1, "mu");
      break;
    case ProcessKind::two_point:
      require_prob(param1, "mu");
      if (!(param2 >= 0.0)) fail_usage("c must be >= 0");
      if (param2 > std::min(param1, 1.0 - param1))
        fail_usage("two_point requires c <= min(mu, 1-mu)");
      break;
    case ProcessKind::mean_reverting:
      require_prob(param1, "p0");
      if (!(param2 >= 0.0)) fail_usage("kappa must be >= 0");
      break;
    case ProcessKind::polya_like:
      if (!(param1 > 0.0) || !(param2 > 0.0))
        fail_usage("polya_like requires a0 > 0 and b0 > 0");
      break;
    case ProcessKind::adversarial_flip:
      require_prob(param1, "p_lo");
      require_prob(param2, "p_hi");
      if (!(param1 <= param2)) fail_usage("requires p_lo <= p_hi");
      break;
  }
}

namespace {

constexpr struct {
  ProcessKind kind;
  const char* name;
  int params;
} kKindTable[] = {
    {ProcessKind::iid_bernoulli, "iid_bernoulli", 1},
    {ProcessKind::point_mass, "point_mass", 1},
    {ProcessKind::two_point, "two_point", 2},
    {ProcessKind::mean_reverting, "mean_reverting", 2},
    {ProcessKind::polya_like, "polya_like", 2},
    {ProcessKind::adversarial_flip, "adversarial_flip", 2},
};

std::string shortest(double v) {
  std::array<char, 32> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

}  // namespace

std::string ProcessSpec::to_text() const {
  for (const auto& row : kKindTable) {
    if (row.kind != kind) continue;
    std::string out = row.name;
    out += '(';
    out += shortest(param1);
    if (row.params == 2) {
      out += ',';
      out += shortest(param2);
    }
    out += ')';
    return out;
  }
  fail_usage("unknown process kind");
}

ProcessSpec ProcessSpec::parse(const std::string& text) {
  auto strip = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const std::string trimmed = strip(text);
  const auto open = trimmed.find('(');
  if (open == std::string::npos || trimmed.back() != ')')
    fail_usage("process spec must look like kind(arg1[,arg2]): " + trimmed);
  const std::string name = strip(trimmed.substr(0, open));
  const std::string args =
      trimmed.substr(open + 1, trimmed.size() - open - 2);

  std::vector<double> values;
  std::string token;
  std::istringstream is(args);
  while (std::getline(is, token, ',')) {
    token = strip(token);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) fail_usage("bad number: " + token);
    } catch (const std::invalid_argument&) {
      fail_usage("bad number in process spec: " + token);
    } catch (const std::out_of_range&) {
      fail_usage("number out of range in process spec: " + token);
    }
  }

  for (const auto& row : kKindTable) {
    if (name != row.name) continue;
    if (static_cast<int>(values.size()) != row.params)
      fail_usage(std::string(row.name) + " takes " +
                 std::to_string(row.params) + " parameter(s)");
    ProcessSpec spec{row.kind, values[0],
                     row.params == 2 ? values[1] : 0.0};
    spec.validate();
    return spec;
  }
  fail_usage("unknown process kind: " + name);
}

double Trajectory::sum() const {
  double acc = 0.0;
  for (double x : samples) acc += x;
  return acc;
}

double Trajectory::delta() const {
  return 1.0 - 2.0 * sum() / static_cast<double>(samples.size());
}

double Trajectory::deviation() const {
  double acc = 0.0;
  for (std::size_t m = 0; m < samples.size(); ++m)
    acc += cond_means[m] - samples[m];
  return acc;
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over the golden-ratio stream.
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Trajectory generate(const ProcessSpec& spec, long long n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) fail_usage("n must be >= 1");
  Trajectory t;
  t.seed = seed;
  t.samples.reserve(n);
  t.cond_means.reserve(n);
  std::mt19937_64 engine(seed);
  KernelState state;
  for (long long m = 0; m < n; ++m) {
    const double mu = conditional_mean(spec, state);
    const double x = draw(spec, mu, engine);
    t.samples.push_back(x);
    t.cond_means.push_back(mu);
    state.observe(x, mu);
  }
  return t;
}

bool violation_check(const Trajectory& t, const bounds::ThresholdSpec& thr) {
  require_matching(t, thr);
  return t.deviation() >= thr.at_delta(t.delta());
}

bool violation_check(const bounds::MartingaleView& v,
                     const bounds::ThresholdSpec& thr) {
  v.validate();
  if (thr.n() != static_cast<long long>(v.increments.size()))
    fail_usage("threshold was built for a different n");
  return v.deviation() >= thr.at_delta(v.delta_prime());
}

bounds::MartingaleView to_martingale_view(const Trajectory& t) {
  bounds::MartingaleView v;
  v.increments.reserve(t.samples.size());
  v.biases.reserve(t.samples.size());
  for (std::size_t m = 0; m < t.samples.size(); ++m) {
    v.increments.push_back(t.samples[m] - t.cond_means[m]);
    v.biases.push_back(1.0 - 2.0 * t.cond_means[m]);
  }
  return v;
}

namespace {

double lchoose(long long n, long long k) {
  return std::lgamma(static_cast<double>(n + 1)) -
         std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

// P(Bin(n, p) <= k), summed outward from the largest term so no
// significant mass is lost to underflow.
double binom_cdf(long long k, long long n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  long long j0 = std::min<long long>(
      k, static_cast<long long>(std::floor((n + 1) * p)));
  j0 = std::max<long long>(0, j0);
  const double log_max = lchoose(n, j0) + j0 * std::log(p) +
                         (n - j0) * std::log1p(-p);
  const double odds = p / (1.0 - p);
  double scaled = 1.0;
  double term = 1.0;
  for (long long j = j0; j > 0; --j) {
    term *= static_cast<double>(j) / (static_cast<double>(n - j + 1) * odds);
    scaled += term;
    if (term < 1e-19 * scaled) break;
  }
  term = 1.0;
  for (long long j = j0; j < k; ++j) {
    term *= static_cast<double>(n - j) * odds / static_cast<double>(j + 1);
    scaled += term;
    if (term < 1e-19 * scaled) break;
  }
  return std::min(1.0, std::exp(log_max + std::log(scaled)));
}

// P(Bin(n, p) >= k).
double binom_sf(long long k, long long n, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  long long j0 = std::max<long long>(
      k, static_cast<long long>(std::floor((n + 1) * p)));
  j0 = std::min<long long>(n, j0);
  const double log_max = lchoose(n, j0) + j0 * std::log(p) +
                         (n - j0) * std::log1p(-p);
  const double odds = p / (1.0 - p);
  double scaled = 1.0;
  double term = 1.0;
  for (long long j = j0; j > k; --j) {
    term *= static_cast<double>(j) / (static_cast<double>(n - j + 1) * odds);
    scaled += term;
    if (term < 1e-19 * scaled) break;
  }
  term = 1.0;
  for (long long j = j0; j < n; ++j) {
    term *= static_cast<double>(n - j) * odds / static_cast<double>(j + 1);
    scaled += term;
    if (term < 1e-19 * scaled) break;
  }
  return std::min(1.0, std::exp(log_max + std::log(scaled)));
}

void require_ci_args(long long k, long long n, double level) {
  if (n < 1) fail_usage("n must be >= 1");
  if (k < 0 || k > n) fail_usage("k must lie in [0, n]");
  if (!(level > 0.0 && level < 1.0)) fail_usage("level must lie in (0, 1)");
}

}  // namespace

double ci_upper(long long k, long long n, double level) {
  require_ci_args(k, n, level);
  if (k == n) return 1.0;
  const double alpha = 1.0 - level;
  // Smallest p with P(Bin(n,p) <= k) <= alpha; the CDF is decreasing in p.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (binom_cdf(k, n, mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ci_lower(long long k, long long n, double level) {
  require_ci_args(k, n, level);
  if (k == 0) return 0.0;
  const double alpha = 1.0 - level;
  // Largest p with P(Bin(n,p) >= k) <= alpha; the SF is increasing in p.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (binom_sf(k, n, mid) <= alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TailEstimate estimate_tail(const ProcessSpec& spec, long long n,
                           long long trials, const bounds::ThresholdSpec& thr,
                           const bounds::BoundValue& bound,
                           std::uint64_t master_seed, double level,
                           int threads) {
  spec.validate();
  if (n < 1) fail_usage("n must be >= 1");
  if (trials < 1) fail_usage("trials must be >= 1");
  if (!(level > 0.0 && level < 1.0)) fail_usage("level must lie in (0, 1)");
  if (threads < 1) fail_usage("threads must be >= 1");
  if (thr.n() != n) fail_usage("threshold was built for a different n");

  const int workers = static_cast<int>(std::min<long long>(threads, trials));
  std::vector<long long> counts(workers, 0);
  auto run_block = [&](int worker, long long begin, long long end) {
    long long hits = 0;
    for (long long idx = begin; idx < end; ++idx) {
      const Trajectory t = generate(spec, n, mix_seed(master_seed, idx));
      if (violation_check(t, thr)) ++hits;
    }
    counts[worker] = hits;
  };
  if (workers == 1) {
    run_block(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (trials + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      const long long b = t * chunk;
      const long long e = std::min(trials, b + chunk);
      pool.emplace_back(run_block, t, b, e);
    }
    for (auto& th : pool) th.join();
  }
  long long violations = 0;
  for (long long c : counts) violations += c;

  TailEstimate est;
  est.trials = trials;
  est.violations = violations;
  est.freq = static_cast<double>(violations) / static_cast<double>(trials);
  est.level = level;
  est.ci_upper = ci_upper(violations, trials, level);
  est.bound_rhs = bound.rhs;
  est.sound = ci_lower(violations, trials, kSoundnessLevel) <= bound.rhs;
  return est;
}

namespace {

struct EnumWalker {
  const ProcessSpec& spec;
  const bounds::ThresholdSpec& thr;
  long long n;
  double hit_prob = 0.0;
  long long atoms = 0;

  void walk(const KernelState& state, long long depth, double path_prob,
            double sum_x, double dev) {
    if (depth == n) {
      ++atoms;
      const double delta = 1.0 - 2.0 * sum_x / static_cast<double>(n);
      if (dev >= thr.at_delta(delta)) hit_prob += path_prob;
      return;
    }
    const double mu = conditional_mean(spec, state);
    const Support sup = support_at(spec, mu);
    for (int i = 0; i < sup.count; ++i) {
      KernelState next = state;
      next.observe(sup.value[i], mu);
      walk(next, depth + 1, path_prob * sup.prob[i], sum_x + sup.value[i],
           dev + mu - sup.value[i]);
    }
  }
};

}  // namespace

EnumResult enumerate_exact(const ProcessSpec& spec, long long n,
                           const bounds::ThresholdSpec& thr) {
  spec.validate();
  if (n < 1) fail_usage("n must be >= 1");
  if (n > 20) fail_usage("enumeration supports n <= 20");
  if (thr.n() != n) fail_usage("threshold was built for a different n");

  EnumWalker walker{spec, thr, n};
  walker.walk(KernelState{}, 0, 1.0, 0.0, 0.0);
  return EnumResult{walker.hit_prob, walker.atoms};
}

std::vector<ProcessSpec> default_battery() {
  return {
      ProcessSpec::iid_bernoulli(0.5),
      ProcessSpec::iid_bernoulli(0.95),
      ProcessSpec::two_point(0.9, 0.05),
      ProcessSpec::mean_reverting(0.8, 0.5),
      ProcessSpec::polya_like(1.0, 1.0),
      ProcessSpec::adversarial_flip(0.4, 0.6),
  };
}

std::vector<bounds::TheoremQuery> default_battery_bounds(long long n) {
  return {
      {n, 0.0, 0.7},  {n, 0.0, 1.0},  {n, 0.5, 1.0},  {n, -0.5, 1.0},
      {n, 0.3, 0.6},  {n, -0.3, 0.6}, {n, 0.8, 1.2},  {n, -0.8, 1.2},
  };
}

}  // namespace boundlab::sim
