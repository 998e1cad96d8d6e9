// SPDX-License-Identifier: Apache-2.0
//
// boundlab CLI: bound evaluation, comparison tables, simulation campaigns,
// grid certification, and bound inversion, with stable CSV/JSON outputs.
//
// Exit codes: 0 success, 1 usage error, 2 domain error, 3 certification
// failure, 4 soundness violation.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "boundlab/bounds.hpp"
#include "boundlab/certify.hpp"
#include "boundlab/simulate.hpp"

namespace bl = boundlab;
using bl::bounds::BoundValue;
using bl::bounds::Sign;
using bl::bounds::ThresholdSpec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitCertFailure = 3;
constexpr int kExitUnsound = 4;

// ---------------------------------------------------------------------
// output formatting: every numeric field carries 17 significant digits
// ---------------------------------------------------------------------

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_int(long long v) { return std::to_string(v); }

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string json_string(const std::string& s) {
  return "\"" + json_escape(s) + "\"";
}

// JSON has no literal for non-finite values; they are emitted as strings.
std::string json_number(double v) {
  if (!std::isfinite(v)) return json_string(fmt17(v));
  return fmt17(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

enum class ValueKind { number, integer, text, boolean, text_list };

struct Field {
  std::string key;
  ValueKind kind;
  double num = 0.0;
  long long integer = 0;
  std::string text;
  bool boolean = false;
  std::vector<std::string> list;
};

// One flat output record with insertion-ordered keys.
struct Record {
  std::vector<Field> fields;

  Field& add(const std::string& k, ValueKind kind) {
    Field f;
    f.key = k;
    f.kind = kind;
    fields.push_back(std::move(f));
    return fields.back();
  }
  void num(const std::string& k, double v) {
    add(k, ValueKind::number).num = v;
  }
  void integer(const std::string& k, long long v) {
    add(k, ValueKind::integer).integer = v;
  }
  void text(const std::string& k, const std::string& v) {
    add(k, ValueKind::text).text = v;
  }
  void boolean(const std::string& k, bool v) {
    add(k, ValueKind::boolean).boolean = v;
  }
  void text_list(const std::string& k, std::vector<std::string> v) {
    add(k, ValueKind::text_list).list = std::move(v);
  }

  const Field* find(const std::string& k) const {
    for (const auto& f : fields)
      if (f.key == k) return &f;
    return nullptr;
  }

  std::string field_json(const Field& f) const {
    switch (f.kind) {
      case ValueKind::number: return json_number(f.num);
      case ValueKind::integer: return fmt_int(f.integer);
      case ValueKind::text: return json_string(f.text);
      case ValueKind::boolean: return f.boolean ? "true" : "false";
      case ValueKind::text_list: {
        std::string out = "[";
        for (std::size_t i = 0; i < f.list.size(); ++i) {
          if (i) out += ", ";
          out += json_string(f.list[i]);
        }
        return out + "]";
      }
    }
    return "null";
  }

  std::string field_csv(const Field& f) const {
    switch (f.kind) {
      case ValueKind::number: return csv_field(fmt17(f.num));
      case ValueKind::integer: return fmt_int(f.integer);
      case ValueKind::text: return csv_field(f.text);
      case ValueKind::boolean: return f.boolean ? "true" : "false";
      case ValueKind::text_list: {
        std::string joined;
        for (std::size_t i = 0; i < f.list.size(); ++i) {
          if (i) joined += ";";
          joined += f.list[i];
        }
        return csv_field(joined);
      }
    }
    return "";
  }

  std::string to_json() const {
    std::string out = "{\n";
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out += "  " + json_string(fields[i].key) + ": " + field_json(fields[i]);
      out += i + 1 < fields.size() ? ",\n" : "\n";
    }
    return out + "}\n";
  }
};

// CSV with a fixed column set; records lacking a column leave it empty.
std::string csv_table(const std::vector<std::string>& columns,
                      const std::vector<Record>& records) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ",";
    out += columns[i];
  }
  out += "\n";
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ",";
      if (const Field* f = rec.find(columns[i])) out += rec.field_csv(*f);
    }
    out += "\n";
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw bl::UsageError("cannot open output file: " + path);
  os << content;
}

// ---------------------------------------------------------------------
// shared option plumbing
// ---------------------------------------------------------------------

Sign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus" || s == "1" || s == "+1") return Sign::plus;
  if (s == "-" || s == "minus" || s == "-1") return Sign::minus;
  throw bl::UsageError("--s must be + or -");
}

std::string sign_text(Sign s) { return s == Sign::plus ? "+" : "-"; }

std::vector<double> parse_number_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream is(csv);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw bl::UsageError("bad number in list: " + tok);
    }
  }
  return out;
}

double require_opt(const std::optional<double>& v, const char* flag) {
  if (!v) throw bl::UsageError(std::string("missing required option ") + flag);
  return *v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bl::sim::ProcessSpec load_process(const std::optional<std::string>& inline_spec,
                                  const std::optional<std::string>& file) {
  if (inline_spec) return bl::sim::ProcessSpec::parse(*inline_spec);
  if (!file) throw bl::UsageError("provide --spec, --process, or --battery");
  std::ifstream is(*file);
  if (!is) throw bl::UsageError("cannot open process file: " + *file);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    return bl::sim::ProcessSpec::parse(line);
  }
  throw bl::UsageError("process file contains no spec line: " + *file);
}

// ---------------------------------------------------------------------
// bound command
// ---------------------------------------------------------------------

struct BoundArgs {
  std::string ineq;
  std::optional<double> n, a, b, epsilon, delta, p, np, variance, Delta;
  std::string s = "+";
  std::string means_csv;
  std::string format = "json";
  std::string out;
};

void add_threshold_fields(Record& rec, const ThresholdSpec& thr,
                          const std::optional<double>& at,
                          std::vector<std::string>& warnings) {
  rec.num("threshold_base", thr.base);
  rec.num("threshold_slope", thr.slope);
  rec.num("threshold_scale", thr.scale);
  if (at) {
    const double realized = thr.at_delta(*at);
    rec.num("threshold", realized);
    if (realized < 0.0)
      warnings.push_back("realized threshold is negative: the inequality holds but is weak");
  }
  if (thr.negative_possible())
    warnings.push_back("threshold negative on part of the bias range");
}

int cmd_bound(const BoundArgs& args) {
  Record rec;
  rec.text("ineq", args.ineq);
  std::vector<std::string> warnings;
  BoundValue bv;
  const Sign s = parse_sign(args.s);

  auto n_of = [&](const char* flag = "--n") {
    return static_cast<long long>(require_opt(args.n, flag));
  };

  if (args.ineq == "theorem1") {
    bl::bounds::TheoremQuery q{n_of(), require_opt(args.a, "--a"),
                               require_opt(args.b, "--b")};
    rec.integer("n", q.n);
    rec.num("a", q.a);
    rec.num("b", q.b);
    bv = bl::bounds::theorem1_rhs(q);
    add_threshold_fields(rec, bl::bounds::theorem1_threshold(q), args.Delta,
                         warnings);
  } else if (args.ineq == "cor1" || args.ineq == "cor2") {
    bl::bounds::CorollaryQuery q{n_of(), require_opt(args.epsilon, "--epsilon"),
                                 require_opt(args.delta, "--delta"), s};
    rec.integer("n", q.n);
    rec.num("epsilon", q.epsilon);
    rec.num("delta", q.delta);
    rec.text("s", sign_text(s));
    if (args.ineq == "cor1") {
      bv = bl::bounds::cor1_eval(q, args.Delta.value_or(0.0)).bound;
      add_threshold_fields(rec, bl::bounds::cor1_threshold(q), args.Delta,
                           warnings);
    } else {
      const auto r = bl::bounds::cor2_eval(q, args.Delta.value_or(0.0));
      bv = r.bound;
      // The martingale form handles every regime; the threshold formula is
      // only defined while the validity denominator is positive.
      try {
        add_threshold_fields(rec, bl::bounds::cor2_threshold(q), args.Delta,
                             warnings);
      } catch (const bl::DomainError&) {
        warnings.push_back("threshold undefined in this (vacuous) regime");
      }
    }
  } else if (args.ineq == "cor3") {
    bl::bounds::MeanKnownQuery q{n_of(), require_opt(args.p, "--p"),
                                 require_opt(args.epsilon, "--epsilon"), s};
    rec.integer("n", q.n);
    rec.num("p", q.p);
    rec.num("epsilon", q.epsilon);
    rec.text("s", sign_text(s));
    bv = bl::bounds::cor3_rhs(q);
    add_threshold_fields(rec, ThresholdSpec{q.epsilon, 0.0,
                                            std::sqrt(static_cast<double>(q.n))},
                         args.Delta, warnings);
  } else if (args.ineq == "rs13") {
    std::vector<double> means;
    if (!args.means_csv.empty()) {
      means = parse_number_list(args.means_csv);
    } else {
      const double p = require_opt(args.p, "--p (or --means)");
      means.assign(1, p);  // constant means: the proxy average is c(p, s)
      rec.num("p", p);
    }
    const double eps = require_opt(args.epsilon, "--epsilon");
    rec.num("epsilon", eps);
    rec.text("s", sign_text(s));
    bv = bl::bounds::rs13_rhs(means, eps, s);
  } else if (args.ineq == "chernoff_mult") {
    if (args.np && args.delta) {
      rec.num("np", *args.np);
      rec.num("delta", *args.delta);
      rec.text("s", sign_text(s));
      bv = bl::bounds::chernoff_mult_rhs(*args.np, *args.delta, s);
    } else {
      const long long n = n_of("--n (with --p/--epsilon)");
      const double p = require_opt(args.p, "--p");
      const double eps = require_opt(args.epsilon, "--epsilon");
      rec.integer("n", n);
      rec.num("p", p);
      rec.num("epsilon", eps);
      rec.text("s", sign_text(s));
      bv = bl::bounds::chernoff_mult_rhs_scaled(n, p, eps, s);
    }
  } else if (args.ineq == "azuma" || args.ineq == "hoeffding" ||
             args.ineq == "bernstein" || args.ineq == "bennett") {
    const long long n = static_cast<long long>(args.n.value_or(1.0));
    const double eps = require_opt(args.epsilon, "--epsilon");
    rec.integer("n", n);
    rec.num("epsilon", eps);
    bl::bounds::Baseline kind = bl::bounds::Baseline::azuma;
    if (args.ineq == "hoeffding") kind = bl::bounds::Baseline::hoeffding;
    if (args.ineq == "bernstein") kind = bl::bounds::Baseline::bernstein;
    if (args.ineq == "bennett") kind = bl::bounds::Baseline::bennett;
    if (args.variance) rec.num("variance", *args.variance);
    bv = bl::bounds::baseline_rhs(kind, n, eps, args.variance);
    add_threshold_fields(rec, ThresholdSpec{eps, 0.0,
                                            std::sqrt(static_cast<double>(n))},
                         args.Delta, warnings);
  } else {
    throw bl::UsageError("unknown inequality: " + args.ineq);
  }

  rec.num("rhs", bv.rhs);
  rec.num("log_rhs", bv.log_rhs);
  rec.boolean("vacuous", bv.vacuous);
  if (bv.event_impossible) rec.boolean("event_impossible", true);
  if (bv.vacuous) warnings.push_back("bound is vacuous (rhs >= 1)");
  rec.text_list("warnings", warnings);

  if (args.format == "json") {
    write_output(args.out, rec.to_json());
  } else {
    static const std::vector<std::string> kColumns = {
        "ineq", "n", "epsilon", "a", "b", "delta", "s", "p", "np",
        "variance", "threshold_base", "threshold_slope", "threshold_scale",
        "threshold", "rhs", "log_rhs", "vacuous", "event_impossible",
        "warnings"};
    write_output(args.out, csv_table(kColumns, {rec}));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------
// compare command
// ---------------------------------------------------------------------

struct CompareArgs {
  std::optional<double> n, p, variance;
  std::string s = "+";
  double eps_min = 0.0, eps_max = 0.0, eps_step = 0.0;
  std::string ineqs = "kato_cor3,rs13,azuma,bernstein,bennett,chernoff_mult";
  std::string format = "csv";
  std::string out;
};

int cmd_compare(const CompareArgs& args) {
  if (!(args.eps_step > 0.0) || args.eps_max < args.eps_min)
    throw bl::UsageError("empty epsilon grid: need eps_min <= eps_max and eps_step > 0");
  const Sign s = parse_sign(args.s);

  std::vector<std::string> selected;
  {
    std::istringstream is(args.ineqs);
    std::string tok;
    while (std::getline(is, tok, ',')) selected.push_back(trim(tok));
  }

  // Default variance for the variance-based baselines when the mean is
  // known: the Bernoulli variance p(1-p).
  std::optional<double> variance = args.variance;
  if (!variance && args.p) variance = *args.p * (1.0 - *args.p);

  const long long steps = static_cast<long long>(
      std::floor((args.eps_max - args.eps_min) / args.eps_step + 1e-9));
  std::vector<Record> rows;
  for (long long k = 0; k <= steps; ++k) {
    const double eps = args.eps_min + static_cast<double>(k) * args.eps_step;
    for (const auto& name : selected) {
      std::optional<BoundValue> bv;
      try {
        if (name == "kato_cor3") {
          if (!args.n || !args.p) continue;
          bv = bl::bounds::cor3_rhs(bl::bounds::MeanKnownQuery{
              static_cast<long long>(*args.n), *args.p, eps, s});
        } else if (name == "rs13") {
          if (!args.p) continue;
          const double mean = *args.p;
          bv = bl::bounds::rs13_rhs(std::span<const double>(&mean, 1), eps, s);
        } else if (name == "azuma" || name == "hoeffding") {
          bv = bl::bounds::baseline_rhs(bl::bounds::Baseline::azuma, 1, eps);
        } else if (name == "bernstein" || name == "bennett") {
          if (!variance || !args.n) continue;
          bv = bl::bounds::baseline_rhs(
              name == "bernstein" ? bl::bounds::Baseline::bernstein
                                  : bl::bounds::Baseline::bennett,
              static_cast<long long>(*args.n), eps, variance);
        } else if (name == "chernoff_mult") {
          if (!args.n || !args.p) continue;
          bv = bl::bounds::chernoff_mult_rhs_scaled(
              static_cast<long long>(*args.n), *args.p, eps, s);
        } else {
          throw bl::UsageError("unknown inequality in --ineqs: " + name);
        }
      } catch (const bl::DomainError&) {
        continue;  // outside this bound's validity domain at this eps
      }
      Record row;
      row.text("ineq", name);
      row.num("epsilon", eps);
      row.num("rhs", bv->rhs);
      row.num("log_rhs", bv->log_rhs);
      row.boolean("vacuous", bv->vacuous);
      rows.push_back(std::move(row));
    }
  }

  static const std::vector<std::string> kColumns = {"ineq", "epsilon", "rhs",
                                                    "log_rhs", "vacuous"};
  if (args.format == "json") {
    std::string out = "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::string obj = rows[i].to_json();
      obj.pop_back();  // trailing newline
      out += obj;
      out += i + 1 < rows.size() ? ",\n" : "\n";
    }
    out += "]\n";
    write_output(args.out, out);
  } else {
    write_output(args.out, csv_table(kColumns, rows));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------
// simulate command
// ---------------------------------------------------------------------

struct SimulateArgs {
  std::optional<std::string> spec_text;
  std::optional<std::string> process_file;
  bool battery = false;
  long long n = 100;
  long long trials = 100000;
  std::string ineq = "theorem1";
  double a = 0.0, b = 1.0;
  std::optional<double> epsilon, delta;
  std::string s = "+";
  std::uint64_t seed = 0;
  double level = 0.99;
  int threads = 1;
  std::optional<long long> bound_n;
  std::string out;
  std::optional<std::string> trajectory_out;
  long long trajectory_index = 0;
};

struct BoundConfig {
  std::string label;
  ThresholdSpec thr;
  BoundValue bound;
};

// Shortest round-trip form for numbers embedded in labels.
std::string shortest_num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

BoundConfig make_theorem1_config(long long n, long long bound_n, double a,
                                 double b) {
  bl::bounds::TheoremQuery thr_q{n, a, b};
  bl::bounds::TheoremQuery rhs_q{bound_n, a, b};
  BoundConfig cfg;
  cfg.label = "theorem1(a=" + shortest_num(a) + ",b=" + shortest_num(b) + ")";
  cfg.thr = bl::bounds::theorem1_threshold(thr_q);
  cfg.bound = bl::bounds::theorem1_rhs(rhs_q);
  return cfg;
}

BoundConfig make_bound_config(const SimulateArgs& args) {
  const long long bound_n = args.bound_n.value_or(args.n);
  if (args.ineq == "theorem1")
    return make_theorem1_config(args.n, bound_n, args.a, args.b);
  if (args.ineq == "cor1") {
    const double eps = require_opt(args.epsilon, "--epsilon");
    const double delta = require_opt(args.delta, "--delta");
    if (parse_sign(args.s) != Sign::plus)
      throw bl::UsageError(
          "simulate checks the event D >= threshold; for s = - flip the "
          "process (x -> 1-x) and negate delta");
    bl::bounds::CorollaryQuery thr_q{args.n, eps, delta, Sign::plus};
    bl::bounds::CorollaryQuery rhs_q{bound_n, eps, delta, Sign::plus};
    BoundConfig cfg;
    cfg.label = "cor1(eps=" + shortest_num(eps) + ",delta=" +
                shortest_num(delta) + ",s=+)";
    cfg.thr = bl::bounds::cor1_threshold(thr_q);
    cfg.bound = bl::bounds::cor1_eval(rhs_q, 0.0).bound;
    return cfg;
  }
  throw bl::UsageError("simulate supports --ineq theorem1 or cor1");
}

std::string simulate_report_json(const std::string& process, long long n,
                                 const bl::sim::TailEstimate& est,
                                 const std::string& bound_label,
                                 std::uint64_t seed, int indent) {
  const std::string pad(indent, ' ');
  const std::string pad2(indent + 2, ' ');
  std::ostringstream os;
  os << pad << "{\n";
  os << pad2 << "\"process\": " << json_string(process) << ",\n";
  os << pad2 << "\"n\": " << n << ",\n";
  os << pad2 << "\"trials\": " << est.trials << ",\n";
  os << pad2 << "\"violations\": " << est.violations << ",\n";
  os << pad2 << "\"freq\": " << json_number(est.freq) << ",\n";
  os << pad2 << "\"ci_level\": " << json_number(est.level) << ",\n";
  os << pad2 << "\"ci_upper\": " << json_number(est.ci_upper) << ",\n";
  os << pad2 << "\"bound\": {\"ineq\": " << json_string(bound_label)
     << ", \"rhs\": " << json_number(est.bound_rhs) << "},\n";
  os << pad2 << "\"sound\": " << (est.sound ? "true" : "false") << ",\n";
  os << pad2 << "\"master_seed\": " << seed << "\n";
  os << pad << "}";
  return os.str();
}

int cmd_simulate(const SimulateArgs& args) {
  if (args.battery) {
    const auto processes = bl::sim::default_battery();
    const auto configs = bl::sim::default_battery_bounds(args.n);
    std::string out = "{\n  \"reports\": [\n";
    bool all_sound = true;
    bool first = true;
    for (const auto& proc : processes) {
      for (const auto& q : configs) {
        const auto cfg =
            make_theorem1_config(args.n, args.bound_n.value_or(args.n), q.a, q.b);
        const auto est =
            bl::sim::estimate_tail(proc, args.n, args.trials, cfg.thr,
                                   cfg.bound, args.seed, args.level,
                                   args.threads);
        all_sound = all_sound && est.sound;
        if (!first) out += ",\n";
        first = false;
        out += simulate_report_json(proc.to_text(), args.n, est, cfg.label,
                                    args.seed, 4);
      }
    }
    out += "\n  ],\n  \"all_sound\": ";
    out += all_sound ? "true" : "false";
    out += "\n}\n";
    write_output(args.out, out);
    return all_sound ? kExitOk : kExitUnsound;
  }

  const auto spec = load_process(args.spec_text, args.process_file);
  const auto cfg = make_bound_config(args);
  const auto est = bl::sim::estimate_tail(spec, args.n, args.trials, cfg.thr,
                                          cfg.bound, args.seed, args.level,
                                          args.threads);
  if (args.trajectory_out) {
    const auto traj = bl::sim::generate(
        spec, args.n, bl::sim::mix_seed(args.seed, args.trajectory_index));
    std::string csv = "index,x,mu\n";
    for (long long m = 0; m < traj.n(); ++m) {
      csv += fmt_int(m + 1) + "," + fmt17(traj.samples[m]) + "," +
             fmt17(traj.cond_means[m]) + "\n";
    }
    write_output(*args.trajectory_out, csv);
  }
  write_output(args.out, simulate_report_json(spec.to_text(), args.n, est,
                                              cfg.label, args.seed, 0) +
                             "\n");
  return est.sound ? kExitOk : kExitUnsound;
}

// ---------------------------------------------------------------------
// certify command
// ---------------------------------------------------------------------

struct CertifyArgs {
  bl::certify::CertGridSpec spec;
  std::string out;
};

int cmd_certify(const CertifyArgs& args) {
  const auto report = bl::certify::certify_grid(args.spec);
  std::ostringstream os;
  os << "{\n";
  os << "  \"passed\": " << (report.passed ? "true" : "false") << ",\n";
  os << "  \"slack\": " << json_number(report.slack) << ",\n";
  os << "  \"grid\": {"
     << "\"y_min\": " << json_number(args.spec.y_min)
     << ", \"y_max\": " << json_number(args.spec.y_max)
     << ", \"y_step\": " << json_number(args.spec.y_step)
     << ", \"x_span\": " << json_number(args.spec.x_span)
     << ", \"x_step\": " << json_number(args.spec.x_step) << "},\n";
  os << "  \"checks\": [\n";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const auto& c = report.checks[i];
    os << "    {\"condition\": " << json_string(c.condition)
       << ", \"points\": " << c.points
       << ", \"min_margin\": " << json_number(c.min_margin)
       << ", \"worst\": {\"x\": " << json_number(c.worst_x)
       << ", \"y\": " << json_number(c.worst_y) << "}}";
    os << (i + 1 < report.checks.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  write_output(args.out, os.str());
  return report.passed ? kExitOk : kExitCertFailure;
}

// ---------------------------------------------------------------------
// invert command
// ---------------------------------------------------------------------

struct InvertArgs {
  std::string ineq;
  double target = 0.0;
  std::optional<double> n, delta, p, variance;
  std::string s = "+";
  std::string means_csv;
  std::string format = "json";
  std::string out;
};

int cmd_invert(const InvertArgs& args) {
  const Sign s = parse_sign(args.s);
  auto n_of = [&] {
    return static_cast<long long>(require_opt(args.n, "--n"));
  };

  std::function<BoundValue(double)> family;
  if (args.ineq == "azuma" || args.ineq == "hoeffding") {
    family = [](double eps) {
      return bl::bounds::baseline_rhs(bl::bounds::Baseline::azuma, 1, eps);
    };
  } else if (args.ineq == "bernstein" || args.ineq == "bennett") {
    const long long n = n_of();
    const auto kind = args.ineq == "bernstein" ? bl::bounds::Baseline::bernstein
                                               : bl::bounds::Baseline::bennett;
    const double v = require_opt(args.variance, "--variance");
    family = [kind, n, v](double eps) {
      return bl::bounds::baseline_rhs(kind, n, eps, v);
    };
  } else if (args.ineq == "cor1" || args.ineq == "cor2") {
    const long long n = n_of();
    const double delta = require_opt(args.delta, "--delta");
    const bool martingale = args.ineq == "cor2";
    family = [n, delta, s, martingale](double eps) {
      bl::bounds::CorollaryQuery q{n, eps, delta, s};
      return martingale ? bl::bounds::cor2_eval(q, 0.0).bound
                        : bl::bounds::cor1_eval(q, 0.0).bound;
    };
  } else if (args.ineq == "cor3") {
    const long long n = n_of();
    const double p = require_opt(args.p, "--p");
    family = [n, p, s](double eps) {
      return bl::bounds::cor3_rhs(bl::bounds::MeanKnownQuery{n, p, eps, s});
    };
  } else if (args.ineq == "chernoff_mult") {
    const long long n = n_of();
    const double p = require_opt(args.p, "--p");
    family = [n, p, s](double eps) {
      return bl::bounds::chernoff_mult_rhs_scaled(n, p, eps, s);
    };
  } else if (args.ineq == "rs13") {
    std::vector<double> means = args.means_csv.empty()
                                    ? std::vector<double>{require_opt(
                                          args.p, "--p (or --means)")}
                                    : parse_number_list(args.means_csv);
    family = [means, s](double eps) {
      return bl::bounds::rs13_rhs(means, eps, s);
    };
  } else {
    throw bl::UsageError("unknown inequality: " + args.ineq);
  }

  const double eps = bl::bounds::invert_epsilon(family, args.target);
  const BoundValue bv = family(eps);

  Record rec;
  rec.text("ineq", args.ineq);
  rec.num("target", args.target);
  rec.num("epsilon", eps);
  rec.num("rhs", bv.rhs);
  rec.num("log_rhs", bv.log_rhs);
  if (args.format == "json") {
    write_output(args.out, rec.to_json());
  } else {
    static const std::vector<std::string> kColumns = {"ineq", "target",
                                                      "epsilon", "rhs",
                                                      "log_rhs"};
    write_output(args.out, csv_table(kColumns, {rec}));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundlab: adaptive-threshold concentration bounds — "
               "evaluation, comparison, simulation, certification, inversion"};
  app.set_version_flag("--version", "boundlab 0.1.0 (output schema v1)");
  app.require_subcommand(1);

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "evaluate one inequality");
  bound->add_option("--ineq", bound_args.ineq,
                    "theorem1|cor1|cor2|cor3|rs13|chernoff_mult|azuma|"
                    "hoeffding|bernstein|bennett")
      ->required();
  bound->add_option("--n", bound_args.n);
  bound->add_option("--a", bound_args.a);
  bound->add_option("--b", bound_args.b);
  bound->add_option("--epsilon", bound_args.epsilon);
  bound->add_option("--delta", bound_args.delta);
  bound->add_option("--s", bound_args.s, "+ or -");
  bound->add_option("--p", bound_args.p);
  bound->add_option("--np", bound_args.np);
  bound->add_option("--variance", bound_args.variance);
  bound->add_option("--Delta", bound_args.Delta,
                    "observed bias statistic for the realized threshold");
  bound->add_option("--means", bound_args.means_csv,
                    "comma-separated means for rs13");
  bound->add_option("--format", bound_args.format)
      ->check(CLI::IsMember({"csv", "json"}));
  bound->add_option("--out", bound_args.out);

  CompareArgs cmp_args;
  auto* cmp = app.add_subcommand("compare",
                                 "epsilon sweep across inequalities (CSV)");
  cmp->add_option("--n", cmp_args.n);
  cmp->add_option("--p", cmp_args.p);
  cmp->add_option("--s", cmp_args.s);
  cmp->add_option("--variance", cmp_args.variance);
  cmp->add_option("--eps-min", cmp_args.eps_min)->required();
  cmp->add_option("--eps-max", cmp_args.eps_max)->required();
  cmp->add_option("--eps-step", cmp_args.eps_step)->required();
  cmp->add_option("--ineqs", cmp_args.ineqs, "subset of inequalities");
  cmp->add_option("--format", cmp_args.format)
      ->check(CLI::IsMember({"csv", "json"}));
  cmp->add_option("--out", cmp_args.out);

  SimulateArgs sim_args;
  auto* simc = app.add_subcommand("simulate",
                                  "Monte-Carlo violation-probability estimate");
  simc->add_option("--spec", sim_args.spec_text,
                   "inline process spec, e.g. two_point(0.9,0.05)");
  simc->add_option("--process", sim_args.process_file, "process spec file");
  simc->add_flag("--battery", sim_args.battery,
                 "run the default 6-process x 8-bound battery");
  simc->add_option("--n", sim_args.n);
  simc->add_option("--trials", sim_args.trials);
  simc->add_option("--ineq", sim_args.ineq, "theorem1 or cor1");
  simc->add_option("--a", sim_args.a);
  simc->add_option("--b", sim_args.b);
  simc->add_option("--epsilon", sim_args.epsilon);
  simc->add_option("--delta", sim_args.delta);
  simc->add_option("--s", sim_args.s);
  simc->add_option("--seed", sim_args.seed)->envname("BOUNDLAB_SEED");
  simc->add_option("--level", sim_args.level);
  simc->add_option("--threads", sim_args.threads);
  simc->add_option("--bound-n", sim_args.bound_n,
                   "compute the claimed rhs at this n instead of --n "
                   "(negative-control hook)");
  simc->add_option("--out", sim_args.out);
  simc->add_option("--trajectory-out", sim_args.trajectory_out,
                   "write one trajectory as CSV (index,x,mu)");
  simc->add_option("--trajectory-index", sim_args.trajectory_index);

  CertifyArgs cert_args;
  auto* cert = app.add_subcommand("certify",
                                  "grid-certify the proof conditions");
  cert->add_option("--y-min", cert_args.spec.y_min);
  cert->add_option("--y-max", cert_args.spec.y_max);
  cert->add_option("--y-step", cert_args.spec.y_step);
  cert->add_option("--x-span", cert_args.spec.x_span);
  cert->add_option("--x-step", cert_args.spec.x_step);
  cert->add_option("--slack", cert_args.spec.slack);
  cert->add_option("--threads", cert_args.spec.threads);
  cert->add_option("--out", cert_args.out);

  InvertArgs inv_args;
  auto* inv = app.add_subcommand("invert",
                                 "solve rhs(epsilon) = target for epsilon");
  inv->add_option("--ineq", inv_args.ineq)->required();
  inv->add_option("--target", inv_args.target)->required();
  inv->add_option("--n", inv_args.n);
  inv->add_option("--delta", inv_args.delta);
  inv->add_option("--p", inv_args.p);
  inv->add_option("--variance", inv_args.variance);
  inv->add_option("--s", inv_args.s);
  inv->add_option("--means", inv_args.means_csv);
  inv->add_option("--format", inv_args.format)
      ->check(CLI::IsMember({"csv", "json"}));
  inv->add_option("--out", inv_args.out);

  try {
    app.parse(argc, argv);
    if (bound->parsed()) return cmd_bound(bound_args);
    if (cmp->parsed()) return cmd_compare(cmp_args);
    if (simc->parsed()) return cmd_simulate(sim_args);
    if (cert->parsed()) return cmd_certify(cert_args);
    if (inv->parsed()) return cmd_invert(inv_args);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const bl::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const bl::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
