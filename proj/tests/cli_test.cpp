// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the CLI surface: flags, output schemas, and the
// exit-code contract (0 ok, 1 usage, 2 domain, 3 certification failure,
// 4 soundness violation).
//
// usage: cli_test <path-to-boundlab-binary>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int g_failures = 0;

#define REQUIRE(cond, msg)                                                   \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << (msg)  \
                << "\n";                                                     \
      ++g_failures;                                                          \
    }                                                                        \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) {
    std::cerr << "popen failed for: " << cmd << "\n";
    std::exit(1);
  }
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
    r.output.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Pull the number following "\"key\": " out of a JSON blob.
double json_number_at(const std::string& json, const std::string& key) {
  const std::string needle = "\"" + key + "\": ";
  const auto pos = json.find(needle);
  if (pos == std::string::npos) return std::nan("");
  return std::strtod(json.c_str() + pos + needle.size(), nullptr);
}

bool close_to(double got, double want, double tol) {
  return std::abs(got - want) <= tol;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_test <boundlab binary>\n";
    return 1;
  }
  const std::string bin = argv[1];

  // --- bound ---
  {
    auto r = run(bin + " bound --ineq cor1 --n 100 --epsilon 1 --delta 0.1333333 --s +");
    REQUIRE(r.exit_code == 0, "bound cor1 reduction exit code");
    REQUIRE(close_to(json_number_at(r.output, "rhs"), 0.13533528, 1e-7),
            "bound cor1 reduction rhs");

    // The 17-significant-digit serialization contract, verbatim.
    r = run(bin + " bound --ineq azuma --epsilon 1");
    REQUIRE(r.output.find("\"rhs\": 0.1353352832366127") != std::string::npos,
            "17-significant-digit serialization");

    r = run(bin + " bound --ineq cor3 --n 10000 --p 0.95 --epsilon 1 --s -");
    REQUIRE(r.exit_code == 0, "bound cor3 exit code");
    REQUIRE(close_to(json_number_at(r.output, "rhs"), 1.3154308e-05, 1e-10),
            "bound cor3 rhs");

    r = run(bin + " bound --ineq cor1 --n 100 --epsilon 1 --delta 1.2 --s +");
    REQUIRE(r.exit_code == 2, "bound domain error exit code");

    r = run(bin + " bound --n 100");
    REQUIRE(r.exit_code == 1, "bound missing --ineq exit code");

    r = run(bin + " bound --ineq theorem1 --n 9 --a 1 --b 1");
    REQUIRE(r.output.find("\"vacuous\": true") != std::string::npos,
            "vacuous flag serialized");
    REQUIRE(r.output.find("bound is vacuous") != std::string::npos,
            "vacuous warning present");

    r = run(bin + " bound --ineq theorem1 --n 4 --a 2 --b 1 --format csv");
    REQUIRE(r.exit_code == 0, "bound csv exit code");
    REQUIRE(r.output.rfind("ineq,n,epsilon,a,b,", 0) == 0, "bound csv header");
    REQUIRE(r.output.find("threshold negative on part of the bias range") !=
                std::string::npos,
            "negative-threshold warning");
  }

  // --- compare ---
  {
    auto r = run(bin +
                 " compare --n 1000000 --p 0.75 --s + --eps-min 1 --eps-max 1 "
                 "--eps-step 0.5");
    REQUIRE(r.exit_code == 0, "compare exit code");
    REQUIRE(r.output.rfind("ineq,epsilon,rhs,log_rhs,vacuous", 0) == 0,
            "compare csv header");
    std::istringstream rows(r.output);
    std::string line;
    double kato = 0.0, rs13 = 0.0, azuma = 0.0;
    while (std::getline(rows, line)) {
      if (line.rfind("kato_cor3,", 0) == 0)
        kato = std::strtod(line.c_str() + line.find(',', 10) + 1, nullptr);
      if (line.rfind("rs13,", 0) == 0)
        rs13 = std::strtod(line.c_str() + line.find(',', 5) + 1, nullptr);
      if (line.rfind("azuma,", 0) == 0)
        azuma = std::strtod(line.c_str() + line.find(',', 6) + 1, nullptr);
    }
    REQUIRE(close_to(kato, 0.069648091608699749, 1e-9), "compare kato_cor3 value");
    REQUIRE(close_to(rs13, 0.1111111111111111, 1e-9), "compare rs13 value");
    REQUIRE(kato < rs13, "biased-regime superiority");
    REQUIRE(close_to(azuma, 0.13533528, 1e-7), "compare azuma value");

    // At p = 1/2 and large n the three exponents coincide to 3 digits.
    r = run(bin +
            " compare --n 1000000 --p 0.5 --s + --eps-min 1 --eps-max 1 "
            "--eps-step 1");
    std::istringstream rows2(r.output);
    kato = rs13 = azuma = 0.0;
    while (std::getline(rows2, line)) {
      if (line.rfind("kato_cor3,", 0) == 0)
        kato = std::strtod(line.c_str() + line.find(',', 10) + 1, nullptr);
      if (line.rfind("rs13,", 0) == 0)
        rs13 = std::strtod(line.c_str() + line.find(',', 5) + 1, nullptr);
      if (line.rfind("azuma,", 0) == 0)
        azuma = std::strtod(line.c_str() + line.find(',', 6) + 1, nullptr);
    }
    REQUIRE(close_to(kato, azuma, 5e-4) && close_to(rs13, azuma, 5e-4),
            "median-regime agreement to 3 significant digits");

    r = run(bin + " compare --eps-min 1 --eps-max 0 --eps-step 0.1");
    REQUIRE(r.exit_code == 1, "compare empty grid exit code");
  }

  // --- simulate ---
  {
    auto r = run(bin +
                 " simulate --spec 'point_mass(0.5)' --n 20 --trials 2000 "
                 "--seed 7 --threads 2");
    REQUIRE(r.exit_code == 0, "simulate point_mass exit code");
    REQUIRE(r.output.find("\"violations\": 0") != std::string::npos,
            "point_mass never violates");
    REQUIRE(r.output.find("\"sound\": true") != std::string::npos,
            "point_mass sound");

    // Same invocation twice: byte-identical reports.
    auto r2 = run(bin +
                  " simulate --spec 'point_mass(0.5)' --n 20 --trials 2000 "
                  "--seed 7 --threads 2");
    REQUIRE(r.output == r2.output, "simulate output is deterministic");

    // Negative control: claimed rhs computed at a different n undercuts
    // the observed frequency and must trip the soundness detector.
    r = run(bin +
            " simulate --spec 'iid_bernoulli(0.5)' --n 16 --ineq theorem1 "
            "--a -0.7 --b 0.75 --bound-n 1 --trials 5000 --seed 3");
    REQUIRE(r.exit_code == 4, "mis-specified bound trips exit 4");
    REQUIRE(r.output.find("\"sound\": false") != std::string::npos,
            "mis-specified bound reported unsound");

    r = run(bin + " simulate --spec 'bogus(1)' --n 4 --trials 10");
    REQUIRE(r.exit_code == 1, "bad process spec exit code");

    // Master seed comes from BOUNDLAB_SEED when the flag is absent; the
    // flag wins when both are present.
    r = run("BOUNDLAB_SEED=77 " + bin +
            " simulate --spec 'iid_bernoulli(0.5)' --n 8 --trials 50");
    REQUIRE(r.output.find("\"master_seed\": 77") != std::string::npos,
            "seed picked up from the environment");
    r = run("BOUNDLAB_SEED=77 " + bin +
            " simulate --spec 'iid_bernoulli(0.5)' --n 8 --trials 50 --seed 9");
    REQUIRE(r.output.find("\"master_seed\": 9") != std::string::npos,
            "flag overrides the environment seed");

    // Battery mode emits one report per (process, bound) pair.
    r = run(bin + " simulate --battery --n 50 --trials 300 --seed 5 --threads 4");
    REQUIRE(r.exit_code == 0, "battery exit code");
    REQUIRE(r.output.find("\"all_sound\": true") != std::string::npos,
            "battery all sound");
    std::size_t reports = 0;
    for (std::size_t pos = r.output.find("\"process\""); pos != std::string::npos;
         pos = r.output.find("\"process\"", pos + 1))
      ++reports;
    REQUIRE(reports == 48, "battery report count");

    // Process file + trajectory export.
    {
      std::ofstream f("/tmp/boundlab_proc.txt");
      f << "# battery member\n  two_point(0.9,0.05)\n";
    }
    r = run(bin +
            " simulate --process /tmp/boundlab_proc.txt --n 5 --trials 100 "
            "--seed 1 --trajectory-out /tmp/boundlab_traj.csv");
    REQUIRE(r.exit_code == 0, "simulate from file exit code");
    std::ifstream traj("/tmp/boundlab_traj.csv");
    std::string header;
    std::getline(traj, header);
    REQUIRE(header == "index,x,mu", "trajectory csv header");
    int data_rows = 0;
    std::string row;
    while (std::getline(traj, row))
      if (!row.empty()) ++data_rows;
    REQUIRE(data_rows == 5, "trajectory csv row count");
  }

  // --- certify ---
  {
    auto r = run(bin +
                 " certify --y-min -0.49 --y-max 0.5 --y-step 0.1 --x-span 1 "
                 "--x-step 0.1");
    REQUIRE(r.exit_code == 0, "certify small grid exit code");
    REQUIRE(r.output.find("\"passed\": true") != std::string::npos,
            "certify small grid passes");

    r = run(bin + " certify --y-min -0.6");
    REQUIRE(r.exit_code == 1, "certify domain usage exit code");

    // Zero slack leaves no room for float noise in the root identity:
    // deterministic certification failure, with the worst point named.
    r = run(bin +
            " certify --y-min -0.499 --y-max -0.3 --y-step 0.01 --x-span 1 "
            "--x-step 0.5 --slack 0");
    REQUIRE(r.exit_code == 3, "certify slack=0 exit code");
    REQUIRE(r.output.find("\"passed\": false") != std::string::npos,
            "certify slack=0 reports failure");
    REQUIRE(r.output.find("\"worst\"") != std::string::npos,
            "failure report names worst point");
  }

  // --- invert ---
  {
    auto r = run(bin + " invert --ineq azuma --target 0.05");
    REQUIRE(r.exit_code == 0, "invert azuma exit code");
    REQUIRE(close_to(json_number_at(r.output, "epsilon"), 1.2238734, 1e-6),
            "invert azuma epsilon");

    r = run(bin + " invert --ineq azuma --target 1.0");
    REQUIRE(json_number_at(r.output, "epsilon") == 0.0, "invert target 1");

    r = run(bin +
            " invert --ineq cor1 --n 100 --delta 0.5 --s + --target 0.0992");
    REQUIRE(close_to(json_number_at(r.output, "epsilon"), 1.0, 1e-4),
            "invert cor1 epsilon near 1");

    r = run(bin + " invert --ineq chernoff_mult --n 4 --p 0.5 --target 0.1");
    REQUIRE(r.exit_code == 2, "invert unreachable target exit code");
  }

  if (g_failures == 0) {
    std::cout << "cli_test: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_test: " << g_failures << " failure(s)\n";
  return 1;
}
