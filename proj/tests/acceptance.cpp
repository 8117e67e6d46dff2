// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria. argv[1] is the CLI binary used by the determinism check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "relaybounds/bounds.hpp"
#include "relaybounds/errors.hpp"
#include "relaybounds/verify.hpp"

using namespace relaybounds;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr double kOracleSeconds = 10.0;
constexpr double kLemma3Seconds = 180.0;
constexpr double kAnchorTol = 1e-6;
constexpr double kJointGrid = 1e-2;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string first_failure(const VerifyReport& r) {
  if (r.failures.empty()) return "";
  const auto& f = r.failures.front();
  return " first failure: " + f.check + " " + f.input + " diff=" + g(f.diff);
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = verify_oracle(5, 1000, kSeed);
  const double s = seconds_since(t0);
  return {r.passed() && s < kOracleSeconds, "N<=5, 1000 samples, rel tol " + g(kOracleRelTol) + ", " +
                                                std::to_string(r.failures.size()) + " failures, " + g(s) + " s" +
                                                first_failure(r)};
}

Outcome reduction_identity() {
  int checked = 0, skipped = 0, failed = 0;
  double worst = 0.0;
  for (int N = 1; N <= 5; ++N) {
    const double lo = N >= 2 ? -1.0 / (N - 1.0) : -1.0;
    for (const Cut& cut : enumerate_cuts(N))
      for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
          const double rho1 = -1.0 + 0.1 * i;
          const double rho2 = -1.0 + 0.1 * j;
          if (rho1 < lo - 1e-12 || rho2 < lo - 1e-12) continue;
          const auto v = try_phi(N, cut, {rho1, rho2, 0.0});
          double target;
          try {
            target = psi(N, cut.m, rho2);
          } catch (const DegenerateDenominator&) {
            ++skipped;
            continue;
          }
          if (!v) {
            ++skipped;
            continue;
          }
          ++checked;
          const double d = std::abs(*v - target) / std::max(1.0, std::abs(target));
          worst = std::max(worst, d);
          if (d > kReductionTol) ++failed;
        }
  }
  return {failed == 0 && checked > 0, std::to_string(checked) + " grid points (" + std::to_string(skipped) +
                                          " degenerate skipped), max rel diff " + g(worst) + ", tol " +
                                          g(kReductionTol)};
}

Outcome evenness_and_maxima() {
  const auto r = verify_maxima(5, 1000, kSeed);
  return {r.passed(), "N<=5, 1000 samples; even " + g(kEvenTol) + ", first derivative " + g(kFirstDerivTol) +
                          ", second derivative rel " + g(kSecondDerivRelTol) + ", " +
                          std::to_string(r.failures.size()) + " failures" + first_failure(r)};
}

Outcome lemma3() {
  std::vector<GainTriple> gains;
  for (double a : {0.1, 1.0, 10.0})
    for (double b : {0.1, 1.0, 10.0})
      for (double c : {0.1, 1.0, 10.0}) gains.push_back({a, b, c});
  OptimizerConfig cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = verify_lemma3(3, gains, cfg, kJointGrid);
  const double s = seconds_since(t0);
  std::string worst;
  for (const auto& n : r.notes)
    if (n.rfind("max |joint", 0) == 0) worst = n;
  return {r.passed() && s < kLemma3Seconds, "N<=3, 27 gain triples, zero grid " + g(cfg.grid_step) +
                                                ", joint grid " + g(kJointGrid) + ", " + worst + ", " + g(s) + " s" +
                                                first_failure(r)};
}

Outcome special_cases() {
  const auto r = verify_limits(5);
  return {r.passed(), "N<=5, " + std::to_string(r.samples) + " checks, " + std::to_string(r.failures.size()) +
                          " failures" + first_failure(r)};
}

Outcome eigenvalues() {
  const auto r = verify_eigen(8, 1000, kSeed);
  return {r.passed(), "N<=8, 1000 samples, tol " + g(kEigenTol) + ", " + std::to_string(r.failures.size()) +
                          " failures" + first_failure(r)};
}

Outcome anchors() {
  const OptimizerConfig cfg;
  const double nd1 = nd_bound(1, 1, 1, cfg).value;
  const double l1 = layered_bound({1, 1, 1, 1}, BoundVariant::Lemma2Min, cfg).value;
  const double nd2 = nd_bound(2, 1e6, 1, cfg).value;
  const double limit = 0.5 * std::log2(5.0);
  // value lost by stopping one grid step short of rho = 1
  const double grid_err = limit - 0.5 * std::log2(1.0 + 2.0 * (2.0 - cfg.grid_step));
  const bool ok = std::abs(nd1 - 0.5) <= kAnchorTol && std::abs(l1 - 0.5) <= kAnchorTol &&
                  std::abs(nd2 - limit) <= 2 * grid_err;
  return {ok, "diamond N=1 " + g(nd1) + ", layered N=1 " + g(l1) + ", diamond N=2 r1=1e6 " + g(nd2) + " vs " +
                  g(limit) + " (allowed " + g(2 * grid_err) + ")"};
}

Outcome timeshare() {
  const std::vector<GainTriple> gains = {{10, 1, 1}, {100, 1, 10}, {10, 0.1, 1}, {1, 1, 1}};
  OptimizerConfig cfg;
  cfg.grid_step = kJointGrid;
  bool ok = true;
  std::size_t findings = 0;
  std::string detail;
  for (const auto& gt : gains) {
    const auto r = verify_timeshare_onesided(2, 200, kSeed, gt, cfg);
    ok = ok && r.passed() && r.findings.empty();
    findings += r.findings.size();
    std::string worst;
    for (const auto& n : r.notes)
      if (n.rfind("max (random", 0) == 0) worst = n.substr(n.find(':') + 2);
    detail += " (" + g(gt[0]) + "," + g(gt[1]) + "," + g(gt[2]) + "): max excess " + worst + ";";
    for (const auto& f : r.findings) std::printf("  finding: %s excess=%s\n", f.input.c_str(), g(f.diff).c_str());
  }
  return {ok, "N=2, 200 matrices per gain triple, tol " + g(kTimeshareTol) + ", " + std::to_string(findings) +
                  " findings;" + detail};
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int rc = pclose(p);
  out += "\nexit=" + std::to_string(rc);
  return out;
}

Outcome determinism(const std::string& cli) {
  const std::vector<std::string> commands = {
      " verify --suite oracle --samples 500 --seed 42 --nmax 4",
      " verify --suite maxima --samples 200 --seed 42 --nmax 4 --format json",
      " layered --relays 2 --r1 10 --r2 1 --r3 1 --variant min,theorem2 --rho12-mode joint --grid 0.02 --format json",
      " sweep --param r3 --from 0.1 --to 10 --steps 5 --scale log --relays 2 --r1 1 --r2 1 --grid 0.02",
  };
  for (const auto& c : commands) {
    const std::string a = capture(cli + c + " 2>&1");
    const std::string b = capture(cli + c + " 2>&1");
    if (a != b || a.size() < 16) return {false, "output differs or is empty for:" + c};
  }
  return {true, std::to_string(commands.size()) + " commands run twice, byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"reduction identity", reduction_identity},
      {"evenness and maxima", evenness_and_maxima},
      {"joint vs zero cross correlation", lemma3},
      {"special cases and limits", special_cases},
      {"eigenvalues", eigenvalues},
      {"anchor values", anchors},
      {"one-sided symmetrization", timeshare},
      {"determinism", [&] { return cli.empty() ? Outcome{false, "no CLI path given"} : determinism(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
