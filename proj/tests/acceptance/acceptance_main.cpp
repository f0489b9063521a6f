// Runs every acceptance criterion at its stated size and tolerance and
// prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "paraprod/experiments.hpp"

using namespace paraprod;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Stats {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::string str(const char* name) const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s in [%.6g, %.6g]", name, lo, hi);
    return buf;
  }
};

ExperimentConfig config(int depth, int trials) {
  ExperimentConfig c;
  c.depth = depth;
  c.trials = trials;
  c.seed = 20261016;
  return c;
}

int failed_count(const std::vector<ReportRecord>& r) {
  return static_cast<int>(std::count_if(r.begin(), r.end(), [](const ReportRecord& x) { return !x.pass; }));
}

Stats stats_of(const std::vector<ReportRecord>& r, const std::string& name) {
  Stats s;
  for (const auto& x : r) {
    for (const auto& [k, v] : x.constants)
      if (k == name) s.add(v);
  }
  return s;
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

std::string failures(const std::vector<ReportRecord>& r) {
  return std::to_string(failed_count(r)) + "/" + std::to_string(r.size()) + " records failed";
}

Outcome identities() {
  const auto cfg = config(6, 20);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_identity_suite(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto res = stats_of(r, "residual");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s", secs);
  return {all_pass(r) && secs < 60.0, join({failures(r), "max residual " + format_value(res.hi), buf})};
}

Outcome norm_law() {
  const auto cfg = config(8, 100);
  Stats err;
  for (int t = 0; t < cfg.trials; ++t) {
    const auto a = random_symbol(cfg, t);
    err.add(std::abs(operator_norm(paraproduct(a, {0, 0})).value - linf_norm(a)));
  }
  return {err.hi <= 1e-8, err.str("|norm - linf|")};
}

Outcome carleson() {
  const auto cfg = config(8, 200);
  Stats ratio;
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    const auto a = random_symbol(cfg, t);
    const double r = operator_norm(paraproduct(a, {0, 1})).value / cm_norm(a);
    ratio.add(r);
    ok = ok && r >= kCarlesonLower && r <= kCarlesonUpper;
  }
  return {ok, ratio.str("ratio")};
}

Outcome from_records(const std::vector<ReportRecord>& r, std::initializer_list<const char*> stats) {
  std::string detail = failures(r);
  for (const char* s : stats) detail = join({detail, stats_of(r, s).str(s)});
  return {all_pass(r), detail};
}

Outcome one_one() { return from_records(run_equivalence(Theorem::c6_oneone, config(7, 200)), {"ratio"}); }

Outcome testing_necessity() {
  const auto a = run_equivalence(Theorem::t3_positive, config(6, 100));
  const auto b = run_equivalence(Theorem::t4_singular, config(6, 100));
  auto r = a;
  r.insert(r.end(), b.begin(), b.end());
  return {all_pass(r), join({failures(r), "positive " + stats_of(a, "ratio").str("ratio"),
                             "singular " + stats_of(b, "ratio").str("ratio")})};
}

Outcome tree() { return from_records(run_tree_testing(config(6, 100)), {"ratio"}); }

Outcome weighted_bases() { return from_records(run_t1_bases(config(5, 100)), {"ratio", "b_block"}); }

Outcome nonnegative() { return from_records(run_equivalence(Theorem::p7_nonneg, config(7, 100)), {"kappa"}); }

Outcome a2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = a2_scan(A2Options{}, config(10, 1));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double p = r.back().get("exponent");
  char buf[96];
  std::snprintf(buf, sizeof buf, "exponent %.4g, %.1f s", p, secs);
  return {all_pass(r) && std::isfinite(p) && p <= kA2ExponentCeiling && secs < 600.0,
          join({failures(r), stats_of(r, "norm").str("norm"), buf})};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact identity suite, D=6, 20 trials, < 60 s", identities},
      {"norm law for type (0,0), D=8, 100 symbols", norm_law},
      {"Carleson window for type (0,1), D=8, 200 symbols", carleson},
      {"type (1,1) two-sided window, D=7, 200 symbols", one_one},
      {"testing necessity for both compositions, D=6, 100 pairs", testing_necessity},
      {"tree two-weight testing, D=6, 100 weight pairs", tree},
      {"weighted-basis testing for the signed kernel, D=5, 100 trials", weighted_bases},
      {"nonnegative symbols bound 2, D=7, 100 symbols", nonnegative},
      {"A2 scan exponent <= 1.3, D=10, < 600 s", a2},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
