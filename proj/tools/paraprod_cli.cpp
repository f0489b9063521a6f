// Command-line driver for the paraproduct experiments.
//
//   paraprod identities [--depth D --trials N --seed S]
//   paraprod equivalence --theorem t1|t2|t3|t4|c6|p7 [...]
//   paraprod tree-testing | t1-bases [...]
//   paraprod a2-scan --alphas -0.5,0,0.5 --depth 10 [--full-shift]
//   paraprod emit --format csv|jsonl --out PATH [--experiments identities,t2,...]
//
// Exit status is 0 iff every record passes.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "paraprod/paraprod.hpp"

using namespace paraprod;

namespace {

struct Flags {
  std::string config_path;
  std::optional<int> depth;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kind;
  std::optional<double> tolerance;
  std::optional<double> ceiling;
  std::string format = "csv";
  std::string out;
};

ExperimentConfig resolve(const Flags& f, ExperimentConfig cfg) {
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) throw std::runtime_error("cannot open config " + f.config_path);
    cfg = config_from_json(Json::parse(is), cfg);
  }
  if (f.depth) cfg.depth = *f.depth;
  if (f.trials) cfg.trials = *f.trials;
  if (f.seed) cfg.seed = *f.seed;
  if (f.kind) cfg.symbol_kind = symbol_kind_from_string(*f.kind);
  if (f.tolerance) cfg.tolerance = *f.tolerance;
  if (f.ceiling) cfg.ceiling = *f.ceiling;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "flat JSON config file");
  app->add_option("--depth", f.depth, "tree depth D");
  app->add_option("--trials", f.trials, "number of trials");
  app->add_option("--seed", f.seed, "64-bit seed");
  app->add_option("--kind", f.kind, "gaussian|sparse|lacunary|carleson_normalized");
  app->add_option("--tolerance", f.tolerance, "identity tolerance");
  app->add_option("--ceiling", f.ceiling, "ratio sanity ceiling (0 = default)");
  app->add_option("--format", f.format, "csv|jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app->add_option("--out", f.out, "report path (stdout when empty)");
}

std::vector<ReportRecord> run_named(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "identities") return run_identity_suite(cfg);
  if (name == "tree-testing") return run_tree_testing(cfg);
  if (name == "t1-bases") return run_t1_bases(cfg);
  if (name == "a2-scan") return a2_scan({}, cfg);
  return run_equivalence(theorem_from_string(name), cfg);
}

void summarize(const std::vector<ReportRecord>& records) {
  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& r : records) {
    auto& [pass, total] = tally[r.experiment];
    pass += r.pass;
    ++total;
  }
  for (const auto& [name, pt] : tally) {
    std::cerr << name << ": " << pt.first << "/" << pt.second << " pass\n";
  }
}

int finish(const std::vector<ReportRecord>& records, const Flags& f) {
  const auto fmt = report_format_from_string(f.format);
  if (f.out.empty()) {
    if (fmt == ReportFormat::csv) write_csv(std::cout, records);
    else write_jsonl(std::cout, records);
  } else {
    report_emit(records, fmt, f.out);
  }
  summarize(records);
  return all_pass(records) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic paraproduct experiments"};
  app.require_subcommand(1);

  Flags identities_f, equivalence_f, tree_f, bases_f, a2_f, emit_f;
  std::string theorem;
  std::vector<double> alphas{-0.9, -0.5, 0.0, 0.5, 0.9};
  bool full_shift = false;
  std::vector<std::string> experiments{"identities", "t1", "t2", "t3", "t4", "c6", "p7", "tree-testing", "t1-bases"};

  auto* identities = app.add_subcommand("identities", "exact identity suite");
  add_common(identities, identities_f);

  auto* equivalence = app.add_subcommand("equivalence", "randomized norm equivalences");
  add_common(equivalence, equivalence_f);
  equivalence->add_option("--theorem", theorem, "t1|t2|t3|t4|c6|p7")
      ->required()
      ->check(CLI::IsMember({"t1", "t2", "t3", "t4", "c6", "p7"}));

  auto* tree = app.add_subcommand("tree-testing", "tree two-weight testing constants");
  add_common(tree, tree_f);

  auto* bases = app.add_subcommand("t1-bases", "weighted testing for the signed tile operator");
  add_common(bases, bases_f);

  auto* a2 = app.add_subcommand("a2-scan", "weighted shift norms against [w]_A2");
  add_common(a2, a2_f);
  a2->add_option("--alphas", alphas, "power-weight exponents in (-1,1)")->delimiter(',');
  a2->add_flag("--full-shift", full_shift, "use h_I -> h_{I-} - h_{I+} instead of the half shift");

  auto* emit = app.add_subcommand("emit", "run several experiments into one report");
  add_common(emit, emit_f);
  emit->add_option("--experiments", experiments, "comma-separated experiment names")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (identities->parsed()) {
      ExperimentConfig base;
      base.depth = 4;
      return finish(run_identity_suite(resolve(identities_f, base)), identities_f);
    }
    if (equivalence->parsed()) {
      return finish(run_equivalence(theorem_from_string(theorem), resolve(equivalence_f, {})), equivalence_f);
    }
    if (tree->parsed()) return finish(run_tree_testing(resolve(tree_f, {})), tree_f);
    if (bases->parsed()) return finish(run_t1_bases(resolve(bases_f, {})), bases_f);
    if (a2->parsed()) {
      ExperimentConfig base;
      base.depth = 10;
      return finish(a2_scan({alphas, full_shift}, resolve(a2_f, base)), a2_f);
    }
    if (emit->parsed()) {
      const auto cfg = resolve(emit_f, {});
      std::vector<ReportRecord> all;
      for (const auto& name : experiments) {
        auto part = run_named(name, cfg);
        all.insert(all.end(), part.begin(), part.end());
      }
      return finish(all, emit_f);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
