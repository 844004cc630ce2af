#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cclab/runner.hpp"

namespace {

struct CliOptions {
  cclab::RunConfig config;
  bool budget_from_flag = false;
};

// The step budget resolves flag > CCLAB_BUDGET env var > default.
void apply_env_budget(CliOptions& opts) {
  if (opts.budget_from_flag) return;
  const char* env = std::getenv("CCLAB_BUDGET");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1) {
    throw CLI::ValidationError("CCLAB_BUDGET",
                               "must be a positive integer, got '" +
                                   std::string(env) + "'");
  }
  opts.config.budget = static_cast<std::int64_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Coincidental-correctness analysis laboratory: classifies tests of "
      "buggy/fixed program pairs against injected checkers and reports the "
      "downstream effects on fault localization, reduction, and "
      "prioritization."};
  app.require_subcommand(1);

  CliOptions opts;
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"classify", "RIP-classify every test and summarize CC prevalence"},
      {"levels", "Testing levels per test with binned CC prevalence"},
      {"propagate", "Propagation profiles after the first checker firing"},
      {"nullify", "Per-activation infection nullification categories"},
      {"impact", "Suspiciousness, suite reduction, and prioritization"},
      {"drr", "Domain-to-range ratios and masking of the DRR specs"},
      {"stats", "Corpus composition statistics"},
      {"report", "All analyses"},
  };
  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--corpus", opts.config.corpus_dir, "Corpus root directory")
        ->required();
    sub->add_option("--out", opts.config.out_dir, "Output directory")
        ->required();
    sub->add_option("--bins", opts.config.bins, "Histogram bin count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--scale", opts.config.scale, "Level binning scale")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    sub->add_option("--budget", opts.config.budget,
                    "Interpreter step budget per run (overrides CCLAB_BUDGET)")
        ->check(CLI::PositiveNumber)
        ->each([&opts](const std::string&) { opts.budget_from_flag = true; });
    sub->add_option("--jobs", opts.config.jobs, "Worker thread count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
    apply_env_budget(opts);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // non-zero usage problems all map to 1
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  opts.config.analyses =
      chosen == "report" ? cclab::all_analyses() : std::set<std::string>{chosen};

  return cclab::run_corpus(opts.config, std::cout, std::cerr);
}
