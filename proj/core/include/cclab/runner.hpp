#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

namespace cclab {

// Names accepted in RunConfig::analyses; "report" expands to all of
// them. Each analysis owns a fixed set of output files (see README).
inline const std::set<std::string>& all_analyses() {
  static const std::set<std::string> names{
      "classify", "levels", "propagate", "nullify", "impact", "drr", "stats"};
  return names;
}

struct RunConfig {
  std::string corpus_dir;
  std::string out_dir;
  std::set<std::string> analyses;  // subset of all_analyses()
  int bins = 10;
  std::string scale = "linear";  // "linear" | "log"
  std::int64_t budget = 10'000'000;
  int jobs = 1;
};

// Runs the selected analyses over the corpus and writes their report
// files under config.out_dir. Output bytes are independent of
// config.jobs. Progress goes to `out`, warnings to `err`.
//
// Exit status: 0 on success, 1 when the corpus cannot be loaded (the
// error is printed to `err`), 2 when any subject program failed at
// runtime (analyses still complete and subject_errors.csv lists the
// failures; corpus-validation findings are listed too but do not
// affect the status).
int run_corpus(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cclab
