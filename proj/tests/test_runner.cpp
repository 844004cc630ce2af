#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cclab/runner.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/paths.hpp"
#include "support/temp_corpus.hpp"

using namespace cclab;
namespace fs = std::filesystem;

namespace {

struct RunOutput {
  fs::path dir;
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunOutput run_into(const std::string& tag, RunConfig cfg) {
  RunOutput r;
  r.dir = testsupport::fresh_dir(tag);
  cfg.out_dir = r.dir.string();
  std::ostringstream out;
  std::ostringstream err;
  r.exit_code = run_corpus(cfg, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

RunConfig bundled_config() {
  RunConfig cfg;
  cfg.corpus_dir = testsupport::corpus_dir();
  cfg.analyses = all_analyses();
  return cfg;
}

// One shared full run over the bundled corpus; every golden
// comparison below reads from its output directory.
const RunOutput& full_run() {
  static const RunOutput run = run_into("runner-full", bundled_config());
  return run;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const fs::path& path) {
  auto all = testsupport::read_csv(path);
  REQUIRE_MESSAGE(!all.empty(), "empty csv: ", path.string());
  Table t;
  t.header = all.front();
  t.rows.assign(all.begin() + 1, all.end());
  return t;
}

Table report_table(const std::string& name,
                   const std::vector<std::string>& header) {
  Table t = read_table(full_run().dir / name);
  REQUIRE_MESSAGE(t.header == header, name, ": unexpected header");
  for (const auto& row : t.rows) REQUIRE(row.size() == header.size());
  return t;
}

// Normalizes a golden scalar to the string its CSV field carries:
// null -> empty, bool -> true/false, int -> decimal, string as is.
std::string gstr(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return std::to_string(v.get<std::int64_t>());
}

std::string join(const std::vector<std::string>& fields) {
  std::string s;
  for (const auto& f : fields) {
    s += f;
    s += '|';
  }
  return s;
}

// Builds one joined want-row from a golden object, taking fields in
// CSV column order. Missing keys render as empty fields.
std::string grow(const nlohmann::json& e, const std::vector<std::string>& keys) {
  std::vector<std::string> fields;
  fields.reserve(keys.size());
  for (const auto& k : keys) {
    fields.push_back(e.contains(k) ? gstr(e.at(k)) : "");
  }
  return join(fields);
}

void check_rows(const std::string& what, std::vector<std::string> got,
                std::vector<std::string> want, bool ordered) {
  if (!ordered) {
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
  }
  INFO(what, ": ", got.size(), " rows vs ", want.size(), " golden rows");
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    INFO(what, " row ", i, ": got [", got[i], "] want [", want[i], "]");
    REQUIRE(got[i] == want[i]);
  }
}

// Compares a whole report CSV against a golden array, matching CSV
// columns to golden keys positionally.
void check_table(const std::string& name, const std::vector<std::string>& header,
                 const nlohmann::json& golden,
                 const std::vector<std::string>& golden_keys, bool ordered,
                 const std::vector<std::string>& extra_prefix = {}) {
  const Table t = report_table(name, header);
  std::vector<std::string> got;
  got.reserve(t.rows.size());
  for (const auto& row : t.rows) got.push_back(join(row));
  std::vector<std::string> want;
  want.reserve(golden.size());
  for (const auto& e : golden) {
    std::string w = join(extra_prefix);
    w += grow(e, golden_keys);
    want.push_back(std::move(w));
  }
  check_rows(name, std::move(got), std::move(want), ordered);
}

std::map<std::string, fs::path> files_under(const fs::path& root) {
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out.emplace(fs::relative(entry.path(), root).generic_string(), entry.path());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("full report run succeeds and reports progress per analysis") {
  const RunOutput& r = full_run();
  CHECK(r.exit_code == 0);
  CHECK(r.err == "");
  for (const std::string& name : all_analyses()) {
    INFO("missing progress line for ", name);
    CHECK(r.out.find(name + ":") != std::string::npos);
  }
}

TEST_CASE("classification report matches the frozen reference") {
  check_table("classification.csv",
              {"version", "test", "label", "reach_count", "infect_count",
               "oracle_pass", "in_tbug"},
              testsupport::load_golden().at("classification"),
              {"version", "test", "label", "reach_count", "infect_count",
               "oracle_pass", "in_tbug"},
              /*ordered=*/false);
}

TEST_CASE("prevalence report matches the frozen reference") {
  const auto got = nlohmann::json::parse(
      testsupport::read_file(full_run().dir / "prevalence.json"));
  CHECK(got == testsupport::load_golden().at("prevalence"));
}

TEST_CASE("levels report matches the frozen reference") {
  check_table("levels.csv", {"version", "test", "level_count", "level_freq"},
              testsupport::load_golden().at("levels"),
              {"version", "test", "level_count", "level_freq"},
              /*ordered=*/false);
}

TEST_CASE("level histogram matches the frozen reference") {
  const auto g = testsupport::load_golden();
  const std::string scale = g.at("meta").at("scale").get<std::string>();
  const Table t = report_table(
      "level_bins.csv", {"mode", "scale", "bin_index", "lo", "hi", "fail",
                         "strong", "weak", "strong_over_fail", "weak_over_fail",
                         "cc_over_fail"});
  for (const char* mode : {"count", "freq"}) {
    std::vector<std::string> got;
    for (const auto& row : t.rows) {
      if (row[0] == mode) got.push_back(join(row));
    }
    std::vector<std::string> want;
    for (const auto& e : g.at("level_bins").at(mode)) {
      std::string w = join({mode, scale});
      w += grow(e, {"bin_index", "lo", "hi", "fail", "strong", "weak",
                    "strong_over_fail", "weak_over_fail", "cc_over_fail"});
      want.push_back(std::move(w));
    }
    check_rows(std::string("level_bins[") + mode + "]", std::move(got),
               std::move(want), /*ordered=*/true);
  }
}

TEST_CASE("level box summaries match the frozen reference") {
  check_table("level_box.csv",
              {"group", "measure", "n", "min", "q1", "median", "q3", "max",
               "whisker_low", "whisker_high", "outlier_count"},
              testsupport::load_golden().at("level_box"),
              {"group", "measure", "n", "min", "q1", "median", "q3", "max",
               "whisker_low", "whisker_high", "outlier_count"},
              /*ordered=*/true);
}

TEST_CASE("propagation report matches the frozen reference") {
  check_table("propagation.csv",
              {"version", "test", "label", "kind", "unique", "total"},
              testsupport::load_golden().at("propagation"),
              {"version", "test", "label", "kind", "unique", "total"},
              /*ordered=*/false);
}

TEST_CASE("propagation box summaries match the frozen reference") {
  const auto g = testsupport::load_golden();
  std::map<std::string, std::string> want;
  for (const auto& e : g.at("propagation_box")) {
    const std::string key = gstr(e.at("label")) + "|" + gstr(e.at("kind")) +
                            "|" + gstr(e.at("counter"));
    want[key] = grow(e, {"n", "min", "q1", "median", "q3", "max",
                         "whisker_low", "whisker_high", "outlier_count"});
  }
  const Table t = report_table(
      "propagation_box.csv",
      {"label", "kind", "counter", "n", "min", "q1", "median", "q3", "max",
       "whisker_low", "whisker_high", "outlier_count"});
  CHECK(t.rows.size() == 24);
  for (const auto& row : t.rows) {
    const std::string key = row[0] + "|" + row[1] + "|" + row[2];
    const std::string got =
        join(std::vector<std::string>(row.begin() + 3, row.end()));
    const auto it = want.find(key);
    INFO("group ", key, ": got [", got, "]");
    if (it == want.end()) {
      // The file keeps a row for every group; a group absent from the
      // reference must be empty here.
      CHECK(row[3] == "0");
    } else {
      CHECK(got == it->second);
    }
  }
}

TEST_CASE("nullification report matches the frozen reference") {
  check_table("nullification.csv", {"version", "test", "N", "category"},
              testsupport::load_golden().at("nullification"),
              {"version", "test", "n", "category"},
              /*ordered=*/false);
}

TEST_CASE("activation state dumps match the frozen reference") {
  const auto g = testsupport::load_golden();
  for (const auto& e : g.at("nullification")) {
    for (const auto& act : e.at("activations")) {
      const fs::path p = full_run().dir / "states" /
                         e.at("version").get<std::string>() /
                         e.at("test").get<std::string>() /
                         (std::to_string(act.at("i").get<std::int64_t>()) + ".json");
      INFO("state file ", p.string());
      REQUIRE(fs::exists(p));
      const auto got = nlohmann::json::parse(testsupport::read_file(p));
      CHECK(got == act);
    }
  }
}

TEST_CASE("nullification summary matches the frozen reference") {
  check_table("nullification_summary.csv",
              {"version", "t_cchigh", "avg_n", "in", "out", "in_out",
               "anomalous", "misaligned"},
              testsupport::load_golden().at("nullification_summary"),
              {"version", "t_cchigh", "avg_n", "in", "out", "in_out",
               "anomalous", "misaligned"},
              /*ordered=*/true);
}

TEST_CASE("information-loss report matches the frozen reference") {
  check_table("drr.csv",
              {"spec", "domain_size", "range_size", "drr", "masking_rate"},
              testsupport::load_golden().at("drr"),
              {"spec", "domain_size", "range_size", "drr", "masking_rate"},
              /*ordered=*/true);
}

TEST_CASE("suspiciousness report matches the frozen reference") {
  check_table("suspiciousness.csv",
              {"version", "variant", "metric", "stmt", "score", "defect_rank"},
              testsupport::load_golden().at("suspiciousness"),
              {"version", "variant", "metric", "stmt", "score", "defect_rank"},
              /*ordered=*/false);
}

TEST_CASE("reduction and prioritization reports match the frozen reference") {
  const auto g = testsupport::load_golden();
  const std::vector<std::string> header{"version", "variant", "outcome_index",
                                        "tests", "truncated"};
  struct Spec {
    const char* file;
    const char* golden_key;
    const char* list_key;
  };
  for (const Spec spec : {Spec{"reduction.csv", "reduction", "outcomes"},
                          Spec{"prioritization.csv", "prioritization",
                               "orderings"}}) {
    const Table t = report_table(spec.file, header);
    std::map<std::string, std::map<std::int64_t, std::string>> got;
    std::map<std::string, std::string> got_trunc;
    for (const auto& row : t.rows) {
      const std::string key = row[0] + "|" + row[1];
      got[key][std::stoll(row[2])] = row[3];
      got_trunc[key] = row[4];
    }
    std::map<std::string, std::vector<std::string>> want;
    std::map<std::string, std::string> want_trunc;
    for (const auto& e : g.at(spec.golden_key)) {
      const std::string key = gstr(e.at("version")) + "|" + gstr(e.at("variant"));
      std::vector<std::string> lists;
      for (const auto& item : e.at(spec.list_key)) {
        std::string s;
        for (const auto& name : item) {
          if (!s.empty()) s += ' ';
          s += name.get<std::string>();
        }
        lists.push_back(std::move(s));
      }
      want[key] = std::move(lists);
      want_trunc[key] = e.at("truncated").get<bool>() ? "true" : "false";
    }
    INFO(spec.file);
    REQUIRE(got.size() == want.size());
    for (const auto& [key, indexed] : got) {
      INFO(spec.file, " entry ", key);
      REQUIRE(want.count(key) == 1);
      std::vector<std::string> flat;
      flat.reserve(indexed.size());
      std::int64_t expect_index = 0;
      for (const auto& [idx, tests] : indexed) {
        CHECK(idx == expect_index++);  // contiguous from zero
        flat.push_back(tests);
      }
      CHECK(flat == want.at(key));
      CHECK(got_trunc.at(key) == want_trunc.at(key));
    }
  }
}

TEST_CASE("corpus statistics match the frozen reference") {
  check_table("corpus_stats.csv",
              {"group", "versions", "t_min", "t_max", "t_avg", "t_sum",
               "tbug_min", "tbug_max", "tbug_avg", "tbug_sum"},
              testsupport::load_golden().at("corpus_stats"),
              {"group", "versions", "t_min", "t_max", "t_avg", "t_sum",
               "tbug_min", "tbug_max", "tbug_avg", "tbug_sum"},
              /*ordered=*/true);
}

TEST_CASE("the bundled corpus produces no subject errors") {
  const Table t =
      report_table("subject_errors.csv", {"version", "test", "phase", "reason"});
  CHECK(t.rows.empty());
}

TEST_CASE("parallel runs write byte-identical reports") {
  RunConfig cfg = bundled_config();
  cfg.jobs = 8;
  const RunOutput par = run_into("runner-jobs8", cfg);
  REQUIRE(par.exit_code == 0);
  const auto seq_files = files_under(full_run().dir);
  const auto par_files = files_under(par.dir);
  REQUIRE(seq_files.size() == par_files.size());
  for (const auto& [rel, path] : seq_files) {
    INFO("file ", rel);
    REQUIRE(par_files.count(rel) == 1);
    CHECK(testsupport::read_file(path) ==
          testsupport::read_file(par_files.at(rel)));
  }
}

TEST_CASE("analysis selection controls which files are written") {
  RunConfig cfg = bundled_config();
  cfg.analyses = {"classify", "drr"};
  const RunOutput r = run_into("runner-select", cfg);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(r.dir / "classification.csv"));
  CHECK(fs::exists(r.dir / "prevalence.json"));
  CHECK(fs::exists(r.dir / "drr.csv"));
  CHECK(fs::exists(r.dir / "subject_errors.csv"));  // always written
  CHECK(!fs::exists(r.dir / "levels.csv"));
  CHECK(!fs::exists(r.dir / "level_bins.csv"));
  CHECK(!fs::exists(r.dir / "level_box.csv"));
  CHECK(!fs::exists(r.dir / "propagation.csv"));
  CHECK(!fs::exists(r.dir / "propagation_box.csv"));
  CHECK(!fs::exists(r.dir / "nullification.csv"));
  CHECK(!fs::exists(r.dir / "nullification_summary.csv"));
  CHECK(!fs::exists(r.dir / "states"));
  CHECK(!fs::exists(r.dir / "suspiciousness.csv"));
  CHECK(!fs::exists(r.dir / "reduction.csv"));
  CHECK(!fs::exists(r.dir / "prioritization.csv"));
  CHECK(!fs::exists(r.dir / "corpus_stats.csv"));
}

TEST_CASE("a missing corpus reports a load error") {
  RunConfig cfg;
  cfg.corpus_dir =
      (testsupport::fresh_dir("runner-missing") / "nowhere").string();
  cfg.analyses = all_analyses();
  const RunOutput r = run_into("runner-missing-out", cfg);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("corpus error") != std::string::npos);
}

TEST_CASE("a runaway subject is reported without sinking other versions") {
  const auto root = testsupport::scratch_corpus(
      "runner-runaway",
      {testsupport::simple_version("v1", "v1"), testsupport::runaway_version()});
  RunConfig cfg;
  cfg.corpus_dir = root.string();
  cfg.analyses = all_analyses();
  cfg.budget = 100000;
  const RunOutput r = run_into("runner-runaway-out", cfg);
  CHECK(r.exit_code == 2);

  const Table errors = read_table(r.dir / "subject_errors.csv");
  int runaway_rows = 0;
  bool unobservable_noted = false;
  for (const auto& row : errors.rows) {
    if (row[0] == "v2" && row[2] == "buggy") {
      ++runaway_rows;
      CHECK(row[3].find("budget") != std::string::npos);
    }
    if (row[0] == "v2" && row[2] == "validate") unobservable_noted = true;
  }
  CHECK(runaway_rows == 2);  // both of v2's tests hit the budget
  CHECK(unobservable_noted);  // no surviving test observes v2's defect

  const Table cls = read_table(r.dir / "classification.csv");
  int v1_rows = 0;
  int v2_rows = 0;
  for (const auto& row : cls.rows) {
    if (row[0] == "v1") ++v1_rows;
    if (row[0] == "v2") ++v2_rows;
  }
  CHECK(v1_rows == 2);  // the healthy version is fully classified
  CHECK(v2_rows == 0);  // errored tests produce no records
}

TEST_CASE("the step budget is wired through to subject runs") {
  const auto root = testsupport::scratch_corpus("runner-budget",
                                                {testsupport::simple_version()});
  RunConfig cfg;
  cfg.corpus_dir = root.string();
  cfg.analyses = {"classify"};
  cfg.budget = 3;
  const RunOutput tight = run_into("runner-budget-tight", cfg);
  CHECK(tight.exit_code == 2);

  cfg.budget = 10'000'000;
  const RunOutput roomy = run_into("runner-budget-roomy", cfg);
  CHECK(roomy.exit_code == 0);
}

TEST_CASE("declared expected output is validated against the fixed program") {
  testsupport::ScratchVersion v = testsupport::simple_version();
  v.tests_json =
      "[ { \"name\": \"z\", \"args\": [0], \"expected_output\": [0] },\n"
      "  { \"name\": \"one\", \"args\": [1], \"expected_output\": [99] } ]\n";
  const auto root = testsupport::scratch_corpus("runner-validate", {v});
  RunConfig cfg;
  cfg.corpus_dir = root.string();
  cfg.analyses = {"classify"};
  const RunOutput r = run_into("runner-validate-out", cfg);
  CHECK(r.exit_code == 0);  // validation findings never change the status
  const Table errors = read_table(r.dir / "subject_errors.csv");
  REQUIRE(errors.rows.size() == 1);
  CHECK(errors.rows[0][0] == "v1");
  CHECK(errors.rows[0][1] == "one");
  CHECK(errors.rows[0][2] == "validate");
}

TEST_CASE("a failing test that never reaches the defect draws a warning") {
  testsupport::ScratchVersion v = testsupport::simple_version();
  v.buggy_src =
      "fn main(n) {\n"
      "  let y = n * 2;\n"
      "  if (0 < 0) {\n"
      "    probe \"W1\";\n"
      "    check \"S1\" { let good = n * 3; } when (y != good);\n"
      "  }\n"
      "  output(y);\n"
      "}\n";
  const auto root = testsupport::scratch_corpus("runner-anomalous", {v});
  RunConfig cfg;
  cfg.corpus_dir = root.string();
  cfg.analyses = {"classify"};
  const RunOutput r = run_into("runner-anomalous-out", cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
  CHECK(r.err.find("never reached the defect") != std::string::npos);
  // The record keeps its Failing label.
  const Table cls = read_table(r.dir / "classification.csv");
  bool found = false;
  for (const auto& row : cls.rows) {
    if (row[1] == "one") {
      found = true;
      CHECK(row[2] == "Failing");
      CHECK(row[3] == "0");
    }
  }
  CHECK(found);
}
