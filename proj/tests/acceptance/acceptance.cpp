// Acceptance gate: one self-checking run per criterion, one line of
// output each, nonzero exit when anything fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cclab/boxstats.hpp"
#include "cclab/classify.hpp"
#include "cclab/corpus.hpp"
#include "cclab/fl_impact.hpp"
#include "cclab/info_loss.hpp"
#include "cclab/propagation.hpp"
#include "cclab/rational.hpp"
#include "cclab/state_compare.hpp"
#include "json.hpp"
#include "support/genprog.hpp"
#include "support/randmat.hpp"

using namespace cclab;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
};

void fail(Result& r, const std::string& detail) {
  if (r.ok) {
    r.ok = false;
    r.detail = detail;
  }
}

#define EXPECT(r, cond, detail)        \
  do {                                 \
    if (!(cond)) fail(r, detail);      \
  } while (0)

const Corpus& corpus() {
  static const Corpus c = load_corpus(CCLAB_CORPUS_DIR);
  return c;
}

const nlohmann::json& golden() {
  static const nlohmann::json g = [] {
    std::ifstream in(CCLAB_GOLDEN_JSON);
    if (!in) throw std::runtime_error("cannot open reference data");
    return nlohmann::json::parse(in);
  }();
  return g;
}

// Classification outcomes and coverage for the bundled median
// version, with the wall time of computing them.
struct MedianData {
  std::vector<ClassifyOutcome> outcomes;
  std::map<std::string, RipLabel> labels;
  CoverageMatrix cov;
  double elapsed_s = 0.0;
};

const MedianData& median() {
  static const MedianData d = [] {
    const VersionPair* vp = corpus().find_version("median");
    if (vp == nullptr) throw std::runtime_error("median version missing");
    MedianData m;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CoverageInput> inputs;
    for (const TestCase& t : vp->tests) {
      m.outcomes.push_back(classify_test(*vp, t));
      if (!m.outcomes.back().record) throw std::runtime_error("median subject error");
    }
    for (ClassifyOutcome& oc : m.outcomes) {
      inputs.push_back({oc.record->test, &oc.buggy_trace, oc.record->oracle_pass});
      m.labels[oc.record->test] = oc.record->label;
    }
    m.cov = build_coverage(*vp, inputs);
    const auto t1 = std::chrono::steady_clock::now();
    m.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
    return m;
  }();
  return d;
}

std::size_t stmt_index(const CoverageMatrix& cov, const std::string& stmt) {
  const auto it = std::find(cov.stmts.begin(), cov.stmts.end(), stmt);
  if (it == cov.stmts.end()) throw std::runtime_error("statement missing: " + stmt);
  return static_cast<std::size_t>(it - cov.stmts.begin());
}

CoverageMatrix without_t1(const CoverageMatrix& cov) {
  std::set<std::string> keep(cov.tests.begin(), cov.tests.end());
  keep.erase("t1");
  return submatrix(cov, keep);
}

Result criterion1() {
  Result r;
  const MedianData& m = median();
  const std::vector<std::string> want_stmts{"L1", "L2", "L3", "L4",  "L5",  "L6",
                                            "L10", "L11", "L12", "L13", "L14", "L15"};
  const std::vector<std::string> want_tests{"t1", "t2", "t3", "t4", "t5", "t6"};
  const std::vector<std::string> want_rows{
      "111111", "111111", "110011", "010000", "100011", "100001",
      "001100", "001100", "001000", "000100", "000000", "111111"};
  EXPECT(r, m.cov.stmts == want_stmts, "unexpected statement list");
  EXPECT(r, m.cov.tests == want_tests, "unexpected test list");
  for (std::size_t si = 0; si < want_rows.size() && r.ok; ++si) {
    std::string got;
    for (std::size_t t = 0; t < m.cov.tests.size(); ++t) {
      got += m.cov.covered[si][t] ? '1' : '0';
    }
    EXPECT(r, got == want_rows[si],
           m.cov.stmts[si] + " coverage " + got + " wanted " + want_rows[si]);
  }
  const std::vector<bool> want_verdicts{true, true, true, true, true, false};
  EXPECT(r, m.cov.verdicts == want_verdicts, "unexpected verdicts");
  const std::map<std::string, RipLabel> want_labels{
      {"t1", RipLabel::WeakCC},      {"t2", RipLabel::TruePassing},
      {"t3", RipLabel::TruePassing}, {"t4", RipLabel::TruePassing},
      {"t5", RipLabel::TruePassing}, {"t6", RipLabel::Failing}};
  EXPECT(r, m.labels == want_labels, "unexpected verdict labels");
  EXPECT(r, m.elapsed_s < 1.0,
         "took " + std::to_string(m.elapsed_s) + " s, limit is 1 s");
  return r;
}

Result criterion2() {
  Result r;
  const CoverageMatrix& cov = median().cov;
  const std::size_t si = stmt_index(cov, "L6");
  const double with_t1 = suspiciousness(cov, Metric::Tarantula).scores[si];
  EXPECT(r, std::fabs(with_t1 - 0.833) <= 0.001,
         "defect score with the coincidental pass: " + std::to_string(with_t1));
  const CoverageMatrix sub = without_t1(cov);
  const double wo = suspiciousness(sub, Metric::Tarantula).scores[stmt_index(sub, "L6")];
  EXPECT(r, wo == 1.0, "defect score without it: " + std::to_string(wo));
  return r;
}

Result criterion3() {
  Result r;
  const EnumOutcomes full = greedy_reduce_all(median().cov);
  const std::vector<std::vector<std::string>> want_full{
      {"t1", "t2", "t3", "t4"}, {"t2", "t3", "t4", "t6"}};
  EXPECT(r, !full.truncated, "full enumeration truncated");
  EXPECT(r, full.items == want_full, "unexpected reduced suites with t1");
  const EnumOutcomes dropped = greedy_reduce_all(without_t1(median().cov));
  const std::vector<std::vector<std::string>> want_dropped{{"t2", "t3", "t4", "t6"}};
  EXPECT(r, !dropped.truncated, "reduced enumeration truncated");
  EXPECT(r, dropped.items == want_dropped, "unexpected reduced suites without t1");
  return r;
}

Result criterion4() {
  Result r;
  const EnumOutcomes pri = prioritize_all(without_t1(median().cov));
  EXPECT(r, !pri.truncated && !pri.items.empty(), "no orderings enumerated");
  for (const auto& ordering : pri.items) {
    const auto it = std::find(ordering.begin(), ordering.end(), "t6");
    EXPECT(r, it != ordering.end(), "ordering lost t6");
    if (it != ordering.end()) {
      const auto pos = it - ordering.begin();
      EXPECT(r, pos <= 1, "t6 at position " + std::to_string(pos + 1));
    }
  }
  return r;
}

Result criterion5() {
  Result r;
  std::map<std::string, DrrResult> results;
  for (const DrrSpec& spec : corpus().drr_specs) {
    DrrOutcome oc = drr_result(spec);
    EXPECT(r, oc.result.has_value(), spec.name + " failed to evaluate");
    if (oc.result) results[spec.name] = std::move(*oc.result);
  }
  if (!r.ok) return r;
  EXPECT(r, results.count("S1") && results.count("S2") && results.count("S3"),
         "expected specs S1, S2, S3");
  if (!r.ok) return r;
  EXPECT(r, results["S1"].drr == Rational(1), "S1 ratio");
  EXPECT(r, results["S2"].drr == Rational(5, 3), "S2 ratio");
  EXPECT(r, results["S3"].drr == Rational(5, 2), "S3 ratio");
  const auto mask_of = [&results, &r](const std::string& spec) {
    if (!results[spec].masks.count(4)) fail(r, spec + " has no entry for input 4");
    return results[spec].masks[4];
  };
  const DrrResult::Mask s1 = mask_of("S1");
  const DrrResult::Mask s2 = mask_of("S2");
  const DrrResult::Mask s3 = mask_of("S3");
  if (!r.ok) return r;
  EXPECT(r, !s1.masked, "S1 must not mask input 4");
  EXPECT(r, s2.masked && s2.colliders == std::vector<std::int64_t>{1},
         "S2 colliders for input 4");
  EXPECT(r, s3.masked && s3.colliders == (std::vector<std::int64_t>{3, 5}),
         "S3 colliders for input 4");
  return r;
}

Result criterion6() {
  Result r;
  // Every frozen per-test category must be reproduced from scratch.
  std::map<std::string, std::set<std::string>> version_cats;
  for (const auto& e : golden().at("nullification")) {
    const std::string vid = e.at("version").get<std::string>();
    const std::string tname = e.at("test").get<std::string>();
    const VersionPair* vp = corpus().find_version(vid);
    EXPECT(r, vp != nullptr, "missing version " + vid);
    if (vp == nullptr) continue;
    const TestCase* test = nullptr;
    for (const TestCase& t : vp->tests) {
      if (t.name == tname) test = &t;
    }
    EXPECT(r, test != nullptr, vid + " missing test " + tname);
    if (test == nullptr) continue;
    const CaptureResult res = capture_states(*vp, vp->buggy, vp->fixed, *test);
    EXPECT(r, res.status == CaptureResult::Status::Ok,
           vid + "/" + tname + " not comparable");
    if (res.status != CaptureResult::Status::Ok) continue;
    EXPECT(r, res.n == e.at("n").get<std::int64_t>(),
           vid + "/" + tname + " activation count");
    const std::string cat{to_string(categorize(res.activations))};
    const std::string want = e.at("category").get<std::string>();
    EXPECT(r, cat == want, vid + "/" + tname + " got " + cat + " wanted " + want);
    version_cats[vid].insert(cat);
  }
  // The dedicated nullification versions carry the hand-derived
  // pattern: three all-OUT, two all-IN, one IN_OUT.
  const std::map<std::string, std::set<std::string>> want_cats{
      {"incorpus-v1", {"IN"}},   {"incorpus-v2", {"IN"}},
      {"outcorpus-v1", {"OUT"}}, {"outcorpus-v2", {"OUT"}},
      {"outcorpus-v3", {"OUT"}}, {"inout-v1", {"IN_OUT"}}};
  for (const auto& [vid, cats] : want_cats) {
    EXPECT(r, version_cats.count(vid) && version_cats[vid] == cats,
           vid + " does not match its intended category");
  }
  // Self-comparison: a program diffed against itself never shows a
  // failing activation.
  std::int64_t low_failing = 0;
  for (const auto& e : golden().at("nullification")) {
    const VersionPair* vp = corpus().find_version(e.at("version").get<std::string>());
    if (vp == nullptr) continue;
    for (const TestCase& t : vp->tests) {
      if (t.name != e.at("test").get<std::string>()) continue;
      const CaptureResult self = capture_states(*vp, vp->buggy, vp->buggy, t);
      EXPECT(r, self.status == CaptureResult::Status::Ok, "self-comparison misaligned");
      for (const ActivationRecord& a : self.activations) {
        if (a.label == LowLabel::LowFailing) ++low_failing;
        EXPECT(r, a.equal, "self-comparison states differ");
      }
    }
  }
  EXPECT(r, low_failing == 0,
         std::to_string(low_failing) + " failing self-comparison activations");
  return r;
}

Result criterion7() {
  Result r;
  for (const VersionPair& vp : corpus().versions) {
    for (const TestCase& t : vp.tests) {
      const ClassifyOutcome oc = classify_test(vp, t);
      EXPECT(r, oc.record.has_value(), vp.id + "/" + t.name + " subject error");
      if (!oc.record) continue;
      const std::optional<PropagationProfile> prof = profile_trace(oc.buggy_trace);
      EXPECT(r, prof.has_value() == (oc.record->infect_count > 0),
             vp.id + "/" + t.name + ": profile presence vs infection");
      if (!prof) continue;
      const PropagationProfile::Counter all = (*prof)[ProfileKind::All];
      for (int k = 0; k < kProfileKindCount; ++k) {
        const auto kind = static_cast<ProfileKind>(k);
        const PropagationProfile::Counter c = (*prof)[kind];
        EXPECT(r, c.unique <= c.total, "unique above total");
        EXPECT(r, c.unique <= all.unique && c.total <= all.total,
               "kind bucket above the aggregate");
      }
    }
  }

  // Hand-enumerated counters of the modulo-loop version.
  const VersionPair* vp = corpus().find_version("modloop");
  EXPECT(r, vp != nullptr, "missing version modloop");
  if (vp != nullptr) {
    const auto want = [&r, vp](const std::string& tname, bool has_profile,
                               std::int64_t all_u, std::int64_t all_t,
                               std::int64_t cond_u, std::int64_t cond_t,
                               std::int64_t mod_u, std::int64_t mod_t) {
      const TestCase* test = nullptr;
      for (const TestCase& t : vp->tests) {
        if (t.name == tname) test = &t;
      }
      if (test == nullptr) {
        fail(r, "modloop missing test " + tname);
        return;
      }
      const ClassifyOutcome oc = classify_test(*vp, *test);
      if (!oc.record) {
        fail(r, "modloop/" + tname + " subject error");
        return;
      }
      const auto prof = profile_trace(oc.buggy_trace);
      EXPECT(r, prof.has_value() == has_profile, "modloop/" + tname + " profile presence");
      if (!prof || !has_profile) return;
      const auto check = [&](ProfileKind kind, std::int64_t u, std::int64_t t2) {
        EXPECT(r, (*prof)[kind].unique == u && (*prof)[kind].total == t2,
               "modloop/" + tname + " " + std::string(to_string(kind)) + " counters");
      };
      check(ProfileKind::All, all_u, all_t);
      check(ProfileKind::Conditional, cond_u, cond_t);
      check(ProfileKind::Modulo, mod_u, mod_t);
      check(ProfileKind::Multiplication, 0, 0);
      check(ProfileKind::Division, 0, 0);
      check(ProfileKind::Invocation, 0, 0);
    };
    want("n0", false, 0, 0, 0, 0, 0, 0);
    want("n1", true, 1, 1, 0, 0, 0, 0);
    want("n2", true, 3, 10, 1, 5, 1, 4);
    want("n3", true, 2, 2, 1, 1, 0, 0);
  }

  const BoxStats bs = boxplot_stats({1, 2, 3, 4, 100});
  EXPECT(r, bs.q1 == 2.0, "q1 = " + std::to_string(bs.q1));
  EXPECT(r, bs.q3 == 4.0, "q3 = " + std::to_string(bs.q3));
  EXPECT(r, bs.outliers == std::vector<double>{100.0}, "outliers wrong");
  return r;
}

void check_partition(Result& r, const VersionPair& vp) {
  std::size_t records = 0;
  std::map<RipLabel, std::size_t> counts;
  for (const TestCase& t : vp.tests) {
    const ClassifyOutcome oc = classify_test(vp, t);
    EXPECT(r, !oc.error.has_value(), vp.id + "/" + t.name + " subject error");
    if (!oc.record) continue;
    const ClassificationRecord& rec = *oc.record;
    ++records;
    ++counts[rec.label];
    EXPECT(r, rec.infect_count == 0 || rec.reach_count > 0,
           vp.id + "/" + t.name + ": infection without reach");
    switch (rec.label) {
      case RipLabel::Failing:
        EXPECT(r, !rec.oracle_pass, vp.id + "/" + t.name + ": Failing but passed");
        break;
      case RipLabel::StrongCC:
        EXPECT(r, rec.oracle_pass && rec.infect_count > 0,
               vp.id + "/" + t.name + ": StrongCC conditions");
        break;
      case RipLabel::WeakCC:
        EXPECT(r, rec.oracle_pass && rec.reach_count > 0 && rec.infect_count == 0,
               vp.id + "/" + t.name + ": WeakCC conditions");
        break;
      case RipLabel::TruePassing:
        EXPECT(r, rec.oracle_pass && rec.reach_count == 0,
               vp.id + "/" + t.name + ": TruePassing conditions");
        break;
    }
  }
  std::size_t sum = 0;
  for (const auto& [label, n] : counts) sum += n;
  EXPECT(r, records == vp.tests.size(), vp.id + ": not every test classified");
  EXPECT(r, sum == vp.tests.size(), vp.id + ": label counts do not sum to suite size");
}

Result criterion8() {
  Result r;
  for (const VersionPair& vp : corpus().versions) check_partition(r, vp);
  std::mt19937_64 rng(20260816u);
  testsupport::ProgGen gen(rng);
  for (int i = 0; i < 1000 && r.ok; ++i) {
    const testsupport::ProgramPair pair = gen.generate();
    const VersionPair vp = testsupport::make_version(
        "gen" + std::to_string(i), pair, gen.tests(pair.params));
    check_partition(r, vp);
  }
  return r;
}

Result criterion9() {
  Result r;
  std::mt19937_64 rng(20260816u);
  for (int iter = 0; iter < 500 && r.ok; ++iter) {
    const CoverageMatrix cov = testsupport::random_matrix(rng);
    for (const Metric metric : {Metric::Tarantula, Metric::Jaccard, Metric::Ochiai}) {
      const SuspiciousnessReport before = suspiciousness(cov, metric);
      for (std::size_t t = 0; t < cov.tests.size(); ++t) {
        if (!cov.verdicts[t]) continue;
        std::set<std::string> keep(cov.tests.begin(), cov.tests.end());
        keep.erase(cov.tests[t]);
        const SuspiciousnessReport after = suspiciousness(submatrix(cov, keep), metric);
        for (std::size_t si = 0; si < cov.stmts.size(); ++si) {
          if (!cov.covered[si][t]) continue;
          EXPECT(r, after.scores[si] >= before.scores[si],
                 "matrix " + std::to_string(iter) + " " +
                     std::string(to_string(metric)) + " " + cov.stmts[si] +
                     " drops after removing " + cov.tests[t]);
        }
      }
    }
  }
  return r;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(CCLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
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

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result criterion10() {
  Result r;
  const auto base = fs::temp_directory_path() /
                    ("cclab-accept-" + std::to_string(::getpid()));
  const fs::path dir1 = base / "jobs1";
  const fs::path dir8 = base / "jobs8";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string common =
      std::string("report --corpus ") + CCLAB_CORPUS_DIR + " --out ";

  const auto t0 = std::chrono::steady_clock::now();
  const int code1 = run_cli(common + dir1.string() + " --jobs 1");
  const int code8 = run_cli(common + dir8.string() + " --jobs 8");
  const auto t1 = std::chrono::steady_clock::now();
  const double elapsed = std::chrono::duration<double>(t1 - t0).count();

  EXPECT(r, code1 == 0, "sequential run exited " + std::to_string(code1));
  EXPECT(r, code8 == 0, "parallel run exited " + std::to_string(code8));
  if (!r.ok) return r;

  const auto files1 = files_under(dir1);
  const auto files8 = files_under(dir8);
  EXPECT(r, !files1.empty(), "no report files written");
  EXPECT(r, files1.size() == files8.size(), "runs wrote different file sets");
  for (const auto& [rel, path] : files1) {
    if (!files8.count(rel)) {
      fail(r, "parallel run missing " + rel);
      break;
    }
    if (slurp(path) != slurp(files8.at(rel))) {
      fail(r, rel + " differs between runs");
      break;
    }
  }
  EXPECT(r, elapsed < 60.0,
         "both runs took " + std::to_string(elapsed) + " s, limit is 60 s");
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"median coverage matrix and verdict labels", criterion1},
      {"defect suspiciousness with and without the coincidental pass", criterion2},
      {"enumerated suite reductions", criterion3},
      {"failing test rises in every ordering", criterion4},
      {"domain-to-range ratios and masking", criterion5},
      {"nullification categories and self-comparison", criterion6},
      {"propagation profiles and box statistics", criterion7},
      {"classification partition over corpus and generated programs", criterion8},
      {"metric monotonicity under passing-test removal", criterion9},
      {"deterministic parallel report runs", criterion10},
  };
  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      fail(r, std::string("exception: ") + e.what());
    }
    all_ok = all_ok && r.ok;
    std::cout << (r.ok ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": "
              << criteria[i].first;
    if (!r.ok) std::cout << " — " << r.detail;
    std::cout << '\n';
  }
  return all_ok ? 0 : 1;
}
