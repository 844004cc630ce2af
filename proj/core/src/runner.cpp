#include "cclab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>
#include <utility>
#include <vector>

#include "cclab/boxstats.hpp"
#include "cclab/classify.hpp"
#include "cclab/corpus.hpp"
#include "cclab/fl_impact.hpp"
#include "cclab/info_loss.hpp"
#include "cclab/levels.hpp"
#include "cclab/propagation.hpp"
#include "cclab/report.hpp"
#include "cclab/state_compare.hpp"

namespace fs = std::filesystem;

namespace cclab {

namespace {

struct TestRef {
  const VersionPair* vp;
  const TestCase* test;
};

// Classification results for every (version, test) pair, computed
// once and shared by all analyses. `outcomes` is indexed in version
// order (sorted by id) then test order (suite order), so downstream
// folds are deterministic regardless of how many workers filled it.
struct Classified {
  std::vector<TestRef> refs;
  std::vector<ClassifyOutcome> outcomes;
};

Classified classify_all(const Corpus& corpus, const RunLimits& limits, int jobs) {
  Classified cl;
  for (const VersionPair& vp : corpus.versions) {
    for (const TestCase& t : vp.tests) {
      cl.refs.push_back({&vp, &t});
    }
  }
  cl.outcomes.resize(cl.refs.size());
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cl.refs.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < cl.refs.size(); ++i) {
      cl.outcomes[i] = classify_test(*cl.refs[i].vp, *cl.refs[i].test, limits);
    }
    return cl;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&cl, &limits, &next] {
      for (std::size_t i = next.fetch_add(1); i < cl.refs.size();
           i = next.fetch_add(1)) {
        cl.outcomes[i] = classify_test(*cl.refs[i].vp, *cl.refs[i].test, limits);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return cl;
}

// A record plus everything downstream analyses need alongside it.
struct RecordView {
  const VersionPair* vp;
  const TestCase* test;
  const ClassificationRecord* rec;
  const Trace* buggy;
  const Trace* fixed;
};

bool by_version_test(const RecordView& a, const RecordView& b) {
  if (a.rec->version != b.rec->version) return a.rec->version < b.rec->version;
  return a.rec->test < b.rec->test;
}

std::vector<double> to_doubles(const std::vector<std::int64_t>& xs) {
  std::vector<double> ds;
  ds.reserve(xs.size());
  for (std::int64_t x : xs) ds.push_back(static_cast<double>(x));
  return ds;
}

}  // namespace

int run_corpus(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Corpus corpus;
  try {
    corpus = load_corpus(config.corpus_dir);
  } catch (const CorpusError& e) {
    err << "corpus error: " << e.what() << '\n';
    return 1;
  }

  RunLimits limits;
  limits.step_budget = config.budget;

  const auto& selected = config.analyses;
  auto wants = [&selected](const char* name) { return selected.count(name) > 0; };
  fs::create_directories(config.out_dir);
  auto path_of = [&config](const char* name) {
    return (fs::path(config.out_dir) / name).string();
  };

  Classified cl = classify_all(corpus, limits, config.jobs);

  std::vector<SubjectError> errors;
  std::vector<RecordView> views;
  for (std::size_t i = 0; i < cl.refs.size(); ++i) {
    ClassifyOutcome& oc = cl.outcomes[i];
    if (oc.error) {
      errors.push_back(*oc.error);
    } else if (oc.record) {
      views.push_back({cl.refs[i].vp, cl.refs[i].test, &*oc.record,
                       &oc.buggy_trace, &oc.fixed_trace});
    }
  }
  const bool subject_failures = !errors.empty();

  // Corpus validation findings ride in the same table, first.
  std::vector<SubjectError> issues;
  for (const VersionPair& vp : corpus.versions) {
    bool observable = false;
    for (const RecordView& v : views) {
      if (v.vp != &vp) continue;
      if (!v.rec->oracle_pass) observable = true;
      if (v.test->expected && v.fixed->output != *v.test->expected) {
        issues.push_back({vp.id, v.test->name, "validate",
                          "fixed output does not match declared expected output"});
      }
    }
    if (!observable) {
      issues.push_back({vp.id, "", "validate", "defect not observable by any test"});
    }
  }

  for (const RecordView& v : views) {
    if (v.rec->anomalous_failing()) {
      err << "warning: " << v.rec->version << "/" << v.rec->test
          << ": failing test never reached the defect "
             "(mis-sited checker or unstable oracle)\n";
    }
  }

  std::vector<RecordView> sorted_views = views;
  std::sort(sorted_views.begin(), sorted_views.end(), by_version_test);

  std::vector<ClassificationRecord> records;
  records.reserve(sorted_views.size());
  for (const RecordView& v : sorted_views) records.push_back(*v.rec);

  if (wants("classify")) {
    write_classification_csv(path_of("classification.csv"), records);
    write_prevalence_json(path_of("prevalence.json"), summarize(records));
    out << "classify: " << records.size() << " tests across "
        << corpus.versions.size() << " versions\n";
  }

  if (wants("levels")) {
    std::vector<LevelRecord> levels;
    levels.reserve(sorted_views.size());
    for (const RecordView& v : sorted_views) {
      levels.push_back(compute_levels(v.rec->version, v.rec->test,
                                      v.vp->buggy.entry, *v.buggy));
    }
    write_levels_csv(path_of("levels.csv"), levels);

    if (!levels.empty()) {
      if (config.scale == "log") {
        write_level_bins_log_csv(
            path_of("level_bins.csv"),
            bin_levels_log(levels, records, LevelMeasure::Count, config.bins),
            bin_levels_log(levels, records, LevelMeasure::Freq, config.bins));
      } else {
        write_level_bins_csv(
            path_of("level_bins.csv"),
            bin_levels(levels, records, LevelMeasure::Count, config.bins),
            bin_levels(levels, records, LevelMeasure::Freq, config.bins));
      }
    } else {
      write_level_bins_csv(path_of("level_bins.csv"), {}, {});
    }

    std::map<std::string, std::string> group_of;
    for (const CorpusGroup& g : corpus.groups) {
      for (const std::string& vid : g.version_ids) group_of[vid] = g.name;
    }
    std::vector<LevelBoxRow> box_rows;
    std::set<std::string> group_names;
    for (const CorpusGroup& g : corpus.groups) group_names.insert(g.name);
    for (const std::string& gname : group_names) {
      for (const char* measure : {"count", "freq"}) {
        std::vector<double> samples;
        for (const LevelRecord& l : levels) {
          if (group_of[l.version] != gname) continue;
          samples.push_back(static_cast<double>(
              measure == std::string("count") ? l.level_count : l.level_freq));
        }
        if (samples.empty()) continue;  // group with no classified tests
        box_rows.push_back({gname, measure, boxplot_stats(samples)});
      }
    }
    write_level_box_csv(path_of("level_box.csv"), box_rows);
    out << "levels: " << levels.size() << " rows\n";
  }

  if (wants("propagate")) {
    struct Profiled {
      RipLabel label;
      PropagationProfile prof;
    };
    std::vector<PropagationRow> rows;
    std::vector<Profiled> profiles;
    for (const RecordView& v : sorted_views) {
      std::optional<PropagationProfile> prof = profile_trace(*v.buggy);
      if (!prof) continue;
      profiles.push_back({v.rec->label, *prof});
      for (std::size_t k = 0; k < kProfileKindCount; ++k) {
        const auto kind = static_cast<ProfileKind>(k);
        rows.push_back({v.rec->version, v.rec->test, v.rec->label, kind,
                        (*prof)[kind].unique, (*prof)[kind].total});
      }
    }
    write_propagation_csv(path_of("propagation.csv"), rows);

    std::vector<PropagationBoxRow> box_rows;
    for (RipLabel label : {RipLabel::Failing, RipLabel::StrongCC}) {
      for (std::size_t k = 0; k < kProfileKindCount; ++k) {
        const auto kind = static_cast<ProfileKind>(k);
        for (const char* counter : {"unique", "total"}) {
          std::vector<std::int64_t> samples;
          for (const Profiled& p : profiles) {
            if (p.label != label) continue;
            samples.push_back(counter == std::string("unique")
                                  ? p.prof[kind].unique
                                  : p.prof[kind].total);
          }
          PropagationBoxRow row{label, kind, counter, std::nullopt};
          if (!samples.empty()) row.stats = boxplot_stats(to_doubles(samples));
          box_rows.push_back(std::move(row));
        }
      }
    }
    write_propagation_box_csv(path_of("propagation_box.csv"), box_rows);
    out << "propagate: " << profiles.size() << " profiles\n";
  }

  if (wants("nullify")) {
    std::vector<NullificationRow> rows;
    std::vector<NullificationSummaryRow> summary;
    for (const VersionPair& vp : corpus.versions) {
      std::vector<const TestCase*> strong_tests;
      for (const RecordView& v : views) {
        if (v.vp == &vp && v.rec->label == RipLabel::StrongCC) {
          strong_tests.push_back(v.test);
        }
      }
      std::sort(strong_tests.begin(), strong_tests.end(),
                [](const TestCase* a, const TestCase* b) { return a->name < b->name; });

      NullificationSummaryRow sum;
      sum.version = vp.id;
      sum.t_cchigh = static_cast<std::int64_t>(strong_tests.size());
      std::int64_t n_total = 0, n_count = 0;
      for (const TestCase* t : strong_tests) {
        CaptureResult res = capture_states(vp, vp.buggy, vp.fixed, *t, limits);
        NullificationRow row;
        row.version = vp.id;
        row.test = t->name;
        if (res.status != CaptureResult::Status::Ok) {
          // Recursive defect functions (and the never-expected error
          // case) cannot be activation-aligned either; all report as
          // MISALIGNED with the activation count we could establish.
          row.n = res.n;
          row.category = NullCategory::Misaligned;
          ++sum.misaligned;
        } else {
          row.n = res.n;
          row.category = categorize(res.activations);
          row.activations = std::move(res.activations);
          n_total += row.n;
          ++n_count;
          switch (row.category) {
            case NullCategory::In: ++sum.in; break;
            case NullCategory::Out: ++sum.out; break;
            case NullCategory::InOut: ++sum.in_out; break;
            case NullCategory::Anomalous: ++sum.anomalous; break;
            case NullCategory::Misaligned: break;
          }
          write_states_json(path_of("states"), row);
        }
        rows.push_back(std::move(row));
      }
      if (n_count > 0) sum.avg_n = Rational(n_total, n_count);
      summary.push_back(std::move(sum));
    }
    write_nullification_csv(path_of("nullification.csv"), rows);
    write_nullification_summary_csv(path_of("nullification_summary.csv"), summary);
    out << "nullify: " << rows.size() << " strong-CC tests\n";
  }

  if (wants("impact")) {
    std::vector<SuspiciousnessRow> susp_rows;
    std::vector<OutcomeRow> reduction_rows;
    std::vector<OutcomeRow> prioritization_rows;
    for (const VersionPair& vp : corpus.versions) {
      std::vector<RecordView> suite;
      for (const RecordView& v : sorted_views) {
        if (v.vp == &vp) suite.push_back(v);
      }
      std::vector<CoverageInput> inputs;
      inputs.reserve(suite.size());
      for (const RecordView& v : suite) {
        inputs.push_back({v.rec->test, v.buggy, v.rec->oracle_pass});
      }
      const CoverageMatrix cov = build_coverage(vp, inputs);

      std::set<std::string> defect_sites(vp.defect_sites.begin(),
                                         vp.defect_sites.end());
      for (SuiteVariant variant : kAllVariants) {
        std::set<std::string> keep;
        for (const RecordView& v : suite) {
          if (variant_keeps(variant, v.rec->label)) keep.insert(v.rec->test);
        }
        const CoverageMatrix sub = submatrix(cov, keep);
        for (Metric metric : kAllMetrics) {
          const SuspiciousnessReport rep = suspiciousness(sub, metric);
          for (std::size_t si = 0; si < sub.stmts.size(); ++si) {
            SuspiciousnessRow row;
            row.version = vp.id;
            row.variant = variant;
            row.metric = metric;
            row.stmt = sub.stmts[si];
            row.score = rep.scores[si];
            if (defect_sites.count(sub.stmts[si])) {
              row.defect_rank = worst_rank(rep.scores, si);
            }
            susp_rows.push_back(std::move(row));
          }
        }
        reduction_rows.push_back({vp.id, variant, greedy_reduce_all(sub)});
        prioritization_rows.push_back({vp.id, variant, prioritize_all(sub)});
      }
    }
    write_suspiciousness_csv(path_of("suspiciousness.csv"), susp_rows);
    write_outcomes_csv(path_of("reduction.csv"), reduction_rows);
    write_outcomes_csv(path_of("prioritization.csv"), prioritization_rows);
    out << "impact: " << susp_rows.size() << " suspiciousness rows\n";
  }

  if (wants("drr")) {
    std::vector<DrrResult> drr_rows;
    for (const DrrSpec& spec : corpus.drr_specs) {
      DrrOutcome oc = drr_result(spec, limits);
      if (oc.error) {
        errors.push_back({oc.error->spec, "", "drr", oc.error->reason});
      } else if (oc.result) {
        drr_rows.push_back(std::move(*oc.result));
      }
    }
    write_drr_csv(path_of("drr.csv"), drr_rows);
    out << "drr: " << drr_rows.size() << " specs\n";
  }

  if (wants("stats")) {
    std::vector<CorpusStatsRow> stats;
    std::set<std::string> group_names;
    for (const CorpusGroup& g : corpus.groups) group_names.insert(g.name);
    for (const std::string& gname : group_names) {
      std::vector<std::int64_t> tsizes, tbugs;
      for (const CorpusGroup& g : corpus.groups) {
        if (g.name != gname) continue;
        for (const std::string& vid : g.version_ids) {
          const VersionPair* vp = corpus.find_version(vid);
          tsizes.push_back(static_cast<std::int64_t>(vp->tests.size()));
          std::int64_t tbug = 0;
          for (const RecordView& v : views) {
            if (v.vp == vp && v.rec->in_tbug) ++tbug;
          }
          tbugs.push_back(tbug);
        }
      }
      if (tsizes.empty()) continue;
      CorpusStatsRow row;
      row.group = gname;
      row.versions = static_cast<std::int64_t>(tsizes.size());
      row.t_min = *std::min_element(tsizes.begin(), tsizes.end());
      row.t_max = *std::max_element(tsizes.begin(), tsizes.end());
      row.t_sum = std::accumulate(tsizes.begin(), tsizes.end(), std::int64_t{0});
      row.t_avg = Rational(row.t_sum, row.versions);
      row.tbug_min = *std::min_element(tbugs.begin(), tbugs.end());
      row.tbug_max = *std::max_element(tbugs.begin(), tbugs.end());
      row.tbug_sum = std::accumulate(tbugs.begin(), tbugs.end(), std::int64_t{0});
      row.tbug_avg = Rational(row.tbug_sum, row.versions);
      stats.push_back(std::move(row));
    }
    write_corpus_stats_csv(path_of("corpus_stats.csv"), stats);
    out << "stats: " << stats.size() << " groups\n";
  }

  std::vector<SubjectError> reported = std::move(issues);
  reported.insert(reported.end(), errors.begin(), errors.end());
  write_subject_errors_csv(path_of("subject_errors.csv"), reported);

  const bool drr_failures =
      std::any_of(reported.begin(), reported.end(),
                  [](const SubjectError& e) { return e.phase == "drr"; });
  return (subject_failures || drr_failures) ? 2 : 0;
}

}  // namespace cclab
