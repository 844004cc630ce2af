#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cclab/boxstats.hpp"
#include "cclab/classify.hpp"
#include "cclab/corpus.hpp"
#include "cclab/fl_impact.hpp"
#include "cclab/info_loss.hpp"
#include "cclab/levels.hpp"
#include "cclab/propagation.hpp"
#include "cclab/rational.hpp"
#include "cclab/state_compare.hpp"

// CSV files are RFC 4180 (quoted only when needed, doubled quotes),
// LF line endings, UTF-8 without BOM, one header row. Undefined
// values render as empty fields in CSV and null in JSON. Numeric
// ratios and scores render with exactly three decimals (half-even).

namespace cclab {

struct LevelBoxRow {
  std::string group;
  std::string measure;  // "count" | "freq"
  BoxStats stats;
};

struct PropagationRow {
  std::string version;
  std::string test;
  RipLabel label = RipLabel::Failing;
  ProfileKind kind = ProfileKind::All;
  std::int64_t unique = 0;
  std::int64_t total = 0;
};

struct PropagationBoxRow {
  RipLabel label = RipLabel::Failing;
  ProfileKind kind = ProfileKind::All;
  std::string counter;  // "unique" | "total"
  std::optional<BoxStats> stats;  // absent when the group is empty
};

struct NullificationRow {
  std::string version;
  std::string test;
  std::int64_t n = 0;
  NullCategory category = NullCategory::Misaligned;
  std::vector<ActivationRecord> activations;  // empty when misaligned
};

struct NullificationSummaryRow {
  std::string version;
  std::int64_t t_cchigh = 0;
  std::optional<Rational> avg_n;  // absent when no test was comparable
  std::int64_t in = 0;
  std::int64_t out = 0;
  std::int64_t in_out = 0;
  std::int64_t anomalous = 0;
  std::int64_t misaligned = 0;
};

struct SuspiciousnessRow {
  std::string version;
  SuiteVariant variant = SuiteVariant::Full;
  Metric metric = Metric::Tarantula;
  std::string stmt;
  double score = 0.0;
  std::optional<std::int64_t> defect_rank;  // only on defect statements
};

// One reduction or prioritization enumeration for a version/variant.
struct OutcomeRow {
  std::string version;
  SuiteVariant variant = SuiteVariant::Full;
  EnumOutcomes outcomes;
};

struct CorpusStatsRow {
  std::string group;
  std::int64_t versions = 0;
  std::int64_t t_min = 0;
  std::int64_t t_max = 0;
  Rational t_avg{0};
  std::int64_t t_sum = 0;
  std::int64_t tbug_min = 0;
  std::int64_t tbug_max = 0;
  Rational tbug_avg{0};
  std::int64_t tbug_sum = 0;
};

// Writers create parent directories as needed and throw
// std::runtime_error when the file cannot be written.
void write_classification_csv(const std::string& path,
                              const std::vector<ClassificationRecord>& records);
void write_prevalence_json(const std::string& path, const PrevalenceSummary& s);
void write_levels_csv(const std::string& path,
                      const std::vector<LevelRecord>& levels);
void write_level_bins_csv(const std::string& path,
                          const std::vector<LevelBin>& count_bins,
                          const std::vector<LevelBin>& freq_bins);
void write_level_bins_log_csv(const std::string& path,
                              const std::vector<LogLevelBin>& count_bins,
                              const std::vector<LogLevelBin>& freq_bins);
void write_level_box_csv(const std::string& path,
                         const std::vector<LevelBoxRow>& rows);
void write_propagation_csv(const std::string& path,
                           const std::vector<PropagationRow>& rows);
void write_propagation_box_csv(const std::string& path,
                               const std::vector<PropagationBoxRow>& rows);
void write_nullification_csv(const std::string& path,
                             const std::vector<NullificationRow>& rows);
void write_nullification_summary_csv(
    const std::string& path, const std::vector<NullificationSummaryRow>& rows);
// One JSON file per activation: <dir>/<version>/<test>/<i>.json with
// alphabetically sorted keys.
void write_states_json(const std::string& dir, const NullificationRow& row);
void write_drr_csv(const std::string& path, const std::vector<DrrResult>& rows);
void write_suspiciousness_csv(const std::string& path,
                              const std::vector<SuspiciousnessRow>& rows);
void write_outcomes_csv(const std::string& path,
                        const std::vector<OutcomeRow>& rows);
void write_corpus_stats_csv(const std::string& path,
                            const std::vector<CorpusStatsRow>& rows);
// Subject runtime failures and corpus-validation findings share one
// table; the file is always written, even when empty.
void write_subject_errors_csv(const std::string& path,
                              const std::vector<SubjectError>& errors);

// RFC 4180 field encoding, exposed for tests.
std::string csv_escape(const std::string& field);

}  // namespace cclab
