#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cclab/classify.hpp"
#include "cclab/corpus.hpp"
#include "cclab/trace.hpp"

namespace cclab {

// Statement-by-test coverage of the buggy program: statements in
// program order excluding probes, checks, and checker-internal code;
// a cell is set when the statement executed at least once in that
// test's buggy run.
struct CoverageMatrix {
  std::vector<std::string> stmts;
  std::vector<std::string> tests;
  std::vector<std::vector<bool>> covered;  // [stmt][test]
  std::vector<bool> verdicts;              // oracle_pass per test
};

struct CoverageInput {
  std::string test;
  const Trace* trace;  // buggy run
  bool oracle_pass = false;
};

CoverageMatrix build_coverage(const VersionPair& vp,
                              const std::vector<CoverageInput>& suite);

// Restriction to a subset of tests, preserving test order.
CoverageMatrix submatrix(const CoverageMatrix& cov,
                         const std::set<std::string>& keep);

enum class Metric : std::uint8_t { Tarantula, Jaccard, Ochiai, Ample };
inline constexpr Metric kAllMetrics[] = {Metric::Tarantula, Metric::Jaccard,
                                         Metric::Ochiai, Metric::Ample};
std::string_view to_string(Metric metric);

// The three suite variants contrasted throughout: everything, the
// suite without weak-CC tests, and the suite without any CC tests.
enum class SuiteVariant : std::uint8_t { Full, NoWeakCC, NoCC };
inline constexpr SuiteVariant kAllVariants[] = {
    SuiteVariant::Full, SuiteVariant::NoWeakCC, SuiteVariant::NoCC};
std::string_view to_string(SuiteVariant variant);

// True when the variant keeps a test with this label.
bool variant_keeps(SuiteVariant variant, RipLabel label);

struct SuspiciousnessReport {
  Metric metric = Metric::Tarantula;
  std::vector<double> scores;  // parallel to cov.stmts
  // With no failing test every metric is defined as 0 across the
  // board; the flag marks the report as vacuous.
  bool no_failures = false;
};

// Per statement with f/p = failing/passing tests covering it and
// F/P = suite totals: tarantula=(f/F)/((f/F)+(p/P)), jaccard=f/(F+p),
// ochiai=f/sqrt(F*(f+p)), ample=|f/F - p/P|; any ratio with a zero
// denominator contributes 0.
SuspiciousnessReport suspiciousness(const CoverageMatrix& cov, Metric metric);

// Worst-case rank under ties: strictly-better count plus the full tie
// block. 1 is best.
std::int64_t worst_rank(const std::vector<double>& scores, std::size_t idx);

struct EnumOutcomes {
  // Reduction: each item is a reduced suite, sorted by test name.
  // Prioritization: each item is a complete ordering.
  // Items are sorted lexicographically and free of duplicates.
  std::vector<std::vector<std::string>> items;
  bool truncated = false;
};

// Greedy set cover over covered statements, branching into every
// maximal-gain tie; stops a branch when the full suite's coverage is
// reached or no remaining test adds anything.
EnumOutcomes greedy_reduce_all(const CoverageMatrix& cov, std::size_t cap = 10000);

// Additional-greedy total ordering of the whole suite, branching into
// every maximal-gain tie (after saturation every remaining test ties
// at zero gain).
EnumOutcomes prioritize_all(const CoverageMatrix& cov, std::size_t cap = 10000);

// Deterministic single-outcome forms: ties break to the smallest test
// name. Always an element of the corresponding enumeration.
std::vector<std::string> greedy_reduce_lexical(const CoverageMatrix& cov);
std::vector<std::string> prioritize_lexical(const CoverageMatrix& cov);

}  // namespace cclab
