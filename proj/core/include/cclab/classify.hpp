#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cclab/corpus.hpp"
#include "cclab/interp.hpp"
#include "cclab/rational.hpp"
#include "cclab/trace.hpp"

namespace cclab {

// Verdict of one test against one buggy/fixed pair. Failing takes
// precedence over everything; the passing outcomes split by how far
// the defect's effect travelled: reached (weak checker) and infected
// (strong checker) but still passed = coincidental correctness.
enum class RipLabel : std::uint8_t { Failing, StrongCC, WeakCC, TruePassing };

std::string_view to_string(RipLabel label);

struct ClassificationRecord {
  std::string version;
  std::string test;
  RipLabel label = RipLabel::TruePassing;
  std::int64_t reach_count = 0;
  std::int64_t infect_count = 0;
  bool oracle_pass = false;
  bool in_tbug = false;

  // A failing run whose probes never fired points at a mis-sited
  // checker or an unstable oracle; the record keeps its label and the
  // condition is surfaced to the caller instead.
  bool anomalous_failing() const {
    return label == RipLabel::Failing && reach_count == 0;
  }
};

// A subject program failed to run to completion; the test produces no
// classification record. `phase` is "buggy" or "fixed" (corpus
// validation reuses the same shape with phase "validate").
struct SubjectError {
  std::string version;
  std::string test;
  std::string phase;
  std::string reason;
};

struct ClassifyOutcome {
  std::optional<ClassificationRecord> record;
  std::optional<SubjectError> error;
  // Retained for downstream analyses (levels, propagation, coverage);
  // meaningful only when `record` is set. The traces reference the
  // version pair's programs and must not outlive them.
  Trace buggy_trace;
  Trace fixed_trace;
};

ClassifyOutcome classify_test(const VersionPair& vp, const TestCase& test,
                              const RunLimits& limits = {});

struct PrevalenceSummary {
  std::int64_t fail = 0;
  std::int64_t strong_cc = 0;
  std::int64_t weak_cc = 0;
  std::int64_t true_passing = 0;
  std::int64_t true_passing_in_tbug = 0;
  std::int64_t t_bug = 0;
  std::int64_t total = 0;

  // Each ratio is undefined (nullopt) when its denominator is zero.
  std::optional<Rational> strong_over_fail() const { return ratio(strong_cc, fail); }
  std::optional<Rational> weak_over_fail() const { return ratio(weak_cc, fail); }
  std::optional<Rational> strong_over_tbug() const { return ratio(strong_cc, t_bug); }
  std::optional<Rational> weak_over_tbug() const { return ratio(weak_cc, t_bug); }
  std::optional<Rational> strong_over_total() const { return ratio(strong_cc, total); }
  std::optional<Rational> weak_over_total() const { return ratio(weak_cc, total); }

 private:
  static std::optional<Rational> ratio(std::int64_t n, std::int64_t d) {
    if (d == 0) return std::nullopt;
    return Rational(n, d);
  }
};

PrevalenceSummary summarize(const std::vector<ClassificationRecord>& records);

}  // namespace cclab
