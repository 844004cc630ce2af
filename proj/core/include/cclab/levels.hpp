#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cclab/classify.hpp"
#include "cclab/rational.hpp"
#include "cclab/trace.hpp"

namespace cclab {

// How many layers of the call graph a test exercises: level_count is
// the number of distinct functions entered (the entry always counts),
// level_freq the total number of function entries.
struct LevelRecord {
  std::string version;
  std::string test;
  std::int64_t level_count = 0;
  std::int64_t level_freq = 0;
};

LevelRecord compute_levels(const std::string& version, const std::string& test,
                           std::string_view entry, const Trace& trace);

enum class LevelMeasure : std::uint8_t { Count, Freq };

// One equal-width histogram bin over a level measure, counting only
// Failing/StrongCC/WeakCC tests (TruePassing contributes to the data
// range but not to any counter). Ratios are undefined when the bin
// holds no failing test.
struct LevelBin {
  std::int64_t bin_index = 0;
  Rational lo{0};
  Rational hi{0};
  std::int64_t fail = 0;
  std::int64_t strong = 0;
  std::int64_t weak = 0;

  std::optional<Rational> strong_over_fail() const { return over_fail(strong); }
  std::optional<Rational> weak_over_fail() const { return over_fail(weak); }
  std::optional<Rational> cc_over_fail() const { return over_fail(strong + weak); }

 private:
  std::optional<Rational> over_fail(std::int64_t n) const {
    if (fail <= 0) return std::nullopt;
    return Rational(n, fail);
  }
};

// Linear equal-width binning with exact rational boundaries
// lo + i*(hi-lo)/k; a degenerate range (all samples equal) collapses
// to a single bin. `levels` and `records` must be parallel.
std::vector<LevelBin> bin_levels(const std::vector<LevelRecord>& levels,
                                 const std::vector<ClassificationRecord>& records,
                                 LevelMeasure measure, int k = 10);

// Log-scale variant: a sample's bin is the linear bin of its natural
// log over [ln min, ln max]; boundaries are exp of that equal-width
// grid. Computed in doubles (levels are always >= 1).
struct LogLevelBin {
  std::int64_t bin_index = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t fail = 0;
  std::int64_t strong = 0;
  std::int64_t weak = 0;

  std::optional<Rational> strong_over_fail() const { return over_fail(strong); }
  std::optional<Rational> weak_over_fail() const { return over_fail(weak); }
  std::optional<Rational> cc_over_fail() const { return over_fail(strong + weak); }

 private:
  std::optional<Rational> over_fail(std::int64_t n) const {
    if (fail <= 0) return std::nullopt;
    return Rational(n, fail);
  }
};

// Shared placement rule: equal-width index of x over [lo, hi] with k
// bins, clamped into the last bin at the top edge.
std::int64_t linear_bin_index(double x, double lo, double hi, int k);

std::vector<LogLevelBin> bin_levels_log(const std::vector<LevelRecord>& levels,
                                        const std::vector<ClassificationRecord>& records,
                                        LevelMeasure measure, int k = 10);

}  // namespace cclab
