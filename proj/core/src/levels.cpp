#include "cclab/levels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

namespace cclab {

LevelRecord compute_levels(const std::string& version, const std::string& test,
                           std::string_view entry, const Trace& trace) {
  LevelRecord rec;
  rec.version = version;
  rec.test = test;
  std::set<std::string_view> callees;
  callees.insert(entry);
  std::int64_t calls = 0;
  for (const Event& e : trace.events) {
    if (e.type == Event::Type::Call) {
      callees.insert(e.callee);
      ++calls;
    }
  }
  rec.level_count = static_cast<std::int64_t>(callees.size());
  rec.level_freq = calls + 1;  // the entry activation itself
  return rec;
}

namespace {

struct Tally {
  std::int64_t fail = 0;
  std::int64_t strong = 0;
  std::int64_t weak = 0;

  void add(RipLabel label) {
    switch (label) {
      case RipLabel::Failing: ++fail; break;
      case RipLabel::StrongCC: ++strong; break;
      case RipLabel::WeakCC: ++weak; break;
      case RipLabel::TruePassing: break;
    }
  }
};

std::int64_t measure_of(const LevelRecord& l, LevelMeasure m) {
  return m == LevelMeasure::Count ? l.level_count : l.level_freq;
}

}  // namespace

std::vector<LevelBin> bin_levels(const std::vector<LevelRecord>& levels,
                                 const std::vector<ClassificationRecord>& records,
                                 LevelMeasure measure, int k) {
  assert(!levels.empty() && levels.size() == records.size());
  std::int64_t lo = measure_of(levels.front(), measure);
  std::int64_t hi = lo;
  for (const LevelRecord& l : levels) {
    lo = std::min(lo, measure_of(l, measure));
    hi = std::max(hi, measure_of(l, measure));
  }
  const bool degenerate = lo == hi;
  const int nbins = degenerate ? 1 : k;

  std::vector<Tally> tallies(nbins);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::int64_t x = measure_of(levels[i], measure);
    std::int64_t idx = 0;
    if (!degenerate) {
      idx = (x - lo) * k / (hi - lo);
      if (idx == k) idx = k - 1;
    }
    tallies[idx].add(records[i].label);
  }

  std::vector<LevelBin> bins(nbins);
  const Rational width = degenerate
                             ? Rational(0)
                             : Rational(hi - lo, k);
  for (int i = 0; i < nbins; ++i) {
    bins[i].bin_index = i;
    bins[i].lo = Rational(lo) + width * Rational(i);
    bins[i].hi = degenerate ? Rational(hi) : Rational(lo) + width * Rational(i + 1);
    bins[i].fail = tallies[i].fail;
    bins[i].strong = tallies[i].strong;
    bins[i].weak = tallies[i].weak;
  }
  return bins;
}

std::int64_t linear_bin_index(double x, double lo, double hi, int k) {
  if (lo == hi) return 0;
  auto idx = static_cast<std::int64_t>(std::floor((x - lo) * k / (hi - lo)));
  if (idx < 0) idx = 0;
  if (idx >= k) idx = k - 1;
  return idx;
}

std::vector<LogLevelBin> bin_levels_log(const std::vector<LevelRecord>& levels,
                                        const std::vector<ClassificationRecord>& records,
                                        LevelMeasure measure, int k) {
  assert(!levels.empty() && levels.size() == records.size());
  double tlo = std::log(static_cast<double>(measure_of(levels.front(), measure)));
  double thi = tlo;
  for (const LevelRecord& l : levels) {
    const double t = std::log(static_cast<double>(measure_of(l, measure)));
    tlo = std::min(tlo, t);
    thi = std::max(thi, t);
  }
  const bool degenerate = tlo == thi;
  const int nbins = degenerate ? 1 : k;

  std::vector<Tally> tallies(nbins);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double t = std::log(static_cast<double>(measure_of(levels[i], measure)));
    const std::int64_t idx = degenerate ? 0 : linear_bin_index(t, tlo, thi, k);
    tallies[idx].add(records[i].label);
  }

  std::vector<LogLevelBin> bins(nbins);
  for (int i = 0; i < nbins; ++i) {
    bins[i].bin_index = i;
    bins[i].lo = std::exp(tlo + (thi - tlo) * i / nbins);
    bins[i].hi = std::exp(tlo + (thi - tlo) * (i + 1) / nbins);
    bins[i].fail = tallies[i].fail;
    bins[i].strong = tallies[i].strong;
    bins[i].weak = tallies[i].weak;
  }
  return bins;
}

}  // namespace cclab
