#pragma once

#include <cstdint>
#include <vector>

namespace cclab {

// Five-number summary with Tukey fences. Quartiles use linear
// interpolation at position p*(n-1). Whiskers are the most extreme
// samples inside the 1.5*IQR fences, clamped so they never cross the
// box (whisker_low <= q1, whisker_high >= q3); samples strictly
// outside the fences are outliers.
struct BoxStats {
  std::int64_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;  // ascending
};

// Requires a non-empty sample; the input need not be sorted.
BoxStats boxplot_stats(std::vector<double> samples);

}  // namespace cclab
