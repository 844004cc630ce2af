#include "cclab/boxstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace cclab {

namespace {

double quartile(const std::vector<double>& xs, double p) {
  const std::size_t n = xs.size();
  const double pos = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 < n) return xs[lo] + (xs[lo + 1] - xs[lo]) * frac;
  return xs[lo];
}

}  // namespace

BoxStats boxplot_stats(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  BoxStats bs;
  bs.n = static_cast<std::int64_t>(samples.size());
  bs.min = samples.front();
  bs.max = samples.back();
  bs.q1 = quartile(samples, 0.25);
  bs.median = quartile(samples, 0.5);
  bs.q3 = quartile(samples, 0.75);
  const double iqr = bs.q3 - bs.q1;
  const double lo_fence = bs.q1 - 1.5 * iqr;
  const double hi_fence = bs.q3 + 1.5 * iqr;
  bool any_inside = false;
  double wlo = 0.0, whi = 0.0;
  for (double x : samples) {
    if (x < lo_fence || x > hi_fence) {
      bs.outliers.push_back(x);
    } else if (!any_inside) {
      any_inside = true;
      wlo = whi = x;
    } else {
      wlo = std::min(wlo, x);
      whi = std::max(whi, x);
    }
  }
  if (!any_inside) {
    wlo = bs.q1;
    whi = bs.q3;
  }
  bs.whisker_low = std::min(wlo, bs.q1);
  bs.whisker_high = std::max(whi, bs.q3);
  return bs;
}

}  // namespace cclab
