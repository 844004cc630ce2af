#pragma once

// Random coverage matrices for metric property tests: 1-6 statements,
// 2-8 tests, random cells and verdicts, always at least one failing
// test so no suspiciousness metric is vacuous.

#include <random>
#include <string>
#include <vector>

#include "cclab/fl_impact.hpp"

namespace testsupport {

inline cclab::CoverageMatrix random_matrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> stmt_n(1, 6);
  std::uniform_int_distribution<int> test_n(2, 8);
  std::uniform_int_distribution<int> coin(0, 1);
  cclab::CoverageMatrix cov;
  const int stmts = stmt_n(rng);
  const int tests = test_n(rng);
  for (int s = 0; s < stmts; ++s) cov.stmts.push_back("L" + std::to_string(s + 1));
  for (int t = 0; t < tests; ++t) cov.tests.push_back("t" + std::to_string(t + 1));
  cov.covered.assign(static_cast<std::size_t>(stmts),
                     std::vector<bool>(static_cast<std::size_t>(tests), false));
  for (auto& row : cov.covered) {
    for (int t = 0; t < tests; ++t) row[static_cast<std::size_t>(t)] = coin(rng) == 1;
  }
  cov.verdicts.assign(static_cast<std::size_t>(tests), false);
  for (int t = 0; t < tests; ++t)
    cov.verdicts[static_cast<std::size_t>(t)] = coin(rng) == 1;
  const auto fail_at = static_cast<std::size_t>(
      std::uniform_int_distribution<int>(0, tests - 1)(rng));
  cov.verdicts[fail_at] = false;
  return cov;
}

}  // namespace testsupport
