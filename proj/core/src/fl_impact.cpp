#include "cclab/fl_impact.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "cclab/ast.hpp"

namespace cclab {

CoverageMatrix build_coverage(const VersionPair& vp,
                              const std::vector<CoverageInput>& suite) {
  CoverageMatrix cov;
  for_each_stmt(vp.buggy, [&cov](const Stmt& st, bool in_checker) {
    if (in_checker) return;
    if (st.tag == Stmt::Tag::Probe || st.tag == Stmt::Tag::Check) return;
    cov.stmts.emplace_back(st.id);
  });
  for (const CoverageInput& in : suite) {
    cov.tests.push_back(in.test);
    cov.verdicts.push_back(in.oracle_pass);
  }
  cov.covered.assign(cov.stmts.size(), std::vector<bool>(suite.size(), false));
  for (std::size_t ti = 0; ti < suite.size(); ++ti) {
    std::set<std::string_view> executed;
    for (const Event& e : suite[ti].trace->events) {
      if (e.type == Event::Type::StmtExec) executed.insert(e.sid);
    }
    for (std::size_t si = 0; si < cov.stmts.size(); ++si) {
      if (executed.count(cov.stmts[si])) cov.covered[si][ti] = true;
    }
  }
  return cov;
}

CoverageMatrix submatrix(const CoverageMatrix& cov,
                         const std::set<std::string>& keep) {
  std::vector<std::size_t> idx;
  for (std::size_t ti = 0; ti < cov.tests.size(); ++ti) {
    if (keep.count(cov.tests[ti])) idx.push_back(ti);
  }
  CoverageMatrix sub;
  sub.stmts = cov.stmts;
  for (std::size_t ti : idx) {
    sub.tests.push_back(cov.tests[ti]);
    sub.verdicts.push_back(cov.verdicts[ti]);
  }
  sub.covered.assign(cov.stmts.size(), std::vector<bool>(idx.size(), false));
  for (std::size_t si = 0; si < cov.stmts.size(); ++si) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      sub.covered[si][j] = cov.covered[si][idx[j]];
    }
  }
  return sub;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Tarantula: return "tarantula";
    case Metric::Jaccard: return "jaccard";
    case Metric::Ochiai: return "ochiai";
    case Metric::Ample: return "ample";
  }
  return "?";
}

std::string_view to_string(SuiteVariant variant) {
  switch (variant) {
    case SuiteVariant::Full: return "full";
    case SuiteVariant::NoWeakCC: return "no_weakcc";
    case SuiteVariant::NoCC: return "no_cc";
  }
  return "?";
}

bool variant_keeps(SuiteVariant variant, RipLabel label) {
  switch (variant) {
    case SuiteVariant::Full: return true;
    case SuiteVariant::NoWeakCC: return label != RipLabel::WeakCC;
    case SuiteVariant::NoCC:
      return label != RipLabel::WeakCC && label != RipLabel::StrongCC;
  }
  return true;
}

SuspiciousnessReport suspiciousness(const CoverageMatrix& cov, Metric metric) {
  SuspiciousnessReport report;
  report.metric = metric;
  std::int64_t F = 0, P = 0;
  for (bool pass : cov.verdicts) (pass ? P : F) += 1;
  if (F == 0) {
    report.no_failures = true;
    report.scores.assign(cov.stmts.size(), 0.0);
    return report;
  }
  for (const std::vector<bool>& row : cov.covered) {
    std::int64_t f = 0, p = 0;
    for (std::size_t ti = 0; ti < row.size(); ++ti) {
      if (row[ti]) (cov.verdicts[ti] ? p : f) += 1;
    }
    double s = 0.0;
    switch (metric) {
      case Metric::Tarantula: {
        const double ef = static_cast<double>(f) / static_cast<double>(F);
        const double ep = P > 0 ? static_cast<double>(p) / static_cast<double>(P) : 0.0;
        s = ef + ep == 0.0 ? 0.0 : ef / (ef + ep);
        break;
      }
      case Metric::Jaccard:
        s = F + p > 0 ? static_cast<double>(f) / static_cast<double>(F + p) : 0.0;
        break;
      case Metric::Ochiai: {
        const double d = std::sqrt(static_cast<double>(F * (f + p)));
        s = d != 0.0 ? static_cast<double>(f) / d : 0.0;
        break;
      }
      case Metric::Ample: {
        const double ef = static_cast<double>(f) / static_cast<double>(F);
        const double ep = P > 0 ? static_cast<double>(p) / static_cast<double>(P) : 0.0;
        s = std::fabs(ef - ep);
        break;
      }
    }
    report.scores.push_back(s);
  }
  return report;
}

std::int64_t worst_rank(const std::vector<double>& scores, std::size_t idx) {
  const double d = scores[idx];
  std::int64_t rank = 0;
  for (double s : scores) {
    if (s >= d) ++rank;  // strictly better plus the whole tie block
  }
  return rank;
}

namespace {

// Per-test coverage as index sets plus the shared universe.
struct CoverSets {
  std::vector<std::set<std::size_t>> per_test;
  std::set<std::size_t> universe;

  explicit CoverSets(const CoverageMatrix& cov) {
    per_test.resize(cov.tests.size());
    for (std::size_t si = 0; si < cov.stmts.size(); ++si) {
      for (std::size_t ti = 0; ti < cov.tests.size(); ++ti) {
        if (cov.covered[si][ti]) {
          per_test[ti].insert(si);
          universe.insert(si);
        }
      }
    }
  }

  std::size_t gain(std::size_t ti, const std::set<std::size_t>& covered) const {
    std::size_t g = 0;
    for (std::size_t si : per_test[ti]) {
      if (!covered.count(si)) ++g;
    }
    return g;
  }

  static std::set<std::size_t> unite(const std::set<std::size_t>& covered,
                                     const std::set<std::size_t>& add) {
    std::set<std::size_t> u = covered;
    u.insert(add.begin(), add.end());
    return u;
  }
};

// Test indices in ascending name order, so tie iteration is
// deterministic regardless of suite order.
std::vector<std::size_t> by_name(const CoverageMatrix& cov) {
  std::vector<std::size_t> order(cov.tests.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&cov](std::size_t a, std::size_t b) {
    return cov.tests[a] < cov.tests[b];
  });
  return order;
}

std::vector<std::string> names_of(const CoverageMatrix& cov,
                                  const std::vector<std::size_t>& idxs,
                                  bool sort_names) {
  std::vector<std::string> names;
  names.reserve(idxs.size());
  for (std::size_t ti : idxs) names.push_back(cov.tests[ti]);
  if (sort_names) std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

EnumOutcomes greedy_reduce_all(const CoverageMatrix& cov, std::size_t cap) {
  const CoverSets cs(cov);
  const std::vector<std::size_t> order = by_name(cov);
  std::set<std::vector<std::string>> outcomes;
  bool truncated = false;

  std::vector<std::size_t> chosen;
  std::vector<bool> in_chosen(cov.tests.size(), false);

  auto rec = [&](auto&& self, const std::set<std::size_t>& covered) -> void {
    if (outcomes.size() >= cap) {
      truncated = true;
      return;
    }
    if (covered == cs.universe) {
      outcomes.insert(names_of(cov, chosen, /*sort_names=*/true));
      return;
    }
    std::size_t best = 0;
    for (std::size_t ti : order) {
      if (!in_chosen[ti]) best = std::max(best, cs.gain(ti, covered));
    }
    if (best == 0) {
      outcomes.insert(names_of(cov, chosen, /*sort_names=*/true));
      return;
    }
    for (std::size_t ti : order) {
      if (in_chosen[ti] || cs.gain(ti, covered) != best) continue;
      chosen.push_back(ti);
      in_chosen[ti] = true;
      self(self, CoverSets::unite(covered, cs.per_test[ti]));
      in_chosen[ti] = false;
      chosen.pop_back();
    }
  };
  rec(rec, {});

  EnumOutcomes out;
  out.items.assign(outcomes.begin(), outcomes.end());
  out.truncated = truncated;
  return out;
}

EnumOutcomes prioritize_all(const CoverageMatrix& cov, std::size_t cap) {
  const CoverSets cs(cov);
  const std::vector<std::size_t> order = by_name(cov);
  std::vector<std::vector<std::string>> orders;
  bool truncated = false;

  std::vector<std::size_t> chosen;
  std::vector<bool> in_chosen(cov.tests.size(), false);

  auto rec = [&](auto&& self, const std::set<std::size_t>& covered) -> void {
    if (orders.size() >= cap) {
      truncated = true;
      return;
    }
    if (chosen.size() == cov.tests.size()) {
      orders.push_back(names_of(cov, chosen, /*sort_names=*/false));
      return;
    }
    std::size_t best = 0;
    for (std::size_t ti : order) {
      if (!in_chosen[ti]) best = std::max(best, cs.gain(ti, covered));
    }
    for (std::size_t ti : order) {
      if (in_chosen[ti] || cs.gain(ti, covered) != best) continue;
      chosen.push_back(ti);
      in_chosen[ti] = true;
      self(self, CoverSets::unite(covered, cs.per_test[ti]));
      in_chosen[ti] = false;
      chosen.pop_back();
    }
  };
  rec(rec, {});

  std::sort(orders.begin(), orders.end());
  EnumOutcomes out;
  out.items = std::move(orders);
  out.truncated = truncated;
  return out;
}

std::vector<std::string> greedy_reduce_lexical(const CoverageMatrix& cov) {
  const CoverSets cs(cov);
  const std::vector<std::size_t> order = by_name(cov);
  std::vector<std::size_t> chosen;
  std::vector<bool> in_chosen(cov.tests.size(), false);
  std::set<std::size_t> covered;
  while (covered != cs.universe) {
    std::size_t best = 0;
    for (std::size_t ti : order) {
      if (!in_chosen[ti]) best = std::max(best, cs.gain(ti, covered));
    }
    if (best == 0) break;
    for (std::size_t ti : order) {
      if (!in_chosen[ti] && cs.gain(ti, covered) == best) {
        chosen.push_back(ti);
        in_chosen[ti] = true;
        covered = CoverSets::unite(covered, cs.per_test[ti]);
        break;
      }
    }
  }
  return names_of(cov, chosen, /*sort_names=*/true);
}

std::vector<std::string> prioritize_lexical(const CoverageMatrix& cov) {
  const CoverSets cs(cov);
  const std::vector<std::size_t> order = by_name(cov);
  std::vector<std::size_t> chosen;
  std::vector<bool> in_chosen(cov.tests.size(), false);
  std::set<std::size_t> covered;
  while (chosen.size() < cov.tests.size()) {
    std::size_t best = 0;
    for (std::size_t ti : order) {
      if (!in_chosen[ti]) best = std::max(best, cs.gain(ti, covered));
    }
    for (std::size_t ti : order) {
      if (!in_chosen[ti] && cs.gain(ti, covered) == best) {
        chosen.push_back(ti);
        in_chosen[ti] = true;
        covered = CoverSets::unite(covered, cs.per_test[ti]);
        break;
      }
    }
  }
  return names_of(cov, chosen, /*sort_names=*/false);
}

}  // namespace cclab
