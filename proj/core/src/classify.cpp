#include "cclab/classify.hpp"

#include <utility>

namespace cclab {

std::string_view to_string(RipLabel label) {
  switch (label) {
    case RipLabel::Failing: return "Failing";
    case RipLabel::StrongCC: return "StrongCC";
    case RipLabel::WeakCC: return "WeakCC";
    case RipLabel::TruePassing: return "TruePassing";
  }
  return "?";
}

ClassifyOutcome classify_test(const VersionPair& vp, const TestCase& test,
                              const RunLimits& limits) {
  ClassifyOutcome out;
  out.buggy_trace = run_program(vp.buggy, test.args, limits);
  out.fixed_trace = run_program(vp.fixed, test.args, limits);
  if (!out.buggy_trace.ok || !out.fixed_trace.ok) {
    const bool buggy_failed = !out.buggy_trace.ok;
    out.error = SubjectError{
        vp.id, test.name, buggy_failed ? "buggy" : "fixed",
        buggy_failed ? out.buggy_trace.error : out.fixed_trace.error};
    return out;
  }

  ClassificationRecord rec;
  rec.version = vp.id;
  rec.test = test.name;
  for (const Event& e : out.buggy_trace.events) {
    if (e.type == Event::Type::ProbeFired && vp.weak_labels.count(e.label)) {
      ++rec.reach_count;
    } else if (e.type == Event::Type::CheckFired &&
               vp.strong_labels.count(e.label)) {
      ++rec.infect_count;
    }
  }
  rec.oracle_pass = out.buggy_trace.output == out.fixed_trace.output &&
                    out.buggy_trace.entry_return == out.fixed_trace.entry_return;
  if (!rec.oracle_pass) {
    rec.label = RipLabel::Failing;
  } else if (rec.infect_count > 0) {
    rec.label = RipLabel::StrongCC;
  } else if (rec.reach_count > 0) {
    rec.label = RipLabel::WeakCC;
  } else {
    rec.label = RipLabel::TruePassing;
  }
  rec.in_tbug = vp.defect_fn == vp.buggy.entry;
  if (!rec.in_tbug) {
    for (const Event& e : out.buggy_trace.events) {
      if (e.type == Event::Type::Call && e.callee == vp.defect_fn) {
        rec.in_tbug = true;
        break;
      }
    }
  }
  out.record = std::move(rec);
  return out;
}

PrevalenceSummary summarize(const std::vector<ClassificationRecord>& records) {
  PrevalenceSummary s;
  s.total = static_cast<std::int64_t>(records.size());
  for (const ClassificationRecord& r : records) {
    switch (r.label) {
      case RipLabel::Failing: ++s.fail; break;
      case RipLabel::StrongCC: ++s.strong_cc; break;
      case RipLabel::WeakCC: ++s.weak_cc; break;
      case RipLabel::TruePassing:
        ++s.true_passing;
        if (r.in_tbug) ++s.true_passing_in_tbug;
        break;
    }
    if (r.in_tbug) ++s.t_bug;
  }
  return s;
}

}  // namespace cclab
