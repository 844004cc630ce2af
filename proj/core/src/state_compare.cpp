#include "cclab/state_compare.hpp"

#include <utility>

namespace cclab {

std::string_view to_string(LowLabel label) {
  switch (label) {
    case LowLabel::LowFailing: return "LowFailing";
    case LowLabel::LowCC: return "LowCC";
    case LowLabel::LowTruePassing: return "LowTruePassing";
    case LowLabel::Anomalous: return "Anomalous";
  }
  return "?";
}

std::string_view to_string(NullCategory category) {
  switch (category) {
    case NullCategory::In: return "IN";
    case NullCategory::Out: return "OUT";
    case NullCategory::InOut: return "IN_OUT";
    case NullCategory::Anomalous: return "ANOMALOUS";
    case NullCategory::Misaligned: return "MISALIGNED";
  }
  return "?";
}

namespace {

struct Activation {
  PartialState state;
  bool fired = false;
};

std::string qualified(const Event& e) {
  std::string key(e.scope);
  key += '.';
  key += e.var;
  return key;
}

// Splits a trace into activation windows of the defect function.
// Returns false when activations re-enter (recursion), which makes
// positional pairing meaningless.
bool partial_states(const VersionPair& vp, const Program& prog,
                    const Trace& trace, std::vector<Activation>& out) {
  if (vp.defect_fn == prog.entry) {
    // The entire run is the defect function's single activation.
    Activation act;
    for (const Event& e : trace.events) {
      if (e.type == Event::Type::Assign) {
        act.state.assigns[qualified(e)] = e.value;
      } else if (e.type == Event::Type::CheckFired &&
                 vp.strong_labels.count(e.label)) {
        act.fired = true;
      }
    }
    act.state.ret = trace.entry_return;
    out.push_back(std::move(act));
    return true;
  }

  struct Bracket {
    std::int64_t lo, hi;
    std::optional<Value> ret;
  };
  std::vector<Bracket> brackets;
  std::optional<std::int64_t> open_act;
  std::int64_t open_lo = 0;
  for (const Event& e : trace.events) {
    if (e.type == Event::Type::Call && e.callee == vp.defect_fn) {
      if (open_act) return false;  // re-entered before returning
      open_act = e.act;
      open_lo = e.seq;
    } else if (e.type == Event::Type::Return && open_act && e.act == *open_act) {
      Bracket b{open_lo, e.seq, std::nullopt};
      if (e.has_value) b.ret = e.value;
      brackets.push_back(std::move(b));
      open_act.reset();
    }
  }
  if (open_act) return false;

  for (const Bracket& b : brackets) {
    Activation act;
    for (const Event& e : trace.events) {
      if (e.seq <= b.lo || e.seq >= b.hi) continue;
      if (e.type == Event::Type::Assign) {
        act.state.assigns[qualified(e)] = e.value;
      } else if (e.type == Event::Type::CheckFired &&
                 vp.strong_labels.count(e.label)) {
        act.fired = true;
      }
    }
    act.state.ret = b.ret;
    out.push_back(std::move(act));
  }
  return true;
}

}  // namespace

CaptureResult capture_states(const VersionPair& vp, const Program& left,
                             const Program& right, const TestCase& test,
                             const RunLimits& limits) {
  CaptureResult res;
  Trace lt = run_program(left, test.args, limits);
  Trace rt = run_program(right, test.args, limits);
  if (!lt.ok || !rt.ok) {
    res.status = CaptureResult::Status::Error;
    return res;
  }
  std::vector<Activation> lacts, racts;
  if (!partial_states(vp, left, lt, lacts) ||
      !partial_states(vp, right, rt, racts)) {
    res.status = CaptureResult::Status::Recursive;
    return res;
  }
  if (lacts.size() != racts.size()) {
    res.status = CaptureResult::Status::Misaligned;
    res.n = static_cast<std::int64_t>(lacts.size());
    return res;
  }
  for (std::size_t i = 0; i < lacts.size(); ++i) {
    ActivationRecord rec;
    rec.index = static_cast<std::int64_t>(i) + 1;
    rec.fired = lacts[i].fired;
    rec.equal = lacts[i].state == racts[i].state;
    if (rec.fired) {
      rec.label = rec.equal ? LowLabel::LowCC : LowLabel::LowFailing;
    } else {
      rec.label = rec.equal ? LowLabel::LowTruePassing : LowLabel::Anomalous;
    }
    rec.buggy = std::move(lacts[i].state);
    rec.fixed = std::move(racts[i].state);
    res.activations.push_back(std::move(rec));
  }
  res.status = CaptureResult::Status::Ok;
  res.n = static_cast<std::int64_t>(res.activations.size());
  return res;
}

NullCategory categorize(const std::vector<ActivationRecord>& activations) {
  bool has_cc = false, has_fail = false;
  for (const ActivationRecord& a : activations) {
    if (a.label == LowLabel::Anomalous) return NullCategory::Anomalous;
    if (a.label == LowLabel::LowCC) has_cc = true;
    if (a.label == LowLabel::LowFailing) has_fail = true;
  }
  if (has_cc && has_fail) return NullCategory::InOut;
  if (has_fail) return NullCategory::Out;
  // LowCC present, or every activation stayed clean: nothing escaped.
  return NullCategory::In;
}

}  // namespace cclab
