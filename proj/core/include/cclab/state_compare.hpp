#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cclab/corpus.hpp"
#include "cclab/interp.hpp"
#include "cclab/value.hpp"

namespace cclab {

// Per-activation analog of the suite-level verdicts: did the strong
// checker fire inside this activation, and did the activation's
// externally visible state match the fixed program's?
enum class LowLabel : std::uint8_t { LowFailing, LowCC, LowTruePassing, Anomalous };

std::string_view to_string(LowLabel label);

// Everything one activation of the defect function wrote, keyed
// "scope.var" by the last write inside the activation window, plus
// its return value (absent for a void return).
struct PartialState {
  std::map<std::string, Value> assigns;
  std::optional<Value> ret;

  bool operator==(const PartialState&) const = default;
};

struct ActivationRecord {
  std::int64_t index = 0;  // 1-based invocation order
  bool fired = false;
  bool equal = false;
  LowLabel label = LowLabel::LowTruePassing;
  PartialState buggy;
  PartialState fixed;
};

// IN: the infection died inside the defect function (every firing
// activation left clean state). OUT: it always escaped. IN_OUT: both
// happened across activations. ANOMALOUS: state diverged without the
// checker firing (contamination from outside the checker's scope).
enum class NullCategory : std::uint8_t { In, Out, InOut, Anomalous, Misaligned };

std::string_view to_string(NullCategory category);

struct CaptureResult {
  enum class Status : std::uint8_t { Ok, Misaligned, Recursive, Error };
  Status status = Status::Error;
  // Activation count of the left program's run; when Ok it equals
  // activations.size(), when Misaligned it reports the left count.
  std::int64_t n = 0;
  std::vector<ActivationRecord> activations;
};

// Runs `left` (conventionally the buggy program) and `right` on the
// test and diffs the defect function's activations pairwise. When the
// defect function is the entry itself the whole run counts as one
// pseudo-activation. Activations are matched positionally; runs with
// differing activation counts are Misaligned, re-entrant (recursive)
// activations of the defect function are not comparable, and a
// runtime error in either program yields Error.
CaptureResult capture_states(const VersionPair& vp, const Program& left,
                             const Program& right, const TestCase& test,
                             const RunLimits& limits = {});

// Folds activation labels into the test-level category; requires a
// non-empty activation list. A test whose activations are all
// LowTruePassing kept clean state everywhere, which is reported IN.
NullCategory categorize(const std::vector<ActivationRecord>& activations);

}  // namespace cclab
