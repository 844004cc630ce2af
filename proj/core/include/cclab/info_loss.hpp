#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cclab/corpus.hpp"
#include "cclab/rational.hpp"

namespace cclab {

// Domain-to-range ratio of a single-argument integer function: how
// many-to-one its mapping over the declared domain is. A ratio above
// 1 means the function discards information, so an infected value can
// collide with a clean one and mask the infection.
struct DrrResult {
  struct Mask {
    bool masked = false;
    // Clean domain values mapping to the same output, ascending.
    std::vector<std::int64_t> colliders;
  };

  std::string spec;
  std::int64_t domain_size = 0;
  std::int64_t range_size = 0;
  Rational drr{0};
  // Fraction of infected inputs with at least one collider; undefined
  // when the spec declares no infected inputs.
  std::optional<Rational> masking_rate;
  std::map<std::int64_t, Mask> masks;  // keyed by infected input
};

// A DRR spec's domain is declared total, so an evaluation that fails
// at runtime (or returns no value) is a subject failure of the spec's
// program, not a corpus-structure problem.
struct DrrOutcome {
  std::optional<DrrResult> result;
  struct Error {
    std::string spec;
    std::string reason;
  };
  std::optional<Error> error;
};

// Evaluates the spec's program over its whole domain (entry return
// value = function output).
DrrOutcome drr_result(const DrrSpec& spec, const RunLimits& limits = {});

}  // namespace cclab
