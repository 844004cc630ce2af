#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "cclab/ast.hpp"
#include "cclab/trace.hpp"

namespace cclab {

// Statement executions observed after the first strong-checker firing,
// bucketed by statement kind. `unique` counts distinct statements,
// `total` counts executions; the All bucket covers every statement
// regardless of kind.
struct PropagationProfile {
  struct Counter {
    std::int64_t unique = 0;
    std::int64_t total = 0;
  };
  std::array<Counter, kProfileKindCount> by_kind{};

  const Counter& operator[](ProfileKind k) const {
    return by_kind[static_cast<std::size_t>(k)];
  }
};

// Counts statement executions with seq strictly greater than
// `after_seq`.
PropagationProfile profile_from(const Trace& trace, std::int64_t after_seq);

// Window starts at the first CheckFired event; a trace in which no
// check fired has no propagation profile.
std::optional<PropagationProfile> profile_trace(const Trace& trace);

}  // namespace cclab
