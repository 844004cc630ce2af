#pragma once

#include <cstdint>
#include <vector>

#include "cclab/ast.hpp"
#include "cclab/trace.hpp"
#include "cclab/value.hpp"

namespace cclab {

struct RunLimits {
  std::int64_t step_budget = 10'000'000;  // one step per statement execution
  int max_call_depth = 4096;
};

// Runs the program's entry function on the given arguments and returns
// the instrumentation trace. Runtime failures (type errors, division by
// zero, 64-bit overflow, budget exhaustion, depth overflow, arity
// mismatch at entry) never throw: they terminate the trace with a
// RuntimeError event and ok=false. The trace references strings owned
// by the program.
Trace run_program(const Program& program, const std::vector<Value>& args,
                  const RunLimits& limits = {});

}  // namespace cclab
