#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cclab/ast.hpp"
#include "cclab/value.hpp"

namespace cclab {

// One instrumentation event. String fields are views into the Program
// that produced the trace — a Trace must not outlive its Program.
struct Event {
  enum class Type : std::uint8_t {
    StmtExec,    // statement started (before its own expressions ran)
    Assign,      // let/assignment committed a value
    Call,        // non-entry activation entered
    Return,      // activation left (value absent for fall-through)
    ProbeFired,  // weak checker executed
    CheckFired,  // strong checker condition held
    Output,      // output(...) appended a value
    RuntimeError,// execution aborted; always the final event
  };

  Type type;
  std::int64_t seq = 0;          // dense per-trace sequence number
  std::string_view sid;          // StmtExec: statement id
  KindSet kinds;                 // StmtExec: static kind set
  std::string_view scope;        // Assign: function name or "global"
  std::string_view var;          // Assign
  std::string_view callee;       // Call
  std::int64_t act = 0;          // Call/Return activation id
  std::string_view label;        // ProbeFired/CheckFired
  Value value;                   // Assign/Return/Output payload
  bool has_value = false;        // Return carries a value
};

struct Trace {
  std::vector<Event> events;
  std::vector<Value> output;
  std::optional<Value> entry_return;
  bool ok = true;
  std::string error;  // RuntimeError reason when !ok
};

}  // namespace cclab
