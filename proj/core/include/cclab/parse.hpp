#pragma once

#include <string_view>

#include "cclab/ast.hpp"
#include "cclab/lexer.hpp"

namespace cclab {

// Parses and statically validates a subject program. Statement ids are
// assigned in pre-order over the whole program, counting statements
// inside check blocks. Throws ParseError on any defect: syntax errors,
// duplicate or shadowing declarations, unresolved names, arity
// mismatches, missing entry function, non-literal global initializers,
// or probe/check/output/return statements inside a check block.
Program parse_program(std::string_view source);

}  // namespace cclab
