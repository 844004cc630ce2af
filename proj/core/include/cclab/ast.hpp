#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cclab/value.hpp"

namespace cclab {

// Statement kinds tracked by the propagation profiler. `All` is the
// synthetic aggregate; the rest are static properties of a statement's
// own expressions (not of nested blocks).
enum class ProfileKind : std::uint8_t {
  All = 0,
  Conditional,
  Modulo,
  Multiplication,
  Division,
  Invocation,
};
inline constexpr int kProfileKindCount = 6;
const char* to_string(ProfileKind kind);

// Set of the five concrete kinds, as assigned statically at parse time.
class KindSet {
 public:
  void add(ProfileKind kind) { bits_ |= bit(kind); }
  bool has(ProfileKind kind) const { return bits_ & bit(kind); }
  bool empty() const { return bits_ == 0; }

  friend bool operator==(KindSet a, KindSet b) { return a.bits_ == b.bits_; }

 private:
  static std::uint8_t bit(ProfileKind kind) {
    return static_cast<std::uint8_t>(1u << static_cast<int>(kind));
  }
  std::uint8_t bits_ = 0;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Tag : std::uint8_t { IntLit, BoolLit, Var, Unary, Binary, Call };

  Tag tag;
  std::int64_t int_val = 0;   // IntLit
  bool bool_val = false;      // BoolLit
  std::string name;           // Var, Call
  std::string op;             // Unary ("!", "-"), Binary operators
  ExprPtr lhs;                // Unary operand, Binary left
  ExprPtr rhs;                // Binary right
  std::vector<ExprPtr> args;  // Call
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  enum class Tag : std::uint8_t {
    Let,
    Assign,
    If,
    While,
    Return,
    Output,
    Probe,
    Check,
    ExprStmt,
  };

  Tag tag;
  std::string id;                  // "L<n>", pre-order over the whole program
  std::string name;                // Let/Assign target; Probe/Check label
  ExprPtr expr;                    // value / condition / return value (may be null)
  std::vector<StmtPtr> body;       // If-then, While-body, Check-block
  std::vector<StmtPtr> else_body;  // If
  KindSet kinds;                   // static kind set of this statement
  int line = 0;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<StmtPtr> body;
};

struct Program {
  std::vector<Function> functions;  // declaration order
  std::vector<std::pair<std::string, Value>> globals;
  std::string entry;

  const Function* find_function(const std::string& name) const {
    for (const auto& fn : functions) {
      if (fn.name == name) return &fn;
    }
    return nullptr;
  }
};

// Visits every statement in declaration order, pre-order within bodies,
// flagging statements that live inside a check block.
void for_each_stmt(const Program& program,
                   const std::function<void(const Stmt&, bool in_checker)>& visit);

}  // namespace cclab
