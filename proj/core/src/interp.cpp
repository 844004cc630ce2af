#include "cclab/interp.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cclab {

namespace {

constexpr std::string_view kGlobalScope = "global";

// Internal unwinding signal for runtime failures; converted to a
// RuntimeError event at the top level, never escapes run_program.
struct RtError {
  std::string reason;
};

struct Scope {
  std::vector<std::pair<std::string_view, Value>> slots;

  Value* find(std::string_view name) {
    for (auto& [n, v] : slots) {
      if (n == name) return &v;
    }
    return nullptr;
  }
};

struct Frame {
  const Function* fn;
  std::vector<Scope> scopes;

  Value* find(std::string_view name) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      if (Value* v = it->find(name)) return v;
    }
    return nullptr;
  }
};

enum class Flow : std::uint8_t { Normal, Returned };

class Interp {
 public:
  Interp(const Program& program, const RunLimits& limits)
      : program_(program), limits_(limits) {}

  Trace run(const std::vector<Value>& args) {
    for (const auto& [name, value] : program_.globals) {
      globals_.slots.emplace_back(name, value);
    }
    const Function* entry = program_.find_function(program_.entry);
    try {
      if (args.size() != entry->params.size()) {
        throw RtError{"arity mismatch for entry function"};
      }
      trace_.entry_return = call(*entry, args, /*is_entry=*/true);
    } catch (const RtError& e) {
      Event ev{};
      ev.type = Event::Type::RuntimeError;
      ev.seq = seq_++;
      trace_.events.push_back(ev);
      trace_.ok = false;
      trace_.error = e.reason;
    }
    return std::move(trace_);
  }

 private:
  bool suppressed() const { return suppress_depth_ > 0; }

  // Appends an event unless execution is inside a checker sandbox.
  // Callers fill payload fields through the returned pointer.
  Event* emit(Event::Type type) {
    if (suppressed()) return nullptr;
    Event ev{};
    ev.type = type;
    ev.seq = seq_++;
    trace_.events.push_back(ev);
    return &trace_.events.back();
  }

  void step() {
    if (++steps_ > limits_.step_budget) throw RtError{"step budget exhausted"};
  }

  std::optional<Value> call(const Function& fn, const std::vector<Value>& args,
                            bool is_entry) {
    if (++depth_ > limits_.max_call_depth) throw RtError{"call depth exceeded"};
    std::int64_t act = 0;
    if (!is_entry) {
      act = ++act_counter_;
      if (Event* ev = emit(Event::Type::Call)) {
        ev->callee = fn.name;
        ev->act = act;
      }
    }
    Frame frame;
    frame.fn = &fn;
    frame.scopes.emplace_back();
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      frame.scopes.back().slots.emplace_back(fn.params[i], args[i]);
    }
    std::optional<Value> ret;
    exec_block(fn.body, frame, ret);
    if (!is_entry) {
      if (Event* ev = emit(Event::Type::Return)) {
        ev->act = act;
        if (ret) {
          ev->value = *ret;
          ev->has_value = true;
        }
      }
    }
    --depth_;
    return ret;
  }

  Flow exec_block(const std::vector<StmtPtr>& stmts, Frame& frame,
                  std::optional<Value>& ret) {
    frame.scopes.emplace_back();
    Flow flow = Flow::Normal;
    for (const auto& st : stmts) {
      flow = exec_stmt(*st, frame, ret);
      if (flow == Flow::Returned) break;
    }
    frame.scopes.pop_back();
    return flow;
  }

  Flow exec_stmt(const Stmt& st, Frame& frame, std::optional<Value>& ret) {
    step();
    if (st.tag == Stmt::Tag::Probe) {
      if (Event* ev = emit(Event::Type::ProbeFired)) ev->label = st.name;
      return Flow::Normal;
    }
    if (st.tag == Stmt::Tag::Check) return exec_check(st, frame);

    if (Event* ev = emit(Event::Type::StmtExec)) {
      ev->sid = st.id;
      ev->kinds = st.kinds;
    }
    switch (st.tag) {
      case Stmt::Tag::Let: {
        Value v = eval(*st.expr, frame);
        frame.scopes.back().slots.emplace_back(st.name, v);
        emit_assign(frame.fn->name, st.name, v);
        return Flow::Normal;
      }
      case Stmt::Tag::Assign: {
        Value v = eval(*st.expr, frame);
        if (Value* slot = frame.find(st.name)) {
          *slot = v;
          emit_assign(frame.fn->name, st.name, v);
        } else if (Value* gslot = globals_.find(st.name)) {
          *gslot = v;
          emit_assign(kGlobalScope, st.name, v);
        } else {
          throw RtError{"unbound variable '" + st.name + "'"};
        }
        return Flow::Normal;
      }
      case Stmt::Tag::If: {
        Value c = eval(*st.expr, frame);
        if (!c.is_bool()) throw RtError{"type error: if condition is not boolean"};
        return exec_block(c.b ? st.body : st.else_body, frame, ret);
      }
      case Stmt::Tag::While: {
        while (true) {
          Value c = eval(*st.expr, frame);
          if (!c.is_bool()) throw RtError{"type error: while condition is not boolean"};
          if (!c.b) break;
          if (exec_block(st.body, frame, ret) == Flow::Returned) return Flow::Returned;
          step();
          if (Event* ev = emit(Event::Type::StmtExec)) {
            ev->sid = st.id;
            ev->kinds = st.kinds;
          }
        }
        return Flow::Normal;
      }
      case Stmt::Tag::Return: {
        if (st.expr) {
          ret = eval(*st.expr, frame);
        } else {
          ret = std::nullopt;
        }
        return Flow::Returned;
      }
      case Stmt::Tag::Output: {
        Value v = eval(*st.expr, frame);
        if (Event* ev = emit(Event::Type::Output)) {
          ev->value = v;
          trace_.output.push_back(v);
        }
        return Flow::Normal;
      }
      case Stmt::Tag::ExprStmt: {
        // A bare call statement may legally discard a missing result;
        // every other position requires the callee to return a value.
        if (st.expr->tag == Expr::Tag::Call) {
          eval_call(*st.expr, frame);
        } else {
          eval(*st.expr, frame);
        }
        return Flow::Normal;
      }
      default:
        throw RtError{"internal: unexpected statement"};
    }
  }

  // A check runs its block and condition on snapshots of the current
  // frame and globals with events suppressed; every write is discarded.
  // A runtime error inside the checker still aborts the whole run.
  Flow exec_check(const Stmt& st, Frame& frame) {
    Scope saved_globals = globals_;
    Frame sandbox;
    sandbox.fn = frame.fn;
    sandbox.scopes = frame.scopes;
    ++suppress_depth_;
    Value cond;
    try {
      sandbox.scopes.emplace_back();  // stays live for the condition
      std::optional<Value> ignored;
      for (const auto& inner : st.body) {
        exec_stmt(*inner, sandbox, ignored);
      }
      cond = eval(*st.expr, sandbox);
    } catch (...) {
      --suppress_depth_;
      globals_ = std::move(saved_globals);
      throw;
    }
    --suppress_depth_;
    globals_ = std::move(saved_globals);
    if (!cond.is_bool()) throw RtError{"type error: check condition is not boolean"};
    if (cond.b) {
      if (Event* ev = emit(Event::Type::CheckFired)) ev->label = st.name;
    }
    return Flow::Normal;
  }

  void emit_assign(std::string_view scope, std::string_view var, const Value& v) {
    if (Event* ev = emit(Event::Type::Assign)) {
      ev->scope = scope;
      ev->var = var;
      ev->value = v;
    }
  }

  static std::int64_t require_int(const Value& v, const char* what) {
    if (!v.is_int()) throw RtError{std::string("type error: ") + what};
    return v.i;
  }
  static bool require_bool(const Value& v, const char* what) {
    if (!v.is_bool()) throw RtError{std::string("type error: ") + what};
    return v.b;
  }

  static Value arith(const std::string& op, const Value& lv, const Value& rv) {
    std::int64_t a = require_int(lv, "arithmetic on non-integer");
    std::int64_t b = require_int(rv, "arithmetic on non-integer");
    std::int64_t r = 0;
    if (op == "+") {
      if (__builtin_add_overflow(a, b, &r)) throw RtError{"integer overflow"};
    } else if (op == "-") {
      if (__builtin_sub_overflow(a, b, &r)) throw RtError{"integer overflow"};
    } else if (op == "*") {
      if (__builtin_mul_overflow(a, b, &r)) throw RtError{"integer overflow"};
    } else if (op == "/") {
      if (b == 0) throw RtError{"division by zero"};
      if (a == INT64_MIN && b == -1) throw RtError{"integer overflow"};
      r = a / b;  // truncated toward zero
    } else if (op == "%") {
      if (b == 0) throw RtError{"modulo by zero"};
      r = (b == -1) ? 0 : a % b;  // b == -1 would overflow INT64_MIN % -1
    } else {
      throw RtError{"internal: unexpected operator"};
    }
    return Value::integer(r);
  }

  std::optional<Value> eval_call(const Expr& e, Frame& frame) {
    const Function* fn = program_.find_function(e.name);
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(eval(*a, frame));
    return call(*fn, args, /*is_entry=*/false);
  }

  Value eval(const Expr& e, Frame& frame) {
    switch (e.tag) {
      case Expr::Tag::IntLit:
        return Value::integer(e.int_val);
      case Expr::Tag::BoolLit:
        return Value::boolean(e.bool_val);
      case Expr::Tag::Var: {
        if (Value* v = frame.find(e.name)) return *v;
        if (Value* g = globals_.find(e.name)) return *g;
        throw RtError{"unbound variable '" + e.name + "'"};
      }
      case Expr::Tag::Unary: {
        Value v = eval(*e.lhs, frame);
        if (e.op == "!") {
          return Value::boolean(!require_bool(v, "'!' on non-boolean"));
        }
        std::int64_t a = require_int(v, "unary '-' on non-integer");
        if (a == INT64_MIN) throw RtError{"integer overflow"};
        return Value::integer(-a);
      }
      case Expr::Tag::Binary: {
        const std::string& op = e.op;
        if (op == "&&" || op == "||") {
          bool l = require_bool(eval(*e.lhs, frame), "logical operator on non-boolean");
          if (op == "&&" && !l) return Value::boolean(false);
          if (op == "||" && l) return Value::boolean(true);
          bool r = require_bool(eval(*e.rhs, frame), "logical operator on non-boolean");
          return Value::boolean(r);
        }
        Value l = eval(*e.lhs, frame);
        Value r = eval(*e.rhs, frame);
        if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
          return arith(op, l, r);
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
          std::int64_t a = require_int(l, "ordering on non-integer");
          std::int64_t b = require_int(r, "ordering on non-integer");
          bool res = op == "<" ? a < b : op == "<=" ? a <= b : op == ">" ? a > b : a >= b;
          return Value::boolean(res);
        }
        if (op == "==" || op == "!=") {
          if (l.kind != r.kind) throw RtError{"type error: comparing different types"};
          return Value::boolean(op == "==" ? l == r : l != r);
        }
        throw RtError{"internal: unexpected operator"};
      }
      case Expr::Tag::Call: {
        std::optional<Value> result = eval_call(e, frame);
        if (!result) throw RtError{"call to '" + e.name + "' produced no value"};
        return *result;
      }
    }
    throw RtError{"internal: unexpected expression"};
  }

  const Program& program_;
  const RunLimits& limits_;
  Trace trace_;
  Scope globals_;
  std::int64_t seq_ = 0;
  std::int64_t steps_ = 0;
  std::int64_t act_counter_ = 0;
  int depth_ = 0;
  int suppress_depth_ = 0;
};

}  // namespace

Trace run_program(const Program& program, const std::vector<Value>& args,
                  const RunLimits& limits) {
  return Interp(program, limits).run(args);
}

}  // namespace cclab
