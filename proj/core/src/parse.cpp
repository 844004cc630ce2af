#include "cclab/parse.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>

namespace cclab {

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::All: return "All";
    case ProfileKind::Conditional: return "Conditional";
    case ProfileKind::Modulo: return "Modulo";
    case ProfileKind::Multiplication: return "Multiplication";
    case ProfileKind::Division: return "Division";
    case ProfileKind::Invocation: return "Invocation";
  }
  return "?";
}

namespace {

void walk(const std::vector<StmtPtr>& stmts, bool in_checker,
          const std::function<void(const Stmt&, bool)>& visit) {
  for (const auto& st : stmts) {
    visit(*st, in_checker);
    if (st->tag == Stmt::Tag::If) {
      walk(st->body, in_checker, visit);
      walk(st->else_body, in_checker, visit);
    } else if (st->tag == Stmt::Tag::While) {
      walk(st->body, in_checker, visit);
    } else if (st->tag == Stmt::Tag::Check) {
      walk(st->body, true, visit);
    }
  }
}

// Collects operator/call facts from a statement's own expressions.
void scan_expr(const Expr& e, KindSet& kinds) {
  switch (e.tag) {
    case Expr::Tag::Binary:
      if (e.op == "%") kinds.add(ProfileKind::Modulo);
      if (e.op == "*") kinds.add(ProfileKind::Multiplication);
      if (e.op == "/") kinds.add(ProfileKind::Division);
      scan_expr(*e.lhs, kinds);
      scan_expr(*e.rhs, kinds);
      break;
    case Expr::Tag::Unary:
      scan_expr(*e.lhs, kinds);
      break;
    case Expr::Tag::Call:
      kinds.add(ProfileKind::Invocation);
      for (const auto& a : e.args) scan_expr(*a, kinds);
      break;
    default:
      break;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Program parse() {
    Program program;
    while (!at(Token::Kind::Eof)) {
      if (at(Token::Kind::Keyword, "global")) {
        parse_global(program);
      } else if (at(Token::Kind::Keyword, "fn")) {
        program.functions.push_back(parse_function());
        const std::string& name = program.functions.back().name;
        for (std::size_t i = 0; i + 1 < program.functions.size(); ++i) {
          if (program.functions[i].name == name) {
            throw ParseError("duplicate function '" + name + "'");
          }
        }
      } else {
        fail("expected 'fn' or 'global'");
      }
    }
    if (program.functions.empty()) throw ParseError("program has no functions");
    if (program.find_function("main") != nullptr) {
      program.entry = "main";
    } else if (program.functions.size() == 1) {
      program.entry = program.functions.front().name;
    } else {
      throw ParseError("multiple functions but no 'main' entry");
    }
    return program;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = pos_ + ahead;
    return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
  }
  bool at(Token::Kind kind) const { return peek().is(kind); }
  bool at(Token::Kind kind, std::string_view text) const { return peek().is(kind, text); }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Kind::Eof ? "end of input" : "'" + t.text + "'";
    throw ParseError(what + ", found " + found, t.line, t.col);
  }

  Token take(Token::Kind kind, std::string_view text = {}) {
    if (!at(kind) || (!text.empty() && peek().text != text)) {
      fail(text.empty() ? "unexpected token" : "expected '" + std::string(text) + "'");
    }
    return tokens_[pos_++];
  }

  std::string fresh_id() { return "L" + std::to_string(next_id_++); }

  void parse_global(Program& program) {
    take(Token::Kind::Keyword, "global");
    std::string name = take(Token::Kind::Ident).text;
    take(Token::Kind::Punct, "=");
    bool neg = false;
    if (at(Token::Kind::Punct, "-")) {
      take(Token::Kind::Punct, "-");
      neg = true;
    }
    Value value;
    if (at(Token::Kind::Int)) {
      value = Value::integer(neg ? -take(Token::Kind::Int).int_val
                                 : take(Token::Kind::Int).int_val);
    } else if (!neg && at(Token::Kind::Keyword, "true")) {
      take(Token::Kind::Keyword, "true");
      value = Value::boolean(true);
    } else if (!neg && at(Token::Kind::Keyword, "false")) {
      take(Token::Kind::Keyword, "false");
      value = Value::boolean(false);
    } else {
      fail("global initializer must be an integer or boolean literal");
    }
    take(Token::Kind::Punct, ";");
    for (const auto& [existing, _] : program.globals) {
      if (existing == name) throw ParseError("duplicate global '" + name + "'");
    }
    program.globals.emplace_back(std::move(name), value);
  }

  Function parse_function() {
    take(Token::Kind::Keyword, "fn");
    Function fn;
    fn.name = take(Token::Kind::Ident).text;
    take(Token::Kind::Punct, "(");
    if (!at(Token::Kind::Punct, ")")) {
      while (true) {
        fn.params.push_back(take(Token::Kind::Ident).text);
        if (at(Token::Kind::Punct, ",")) {
          take(Token::Kind::Punct, ",");
        } else {
          break;
        }
      }
    }
    take(Token::Kind::Punct, ")");
    std::set<std::string> unique(fn.params.begin(), fn.params.end());
    if (unique.size() != fn.params.size()) {
      throw ParseError("duplicate parameter in function '" + fn.name + "'");
    }
    fn.body = parse_block();
    return fn;
  }

  std::vector<StmtPtr> parse_block() {
    take(Token::Kind::Punct, "{");
    std::vector<StmtPtr> stmts;
    while (!at(Token::Kind::Punct, "}")) stmts.push_back(parse_stmt());
    take(Token::Kind::Punct, "}");
    return stmts;
  }

  StmtPtr make_stmt(Stmt::Tag tag, std::string id, int line) {
    auto st = std::make_unique<Stmt>();
    st->tag = tag;
    st->id = std::move(id);
    st->line = line;
    return st;
  }

  // Assigns the static kind set from the statement's own expressions.
  void finish_kinds(Stmt& st) {
    if (st.tag == Stmt::Tag::If || st.tag == Stmt::Tag::While) {
      st.kinds.add(ProfileKind::Conditional);
    }
    if (st.expr && st.tag != Stmt::Tag::Check) scan_expr(*st.expr, st.kinds);
  }

  StmtPtr parse_stmt() {
    std::string id = fresh_id();
    int line = peek().line;
    if (at(Token::Kind::Keyword, "let")) {
      take(Token::Kind::Keyword, "let");
      auto st = make_stmt(Stmt::Tag::Let, std::move(id), line);
      st->name = take(Token::Kind::Ident).text;
      take(Token::Kind::Punct, "=");
      st->expr = parse_expr();
      take(Token::Kind::Punct, ";");
      finish_kinds(*st);
      return st;
    }
    if (at(Token::Kind::Keyword, "if")) {
      take(Token::Kind::Keyword, "if");
      auto st = make_stmt(Stmt::Tag::If, std::move(id), line);
      take(Token::Kind::Punct, "(");
      st->expr = parse_expr();
      take(Token::Kind::Punct, ")");
      st->body = parse_block();
      if (at(Token::Kind::Keyword, "else")) {
        take(Token::Kind::Keyword, "else");
        if (at(Token::Kind::Keyword, "if")) {
          st->else_body.push_back(parse_stmt());
        } else {
          st->else_body = parse_block();
        }
      }
      finish_kinds(*st);
      return st;
    }
    if (at(Token::Kind::Keyword, "while")) {
      take(Token::Kind::Keyword, "while");
      auto st = make_stmt(Stmt::Tag::While, std::move(id), line);
      take(Token::Kind::Punct, "(");
      st->expr = parse_expr();
      take(Token::Kind::Punct, ")");
      st->body = parse_block();
      finish_kinds(*st);
      return st;
    }
    if (at(Token::Kind::Keyword, "return")) {
      take(Token::Kind::Keyword, "return");
      auto st = make_stmt(Stmt::Tag::Return, std::move(id), line);
      if (!at(Token::Kind::Punct, ";")) st->expr = parse_expr();
      take(Token::Kind::Punct, ";");
      finish_kinds(*st);
      return st;
    }
    if (at(Token::Kind::Keyword, "output")) {
      take(Token::Kind::Keyword, "output");
      auto st = make_stmt(Stmt::Tag::Output, std::move(id), line);
      take(Token::Kind::Punct, "(");
      st->expr = parse_expr();
      take(Token::Kind::Punct, ")");
      take(Token::Kind::Punct, ";");
      finish_kinds(*st);
      return st;
    }
    if (at(Token::Kind::Keyword, "probe")) {
      take(Token::Kind::Keyword, "probe");
      auto st = make_stmt(Stmt::Tag::Probe, std::move(id), line);
      st->name = take(Token::Kind::String).text;
      take(Token::Kind::Punct, ";");
      return st;
    }
    if (at(Token::Kind::Keyword, "check")) {
      take(Token::Kind::Keyword, "check");
      auto st = make_stmt(Stmt::Tag::Check, std::move(id), line);
      st->name = take(Token::Kind::String).text;
      st->body = parse_block();
      take(Token::Kind::Keyword, "when");
      take(Token::Kind::Punct, "(");
      st->expr = parse_expr();
      take(Token::Kind::Punct, ")");
      take(Token::Kind::Punct, ";");
      return st;
    }
    if (at(Token::Kind::Ident) && peek(1).is(Token::Kind::Punct, "=")) {
      auto st = make_stmt(Stmt::Tag::Assign, std::move(id), line);
      st->name = take(Token::Kind::Ident).text;
      take(Token::Kind::Punct, "=");
      st->expr = parse_expr();
      take(Token::Kind::Punct, ";");
      finish_kinds(*st);
      return st;
    }
    auto st = make_stmt(Stmt::Tag::ExprStmt, std::move(id), line);
    st->expr = parse_expr();
    take(Token::Kind::Punct, ";");
    finish_kinds(*st);
    return st;
  }

  ExprPtr binary(std::string op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->tag = Expr::Tag::Binary;
    e->op = std::move(op);
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    auto e = parse_and();
    while (at(Token::Kind::Punct, "||")) {
      take(Token::Kind::Punct, "||");
      e = binary("||", std::move(e), parse_and());
    }
    return e;
  }

  ExprPtr parse_and() {
    auto e = parse_eq();
    while (at(Token::Kind::Punct, "&&")) {
      take(Token::Kind::Punct, "&&");
      e = binary("&&", std::move(e), parse_eq());
    }
    return e;
  }

  ExprPtr parse_eq() {
    auto e = parse_rel();
    while (at(Token::Kind::Punct, "==") || at(Token::Kind::Punct, "!=")) {
      std::string op = take(Token::Kind::Punct).text;
      e = binary(std::move(op), std::move(e), parse_rel());
    }
    return e;
  }

  ExprPtr parse_rel() {
    auto e = parse_add();
    while (at(Token::Kind::Punct, "<") || at(Token::Kind::Punct, "<=") ||
           at(Token::Kind::Punct, ">") || at(Token::Kind::Punct, ">=")) {
      std::string op = take(Token::Kind::Punct).text;
      e = binary(std::move(op), std::move(e), parse_add());
    }
    return e;
  }

  ExprPtr parse_add() {
    auto e = parse_mul();
    while (at(Token::Kind::Punct, "+") || at(Token::Kind::Punct, "-")) {
      std::string op = take(Token::Kind::Punct).text;
      e = binary(std::move(op), std::move(e), parse_mul());
    }
    return e;
  }

  ExprPtr parse_mul() {
    auto e = parse_unary();
    while (at(Token::Kind::Punct, "*") || at(Token::Kind::Punct, "/") ||
           at(Token::Kind::Punct, "%")) {
      std::string op = take(Token::Kind::Punct).text;
      e = binary(std::move(op), std::move(e), parse_unary());
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (at(Token::Kind::Punct, "!") || at(Token::Kind::Punct, "-")) {
      auto e = std::make_unique<Expr>();
      e->tag = Expr::Tag::Unary;
      e->op = take(Token::Kind::Punct).text;
      e->lhs = parse_unary();
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    auto e = std::make_unique<Expr>();
    if (at(Token::Kind::Int)) {
      e->tag = Expr::Tag::IntLit;
      e->int_val = take(Token::Kind::Int).int_val;
      return e;
    }
    if (at(Token::Kind::Keyword, "true") || at(Token::Kind::Keyword, "false")) {
      e->tag = Expr::Tag::BoolLit;
      e->bool_val = take(Token::Kind::Keyword).text == "true";
      return e;
    }
    if (at(Token::Kind::Keyword, "call")) {
      take(Token::Kind::Keyword, "call");
      e->tag = Expr::Tag::Call;
      e->name = take(Token::Kind::Ident).text;
      take(Token::Kind::Punct, "(");
      if (!at(Token::Kind::Punct, ")")) {
        while (true) {
          e->args.push_back(parse_expr());
          if (at(Token::Kind::Punct, ",")) {
            take(Token::Kind::Punct, ",");
          } else {
            break;
          }
        }
      }
      take(Token::Kind::Punct, ")");
      return e;
    }
    if (at(Token::Kind::Ident)) {
      e->tag = Expr::Tag::Var;
      e->name = take(Token::Kind::Ident).text;
      return e;
    }
    if (at(Token::Kind::Punct, "(")) {
      take(Token::Kind::Punct, "(");
      auto inner = parse_expr();
      take(Token::Kind::Punct, ")");
      return inner;
    }
    fail("expected expression");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int next_id_ = 1;
};

// Static name resolution: every identifier must resolve, lets may not
// shadow or repeat any name visible in the function (params and globals
// included), calls must hit declared functions with matching arity, and
// check blocks may not contain probe/check/output/return.
class Resolver {
 public:
  explicit Resolver(const Program& program) : program_(program) {
    for (const auto& [name, _] : program.globals) globals_.insert(name);
  }

  void run() {
    for (const auto& fn : program_.functions) {
      current_ = &fn;
      declared_.clear();
      for (const auto& p : fn.params) {
        if (globals_.count(p)) {
          throw ParseError("parameter '" + p + "' shadows a global in '" + fn.name + "'");
        }
        declared_.insert(p);
      }
      std::set<std::string> visible(fn.params.begin(), fn.params.end());
      check_block(fn.body, visible, false);
    }
  }

 private:
  void check_expr(const Expr& e, const std::set<std::string>& visible) {
    switch (e.tag) {
      case Expr::Tag::Var:
        if (!visible.count(e.name) && !globals_.count(e.name)) {
          throw ParseError("unresolved identifier '" + e.name + "' in '" +
                           current_->name + "'");
        }
        break;
      case Expr::Tag::Unary:
        check_expr(*e.lhs, visible);
        break;
      case Expr::Tag::Binary:
        check_expr(*e.lhs, visible);
        check_expr(*e.rhs, visible);
        break;
      case Expr::Tag::Call: {
        const Function* callee = program_.find_function(e.name);
        if (callee == nullptr) {
          throw ParseError("call to undefined function '" + e.name + "'");
        }
        if (callee->params.size() != e.args.size()) {
          throw ParseError("arity mismatch calling '" + e.name + "'");
        }
        for (const auto& a : e.args) check_expr(*a, visible);
        break;
      }
      default:
        break;
    }
  }

  void check_block(const std::vector<StmtPtr>& stmts, std::set<std::string> visible,
                   bool in_checker) {
    for (const auto& st : stmts) {
      switch (st->tag) {
        case Stmt::Tag::Probe:
        case Stmt::Tag::Check:
        case Stmt::Tag::Output:
        case Stmt::Tag::Return:
          if (in_checker) {
            throw ParseError("statement not allowed inside a check block (" +
                             st->id + ")");
          }
          break;
        default:
          break;
      }
      switch (st->tag) {
        case Stmt::Tag::Let:
          if (declared_.count(st->name) || globals_.count(st->name)) {
            throw ParseError("duplicate or shadowing let '" + st->name + "' in '" +
                             current_->name + "'");
          }
          check_expr(*st->expr, visible);
          declared_.insert(st->name);
          visible.insert(st->name);
          break;
        case Stmt::Tag::Assign:
          if (!visible.count(st->name) && !globals_.count(st->name)) {
            throw ParseError("assignment to undeclared '" + st->name + "' in '" +
                             current_->name + "'");
          }
          check_expr(*st->expr, visible);
          break;
        case Stmt::Tag::If:
          check_expr(*st->expr, visible);
          check_block(st->body, visible, in_checker);
          check_block(st->else_body, visible, in_checker);
          break;
        case Stmt::Tag::While:
          check_expr(*st->expr, visible);
          check_block(st->body, visible, in_checker);
          break;
        case Stmt::Tag::Return:
          if (st->expr) check_expr(*st->expr, visible);
          break;
        case Stmt::Tag::Output:
        case Stmt::Tag::ExprStmt:
          check_expr(*st->expr, visible);
          break;
        case Stmt::Tag::Probe:
          break;
        case Stmt::Tag::Check: {
          check_block(st->body, visible, true);
          // The check condition sees the block's let bindings.
          std::set<std::string> inner = visible;
          walk(st->body, true, [&](const Stmt& s, bool) {
            if (s.tag == Stmt::Tag::Let) inner.insert(s.name);
          });
          check_expr(*st->expr, inner);
          break;
        }
      }
    }
  }

  const Program& program_;
  const Function* current_ = nullptr;
  std::set<std::string> globals_;
  std::set<std::string> declared_;  // per function: params + all lets
};

}  // namespace

void for_each_stmt(const Program& program,
                   const std::function<void(const Stmt&, bool)>& visit) {
  for (const auto& fn : program.functions) walk(fn.body, false, visit);
}

Program parse_program(std::string_view source) {
  Program program = Parser(source).parse();
  Resolver(program).run();
  return program;
}

}  // namespace cclab
