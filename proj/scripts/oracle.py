#!/usr/bin/env python3
"""Reference oracle for the coincidental-correctness lab.

A deliberately independent reimplementation of the subject language and
of every analysis, used to derive the golden data that the C++ test
suite is compared against.  Run from the repository root:

    python3 scripts/oracle.py --corpus corpus --out tests/golden/golden.json

The script hard-asserts a set of hand-derived anchor values before it
writes anything, so a corpus-authoring mistake fails loudly here rather
than leaking into the golden file.

Semantic pins shared with the C++ implementation:
  * statement ids are assigned in pre-order over the whole program,
    including statements nested inside check blocks;
  * StmtExec is emitted when a statement starts, before its own
    expressions (and therefore before any calls they contain) run;
  * a while statement emits one StmtExec per condition evaluation,
    including the final false one;
  * let/assignment emit StmtExec then Assign(scope, var, value), where
    scope is the enclosing function name or "global";
  * probe emits only ProbeFired; check emits only CheckFired (when its
    condition holds) and runs its block plus condition on a discarded
    snapshot of the current frame and globals with events suppressed;
  * parameter binding emits no Assign; entry activation emits no
    Call/Return, its return value is recorded on the trace;
  * every statement execution (checker-internal ones included) costs
    one step against the step budget;
  * integer overflow, division/modulo by zero, step-budget exhaustion,
    call-depth overflow and type mismatches raise a RuntimeError event
    that terminates the trace.
"""

import argparse
import json
import math
import os
import sys
from fractions import Fraction

I64_MIN = -(2**63)
I64_MAX = 2**63 - 1
KINDS = ["All", "Conditional", "Modulo", "Multiplication", "Division", "Invocation"]


# ---------------------------------------------------------------------------
# rendering


def fmt_milli(q):
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 1000}.{q % 1000:03d}"


def render3_frac(num, den):
    """Exact 3-decimal round-half-even rendering of num/den."""
    if den == 0:
        raise ZeroDivisionError
    if den < 0:
        num, den = -num, -den
    neg = num < 0
    num = abs(num)
    q, r = divmod(num * 1000, den)
    if 2 * r > den or (2 * r == den and q % 2 == 1):
        q += 1
    return fmt_milli(-q if neg else q)


def render3_fraction(fr):
    return render3_frac(fr.numerator, fr.denominator)


def render3_double(x):
    return fmt_milli(round(x * 1000.0))


# ---------------------------------------------------------------------------
# lexer / parser

KEYWORDS = {
    "fn", "let", "if", "else", "while", "return", "output",
    "probe", "check", "when", "call", "true", "false", "global",
}

PUNCT = [
    "&&", "||", "==", "!=", "<=", ">=",
    "(", ")", "{", "}", ",", ";", "=", "<", ">", "+", "-", "*", "/", "%", "!",
]


class ParseFailure(Exception):
    pass


def tokenize(src):
    toks = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("//", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and src[j] != '"':
                if src[j] == "\n":
                    raise ParseFailure(f"{line}:{col}: unterminated string")
                j += 1
            if j >= n:
                raise ParseFailure(f"{line}:{col}: unterminated string")
            toks.append(("str", src[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            text = src[i:j]
            if int(text) > I64_MAX:
                raise ParseFailure(f"{line}:{col}: integer literal out of range")
            toks.append(("int", int(text), line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            text = src[i:j]
            toks.append(("kw" if text in KEYWORDS else "ident", text, line, col))
            col += j - i
            i = j
            continue
        for p in PUNCT:
            if src.startswith(p, i):
                toks.append(("punct", p, line, col))
                col += len(p)
                i += len(p)
                break
        else:
            raise ParseFailure(f"{line}:{col}: unexpected character {c!r}")
    toks.append(("eof", None, line, col))
    return toks


class Parser:
    def __init__(self, src):
        self.toks = tokenize(src)
        self.pos = 0
        self.next_id = 1

    def peek(self):
        return self.toks[self.pos]

    def at(self, kind, value=None):
        t = self.peek()
        return t[0] == kind and (value is None or t[1] == value)

    def take(self, kind, value=None):
        t = self.peek()
        if not self.at(kind, value):
            raise ParseFailure(
                f"{t[2]}:{t[3]}: expected {value or kind}, found {t[1]!r}")
        self.pos += 1
        return t

    def fresh_id(self):
        sid = f"L{self.next_id}"
        self.next_id += 1
        return sid

    def parse_program(self):
        functions = {}
        order = []
        globals_ = []
        while not self.at("eof"):
            if self.at("kw", "global"):
                self.take("kw", "global")
                name = self.take("ident")[1]
                self.take("punct", "=")
                neg = False
                if self.at("punct", "-"):
                    self.take("punct", "-")
                    neg = True
                if self.at("int"):
                    lit = self.take("int")[1]
                    v = ("i", -lit if neg else lit)
                elif not neg and self.at("kw", "true"):
                    self.take("kw", "true")
                    v = ("b", True)
                elif not neg and self.at("kw", "false"):
                    self.take("kw", "false")
                    v = ("b", False)
                else:
                    t = self.peek()
                    raise ParseFailure(f"{t[2]}:{t[3]}: global initializer must be a literal")
                self.take("punct", ";")
                if any(g[0] == name for g in globals_):
                    raise ParseFailure(f"duplicate global {name}")
                globals_.append((name, v))
            elif self.at("kw", "fn"):
                fn = self.parse_function()
                if fn["name"] in functions:
                    raise ParseFailure(f"duplicate function {fn['name']}")
                functions[fn["name"]] = fn
                order.append(fn["name"])
            else:
                t = self.peek()
                raise ParseFailure(f"{t[2]}:{t[3]}: expected fn or global")
        if not order:
            raise ParseFailure("no entry function")
        entry = "main" if "main" in functions else (order[0] if len(order) == 1 else None)
        if entry is None:
            raise ParseFailure("no entry function: multiple functions and no main")
        prog = {"functions": functions, "order": order, "globals": globals_, "entry": entry}
        resolve(prog)
        return prog

    def parse_function(self):
        self.take("kw", "fn")
        name = self.take("ident")[1]
        self.take("punct", "(")
        params = []
        if not self.at("punct", ")"):
            while True:
                params.append(self.take("ident")[1])
                if self.at("punct", ","):
                    self.take("punct", ",")
                else:
                    break
        self.take("punct", ")")
        if len(set(params)) != len(params):
            raise ParseFailure(f"duplicate parameter in {name}")
        body = self.parse_block()
        return {"name": name, "params": params, "body": body}

    def parse_block(self):
        self.take("punct", "{")
        stmts = []
        while not self.at("punct", "}"):
            stmts.append(self.parse_stmt())
        self.take("punct", "}")
        return stmts

    def parse_stmt(self):
        sid = self.fresh_id()
        if self.at("kw", "let"):
            self.take("kw", "let")
            name = self.take("ident")[1]
            self.take("punct", "=")
            e = self.parse_expr()
            self.take("punct", ";")
            return mk_stmt("let", sid, name=name, expr=e)
        if self.at("kw", "if"):
            self.take("kw", "if")
            self.take("punct", "(")
            cond = self.parse_expr()
            self.take("punct", ")")
            then = self.parse_block()
            els = []
            if self.at("kw", "else"):
                self.take("kw", "else")
                if self.at("kw", "if"):
                    els = [self.parse_stmt()]
                else:
                    els = self.parse_block()
            return mk_stmt("if", sid, cond=cond, then=then, els=els)
        if self.at("kw", "while"):
            self.take("kw", "while")
            self.take("punct", "(")
            cond = self.parse_expr()
            self.take("punct", ")")
            body = self.parse_block()
            return mk_stmt("while", sid, cond=cond, body=body)
        if self.at("kw", "return"):
            self.take("kw", "return")
            e = None
            if not self.at("punct", ";"):
                e = self.parse_expr()
            self.take("punct", ";")
            return mk_stmt("return", sid, expr=e)
        if self.at("kw", "output"):
            self.take("kw", "output")
            self.take("punct", "(")
            e = self.parse_expr()
            self.take("punct", ")")
            self.take("punct", ";")
            return mk_stmt("output", sid, expr=e)
        if self.at("kw", "probe"):
            self.take("kw", "probe")
            label = self.take("str")[1]
            self.take("punct", ";")
            return mk_stmt("probe", sid, label=label)
        if self.at("kw", "check"):
            self.take("kw", "check")
            label = self.take("str")[1]
            block = self.parse_block()
            self.take("kw", "when")
            self.take("punct", "(")
            cond = self.parse_expr()
            self.take("punct", ")")
            self.take("punct", ";")
            return mk_stmt("check", sid, label=label, block=block, cond=cond)
        if self.at("ident") and self.toks[self.pos + 1][:2] == ("punct", "="):
            name = self.take("ident")[1]
            self.take("punct", "=")
            e = self.parse_expr()
            self.take("punct", ";")
            return mk_stmt("assign", sid, name=name, expr=e)
        e = self.parse_expr()
        self.take("punct", ";")
        return mk_stmt("expr", sid, expr=e)

    # precedence climbing
    def parse_expr(self):
        return self.parse_or()

    def parse_or(self):
        e = self.parse_and()
        while self.at("punct", "||"):
            self.take("punct", "||")
            e = {"t": "bin", "op": "||", "l": e, "r": self.parse_and()}
        return e

    def parse_and(self):
        e = self.parse_eq()
        while self.at("punct", "&&"):
            self.take("punct", "&&")
            e = {"t": "bin", "op": "&&", "l": e, "r": self.parse_eq()}
        return e

    def parse_eq(self):
        e = self.parse_rel()
        while self.at("punct", "==") or self.at("punct", "!="):
            op = self.take("punct")[1]
            e = {"t": "bin", "op": op, "l": e, "r": self.parse_rel()}
        return e

    def parse_rel(self):
        e = self.parse_add()
        while any(self.at("punct", p) for p in ("<", "<=", ">", ">=")):
            op = self.take("punct")[1]
            e = {"t": "bin", "op": op, "l": e, "r": self.parse_add()}
        return e

    def parse_add(self):
        e = self.parse_mul()
        while self.at("punct", "+") or self.at("punct", "-"):
            op = self.take("punct")[1]
            e = {"t": "bin", "op": op, "l": e, "r": self.parse_mul()}
        return e

    def parse_mul(self):
        e = self.parse_unary()
        while any(self.at("punct", p) for p in ("*", "/", "%")):
            op = self.take("punct")[1]
            e = {"t": "bin", "op": op, "l": e, "r": self.parse_unary()}
        return e

    def parse_unary(self):
        if self.at("punct", "!"):
            self.take("punct", "!")
            return {"t": "un", "op": "!", "e": self.parse_unary()}
        if self.at("punct", "-"):
            self.take("punct", "-")
            return {"t": "un", "op": "-", "e": self.parse_unary()}
        return self.parse_primary()

    def parse_primary(self):
        if self.at("int"):
            return {"t": "int", "v": self.take("int")[1]}
        if self.at("kw", "true"):
            self.take("kw", "true")
            return {"t": "bool", "v": True}
        if self.at("kw", "false"):
            self.take("kw", "false")
            return {"t": "bool", "v": False}
        if self.at("kw", "call"):
            self.take("kw", "call")
            name = self.take("ident")[1]
            self.take("punct", "(")
            args = []
            if not self.at("punct", ")"):
                while True:
                    args.append(self.parse_expr())
                    if self.at("punct", ","):
                        self.take("punct", ",")
                    else:
                        break
            self.take("punct", ")")
            return {"t": "call", "name": name, "args": args}
        if self.at("ident"):
            return {"t": "var", "name": self.take("ident")[1]}
        if self.at("punct", "("):
            self.take("punct", "(")
            e = self.parse_expr()
            self.take("punct", ")")
            return e
        t = self.peek()
        raise ParseFailure(f"{t[2]}:{t[3]}: expected expression, found {t[1]!r}")


def expr_ops(e, ops, calls):
    if e["t"] == "bin":
        ops.add(e["op"])
        expr_ops(e["l"], ops, calls)
        expr_ops(e["r"], ops, calls)
    elif e["t"] == "un":
        expr_ops(e["e"], ops, calls)
    elif e["t"] == "call":
        calls.append(e["name"])
        for a in e["args"]:
            expr_ops(a, ops, calls)


def mk_stmt(t, sid, **kw):
    st = {"t": t, "id": sid}
    st.update(kw)
    own = []
    if t in ("let", "assign", "output", "expr"):
        own = [st["expr"]]
    elif t in ("if", "while"):
        own = [st["cond"]]
    elif t == "return" and st.get("expr") is not None:
        own = [st["expr"]]
    ops, calls = set(), []
    for e in own:
        expr_ops(e, ops, calls)
    kinds = set()
    if t in ("if", "while"):
        kinds.add("Conditional")
    if "%" in ops:
        kinds.add("Modulo")
    if "*" in ops:
        kinds.add("Multiplication")
    if "/" in ops:
        kinds.add("Division")
    if calls:
        kinds.add("Invocation")
    st["kinds"] = kinds
    return st


def walk_stmts(stmts, in_checker=False):
    for st in stmts:
        yield st, in_checker
        if st["t"] == "if":
            yield from walk_stmts(st["then"], in_checker)
            yield from walk_stmts(st["els"], in_checker)
        elif st["t"] == "while":
            yield from walk_stmts(st["body"], in_checker)
        elif st["t"] == "check":
            yield from walk_stmts(st["block"], True)


def resolve(prog):
    fnames = set(prog["functions"])
    gnames = {g[0] for g in prog["globals"]}

    def check_expr(e, visible, fname):
        if e["t"] == "var":
            if e["name"] not in visible and e["name"] not in gnames:
                raise ParseFailure(f"{fname}: unresolved identifier {e['name']}")
        elif e["t"] == "bin":
            check_expr(e["l"], visible, fname)
            check_expr(e["r"], visible, fname)
        elif e["t"] == "un":
            check_expr(e["e"], visible, fname)
        elif e["t"] == "call":
            if e["name"] not in fnames:
                raise ParseFailure(f"{fname}: call to undefined function {e['name']}")
            if len(e["args"]) != len(prog["functions"][e["name"]]["params"]):
                raise ParseFailure(f"{fname}: arity mismatch calling {e['name']}")
            for a in e["args"]:
                check_expr(a, visible, fname)

    for fname, fn in prog["functions"].items():
        declared = set(fn["params"])
        for p in fn["params"]:
            if p in gnames:
                raise ParseFailure(f"{fname}: parameter {p} shadows a global")

        def block(stmts, visible, in_checker):
            local = set()
            for st in stmts:
                t = st["t"]
                if in_checker and t in ("probe", "check", "output", "return"):
                    raise ParseFailure(f"{fname}: {t} not allowed inside a check block")
                if t == "let":
                    if st["name"] in declared or st["name"] in gnames:
                        raise ParseFailure(f"{fname}: duplicate or shadowing let {st['name']}")
                    check_expr(st["expr"], visible, fname)
                    declared.add(st["name"])
                    local.add(st["name"])
                    visible = visible | {st["name"]}
                elif t == "assign":
                    if st["name"] not in visible and st["name"] not in gnames:
                        raise ParseFailure(f"{fname}: assignment to undeclared {st['name']}")
                    check_expr(st["expr"], visible, fname)
                elif t == "if":
                    check_expr(st["cond"], visible, fname)
                    block(st["then"], visible, in_checker)
                    block(st["els"], visible, in_checker)
                elif t == "while":
                    check_expr(st["cond"], visible, fname)
                    block(st["body"], visible, in_checker)
                elif t == "return":
                    if st["expr"] is not None:
                        check_expr(st["expr"], visible, fname)
                elif t in ("output", "expr"):
                    check_expr(st["expr"], visible, fname)
                elif t == "check":
                    block(st["block"], visible, True)
                    # condition sees the checker block's lets
                    inner = visible | {s["name"] for s, _ in walk_stmts(st["block"]) if s["t"] == "let"}
                    check_expr(st["cond"], inner, fname)

        block(fn["body"], set(fn["params"]), False)

    ids = [st["id"] for f in prog["order"] for st, _ in walk_stmts(prog["functions"][f]["body"])]
    assert len(ids) == len(set(ids))


def parse_program(src):
    return Parser(src).parse_program()


# ---------------------------------------------------------------------------
# interpreter


class RTErr(Exception):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class Trace:
    def __init__(self):
        self.events = []
        self.output = []
        self.ok = True
        self.entry_return = None
        self.error = None


def arith(op, a, b):
    if a[0] != "i" or b[0] != "i":
        raise RTErr("type error: arithmetic on non-integer")
    x, y = a[1], b[1]
    if op == "+":
        r = x + y
    elif op == "-":
        r = x - y
    elif op == "*":
        r = x * y
    elif op == "/":
        if y == 0:
            raise RTErr("division by zero")
        r = abs(x) // abs(y)
        if (x < 0) != (y < 0):
            r = -r
    elif op == "%":
        if y == 0:
            raise RTErr("modulo by zero")
        q = abs(x) // abs(y)
        if (x < 0) != (y < 0):
            q = -q
        r = x - y * q
    else:
        raise AssertionError(op)
    if r < I64_MIN or r > I64_MAX:
        raise RTErr("integer overflow")
    return ("i", r)


class Interp:
    def __init__(self, prog, budget=10_000_000, max_depth=4096):
        self.prog = prog
        self.budget = budget
        self.max_depth = max_depth

    def run(self, args):
        self.trace = Trace()
        self.seq = 0
        self.steps = 0
        self.depth = 0
        self.suppress_depth = 0
        self.act_counter = 0
        self.genv = {name: val for name, val in self.prog["globals"]}
        entry = self.prog["functions"][self.prog["entry"]]
        try:
            if len(args) != len(entry["params"]):
                raise RTErr("arity mismatch for entry function")
            ret = self.call(entry, list(args), suppress=False, is_entry=True)
            self.trace.entry_return = ret
        except RTErr as e:
            self.emit({"type": "RuntimeError", "reason": e.reason}, force=True)
            self.trace.ok = False
            self.trace.error = e.reason
        return self.trace

    def emit(self, ev, force=False):
        if self.suppress_depth > 0 and not force:
            return
        ev["seq"] = self.seq
        self.seq += 1
        self.trace.events.append(ev)

    def step(self):
        self.steps += 1
        if self.steps > self.budget:
            raise RTErr("step budget exhausted")

    def call(self, fn, argvals, suppress, is_entry=False):
        self.depth += 1
        if self.depth > self.max_depth:
            raise RTErr("call depth exceeded")
        act = None
        if not is_entry:
            self.act_counter += 1
            act = self.act_counter
            if not suppress:
                self.emit({"type": "Call", "callee": fn["name"], "act": act})
        frame = {"fn": fn["name"], "scopes": [dict(zip(fn["params"], argvals))]}
        ret = None
        try:
            self.exec_block(fn["body"], frame)
        except ReturnSignal as r:
            ret = r.value
        if not is_entry and not suppress:
            ev = {"type": "Return", "act": act, "value": ret}
            self.emit(ev)
        self.depth -= 1
        return ret

    def exec_block(self, stmts, frame):
        frame["scopes"].append({})
        try:
            for st in stmts:
                self.exec_stmt(st, frame)
        finally:
            frame["scopes"].pop()

    def exec_stmt(self, st, frame):
        t = st["t"]
        self.step()
        if t == "probe":
            self.emit({"type": "ProbeFired", "label": st["label"]})
            return
        if t == "check":
            saved_genv = self.genv
            self.genv = dict(saved_genv)
            sandbox = {"fn": frame["fn"], "scopes": [dict(s) for s in frame["scopes"]]}
            self.suppress_depth += 1
            try:
                # the check block's scope stays live for the condition
                sandbox["scopes"].append({})
                for inner in st["block"]:
                    self.exec_stmt(inner, sandbox)
                cond = self.eval(st["cond"], sandbox)
            finally:
                self.suppress_depth -= 1
                self.genv = saved_genv
            if cond[0] != "b":
                raise RTErr("type error: check condition not boolean")
            if cond[1]:
                self.emit({"type": "CheckFired", "label": st["label"]})
            return
        self.emit({"type": "StmtExec", "sid": st["id"], "kinds": st["kinds"]})
        if t in ("let", "assign"):
            v = self.eval(st["expr"], frame)
            name = st["name"]
            if t == "let":
                frame["scopes"][-1][name] = v
                scope = frame["fn"]
            else:
                scope = None
                for sc in reversed(frame["scopes"]):
                    if name in sc:
                        sc[name] = v
                        scope = frame["fn"]
                        break
                if scope is None:
                    if name in self.genv:
                        self.genv[name] = v
                        scope = "global"
                    else:
                        raise RTErr(f"unbound variable {name}")
            self.emit({"type": "Assign", "scope": scope, "var": name, "value": v})
        elif t == "if":
            c = self.eval(st["cond"], frame)
            if c[0] != "b":
                raise RTErr("type error: if condition not boolean")
            self.exec_block(st["then"] if c[1] else st["els"], frame)
        elif t == "while":
            while True:
                c = self.eval(st["cond"], frame)
                if c[0] != "b":
                    raise RTErr("type error: while condition not boolean")
                if not c[1]:
                    break
                self.exec_block(st["body"], frame)
                self.step()
                self.emit({"type": "StmtExec", "sid": st["id"], "kinds": st["kinds"]})
        elif t == "return":
            v = None
            if st["expr"] is not None:
                v = self.eval(st["expr"], frame)
            raise ReturnSignal(v)
        elif t == "output":
            v = self.eval(st["expr"], frame)
            if self.suppress_depth == 0:
                self.emit({"type": "Output", "value": v})
                self.trace.output.append(v)
        elif t == "expr":
            # a bare call statement may discard a missing result; any
            # other use of a void call result is a runtime error (eval)
            if st["expr"]["t"] == "call":
                fn = self.prog["functions"][st["expr"]["name"]]
                argvals = [self.eval(a, frame) for a in st["expr"]["args"]]
                self.call(fn, argvals, suppress=self.suppress_depth > 0)
            else:
                self.eval(st["expr"], frame)
        else:
            raise AssertionError(t)

    def lookup(self, name, frame):
        for sc in reversed(frame["scopes"]):
            if name in sc:
                return sc[name]
        if name in self.genv:
            return self.genv[name]
        raise RTErr(f"unbound variable {name}")

    def eval(self, e, frame):
        t = e["t"]
        if t == "int":
            return ("i", e["v"])
        if t == "bool":
            return ("b", e["v"])
        if t == "var":
            return self.lookup(e["name"], frame)
        if t == "un":
            v = self.eval(e["e"], frame)
            if e["op"] == "!":
                if v[0] != "b":
                    raise RTErr("type error: ! on non-boolean")
                return ("b", not v[1])
            if v[0] != "i":
                raise RTErr("type error: - on non-integer")
            r = -v[1]
            if r < I64_MIN or r > I64_MAX:
                raise RTErr("integer overflow")
            return ("i", r)
        if t == "bin":
            op = e["op"]
            if op == "&&":
                l = self.eval(e["l"], frame)
                if l[0] != "b":
                    raise RTErr("type error: && on non-boolean")
                if not l[1]:
                    return ("b", False)
                r = self.eval(e["r"], frame)
                if r[0] != "b":
                    raise RTErr("type error: && on non-boolean")
                return ("b", r[1])
            if op == "||":
                l = self.eval(e["l"], frame)
                if l[0] != "b":
                    raise RTErr("type error: || on non-boolean")
                if l[1]:
                    return ("b", True)
                r = self.eval(e["r"], frame)
                if r[0] != "b":
                    raise RTErr("type error: || on non-boolean")
                return ("b", r[1])
            l = self.eval(e["l"], frame)
            r = self.eval(e["r"], frame)
            if op in ("+", "-", "*", "/", "%"):
                return arith(op, l, r)
            if op in ("<", "<=", ">", ">="):
                if l[0] != "i" or r[0] != "i":
                    raise RTErr("type error: ordering on non-integers")
                return ("b", {"<": l[1] < r[1], "<=": l[1] <= r[1],
                              ">": l[1] > r[1], ">=": l[1] >= r[1]}[op])
            if op in ("==", "!="):
                if l[0] != r[0]:
                    raise RTErr("type error: comparing different types")
                return ("b", (l == r) if op == "==" else (l != r))
            raise AssertionError(op)
        if t == "call":
            fn = self.prog["functions"][e["name"]]
            argvals = [self.eval(a, frame) for a in e["args"]]
            ret = self.call(fn, argvals, suppress=self.suppress_depth > 0)
            if ret is None:
                raise RTErr(f"call to '{e['name']}' produced no value")
            return ret
        raise AssertionError(t)


def run_program(prog, args, budget=10_000_000):
    return Interp(prog, budget=budget).run(args)


# ---------------------------------------------------------------------------
# corpus loading


def jval(x):
    if isinstance(x, bool):
        return ("b", x)
    if isinstance(x, int):
        return ("i", x)
    raise ValueError(f"bad literal {x!r}")


def load_corpus(root):
    with open(os.path.join(root, "corpus.json")) as f:
        manifest = json.load(f)
    versions = {}
    groups = []
    for g in manifest["groups"]:
        groups.append({"name": g["name"], "versions": []})
        for rel in g["versions"]:
            vdir = os.path.join(root, rel)
            with open(os.path.join(vdir, "version.json")) as f:
                vj = json.load(f)
            with open(os.path.join(vdir, vj["buggy"])) as f:
                buggy = parse_program(f.read())
            with open(os.path.join(vdir, vj["fixed"])) as f:
                fixed = parse_program(f.read())
            with open(os.path.join(vdir, vj["tests"])) as f:
                tj = json.load(f)
            tests = []
            for tc in tj:
                t = {"name": tc["name"], "args": [jval(a) for a in tc["args"]]}
                t["expected"] = [jval(v) for v in tc["expected_output"]] if "expected_output" in tc else None
                tests.append(t)
            # structural checks mirroring the loader
            assert vj["defect_fn"] in buggy["functions"] and vj["defect_fn"] in fixed["functions"]
            all_ids = {st["id"] for fn in buggy["order"]
                       for st, _ in walk_stmts(buggy["functions"][fn]["body"])}
            for s in vj["defect_sites"]:
                assert s in all_ids, f"{vj['id']}: defect site {s} missing"
            probes = {st["label"] for fn in buggy["order"]
                      for st, _ in walk_stmts(buggy["functions"][fn]["body"]) if st["t"] == "probe"}
            checks = {st["label"] for fn in buggy["order"]
                      for st, _ in walk_stmts(buggy["functions"][fn]["body"]) if st["t"] == "check"}
            for w in vj["weak_labels"]:
                assert w in probes, f"{vj['id']}: weak label {w} missing"
            for s in vj["strong_labels"]:
                assert s in checks, f"{vj['id']}: strong label {s} missing"
            for fn in fixed["order"]:
                for st, _ in walk_stmts(fixed["functions"][fn]["body"]):
                    assert st["t"] not in ("probe", "check"), f"{vj['id']}: fixed has checkers"
            vp = {
                "id": vj["id"], "dir": rel, "buggy": buggy, "fixed": fixed,
                "defect_fn": vj["defect_fn"], "defect_sites": vj["defect_sites"],
                "weak": set(vj["weak_labels"]), "strong": set(vj["strong_labels"]),
                "tests": tests,
            }
            versions[vp["id"]] = vp
            groups[-1]["versions"].append(vp["id"])
    specs = []
    if "drr_specs" in manifest:
        with open(os.path.join(root, manifest["drr_specs"])) as f:
            sj = json.load(f)
        for s in sj:
            with open(os.path.join(root, os.path.dirname(manifest["drr_specs"]), s["program"])) as f:
                prog = parse_program(f.read())
            specs.append({"name": s["name"], "prog": prog,
                          "domain": [int(v) for v in s["domain"]],
                          "infected": [int(v) for v in s["infected"]]})
    return {"groups": groups, "versions": versions, "drr_specs": specs}


# ---------------------------------------------------------------------------
# analyses


def classify_version(vp, budget=10_000_000):
    """Returns (records, errors); records are per-test dicts."""
    records, errors = [], []
    for t in vp["tests"]:
        bt = run_program(vp["buggy"], t["args"], budget)
        ft = run_program(vp["fixed"], t["args"], budget)
        if not bt.ok or not ft.ok:
            phase = "buggy" if not bt.ok else "fixed"
            reason = bt.error if not bt.ok else ft.error
            errors.append({"version": vp["id"], "test": t["name"], "phase": phase, "reason": reason})
            continue
        reach = sum(1 for e in bt.events if e["type"] == "ProbeFired" and e["label"] in vp["weak"])
        infect = sum(1 for e in bt.events if e["type"] == "CheckFired" and e["label"] in vp["strong"])
        ok = bt.output == ft.output and bt.entry_return == ft.entry_return
        if not ok:
            label = "Failing"
        elif infect > 0:
            label = "StrongCC"
        elif reach > 0:
            label = "WeakCC"
        else:
            label = "TruePassing"
        in_tbug = vp["defect_fn"] == vp["buggy"]["entry"] or any(
            e["type"] == "Call" and e["callee"] == vp["defect_fn"] for e in bt.events)
        records.append({
            "version": vp["id"], "test": t["name"], "label": label,
            "reach": reach, "infect": infect, "oracle_pass": ok, "in_tbug": in_tbug,
            "trace": bt, "fixed_trace": ft,
        })
    return records, errors


def prevalence(all_records):
    fail = sum(1 for r in all_records if r["label"] == "Failing")
    strong = sum(1 for r in all_records if r["label"] == "StrongCC")
    weak = sum(1 for r in all_records if r["label"] == "WeakCC")
    tp = sum(1 for r in all_records if r["label"] == "TruePassing")
    tp_tbug = sum(1 for r in all_records if r["label"] == "TruePassing" and r["in_tbug"])
    tbug = sum(1 for r in all_records if r["in_tbug"])
    total = len(all_records)

    def ratio(n, d):
        return render3_frac(n, d) if d != 0 else None

    return {
        "counts": {"fail": fail, "strong_cc": strong, "weak_cc": weak,
                   "true_passing_in_tbug": tp_tbug, "true_passing": tp},
        "denominators": {"t_bug": tbug, "total": total},
        "ratios": {
            "strong_over_fail": ratio(strong, fail),
            "weak_over_fail": ratio(weak, fail),
            "strong_over_tbug": ratio(strong, tbug),
            "weak_over_tbug": ratio(weak, tbug),
            "strong_over_total": ratio(strong, total),
            "weak_over_total": ratio(weak, total),
        },
    }


def compute_levels(records, versions):
    out = []
    for rec in records:
        tr = rec["trace"]
        entry = versions[rec["version"]]["buggy"]["entry"]
        callees = {e["callee"] for e in tr.events if e["type"] == "Call"}
        callees.add(entry)
        freq = sum(1 for e in tr.events if e["type"] == "Call") + 1
        out.append({"version": rec["version"], "test": rec["test"],
                    "level_count": len(callees), "level_freq": freq})
    return out


def bin_levels(levels, records, mode, k=10):
    """Linear equal-width binning; returns list of bin dicts."""
    key = "level_count" if mode == "count" else "level_freq"
    vals = {(l["version"], l["test"]): l[key] for l in levels}
    labels = {(r["version"], r["test"]): r["label"] for r in records}
    xs = sorted(vals.values())
    lo, hi = xs[0], xs[-1]
    bins = []
    if lo == hi:
        nbins = 1
        bounds = [Fraction(lo), Fraction(hi)]
    else:
        nbins = k
        bounds = [Fraction(lo) + Fraction(i * (hi - lo), k) for i in range(k + 1)]
    counts = [{"fail": 0, "strong": 0, "weak": 0} for _ in range(nbins)]
    for (vt, x) in vals.items():
        if lo == hi:
            idx = 0
        else:
            idx = (x - lo) * k // (hi - lo)
            if idx == k:
                idx = k - 1
        lab = labels[vt]
        if lab == "Failing":
            counts[idx]["fail"] += 1
        elif lab == "StrongCC":
            counts[idx]["strong"] += 1
        elif lab == "WeakCC":
            counts[idx]["weak"] += 1
    rows = []
    for i in range(nbins):
        c = counts[i]
        def rr(n):
            return render3_frac(n, c["fail"]) if c["fail"] > 0 else None
        rows.append({
            "mode": mode, "scale": "linear", "bin_index": i,
            "lo": render3_fraction(bounds[i]), "hi": render3_fraction(bounds[i + 1]),
            "fail": c["fail"], "strong": c["strong"], "weak": c["weak"],
            "strong_over_fail": rr(c["strong"]),
            "weak_over_fail": rr(c["weak"]),
            "cc_over_fail": rr(c["strong"] + c["weak"]),
        })
    return rows


def boxplot_stats(samples):
    xs = sorted(samples)
    n = len(xs)

    def quart(p):
        pos = p * (n - 1)
        lo = math.floor(pos)
        frac = pos - lo
        if lo + 1 < n:
            return xs[lo] + (xs[lo + 1] - xs[lo]) * frac
        return float(xs[lo])

    q1, med, q3 = quart(0.25), quart(0.5), quart(0.75)
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = [x for x in xs if lo_fence <= x <= hi_fence]
    outliers = [x for x in xs if x < lo_fence or x > hi_fence]
    wlo = min(inside) if inside else q1
    whi = max(inside) if inside else q3
    wlo = min(wlo, q1)
    whi = max(whi, q3)
    return {"n": n, "min": float(xs[0]), "q1": float(q1), "median": float(med),
            "q3": float(q3), "max": float(xs[-1]),
            "whisker_low": float(wlo), "whisker_high": float(whi),
            "outliers": outliers}


def box_render(bs):
    return {"n": bs["n"], "min": render3_double(bs["min"]), "q1": render3_double(bs["q1"]),
            "median": render3_double(bs["median"]), "q3": render3_double(bs["q3"]),
            "max": render3_double(bs["max"]),
            "whisker_low": render3_double(bs["whisker_low"]),
            "whisker_high": render3_double(bs["whisker_high"]),
            "outlier_count": len(bs["outliers"]),
            "outliers": bs["outliers"]}


def profile_trace(tr):
    first = None
    for e in tr.events:
        if e["type"] == "CheckFired":
            first = e["seq"]
            break
    if first is None:
        return None
    prof = {k: {"unique": set(), "total": 0} for k in KINDS}
    for e in tr.events:
        if e["type"] == "StmtExec" and e["seq"] > first:
            prof["All"]["unique"].add(e["sid"])
            prof["All"]["total"] += 1
            for k in e["kinds"]:
                prof[k]["unique"].add(e["sid"])
                prof[k]["total"] += 1
    return {k: {"unique": len(v["unique"]), "total": v["total"]} for k, v in prof.items()}


def partial_states(vp, prog, trace, defect_fn):
    """List of (bracket lo, hi, assigns dict, return value, fired) per activation."""
    entry = prog["entry"]
    acts = []
    if defect_fn == entry:
        lo, hi = -1, float("inf")
        assigns = {}
        for e in trace.events:
            if e["type"] == "Assign":
                assigns[f"{e['scope']}.{e['var']}"] = e["value"]
        fired = any(e["type"] == "CheckFired" and e["label"] in vp["strong"] for e in trace.events)
        acts.append({"assigns": assigns, "ret": trace.entry_return, "fired": fired})
        return acts, None
    open_act = None
    brackets = []
    for e in trace.events:
        if e["type"] == "Call" and e["callee"] == defect_fn:
            if open_act is not None:
                return None, "recursive"
            open_act = {"act": e["act"], "lo": e["seq"]}
        elif e["type"] == "Return" and open_act is not None and e["act"] == open_act["act"]:
            brackets.append((open_act["lo"], e["seq"], e.get("value")))
            open_act = None
    if open_act is not None:
        return None, "recursive"
    for lo, hi, ret in brackets:
        assigns = {}
        fired = False
        for e in trace.events:
            if lo < e["seq"] < hi:
                if e["type"] == "Assign":
                    assigns[f"{e['scope']}.{e['var']}"] = e["value"]
                elif e["type"] == "CheckFired" and e["label"] in vp["strong"]:
                    fired = True
        acts.append({"assigns": assigns, "ret": ret, "fired": fired})
    return acts, None


def capture_states(vp, left_prog, right_prog, test, budget=10_000_000):
    lt = run_program(left_prog, test["args"], budget)
    rt = run_program(right_prog, test["args"], budget)
    if not lt.ok or not rt.ok:
        return {"status": "error"}
    lacts, lerr = partial_states(vp, left_prog, lt, vp["defect_fn"])
    racts, rerr = partial_states(vp, right_prog, rt, vp["defect_fn"])
    if lerr or rerr:
        return {"status": "recursive"}
    if len(lacts) != len(racts):
        return {"status": "misaligned", "n": len(lacts)}
    recs = []
    for i, (la, ra) in enumerate(zip(lacts, racts), start=1):
        equal = la["assigns"] == ra["assigns"] and la["ret"] == ra["ret"]
        fired = la["fired"]
        if fired and not equal:
            lab = "LowFailing"
        elif fired and equal:
            lab = "LowCC"
        elif not fired and equal:
            lab = "LowTruePassing"
        else:
            lab = "Anomalous"
        recs.append({"i": i, "fired": fired, "equal": equal, "label": lab,
                     "buggy": la, "fixed": ra})
    return {"status": "ok", "activations": recs}


def categorize(recs):
    labs = [r["label"] for r in recs]
    if any(l == "Anomalous" for l in labs):
        return "ANOMALOUS"
    has_cc = any(l == "LowCC" for l in labs)
    has_fail = any(l == "LowFailing" for l in labs)
    if has_cc and has_fail:
        return "IN_OUT"
    if has_cc:
        return "IN"
    if has_fail:
        return "OUT"
    return "IN"  # all LowTruePassing: nothing escaped the activation


def coverage_matrix(vp, records):
    stmts = [st["id"] for fname in vp["buggy"]["order"]
             for st, in_chk in walk_stmts(vp["buggy"]["functions"][fname]["body"])
             if not in_chk and st["t"] not in ("probe", "check")]
    tests = [r["test"] for r in records]
    matrix = []
    for sid in stmts:
        row = []
        for r in records:
            covered = any(e["type"] == "StmtExec" and e["sid"] == sid for e in r["trace"].events)
            row.append(covered)
        matrix.append(row)
    verdicts = [r["oracle_pass"] for r in records]
    return {"stmts": stmts, "tests": tests, "matrix": matrix, "verdicts": verdicts}


def suspiciousness(cov, metric):
    F = sum(1 for v in cov["verdicts"] if not v)
    P = sum(1 for v in cov["verdicts"] if v)
    scores = []
    for row in cov["matrix"]:
        f = sum(1 for c, v in zip(row, cov["verdicts"]) if c and not v)
        p = sum(1 for c, v in zip(row, cov["verdicts"]) if c and v)
        if metric == "tarantula":
            ef = f / F if F > 0 else 0.0
            ep = p / P if P > 0 else 0.0
            s = 0.0 if ef + ep == 0.0 else ef / (ef + ep)
        elif metric == "jaccard":
            s = f / (F + p) if F + p > 0 else 0.0
        elif metric == "ochiai":
            d = math.sqrt(F * (f + p))
            s = f / d if d != 0.0 else 0.0
        elif metric == "ample":
            ef = f / F if F > 0 else 0.0
            ep = p / P if P > 0 else 0.0
            s = abs(ef - ep)
        else:
            raise AssertionError(metric)
        scores.append(s)
    return scores


def worst_rank(scores, idx):
    d = scores[idx]
    return sum(1 for s in scores if s > d) + sum(1 for s in scores if s == d)


def submatrix(cov, keep):
    idx = [i for i, t in enumerate(cov["tests"]) if t in keep]
    return {"stmts": cov["stmts"], "tests": [cov["tests"][i] for i in idx],
            "matrix": [[row[i] for i in idx] for row in cov["matrix"]],
            "verdicts": [cov["verdicts"][i] for i in idx]}


def greedy_reduce_all(cov, cap=10_000):
    tests = cov["tests"]
    covsets = {t: {cov["stmts"][si] for si, row in enumerate(cov["matrix"]) if row[ti]}
               for ti, t in enumerate(tests)}
    universe = set().union(*covsets.values()) if covsets else set()
    outcomes = set()
    truncated = [False]

    def rec(chosen, covered):
        if len(outcomes) >= cap:
            truncated[0] = True
            return
        if covered == universe:
            outcomes.add(frozenset(chosen))
            return
        gains = {t: len(covsets[t] - covered) for t in tests if t not in chosen}
        best = max(gains.values())
        if best == 0:
            outcomes.add(frozenset(chosen))
            return
        for t in sorted(t for t, g in gains.items() if g == best):
            rec(chosen + [t], covered | covsets[t])

    rec([], set())
    return sorted(sorted(o) for o in outcomes), truncated[0]


def prioritize_all(cov, cap=10_000):
    tests = cov["tests"]
    covsets = {t: {cov["stmts"][si] for si, row in enumerate(cov["matrix"]) if row[ti]}
               for ti, t in enumerate(tests)}
    orders = []
    truncated = [False]

    def rec(order, covered):
        if len(orders) >= cap:
            truncated[0] = True
            return
        if len(order) == len(tests):
            orders.append(list(order))
            return
        gains = {t: len(covsets[t] - covered) for t in tests if t not in order}
        best = max(gains.values())
        for t in sorted(t for t, g in gains.items() if g == best):
            rec(order + [t], covered | covsets[t])

    rec([], set())
    return sorted(orders), truncated[0]


def drr_eval(spec, v):
    tr = run_program(spec["prog"], [("i", v)])
    assert tr.ok and tr.entry_return is not None, f"{spec['name']}: evaluation failed on {v}"
    return tr.entry_return


def drr_result(spec):
    image = {}
    for v in spec["domain"]:
        image.setdefault(drr_eval(spec, v), []).append(v)
    dsize, rsize = len(spec["domain"]), len(image)
    masks = {}
    for v in spec["infected"]:
        out = drr_eval(spec, v)
        colliders = sorted(x for x in image.get(out, []) if x != v)
        masks[v] = {"masked": bool(colliders), "colliders": colliders}
    masked = sum(1 for v in spec["infected"] if masks[v]["masked"])
    return {
        "spec": spec["name"], "domain_size": dsize, "range_size": rsize,
        "drr": render3_frac(dsize, rsize),
        "masking_rate": render3_frac(masked, len(spec["infected"])) if spec["infected"] else None,
        "masks": masks,
    }


# ---------------------------------------------------------------------------
# golden assembly + hand-derived anchors


def vjson(v):
    if v is None:
        return None
    return v[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--corpus", default="corpus")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    corpus = load_corpus(args.corpus)
    versions = corpus["versions"]
    vids = sorted(versions)

    all_records = []
    all_errors = []
    per_version = {}
    for vid in vids:
        recs, errs = classify_version(versions[vid])
        per_version[vid] = recs
        all_records.extend(recs)
        all_errors.extend(errs)
    assert not all_errors, f"unexpected subject errors: {all_errors}"

    # validation: fixed runs match expected output, defect observable
    for vid in vids:
        vp = versions[vid]
        assert any(not r["oracle_pass"] for r in per_version[vid]), f"{vid}: defect not observable"
        for t, r in zip(vp["tests"], per_version[vid]):
            if t["expected"] is not None:
                assert r["fixed_trace"].output == t["expected"], \
                    f"{vid}/{t['name']}: fixed output {r['fixed_trace'].output} != declared {t['expected']}"

    # partition / structural properties
    for r in all_records:
        assert r["label"] in ("Failing", "TruePassing", "WeakCC", "StrongCC")
        if r["label"] == "StrongCC":
            assert r["infect"] > 0 and r["reach"] > 0
        if r["infect"] > 0:
            assert r["reach"] > 0, f"{r}: infection without reach"
        if r["reach"] > 0:
            assert r["in_tbug"]

    classification = [
        {"version": r["version"], "test": r["test"], "label": r["label"],
         "reach_count": r["reach"], "infect_count": r["infect"],
         "oracle_pass": r["oracle_pass"], "in_tbug": r["in_tbug"]}
        for r in sorted(all_records, key=lambda r: (r["version"], r["test"]))]

    # --- median anchors
    med = {r["test"]: r["label"] for r in per_version["median"]}
    assert med == {"t1": "WeakCC", "t2": "TruePassing", "t3": "TruePassing",
                   "t4": "TruePassing", "t5": "TruePassing", "t6": "Failing"}, med

    covs = {vid: coverage_matrix(versions[vid],
                                 sorted(per_version[vid], key=lambda r: r["test"]))
            for vid in vids}
    mcov = covs["median"]
    assert mcov["tests"] == ["t1", "t2", "t3", "t4", "t5", "t6"]
    expected_matrix = [
        "111111",  # let m = z
        "111111",  # if (y < z)
        "110011",  # if (x < y)
        "010000",  # m = y
        "100011",  # else-if (x < z)
        "100001",  # m = y   <- defect
        "001100",  # placeholder arm
        "001100",  # if (x > y)
        "001000",  # m = y
        "000100",  # else-if (x > z)
        "000000",  # m = x
        "111111",  # output(m)
    ]
    got = ["".join("1" if c else "0" for c in row) for row in mcov["matrix"]]
    assert got == expected_matrix, f"median coverage mismatch:\n{got}"
    assert mcov["stmts"][5] == "L6"

    # --- suspiciousness, reduction, prioritization over variants
    variant_defs = [("full", None), ("no_weakcc", {"WeakCC"}), ("no_cc", {"WeakCC", "StrongCC"})]
    metrics = ["tarantula", "jaccard", "ochiai", "ample"]
    susp_rows = []
    reduction_rows = []
    prioritization_rows = []
    for vid in vids:
        vp = versions[vid]
        cov = covs[vid]
        labels = {r["test"]: r["label"] for r in per_version[vid]}
        for vname, dropped in variant_defs:
            keep = [t for t in cov["tests"] if dropped is None or labels[t] not in dropped]
            sub = submatrix(cov, set(keep))
            for metric in metrics:
                scores = suspiciousness(sub, metric)
                for si, sid in enumerate(sub["stmts"]):
                    rank = worst_rank(scores, si) if sid in vp["defect_sites"] else None
                    susp_rows.append({"version": vid, "variant": vname, "metric": metric,
                                      "stmt": sid, "score": render3_double(scores[si]),
                                      "defect_rank": rank})
            outs, trunc = greedy_reduce_all(sub)
            reduction_rows.append({"version": vid, "variant": vname,
                                   "outcomes": outs, "truncated": trunc})
            orders, trunc = prioritize_all(sub)
            prioritization_rows.append({"version": vid, "variant": vname,
                                        "orderings": orders, "truncated": trunc})

    def susp_at(vid, variant, metric, stmt):
        for row in susp_rows:
            if (row["version"], row["variant"], row["metric"], row["stmt"]) == (vid, variant, metric, stmt):
                return row
        raise KeyError

    assert susp_at("median", "full", "tarantula", "L6")["score"] == "0.833"
    assert susp_at("median", "no_weakcc", "tarantula", "L6")["score"] == "1.000"
    assert susp_at("median", "full", "jaccard", "L6")["score"] == "0.500"
    assert susp_at("median", "full", "ochiai", "L6")["score"] == "0.707"
    assert susp_at("median", "full", "ample", "L6")["score"] == "0.800"
    assert susp_at("median", "full", "tarantula", "L6")["defect_rank"] == 1

    med_red_full = next(r for r in reduction_rows if r["version"] == "median" and r["variant"] == "full")
    assert med_red_full["outcomes"] == [["t1", "t2", "t3", "t4"], ["t2", "t3", "t4", "t6"]], med_red_full
    med_red_now = next(r for r in reduction_rows if r["version"] == "median" and r["variant"] == "no_weakcc")
    assert med_red_now["outcomes"] == [["t2", "t3", "t4", "t6"]]

    med_pri_full = next(r for r in prioritization_rows if r["version"] == "median" and r["variant"] == "full")
    assert ["t1", "t3", "t4", "t2", "t5", "t6"] in med_pri_full["orderings"]
    assert ["t6", "t3", "t4", "t2", "t5", "t1"] in med_pri_full["orderings"]
    med_pri_now = next(r for r in prioritization_rows if r["version"] == "median" and r["variant"] == "no_weakcc")
    assert all(o.index("t6") <= 1 for o in med_pri_now["orderings"])

    # --- levels
    levels = compute_levels(sorted(all_records, key=lambda r: (r["version"], r["test"])), versions)
    for l, r in zip(levels, sorted(all_records, key=lambda r: (r["version"], r["test"]))):
        assert l["level_freq"] >= l["level_count"] >= 1
    med_levels = [l for l in levels if l["version"] == "median"]
    assert all(l["level_count"] == 1 and l["level_freq"] == 1 for l in med_levels)
    bins = {"count": bin_levels(levels, all_records, "count"),
            "freq": bin_levels(levels, all_records, "freq")}
    for mode in bins:
        tot = sum(b["fail"] + b["strong"] + b["weak"] for b in bins[mode])
        want = sum(1 for r in all_records if r["label"] in ("Failing", "StrongCC", "WeakCC"))
        assert tot == want

    groups_of = {}
    for g in corpus["groups"]:
        for vid in g["versions"]:
            groups_of[vid] = g["name"]
    level_box = []
    for gname in sorted({g["name"] for g in corpus["groups"]}):
        for measure in ("count", "freq"):
            key = "level_count" if measure == "count" else "level_freq"
            samples = [l[key] for l in levels if groups_of[l["version"]] == gname]
            level_box.append({"group": gname, "measure": measure, **box_render(boxplot_stats(samples))})

    # --- propagation
    prop_rows = []
    profiles = []
    for r in sorted(all_records, key=lambda q: (q["version"], q["test"])):
        prof = profile_trace(r["trace"])
        if prof is None:
            continue
        assert r["label"] in ("Failing", "StrongCC"), r
        profiles.append({"version": r["version"], "test": r["test"], "label": r["label"], "prof": prof})
        for k in KINDS:
            assert prof[k]["total"] >= prof[k]["unique"] >= 0
            assert prof["All"]["total"] >= prof[k]["total"]
            assert prof["All"]["unique"] >= prof[k]["unique"]
            prop_rows.append({"version": r["version"], "test": r["test"], "label": r["label"],
                              "kind": k, "unique": prof[k]["unique"], "total": prof[k]["total"]})

    n2 = next(p for p in profiles if p["version"] == "modloop" and p["test"] == "n2")
    assert n2["label"] == "StrongCC"
    assert n2["prof"]["All"] == {"unique": 3, "total": 10}, n2["prof"]
    assert n2["prof"]["Conditional"] == {"unique": 1, "total": 5}
    assert n2["prof"]["Modulo"] == {"unique": 1, "total": 4}
    assert n2["prof"]["Multiplication"]["total"] == 0
    assert n2["prof"]["Division"]["total"] == 0
    assert n2["prof"]["Invocation"]["total"] == 0

    strong_tot = [p["prof"]["All"]["total"] for p in profiles if p["label"] == "StrongCC"]
    fail_tot = [p["prof"]["All"]["total"] for p in profiles if p["label"] == "Failing"]
    assert strong_tot and fail_tot
    assert sum(strong_tot) / len(strong_tot) > sum(fail_tot) / len(fail_tot), \
        (strong_tot, fail_tot)

    prop_box = []
    for label in ("Failing", "StrongCC"):
        for k in KINDS:
            for counter in ("unique", "total"):
                samples = [p["prof"][k][counter] for p in profiles if p["label"] == label]
                row = {"label": label, "kind": k, "counter": counter}
                if samples:
                    row.update(box_render(boxplot_stats(samples)))
                else:
                    row.update({"n": 0})
                prop_box.append(row)

    bs = boxplot_stats([1, 2, 3, 4, 100])
    assert (bs["q1"], bs["q3"], bs["outliers"], bs["whisker_high"]) == (2.0, 4.0, [100], 4.0)
    bs = boxplot_stats([1, 2, 3])
    assert (bs["q1"], bs["median"], bs["q3"]) == (1.5, 2.0, 2.5)

    # --- nullification
    nul_rows = []
    nul_summary = []
    self_low_failing = 0
    for vid in vids:
        vp = versions[vid]
        strong_tests = [t for t, r in zip(vp["tests"], per_version[vid]) if r["label"] == "StrongCC"]
        cats = {"IN": 0, "OUT": 0, "IN_OUT": 0, "ANOMALOUS": 0, "MISALIGNED": 0}
        ns = []
        for t in sorted(strong_tests, key=lambda t: t["name"]):
            res = capture_states(vp, vp["buggy"], vp["fixed"], t)
            assert res["status"] in ("ok", "misaligned"), res
            if res["status"] == "misaligned":
                cats["MISALIGNED"] += 1
                nul_rows.append({"version": vid, "test": t["name"], "n": res["n"],
                                 "category": "MISALIGNED", "activations": []})
                continue
            cat = categorize(res["activations"])
            cats[cat] += 1
            ns.append(len(res["activations"]))
            nul_rows.append({
                "version": vid, "test": t["name"], "n": len(res["activations"]),
                "category": cat,
                "activations": [
                    {"i": a["i"], "fired": a["fired"], "equal": a["equal"], "label": a["label"],
                     "buggy_assigns": {k: vjson(v) for k, v in sorted(a["buggy"]["assigns"].items())},
                     "buggy_return": vjson(a["buggy"]["ret"]),
                     "fixed_assigns": {k: vjson(v) for k, v in sorted(a["fixed"]["assigns"].items())},
                     "fixed_return": vjson(a["fixed"]["ret"])}
                    for a in res["activations"]],
            })
        nul_summary.append({
            "version": vid, "t_cchigh": len(strong_tests),
            "avg_n": render3_frac(sum(ns), len(ns)) if ns else None,
            "in": cats["IN"], "out": cats["OUT"], "in_out": cats["IN_OUT"],
            "anomalous": cats["ANOMALOUS"], "misaligned": cats["MISALIGNED"],
        })
        # self comparison over every test
        for t in vp["tests"]:
            res = capture_states(vp, vp["buggy"], vp["buggy"], t)
            assert res["status"] == "ok"
            self_low_failing += sum(1 for a in res["activations"] if a["label"] == "LowFailing")
            assert all(a["equal"] for a in res["activations"])
    assert self_low_failing == 0

    bycat = {s["version"]: s for s in nul_summary}
    for vid, want in [("outcorpus-v1", "out"), ("outcorpus-v2", "out"), ("outcorpus-v3", "out")]:
        s = bycat[vid]
        assert s["out"] == 2 and s["in"] == 0 and s["in_out"] == 0 and s["t_cchigh"] == 2, s
    for vid in ("incorpus-v1", "incorpus-v2"):
        s = bycat[vid]
        assert s["in"] == 2 and s["out"] == 0 and s["in_out"] == 0 and s["t_cchigh"] == 2, s
    s = bycat["inout-v1"]
    assert s["in_out"] == 2 and s["in"] == 0 and s["out"] == 0 and s["t_cchigh"] == 2, s
    assert all(s["anomalous"] == 0 and s["misaligned"] == 0 for s in nul_summary)

    # defect ranks never worsen when CC tests are dropped (tarantula/jaccard/ochiai)
    ranks = {}
    for row in susp_rows:
        if row["defect_rank"] is not None:
            ranks[(row["version"], row["variant"], row["metric"], row["stmt"])] = row["defect_rank"]
    for (vid, variant, metric, stmt), rank in ranks.items():
        if variant == "full" or metric == "ample":
            continue
        full_rank = ranks[(vid, "full", metric, stmt)]
        assert rank <= full_rank, \
            f"{vid}/{metric}/{stmt}: rank worsened {full_rank} -> {rank} in {variant}"

    # --- DRR
    drr_rows = [drr_result(s) for s in corpus["drr_specs"]]
    byname = {d["spec"]: d for d in drr_rows}
    assert byname["S1"]["drr"] == "1.000" and byname["S1"]["masks"][4] == {"masked": False, "colliders": []}
    assert byname["S2"]["drr"] == "1.667" and byname["S2"]["masks"][4] == {"masked": True, "colliders": [1]}
    assert byname["S3"]["drr"] == "2.500" and byname["S3"]["masks"][4] == {"masked": True, "colliders": [3, 5]}
    assert byname["S1"]["masking_rate"] == "0.000"
    assert byname["S2"]["masking_rate"] == "1.000"
    assert byname["S3"]["masking_rate"] == "1.000"

    # --- corpus stats
    stats_rows = []
    for gname in sorted({g["name"] for g in corpus["groups"]}):
        gvids = [vid for g in corpus["groups"] if g["name"] == gname for vid in g["versions"]]
        tsizes = [len(versions[vid]["tests"]) for vid in gvids]
        tbugs = [sum(1 for r in per_version[vid] if r["in_tbug"]) for vid in gvids]
        stats_rows.append({
            "group": gname, "versions": len(gvids),
            "t_min": min(tsizes), "t_max": max(tsizes),
            "t_avg": render3_frac(sum(tsizes), len(tsizes)), "t_sum": sum(tsizes),
            "tbug_min": min(tbugs), "tbug_max": max(tbugs),
            "tbug_avg": render3_frac(sum(tbugs), len(tbugs)), "tbug_sum": sum(tbugs),
        })

    prev = prevalence(all_records)
    assert prev["denominators"]["total"] == len(all_records)
    c = prev["counts"]
    assert c["fail"] + c["strong_cc"] + c["weak_cc"] + c["true_passing"] == prev["denominators"]["total"]

    golden = {
        "meta": {"budget": 10_000_000, "bins": 10, "scale": "linear"},
        "versions": vids,
        "classification": classification,
        "prevalence": prev,
        "levels": levels,
        "level_bins": bins,
        "level_box": level_box,
        "propagation": prop_rows,
        "propagation_box": prop_box,
        "coverage": {vid: {"stmts": covs[vid]["stmts"], "tests": covs[vid]["tests"],
                           "matrix": ["".join("1" if c else "0" for c in row)
                                      for row in covs[vid]["matrix"]],
                           "verdicts": covs[vid]["verdicts"]}
                     for vid in vids},
        "suspiciousness": susp_rows,
        "reduction": reduction_rows,
        "prioritization": prioritization_rows,
        "nullification": nul_rows,
        "nullification_summary": nul_summary,
        "self_comparison_low_failing": self_low_failing,
        "drr": [{**d, "masks": {str(k): v for k, v in d["masks"].items()}} for d in drr_rows],
        "corpus_stats": stats_rows,
    }

    print(f"versions: {len(vids)}, tests: {len(all_records)}, "
          f"profiles: {len(profiles)} (strong {len(strong_tot)}, failing {len(fail_tot)}), "
          f"strongcc-mean {sum(strong_tot)/len(strong_tot):.2f} vs failing-mean {sum(fail_tot)/len(fail_tot):.2f}")
    label_counts = {}
    for r in all_records:
        label_counts[r["label"]] = label_counts.get(r["label"], 0) + 1
    print("labels:", dict(sorted(label_counts.items())))
    print("all anchor assertions passed")

    if args.out:
        os.makedirs(os.path.dirname(args.out), exist_ok=True)
        with open(args.out, "w") as f:
            json.dump(golden, f, sort_keys=True, indent=1)
            f.write("\n")
        print(f"wrote {args.out}")


if __name__ == "__main__":
    sys.exit(main())
