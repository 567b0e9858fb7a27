"""OpenQASM 2.0 subset reader and writer."""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .circuit import GATE_SIGNATURES, Circuit, CircuitError, Gate
from .phase import Phase


class QasmError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0) -> None:
        self.line = line
        self.col = col
        self.msg = msg
        super().__init__(f"line {line}, col {col}: {msg}" if line else msg)


class QasmWarning(UserWarning):
    pass


_ALIASES = {"CX": "cx", "U": "u3", "u": "u3", "p": "u1", "cnot": "cx", "toffoli": "ccx"}
_NOOPS = {"id", "u0"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<eq>==)
  | (?P<op>[\[\](){};,+\-*/^])
""", re.VERBOSE)

_LAYOUT_COMMENT = re.compile(r"//\s*([io])\s+((?:\d+\s*)+)$")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> tuple[list[_Tok], dict[str, tuple[list[int], int]]]:
    toks: list[_Tok] = []
    layouts: dict[str, tuple[list[int], int]] = {}
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QasmError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "comment":
            lm = _LAYOUT_COMMENT.match(s.strip())
            if lm:
                if lm.group(1) in layouts:
                    raise QasmError(f"duplicate '// {lm.group(1)}' layout comment", line, col)
                layouts[lm.group(1)] = ([int(x) for x in lm.group(2).split()], line)
        elif kind != "ws":
            toks.append(_Tok(kind, s, line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks, layouts


# Angle values: (pi coefficient, constant) kept exact where possible. A float
# pi coefficient is folded into the constant.
_Num = Union[Fraction, float]
_Val = tuple  # (pi: _Num, const: _Num)


def _norm(pi: _Num, c: _Num) -> _Val:
    if isinstance(pi, float):
        return (Fraction(0), float(c) + pi * math.pi)
    return (pi, c)


def _as_float(v: _Val) -> float:
    return float(v[0]) * math.pi + float(v[1])


_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
          "ln": math.log, "sqrt": math.sqrt}


def _eval(node, env: dict[str, _Val]) -> _Val:
    kind = node[0]
    if kind == "num":
        return (Fraction(0), node[1])
    if kind == "pi":
        return (Fraction(1), Fraction(0))
    if kind == "var":
        if node[1] not in env:
            raise QasmError(f"unknown parameter {node[1]!r}", node[2], node[3])
        return env[node[1]]
    if kind == "neg":
        p, c = _eval(node[1], env)
        return (-p, -c)
    if kind == "call":
        try:
            return (Fraction(0), _FUNCS[node[1]](_as_float(_eval(node[2], env))))
        except (ValueError, OverflowError) as exc:
            raise QasmError(f"{node[1]}: {exc}", node[3], node[4]) from None
    a = _eval(node[1], env)
    b = _eval(node[2], env)
    op = node[0]
    if op == "+":
        return _norm(a[0] + b[0], a[1] + b[1])
    if op == "-":
        return _norm(a[0] - b[0], a[1] - b[1])
    if op == "*":
        if a[0] and b[0]:
            return (Fraction(0), _as_float(a) * _as_float(b))
        if a[0]:
            a, b = b, a
        # a has no pi part
        return _norm(b[0] * a[1], b[1] * a[1])
    if op == "/":
        if b[0]:
            return (Fraction(0), _as_float(a) / _as_float(b))
        if b[1] == 0:
            raise QasmError("division by zero", node[3], node[4])
        return _norm(a[0] / b[1], a[1] / b[1])
    if op == "^":
        if not a[0] and not b[0] and isinstance(b[1], Fraction) and b[1].denominator == 1 \
                and isinstance(a[1], Fraction) and abs(b[1]) <= 64 and (a[1] or b[1] > 0):
            return (Fraction(0), a[1] ** int(b[1]))
        return (Fraction(0), _as_float(a) ** _as_float(b))
    raise AssertionError(op)


def _to_phase(v: _Val) -> Phase:
    pi, c = v
    return Phase(pi % 2, float(c))


@dataclass
class _GateDef:
    params: list[str]
    qargs: list[str]
    body: list  # (name, param-asts, arg-names, line, col)


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks, self.layouts = _tokenize(text)
        self.i = 0
        self.regs: dict[str, tuple[int, int]] = {}  # name -> (offset, size)
        self.cregs: dict[str, int] = {}
        self.labels: list[str] = []
        self.defs: dict[str, _GateDef] = {}
        self.gates: list[Gate] = []
        self.measured: dict[int, _Tok] = {}
        self.dropped_measures = 0

    # ---- token helpers

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None) -> QasmError:
        tok = tok or self.peek()
        return QasmError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            got = "end of input" if t.kind == "eof" else repr(t.text)
            raise QasmError(f"expected {text!r}, got {got}", t.line, t.col)
        return t

    def ident(self) -> _Tok:
        t = self.next()
        if t.kind != "id":
            raise QasmError(f"expected identifier, got {t.text!r}", t.line, t.col)
        return t

    def integer(self) -> int:
        t = self.next()
        if t.kind != "num" or not t.text.isdigit():
            raise QasmError(f"expected integer, got {t.text!r}", t.line, t.col)
        return int(t.text)

    # ---- expressions

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            t = self.next()
            node = (t.text, node, self.term(), t.line, t.col)
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/"):
            t = self.next()
            node = (t.text, node, self.unary(), t.line, t.col)
        return node

    def unary(self):
        if self.peek().text == "-":
            self.next()
            return ("neg", self.unary())
        if self.peek().text == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text == "^":
            t = self.next()
            return ("^", base, self.unary(), t.line, t.col)
        return base

    def atom(self):
        t = self.next()
        if t.kind == "num":
            return ("num", Fraction(t.text))
        if t.kind == "id":
            if t.text == "pi":
                return ("pi",)
            if t.text in _FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return ("call", t.text, arg, t.line, t.col)
            return ("var", t.text, t.line, t.col)
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise QasmError(f"unexpected {t.text!r} in expression", t.line, t.col)

    # ---- statements

    def parse(self) -> Circuit:
        if self.peek().text == "OPENQASM":
            self.next()
            v = self.next()
            if v.kind != "num":
                raise self.error("expected version number", v)
            if not v.text.startswith("2"):
                raise QasmError(f"unsupported OpenQASM version {v.text}", v.line, v.col)
            self.expect(";")
        while self.peek().kind != "eof":
            self.statement()
        return self.finish()

    def statement(self) -> None:
        t = self.peek()
        if t.kind != "id":
            raise self.error(f"unexpected {t.text!r}")
        word = t.text
        if word == "include":
            self.next()
            f = self.next()
            if f.kind != "str":
                raise self.error("expected file name", f)
            if f.text.strip('"') != "qelib1.inc":
                raise QasmError(f"cannot include {f.text}", f.line, f.col)
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.next()
            name = self.ident()
            self.expect("[")
            size = self.integer()
            self.expect("]")
            self.expect(";")
            if name.text in self.regs or name.text in self.cregs:
                raise QasmError(f"register {name.text!r} redeclared", name.line, name.col)
            if word == "qreg":
                self.regs[name.text] = (len(self.labels), size)
                self.labels.extend(f"{name.text}{k}" for k in range(size))
            else:
                self.cregs[name.text] = size
        elif word == "gate":
            self.next()
            self.gate_definition()
        elif word == "opaque":
            raise self.error("opaque gates are not supported")
        elif word == "if":
            raise self.error("classical control is not supported")
        elif word == "reset":
            raise self.error("reset is not supported")
        elif word == "measure":
            self.next()
            qs = self.argument()
            self.expect("->")
            self.cargument()
            self.expect(";")
            for q in qs:
                self.measured.setdefault(q, t)
            self.dropped_measures += len(qs)
        elif word == "barrier":
            self.next()
            args = self.arguments()
            self.expect(";")
            qs = sorted({q for a in args for q in a})
            self.gates.append(Gate("barrier", tuple(qs)))
        else:
            self.application()

    def argument(self) -> list[int]:
        name = self.ident()
        if name.text not in self.regs:
            raise QasmError(f"unknown quantum register {name.text!r}", name.line, name.col)
        off, size = self.regs[name.text]
        if self.peek().text == "[":
            self.next()
            idx_tok = self.peek()
            idx = self.integer()
            self.expect("]")
            if idx >= size:
                raise QasmError(f"index {idx} out of range for {name.text}[{size}]",
                                idx_tok.line, idx_tok.col)
            return [off + idx]
        return list(range(off, off + size))

    def cargument(self) -> None:
        name = self.ident()
        if name.text not in self.cregs:
            raise QasmError(f"unknown classical register {name.text!r}", name.line, name.col)
        if self.peek().text == "[":
            self.next()
            self.integer()
            self.expect("]")

    def arguments(self) -> list[list[int]]:
        args = [self.argument()]
        while self.peek().text == ",":
            self.next()
            args.append(self.argument())
        return args

    def gate_definition(self) -> None:
        name = self.ident()
        params: list[str] = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                params.append(self.ident().text)
                while self.peek().text == ",":
                    self.next()
                    params.append(self.ident().text)
            self.expect(")")
        qargs = [self.ident().text]
        while self.peek().text == ",":
            self.next()
            qargs.append(self.ident().text)
        self.expect("{")
        body = []
        while self.peek().text != "}":
            t = self.ident()
            exprs = []
            if self.peek().text == "(":
                self.next()
                if self.peek().text != ")":
                    exprs.append(self.expr())
                    while self.peek().text == ",":
                        self.next()
                        exprs.append(self.expr())
                self.expect(")")
            names = [self.ident().text]
            while self.peek().text == ",":
                self.next()
                names.append(self.ident().text)
            self.expect(";")
            for a in names:
                if a not in qargs:
                    raise QasmError(f"unknown gate argument {a!r}", t.line, t.col)
            body.append((t.text, exprs, names, t.line, t.col))
        self.expect("}")
        self.defs[name.text] = _GateDef(params, qargs, body)

    def application(self) -> None:
        t = self.ident()
        exprs = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                exprs.append(self.expr())
                while self.peek().text == ",":
                    self.next()
                    exprs.append(self.expr())
            self.expect(")")
        args = self.arguments()
        self.expect(";")
        values = [_eval(e, {}) for e in exprs]
        sizes = {len(a) for a in args if len(a) > 1}
        if len(sizes) > 1:
            raise QasmError("register arguments of different sizes", t.line, t.col)
        reps = sizes.pop() if sizes else 1
        for r in range(reps):
            qs = [a[r] if len(a) > 1 else a[0] for a in args]
            self.emit(t.text, values, qs, t, depth=0)

    def emit(self, name: str, values: list[_Val], qs: list[int], tok: _Tok, depth: int) -> None:
        if depth > 64:
            raise QasmError("gate definitions nest too deeply", tok.line, tok.col)
        if name in self.defs:
            gd = self.defs[name]
            if len(values) != len(gd.params) or len(qs) != len(gd.qargs):
                raise QasmError(f"wrong number of arguments for {name}", tok.line, tok.col)
            env = dict(zip(gd.params, values))
            qmap = dict(zip(gd.qargs, qs))
            for bname, bexprs, bargs, line, col in gd.body:
                btok = _Tok("id", bname, line, col)
                if bname == "barrier":
                    continue
                self.emit(bname, [_eval(e, env) for e in bexprs], [qmap[a] for a in bargs],
                          btok, depth + 1)
            return
        if name in _NOOPS:
            return
        gname = _ALIASES.get(name, name)
        if gname not in GATE_SIGNATURES or gname == "barrier":
            raise QasmError(f"unsupported gate {name!r}", tok.line, tok.col)
        for q in qs:
            if q in self.measured:
                m = self.measured[q]
                raise QasmError(f"qubit {self.labels[q]} is used after a measurement "
                                f"(line {m.line}); mid-circuit measurement is not supported",
                                tok.line, tok.col)
        try:
            self.gates.append(Gate(gname, tuple(qs), tuple(_to_phase(v) for v in values)))
        except CircuitError as exc:
            raise QasmError(str(exc), tok.line, tok.col) from None

    def finish(self) -> Circuit:
        n = len(self.labels)
        perms: dict[str, tuple[int, ...]] = {}
        for key, (vals, line) in self.layouts.items():
            if sorted(vals) != list(range(n)):
                raise QasmError(f"'// {key}' layout {vals} is not a permutation of {n} qubits",
                                line, 1)
            perms[key] = tuple(vals)
        if self.dropped_measures:
            warnings.warn(f"dropped {self.dropped_measures} trailing measurement(s)",
                          QasmWarning, stacklevel=3)
        return Circuit(n, self.gates, perms.get("i"), perms.get("o"),
                       qubit_labels=list(self.labels))


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 source into a Circuit.

    Registers are concatenated in declaration order. ``// i`` and ``// o``
    comments give the initial layout and output permutation.
    """
    return _Parser(text).parse()


def load_qasm(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_qasm(fh.read())


def to_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if c.initial_layout is not None:
        lines.append("// i " + " ".join(map(str, c.initial_layout)))
    if c.output_permutation is not None:
        lines.append("// o " + " ".join(map(str, c.output_permutation)))
    lines.append(f"qreg q[{c.num_qubits}];")
    for g in c.gates:
        if g.name == "barrier" and not g.qubits:
            continue
        par = f"({','.join(p.to_qasm() for p in g.params)})" if g.params else ""
        args = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{g.name}{par} {args};")
    return "\n".join(lines) + "\n"
