"""Recursive-descent parser for MTP expressions.

Grammar (whitespace-insensitive)::

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := rational | var ('^' nat)? | ('sin'|'cos') '(' var ')' ('^' nat)?
              | param | '(' expr ')'
    rational := int ('/' posint)?

Products are expanded at parse time; the parameter may only appear to the
first power in each monomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import Affine, MtpExpr, MtpTerm, ParamSpec


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")

    def render(self) -> str:
        return f"{self}\n  {self.text}\n  {' ' * self.pos}^"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")

# monomial key: (p, q, r, power of parameter)
_Mono = tuple[int, int, int, int]
_Sum = dict[_Mono, Fraction]


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            toks.append(_Tok("num", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), start))
        elif m.group(3):
            toks.append(_Tok("op", m.group(3), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _mul(a: _Sum, b: _Sum) -> _Sum:
    out: _Sum = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, Fraction(0)) + ca * cb
    return out


def _add(a: _Sum, b: _Sum, sign: int = 1) -> _Sum:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, Fraction(0)) + sign * c
    return out


class _Parser:
    def __init__(self, text: str, toks: list[_Tok], param: Optional[str], var: str):
        self.text = text
        self.toks = toks
        self.i = 0
        self.param = param
        self.var = var

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.pos, self.text)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "op" or tok.value != op:
            self.error(f"expected '{op}'")
        return self.take()

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value in ops

    def parse(self) -> _Sum:
        result = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().value!r}")
        return result

    def expr(self) -> _Sum:
        negate = False
        if self.at_op("-"):
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = {k: -c for k, c in acc.items()}
        while self.at_op("+", "-"):
            sign = 1 if self.take().value == "+" else -1
            acc = _add(acc, self.term(), sign)
        return acc

    def term(self) -> _Sum:
        acc = self.factor()
        while self.at_op("*"):
            self.take()
            tok = self.peek()
            acc = _mul(acc, self.factor())
            if any(k[3] > 1 for k, c in acc.items() if c):
                self.error("nonlinear parameter use", tok)
        return acc

    def exponent(self) -> int:
        if not self.at_op("^"):
            return 1
        self.take()
        tok = self.peek()
        if tok.kind != "num":
            self.error("expected natural exponent")
        return int(self.take().value)

    def factor(self) -> _Sum:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            value = Fraction(int(tok.value))
            if self.at_op("/"):
                self.take()
                den = self.peek()
                if den.kind != "num" or int(den.value) == 0:
                    self.error("expected positive integer denominator")
                value /= int(self.take().value)
            return {(0, 0, 0, 0): value}
        if tok.kind == "op" and tok.value == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            if self.at_op("^"):
                self.error("exponent on a parenthesized expression is not supported")
            return inner
        if tok.kind == "name":
            self.take()
            if tok.value in ("sin", "cos"):
                self.expect("(")
                arg = self.peek()
                if arg.kind != "name" or arg.value != self.var:
                    self.error("trigonometric argument must be the variable", arg)
                self.take()
                self.expect(")")
                n = self.exponent()
                return {(0, n, 0, 0) if tok.value == "cos" else (0, 0, n, 0): Fraction(1)}
            if self.at_op("("):
                self.error(f"unsupported function {tok.value!r}", tok)
            if tok.value == self.var:
                return {(self.exponent(), 0, 0, 0): Fraction(1)}
            if tok.value != self.param:
                self.error(f"unknown identifier {tok.value!r}", tok)
            n = self.exponent()
            if n > 1:
                self.error("nonlinear parameter use", tok)
            return {(0, 0, 0, n): Fraction(1)}
        self.error(f"unexpected {tok.value!r}" if tok.value else "unexpected end of input")


def _resolve_names(text: str, toks: list[_Tok], param: Optional[str], var: Optional[str]):
    """Pick the variable (trig argument first) and the parameter."""
    trig_args, bare = [], []
    for i, tok in enumerate(toks):
        if tok.kind != "name" or tok.value in ("sin", "cos"):
            continue
        is_arg = (
            i >= 2 and toks[i - 1].kind == "op" and toks[i - 1].value == "("
            and toks[i - 2].kind == "name" and toks[i - 2].value in ("sin", "cos")
        )
        (trig_args if is_arg else bare).append(tok)
    if var is None:
        if trig_args:
            var = trig_args[0].value
        else:
            free = [t.value for t in bare if t.value != param]
            var = free[0] if free else "x"
    for tok in trig_args:
        if tok.value != var:
            raise ParseError("trigonometric argument must be the variable", tok.pos, text)
    if param is None:
        others = [t.value for t in bare if t.value != var]
        param = others[0] if others else None
    if param == var:
        raise ParseError("parameter and variable share a name", 0, text)
    return var, param


def parse_expr(text: str, param: Optional[str] = None, var: Optional[str] = None) -> MtpExpr:
    """Parse ``text`` into an MtpExpr (terms in order of first appearance).

    The variable is the argument of sin/cos (or ``var``); one further bare
    identifier is taken as the affine parameter unless ``param`` names it.
    """
    toks = _tokenize(text)
    var, param = _resolve_names(text, toks, param, var)
    sums = _Parser(text, toks, param, var).parse()
    terms: dict[tuple[int, int, int], Affine] = {}
    for (p, q, r, d), c in sums.items():
        alpha = Affine(c, 0) if d == 0 else Affine(0, c)
        terms[(p, q, r)] = terms.get((p, q, r), Affine()) + alpha
    out = tuple(MtpTerm(alpha, *key) for key, alpha in terms.items() if not alpha.is_zero())
    uses_param = any(t.alpha.c1 for t in out)
    return MtpExpr(out, var, ParamSpec(param) if (param and uses_param) else None)
