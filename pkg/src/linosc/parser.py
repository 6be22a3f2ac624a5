"""Recursive-descent parser for polynomial expressions in x1..xN.

Grammar (whitespace-insensitive)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*       # '/' only by a nonzero constant
    factor := atom ('^' INT)?
    atom   := INT | VAR | '(' expr ')' | ('+'|'-') factor

There are no floating literals; ``3/4`` is the rational three quarters.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .polynomial import MultiPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|(\*\*|[-+*/^()])|(\S))")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # trailing whitespace
                break
            if m.group(1):
                self.tokens.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("var", m.group(2), m.start(2)))
            elif m.group(3):
                op = "^" if m.group(3) == "**" else m.group(3)
                self.tokens.append(("op", op, m.start(3)))
            elif m.group(4):
                raise self.error(f"unexpected character {m.group(4)!r}", m.start(4))
            pos = m.end()
        self.tokens.append(("end", "", len(text.rstrip())))
        self.i = 0

    def error(self, message: str, offset: int) -> ParseError:
        line = self.text.count("\n", 0, offset) + 1
        column = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return ParseError(message, line, column)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False


class _Parser:
    def __init__(self, text: str, num_vars: int, allow_x0: bool):
        self.lex = _Lexer(text)
        self.n = num_vars
        self.allow_x0 = allow_x0

    def parse(self) -> MultiPoly:
        if self.lex.peek()[0] == "end":
            raise self.lex.error("empty expression", 0)
        result = self.expr()
        kind, value, pos = self.lex.peek()
        if kind != "end":
            raise self.lex.error(f"unexpected {value!r}", pos)
        return result

    def expr(self) -> MultiPoly:
        result = self.term()
        while True:
            if self.lex.accept("+"):
                result = result + self.term()
            elif self.lex.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> MultiPoly:
        result = self.factor()
        while True:
            if self.lex.accept("*"):
                result = result * self.factor()
            elif self.lex.peek()[:2] == ("op", "/"):
                pos = self.lex.next()[2]
                divisor = self.factor()
                if divisor.degree > 0:
                    raise self.lex.error("division by a non-constant", pos)
                c = divisor.coeff((0,) * self.n)
                if c == 0:
                    raise self.lex.error("division by zero", pos)
                result = result.scale(1 / c)
            else:
                return result

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.lex.accept("^"):
            kind, value, pos = self.lex.next()
            if kind == "op" and value == "-":
                raise self.lex.error("negative exponent", pos)
            if kind != "int":
                raise self.lex.error("exponent must be a non-negative integer", pos)
            base = base ** int(value)
        return base

    def atom(self) -> MultiPoly:
        kind, value, pos = self.lex.next()
        if kind == "int":
            return MultiPoly.constant(self.n, Fraction(int(value)))
        if kind == "var":
            index = int(value[1:])
            lo = 0 if self.allow_x0 else 1
            if not lo <= index <= self.n - 1 + lo:
                raise self.lex.error(f"unknown variable {value}", pos)
            return MultiPoly.var(self.n, index - lo)
        if kind == "op" and value == "(":
            inner = self.expr()
            if not self.lex.accept(")"):
                raise self.lex.error("expected ')'", self.lex.peek()[2])
            return inner
        if kind == "op" and value in "+-":
            inner = self.factor()
            return -inner if value == "-" else inner
        raise self.lex.error("unexpected end of input" if kind == "end" else f"unexpected {value!r}", pos)


def parse_poly(text: str, num_vars: int, allow_x0: bool = False) -> MultiPoly:
    """Parse ``text`` into a polynomial in ``num_vars`` variables.

    Variables are x1..xN, or x0..x(N-1) when ``allow_x0`` is set (projective
    input; variable x0 then maps to index 0).
    """
    if num_vars < 1:
        raise ValueError("need at least one variable")
    return _Parser(text, num_vars, allow_x0).parse()


def max_variable_index(text: str) -> int:
    """Largest i with xi appearing in ``text`` (0 if none)."""
    found = [int(v[1:]) for v in re.findall(r"x\d+", text)]
    return max(found, default=0)


def uses_x0(text: str) -> bool:
    return re.search(r"x0(?!\d)", text) is not None
