"""Tiny surface-expression grammar for the CLI.

Supports reals, the variables x and y, r = sqrt(x^2 + y^2), the
operators + - * / ^ with parentheses, and sin/cos/exp/sqrt/abs.
Evaluation maps domain errors and division by zero to inf/nan so the
sampler can report them as non-finite samples.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import ExpressionError

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
}


def _tokenize(text: str):
    tokens = []  # (kind, value, column) with 1-based columns
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            # exponent part like 1e-3
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            try:
                value = float(text[i:j])
            except ValueError:
                raise ExpressionError(f"bad number {text[i:j]!r}", col)
            tokens.append(("num", value, col))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            tokens.append(("name", text[i:j], col))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch, col))
            i += 1
        else:
            raise ExpressionError(f"unexpected character {ch!r}", col)
    tokens.append(("end", None, n + 1))
    return tokens


def _safe_div(a: float, b: float) -> float:
    try:
        return a / b
    except ZeroDivisionError:
        if a == 0.0:
            return math.nan
        return math.inf if a > 0 else -math.inf


def _safe_pow(a: float, b: float) -> float:
    try:
        return math.pow(a, b)
    except ZeroDivisionError:
        return math.inf
    except (ValueError, OverflowError):
        return math.nan


def _safe_call(fn, v: float) -> float:
    try:
        return fn(v)
    except (ValueError, OverflowError):
        return math.nan


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.take()
        if tok[0] != kind:
            raise ExpressionError(f"expected {kind!r}", tok[2])
        return tok

    def parse(self):
        node = self.expression()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expression(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            lhs = node
            if op == "+":
                node = lambda x, y, r, a=lhs, b=rhs: a(x, y, r) + b(x, y, r)
            else:
                node = lambda x, y, r, a=lhs, b=rhs: a(x, y, r) - b(x, y, r)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            rhs = self.unary()
            lhs = node
            if op == "*":
                node = lambda x, y, r, a=lhs, b=rhs: a(x, y, r) * b(x, y, r)
            else:
                node = lambda x, y, r, a=lhs, b=rhs: _safe_div(a(x, y, r), b(x, y, r))
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] in ("+", "-"):
            self.take()
            inner = self.unary()
            if tok[0] == "-":
                return lambda x, y, r, a=inner: -a(x, y, r)
            return inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            exponent = self.unary()  # right-associative
            return lambda x, y, r, a=base, b=exponent: _safe_pow(a(x, y, r), b(x, y, r))
        return base

    def atom(self):
        kind, value, col = self.take()
        if kind == "num":
            return lambda x, y, r, v=value: v
        if kind == "name":
            if value == "x":
                return lambda x, y, r: x
            if value == "y":
                return lambda x, y, r: y
            if value == "r":
                return lambda x, y, r: r
            fn = _FUNCTIONS.get(value)
            if fn is None:
                raise ExpressionError(f"unknown name {value!r}", col)
            self.expect("(")
            inner = self.expression()
            self.expect(")")
            return lambda x, y, r, f=fn, a=inner: _safe_call(f, a(x, y, r))
        if kind == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        raise ExpressionError("expected operand", col)


def parse_expression(text: str) -> Callable[[float, float], float]:
    """Compile *text* into f(x, y); syntax errors carry a 1-based column."""
    node = _Parser(text).parse()

    def f(x: float, y: float) -> float:
        return float(node(x, y, math.hypot(x, y)))

    return f
