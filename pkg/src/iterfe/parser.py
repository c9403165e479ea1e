"""Recursive-descent parser for rational functions of t over Q.

Grammar (whitespace is ignored)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
    unary   := ('-' | '+') unary | power
    power   := primary ('^' exponent)?
    exponent:= ['-' | '+'] INTEGER | '(' ['-' | '+'] INTEGER ')'
    primary := INTEGER | 't' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-t^2`` is ``-(t^2)``. Exponents
are integer literals of size at most MAX_EXPONENT and cannot be chained. Rational constants are written
as quotients, e.g. ``3/4*t``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZeroPolynomial, ExprSyntaxError, NonIntegerExponent
from .exact import Polynomial, RationalFunction

MAX_EXPONENT = 4096


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Var:
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    pos: int


Expr = Union[Num, Var, Neg, BinOp, Pow]


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.i = 0

    def peek(self) -> str:
        while self.i < len(self.src) and self.src[self.i].isspace():
            self.i += 1
        return self.src[self.i] if self.i < len(self.src) else ""

    def fail(self, message, expected=None, cls=ExprSyntaxError):
        raise cls(message, self.i, expected)

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.fail(f"unexpected {got!r}", repr(ch))
        self.i += 1

    def integer(self) -> int:
        start = self.i
        while self.i < len(self.src) and self.src[self.i].isdigit():
            self.i += 1
        if self.i < len(self.src) and self.src[self.i] == ".":
            self.fail("decimal literals are not allowed; write a quotient p/q", "digit or operator")
        return int(self.src[start:self.i])

    def parse(self) -> Expr:
        if not self.peek():
            self.fail("empty expression", "expression")
        node = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}", "operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            pos = self.i
            self.i += 1
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            ch = self.peek()
            if ch in ("*", "/"):
                pos = self.i
                self.i += 1
                node = BinOp(ch, node, self.unary(), pos)
            elif ch and (ch.isdigit() or ch == "t" or ch == "("):
                node = BinOp("*", node, self.unary(), self.i)
            else:
                return node

    def unary(self) -> Expr:
        ch = self.peek()
        if ch == "-":
            pos = self.i
            self.i += 1
            return Neg(self.unary(), pos)
        if ch == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek() != "^":
            return base
        pos = self.i
        self.i += 1
        exponent = self.exponent()
        if self.peek() == "^":
            self.fail("chained exponents are ambiguous; add parentheses", "operator")
        return Pow(base, exponent, pos)

    def exponent(self) -> int:
        ch = self.peek()
        if ch == "(":
            self.i += 1
            value = self.signed_integer_exponent(in_parens=True)
            if self.peek() != ")":
                self.fail("exponent must be an integer literal", "')'", NonIntegerExponent)
            self.i += 1
            return value
        return self.signed_integer_exponent()

    def signed_integer_exponent(self, in_parens: bool = False) -> int:
        sign = 1
        if self.peek() in ("-", "+"):
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        if not self.peek().isdigit():
            self.fail("exponent must be an integer literal", "integer", NonIntegerExponent)
        start = self.i
        while self.i < len(self.src) and self.src[self.i].isdigit():
            self.i += 1
        # "t^2/3" is (t^2)/3, but inside parentheses a quotient is a fractional exponent
        bad = "./" if in_parens else "."
        if self.peek() and self.peek() in bad:
            self.i = start
            self.fail("exponent must be an integer literal", "integer", NonIntegerExponent)
        value = int(self.src[start:self.i])
        if value > MAX_EXPONENT:
            self.i = start
            self.fail(f"exponent exceeds {MAX_EXPONENT}", "smaller integer")
        return sign * value

    def primary(self) -> Expr:
        ch = self.peek()
        pos = self.i
        if ch.isdigit():
            return Num(self.integer(), pos)
        if ch == "t":
            self.i += 1
            nxt = self.src[self.i] if self.i < len(self.src) else ""
            if nxt.isalnum() or nxt == "_":
                self.i = pos
                self.fail("unknown identifier; the only variable is t", "t")
            return Var(pos)
        if ch == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if ch.isalpha() or ch == "_":
            self.fail("unknown identifier; the only variable is t", "t")
        if ch == ".":
            self.fail("decimal literals are not allowed; write a quotient p/q", "integer")
        got = ch or "end of input"
        self.fail(f"unexpected {got!r}", "integer, 't' or '('")


def parse_ast(src: str) -> Expr:
    if not isinstance(src, str):
        raise TypeError("expression must be a string")
    return _Parser(src).parse()


def evaluate(node: Expr) -> RationalFunction:
    if isinstance(node, Num):
        return RationalFunction.constant(Fraction(node.value))
    if isinstance(node, Var):
        return RationalFunction(Polynomial.t(), reduced=True)
    if isinstance(node, Neg):
        return -evaluate(node.arg)
    if isinstance(node, Pow):
        base = evaluate(node.base)
        if node.exponent < 0 and not base:
            raise DivisionByZeroPolynomial("negative power of the zero polynomial", node.pos)
        return base ** node.exponent
    left, right = evaluate(node.left), evaluate(node.right)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if not right:
        raise DivisionByZeroPolynomial("division by the zero polynomial", node.pos)
    return left / right


def parse_expression(src: str) -> RationalFunction:
    """Parse text such as ``"t^2/(4-3t)"`` into a reduced rational function."""
    return evaluate(parse_ast(src))
