"""Text front end: ``c2*y'' + c1*y' + c0*y = 0`` to normalized coefficients.

Grammar (terms in any order, signs folded into terms)::

    equation := term (('+'|'-') term)* '=' '0'
    term     := [sign] [number ['*']] func
    func     := "y''" | "y'" | "y"
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

__all__ = [
    "RawEquation",
    "Coefficients",
    "ParseError",
    "OdeSyntaxError",
    "OrderError",
    "NonzeroRHSError",
    "DegenerateOrderError",
    "parse_ode",
    "normalize",
    "parse_coefficients",
]


class ParseError(ValueError):
    """Base class for every rejection of equation text."""


class OdeSyntaxError(ParseError):
    pass


class OrderError(ParseError):
    """Derivative of order three or higher."""


class NonzeroRHSError(ParseError):
    pass


class DegenerateOrderError(ValueError):
    """Leading coefficient is zero, so the equation is not second order."""


@dataclass(frozen=True)
class RawEquation:
    """Coefficients of ``c2*y'' + c1*y' + c0*y = 0`` before normalization."""

    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        for name in ("c2", "c1", "c0"):
            object.__setattr__(self, name, float(getattr(self, name)))
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class Coefficients:
    """Monic form ``y'' + a*y' + b*y = 0``."""

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"coefficients must be finite, got a={self.a!r}, b={self.b!r}")

    def as_text(self) -> str:
        return f"y'' + {self.a!r}*y' + {self.b!r}*y = 0"


_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<number>{_NUMBER})
  | (?P<func>y'*)
  | (?P<op>[-+*=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise OdeSyntaxError(f"unrecognized token {text[pos]!r} at column {pos + 1}")
        kind = m.lastgroup
        if kind == "func" and len(m.group()) > 3:
            raise OrderError(
                f"derivative of order {len(m.group()) - 1} at column {pos + 1}; "
                "only equations up to second order are supported"
            )
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise OdeSyntaxError("unexpected end of input")
        self.i += 1
        return tok

    def fail(self, tok: _Token | None, what: str):
        if tok is None:
            raise OdeSyntaxError(f"expected {what}, found end of input")
        raise OdeSyntaxError(f"expected {what}, found {tok.text!r} at column {tok.pos + 1}")

    def sign(self) -> float:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.text in "+-":
            self.i += 1
            return -1.0 if tok.text == "-" else 1.0
        return 1.0

    def term(self) -> tuple[int, float]:
        s = self.sign()
        coef = 1.0
        tok = self.peek()
        if tok is not None and tok.kind == "number":
            coef = float(self.take().text)
            nxt = self.peek()
            if nxt is not None and nxt.kind == "op" and nxt.text == "*":
                self.i += 1
            nxt = self.peek()
            if nxt is None or nxt.kind != "func":
                self.fail(nxt, "y, y' or y'' after coefficient")
        tok = self.peek()
        if tok is None or tok.kind != "func":
            self.fail(tok, "a term")
        self.i += 1
        return len(tok.text) - 1, s * coef

    def equation(self) -> RawEquation:
        acc = [0.0, 0.0, 0.0]  # indexed by derivative order
        order, value = self.term()
        acc[order] += value
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "op" and tok.text in "+-":
                s = self.sign()
                order, value = self.term()
                acc[order] += s * value
            elif tok is not None and tok.kind == "op" and tok.text == "=":
                self.i += 1
                break
            else:
                self.fail(tok, "'+', '-' or '='")
        self.rhs()
        return RawEquation(c2=acc[2], c1=acc[1], c0=acc[0])

    def rhs(self):
        s = self.sign()
        tok = self.peek()
        if tok is None or tok.kind != "number":
            self.fail(tok, "right-hand side 0")
        value = s * float(self.take().text)
        extra = self.peek()
        if extra is not None:
            self.fail(extra, "end of input")
        if value != 0.0:
            raise NonzeroRHSError(
                f"right-hand side must be 0, got {value!r}; only homogeneous equations are supported"
            )


def parse_ode(text: str) -> RawEquation:
    """Parse equation text into summed per-order coefficients.

    Duplicate terms accumulate; absent terms contribute zero.

    Raises
    ------
    OdeSyntaxError
        Unknown token, malformed term, or missing ``= 0``.
    OrderError
        Any derivative above second order.
    NonzeroRHSError
        Right-hand side is a nonzero number.
    """
    return _Parser(text).equation()


def normalize(eq: RawEquation) -> Coefficients:
    if eq.c2 == 0.0:
        raise DegenerateOrderError("coefficient of y'' is zero; the equation is not second order")
    return Coefficients(a=eq.c1 / eq.c2, b=eq.c0 / eq.c2)


def parse_coefficients(text: str) -> Coefficients:
    return normalize(parse_ode(text))
