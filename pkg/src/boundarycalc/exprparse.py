"""A tiny language for multivector fields: ``-x2 e1 + x1 e2``.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := factor* blade?          -- at least one factor or a blade
    factor:= NUMBER | VAR ('^' NUMBER)?
    VAR   := 'x' digit               -- coordinates x1 .. x4
    blade := 'e' digits              -- basis blade, e.g. e12

Numbers are plain decimals; ``e`` never starts an exponent, it always
starts a blade token, so ``2 e12`` is two-times-e12 rather than a float.
Parsing produces a canonical :class:`FieldExpr` — terms merged and
sorted by blade then monomial, blade digits sorted with the
transposition sign folded into the coefficient (``e31`` becomes
``-1 * e13``) — and printing a ``FieldExpr`` yields text that parses
back to the same expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .algebra import Algebra, Multivector
from .fields import PolyField, Polynomial

MAX_VARS = 4

Exponents = tuple[int, int, int, int]

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<number>\d+\.\d*|\.\d+|\d+)
      | (?P<var>x\d+)
      | (?P<blade>e\d+)
      | (?P<op>[+\-^])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Syntax error with the offending position in the source text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    return tokens


def _normalize_blade(text: str, pos: int) -> tuple[int, int]:
    """Digits of a blade token -> (sign, bitmask), sorting transpositions."""
    digits = [int(d) for d in text[1:]]
    if any(d == 0 for d in digits):
        raise ParseError("blade digits are 1-based", pos)
    if len(set(digits)) != len(digits):
        raise ParseError(f"repeated digit in blade {text!r}", pos)
    sign, mask = 1, 0
    # Bubble sort, counting swaps: each transposition of adjacent basis
    # vectors flips the sign.
    for i in range(len(digits)):
        for j in range(len(digits) - 1 - i):
            if digits[j] > digits[j + 1]:
                digits[j], digits[j + 1] = digits[j + 1], digits[j]
                sign = -sign
    for d in digits:
        mask |= 1 << (d - 1)
    return sign, mask


@dataclass(frozen=True)
class FieldExpr:
    """Canonical sum of ``coefficient * monomial * blade`` terms.

    ``terms`` maps nothing implicitly: it is a sorted tuple of
    ``(blade_mask, exponents, coefficient)`` rows with zero rows
    dropped, so two expressions are equal iff their parses are.
    """

    terms: tuple[tuple[int, Exponents, float], ...]

    @classmethod
    def from_terms(cls, rows: Iterable[tuple[int, Exponents, float]]) -> "FieldExpr":
        merged: dict[tuple[int, Exponents], float] = {}
        for mask, exps, coeff in rows:
            key = (int(mask), tuple(int(e) for e in exps))
            merged[key] = merged.get(key, 0.0) + float(coeff)
        canon = tuple(
            (mask, exps, coeff)
            for (mask, exps), coeff in sorted(merged.items())
            if coeff != 0.0)
        return cls(canon)

    @property
    def ambient_dim(self) -> int:
        dim = 1
        for mask, exps, _ in self.terms:
            dim = max(dim, mask.bit_length())
            for v, e in enumerate(exps):
                if e:
                    dim = max(dim, v + 1)
        return dim

    def __str__(self) -> str:
        return format_field_expr(self)


def parse_field_expr(text: str) -> FieldExpr:
    """Parse the field grammar into a canonical :class:`FieldExpr`."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 0)
    rows: list[tuple[int, Exponents, float]] = []
    it = _Cursor(tokens, len(text))
    sign = 1.0
    tok = it.peek()
    if tok and tok.kind == "op" and tok.text in "+-":
        sign = -1.0 if it.take().text == "-" else 1.0
    while True:
        rows.append(_parse_term(it, sign))
        tok = it.take()
        if tok is None:
            break
        if tok.kind != "op" or tok.text not in "+-":
            raise ParseError(f"expected '+' or '-', got {tok.text!r}", tok.pos)
        sign = -1.0 if tok.text == "-" else 1.0
    return FieldExpr.from_terms(rows)


class _Cursor:
    def __init__(self, tokens: list[Token], end: int):
        self.tokens = tokens
        self.i = 0
        self.end = end

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> Token | None:
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok


def _parse_term(it: _Cursor, sign: float) -> tuple[int, Exponents, float]:
    coeff = sign
    exps = [0] * MAX_VARS
    mask = 0
    seen_factor = False
    while True:
        tok = it.peek()
        if tok is None or (tok.kind == "op" and tok.text in "+-"):
            break
        it.take()
        if tok.kind == "number":
            coeff *= float(tok.text)
            seen_factor = True
        elif tok.kind == "var":
            index = int(tok.text[1:])
            if not 1 <= index <= MAX_VARS:
                raise ParseError(
                    f"variable {tok.text!r} outside x1..x{MAX_VARS}", tok.pos)
            power = 1
            nxt = it.peek()
            if nxt and nxt.kind == "op" and nxt.text == "^":
                it.take()
                ptok = it.take()
                if ptok is None or ptok.kind != "number" or "." in ptok.text:
                    raise ParseError("'^' needs an integer power",
                                     ptok.pos if ptok else it.end)
                power = int(ptok.text)
            exps[index - 1] += power
            seen_factor = True
        elif tok.kind == "blade":
            blade_sign, mask = _normalize_blade(tok.text, tok.pos)
            coeff *= blade_sign
            seen_factor = True
            nxt = it.peek()
            if nxt is not None and not (nxt.kind == "op" and nxt.text in "+-"):
                raise ParseError("blade must end its term", nxt.pos)
            break
        else:
            raise ParseError(f"unexpected {tok.text!r} in term", tok.pos)
    if not seen_factor:
        tok = it.peek()
        raise ParseError("empty term",
                         tok.pos if tok is not None else it.end)
    return mask, tuple(exps), coeff


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def _format_coefficient(value: float) -> str:
    # Positional notation only: the grammar has no exponent syntax (an
    # 'e' would lex as a blade), so 1e-05 must print as 0.00001.
    return np.format_float_positional(value, precision=12, trim="-")


def _format_monomial(exps: Exponents) -> str:
    parts = []
    for v, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{v + 1}")
        elif e > 1:
            parts.append(f"x{v + 1}^{e}")
    return " ".join(parts)


def _blade_text(mask: int) -> str:
    digits = "".join(str(i + 1) for i in range(mask.bit_length()) if mask & (1 << i))
    return f"e{digits}" if digits else ""


def format_field_expr(expr: FieldExpr) -> str:
    if not expr.terms:
        return "0"
    pieces: list[str] = []
    for mask, exps, coeff in expr.terms:
        factors = [f for f in (_format_monomial(exps), _blade_text(mask)) if f]
        magnitude = _format_coefficient(abs(coeff))
        if magnitude != "1" or not factors:
            factors.insert(0, magnitude)
        body = " ".join(factors)
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------

def expr_to_field(expr: FieldExpr | str, algebra: Algebra | None = None,
                  name: str | None = None) -> PolyField:
    """Compile an expression (or its source text) to a polynomial field."""
    if isinstance(expr, str):
        expr = parse_field_expr(expr)
    alg = algebra or Algebra(expr.ambient_dim)
    if expr.ambient_dim > alg.dim:
        raise ValueError(
            f"expression needs {expr.ambient_dim} dimensions, algebra has {alg.dim}")
    polys: dict[int, Polynomial] = {}
    for mask, exps, coeff in expr.terms:
        mono = Polynomial(alg.dim, {tuple(exps[: alg.dim]): coeff})
        polys[mask] = polys.get(mask, Polynomial(alg.dim)) + mono
    return PolyField(name or format_field_expr(expr), alg, polys)


def parse_multivector(algebra: Algebra, text: str) -> Multivector:
    """Parse a constant expression (no variables) into a multivector."""
    expr = parse_field_expr(text)
    out = algebra.zero()
    for mask, exps, coeff in expr.terms:
        if any(exps):
            raise ParseError(
                f"variables are not allowed in a constant multivector: {text!r}", 0)
        if mask >= algebra.size:
            raise ValueError(f"blade {_blade_text(mask)} outside G_{algebra.dim}")
        out = out + algebra.blade(mask, coeff)
    return out
