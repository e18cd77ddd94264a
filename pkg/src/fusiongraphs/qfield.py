"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

Every Frobenius-Perron dimension and every index handled by this package is
an element ``p + q*sqrt(D)`` with rational ``p`` and ``q``.  Comparisons are
decided by integer cross-multiplication only; floating point never enters a
decision.

Text syntax (used by the CLI, ring files and reports)::

    3/2+1/2*sqrt(13)      (5+sqrt(13))/2      -4      sqrt(29)
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

__all__ = [
    "QuadExt",
    "RadicalWeight",
    "MixedFieldError",
    "parse_quad",
    "quad_sign",
    "quad_floor",
    "jones_admissible",
]


class MixedFieldError(ValueError):
    """Raised when two irrational operands live in different fields."""


def _squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(k, m)`` with ``n == k*k*m`` and ``m`` squarefree."""
    k, m = 1, n
    f = 2
    while f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            k *= f
        f += 1
    return k, m


@total_ordering
class QuadExt:
    """An element ``p + q*sqrt(D)`` of a real quadratic field.

    ``D`` is a squarefree integer >= 2.  Rational values carry ``q == 0``; for
    those the radicand is irrelevant and they combine with any field.
    """

    __slots__ = ("p", "q", "D")

    def __init__(self, p=0, q=0, D: int = 1):
        p = Fraction(p)
        q = Fraction(q)
        D = int(D)
        if q != 0:
            if D < 2:
                raise ValueError(f"radicand must be >= 2 for irrational values, got {D}")
            k, m = _squarefree_part(D)
            if m == 1:
                p, q, D = p + q * k, Fraction(0), 1
            else:
                q, D = q * k, m
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    def __reduce__(self):
        return (QuadExt, (self.p, self.q, self.D))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def rational(cls, value) -> "QuadExt":
        return cls(value, 0, 1)

    @classmethod
    def sqrt(cls, D: int) -> "QuadExt":
        return cls(0, 1, D)

    @staticmethod
    def _coerce(value) -> "QuadExt":
        if isinstance(value, QuadExt):
            return value
        if isinstance(value, (int, Rational)):
            return QuadExt(value)
        return NotImplemented

    def _field(self, other: "QuadExt") -> int:
        if self.q == 0:
            return other.D
        if other.q == 0 or other.D == self.D:
            return self.D
        raise MixedFieldError(f"cannot combine elements of Q(sqrt({self.D})) and Q(sqrt({other.D}))")

    # -- properties -----------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.p, -self.q, self.D)

    def norm(self) -> Fraction:
        return self.p * self.p - self.q * self.q * self.D

    def sign(self) -> int:
        return quad_sign(self)

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(self.D)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadExt(self.p + other.p, self.q + other.q, self._field(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.p, -self.q, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadExt(self.p - other.p, self.q - other.q, self._field(other))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        D = self._field(other)
        p = self.p * other.p + self.q * other.q * D
        q = self.p * other.q + self.q * other.p
        return QuadExt(p, q, D)

    __rmul__ = __mul__

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            # norm vanishes only at zero since D is squarefree
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadExt(self.p / n, -self.q / n, self.D)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -----------------------------------------------------------

    def _key(self):
        return (self.p, self.q, self.D if self.q else 0)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._key() == other._key()

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash(self._key())

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return quad_sign(self - other) < 0

    # -- text -----------------------------------------------------------------

    def __str__(self) -> str:
        return format_quad(self)

    def __repr__(self) -> str:
        return f"QuadExt({format_quad(self)!r})"

    def pretty(self) -> str:
        """Human form with a common denominator, e.g. ``(5+√13)/2``."""
        if self.q == 0:
            return str(self.p)
        den = math.lcm(self.p.denominator, self.q.denominator)
        a = int(self.p * den)
        b = int(self.q * den)
        root = f"√{self.D}"
        if abs(b) != 1:
            root = f"{abs(b)}{root}"
        if a == 0:
            body = ("-" if b < 0 else "") + root
            return body if den == 1 else f"{body}/{den}"
        body = f"{a}{'-' if b < 0 else '+'}{root}"
        return body if den == 1 else f"({body})/{den}"


def format_quad(x: QuadExt) -> str:
    """Canonical exact-value string ``p + q*sqrt(D)`` without spaces."""
    if x.q == 0:
        return str(x.p)
    q = abs(x.q)
    term = f"sqrt({x.D})" if q == 1 else f"{q}*sqrt({x.D})"
    if x.p == 0:
        return ("-" if x.q < 0 else "") + term
    return f"{x.p}{'-' if x.q < 0 else '+'}{term}"


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _eval_node(node) -> QuadExt:
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return QuadExt(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval_node(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1 or node.keywords:
            raise ValueError("sqrt takes exactly one argument")
        arg = _eval_node(node.args[0])
        if not arg.is_rational or arg.p.denominator != 1 or arg.p < 2:
            raise ValueError("sqrt argument must be an integer >= 2")
        return QuadExt.sqrt(int(arg.p))
    raise ValueError(f"unsupported syntax in exact value: {ast.dump(node)}")


def parse_quad(text: str) -> QuadExt:
    """Parse an exact value such as ``3/2+1/2*sqrt(13)`` or ``(5+sqrt(13))/2``."""
    text = re.sub(r"√\s*(\d+)", r"sqrt(\1)", text.strip()).replace("√", "sqrt")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse exact value {text!r}") from exc
    return _eval_node(tree)


def quad_sign(x: QuadExt) -> int:
    """Exact sign of ``p + q*sqrt(D)``."""
    sp = (x.p > 0) - (x.p < 0)
    sq = (x.q > 0) - (x.q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # p and q*sqrt(D) have opposite signs: compare squares
    diff = x.p * x.p - x.q * x.q * x.D
    sd = (diff > 0) - (diff < 0)
    return sp * sd


def _sqrt_bracket(D: int, bits: int = 64) -> tuple[Fraction, Fraction]:
    scale = 1 << bits
    r = math.isqrt(D * scale * scale)
    return Fraction(r, scale), Fraction(r + 1, scale)


def quad_floor(x: QuadExt) -> int:
    """Greatest integer ``m`` with ``m <= x``."""
    if x.q == 0:
        return math.floor(x.p)
    lo, hi = _sqrt_bracket(x.D)
    if x.q < 0:
        lo, hi = hi, lo
    m = math.floor(x.p + x.q * lo)
    # the bracket is tight to 2**-64; these loops run at most a couple of times
    while quad_sign(x - m) < 0:
        m -= 1
    while quad_sign(x - (m + 1)) >= 0:
        m += 1
    return m


def _jones_quadratic(D: int) -> tuple[QuadExt, ...]:
    if D == 5:
        return (QuadExt(Fraction(3, 2), Fraction(1, 2), 5), QuadExt(Fraction(5, 2), Fraction(1, 2), 5))
    if D == 2:
        return (QuadExt(2, 1, 2),)
    if D == 3:
        return (QuadExt(2, 1, 3),)
    return ()


def jones_admissible(s: QuadExt) -> bool:
    """Whether ``s`` is an allowed index value: ``s >= 4`` or ``s = 4cos^2(pi/k)``.

    Below 4 the allowed values in a quadratic field are 1, 2, 3 and, for
    ``D`` in {2, 3, 5}, the irrational values ``4cos^2(pi/k)`` with
    ``k`` in {5, 8, 10, 12}.
    """
    s = QuadExt._coerce(s)
    if quad_sign(s) <= 0:
        raise ValueError(f"index value must be positive, got {s}")
    if s >= 4:
        return True
    if s.is_rational:
        return s.p in (1, 2, 3)
    return s in _jones_quadratic(s.D)


@total_ordering
@dataclass(frozen=True)
class RadicalWeight:
    """The positive square root of ``square``; compared through ``square``."""

    square: QuadExt

    def __post_init__(self):
        sq = QuadExt._coerce(self.square)
        if quad_sign(sq) <= 0:
            raise ValueError(f"radical weight needs a positive square, got {sq}")
        object.__setattr__(self, "square", sq)

    def __lt__(self, other):
        if not isinstance(other, RadicalWeight):
            return NotImplemented
        return self.square < other.square

    def __float__(self) -> float:
        return math.sqrt(float(self.square))

    def __str__(self) -> str:
        return f"sqrt({format_quad(self.square)})"
