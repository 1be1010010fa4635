"""Closed bounded real intervals, the generalized Hukuhara difference and
the dominance order used for minimization.

All arithmetic is plain IEEE binary64 with exact comparisons; nothing here
rounds outward.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

Real = Union[int, float]


class IntervalError(ValueError):
    pass


class DivisionByIntervalContainingZero(IntervalError, ZeroDivisionError):
    pass


class DimensionMismatch(IntervalError):
    pass


class NotAChain(IntervalError):
    """Raised when a set of intervals is not totally ordered by dominance."""


class NonFiniteArithmetic(IntervalError):
    pass


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise IntervalError(f"NaN endpoint in [{self.lo}, {self.hi}]")
        if math.isinf(lo) or math.isinf(hi):
            raise IntervalError(f"unbounded endpoint in [{self.lo}, {self.hi}]")
        if lo > hi:
            raise IntervalError(f"lower endpoint exceeds upper: [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Real) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other):
        if isinstance(other, InfiniteInterval):
            return other
        other = as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        # Moore subtraction; X - X is not [0,0] for nondegenerate X.
        other = as_interval(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "Interval":
        return as_interval(other) - self

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return mul(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        return div(self, as_interval(other))

    def __pow__(self, k: int) -> "Interval":
        return power(self, k)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def gh(self, other: "Interval") -> "Interval":
        return gh_sub(self, other)

    def __str__(self) -> str:
        return format_interval(self)


class InfiniteInterval:
    """The two extended values -inf and +inf of the extended interval space."""

    __slots__ = ("sign",)

    def __init__(self, sign: int) -> None:
        self.sign = sign

    def __repr__(self) -> str:
        return "PLUS_INF" if self.sign > 0 else "MINUS_INF"

    def __add__(self, other):
        if isinstance(other, InfiniteInterval):
            raise NonFiniteArithmetic("arithmetic between two infinite values")
        as_interval(other)
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_infinite, (self.sign,))


def _infinite(sign: int) -> InfiniteInterval:
    return PLUS_INF if sign > 0 else MINUS_INF


PLUS_INF = InfiniteInterval(1)
MINUS_INF = InfiniteInterval(-1)
ExtendedInterval = Union[Interval, InfiniteInterval]

ZERO = Interval(0.0, 0.0)


def as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, InfiniteInterval):
        raise NonFiniteArithmetic(f"{x!r} used in finite arithmetic")
    return Interval(x, x)


def add(y: Interval, z: Interval) -> Interval:
    return y + z


def sub(y: Interval, z: Interval) -> Interval:
    return y - z


def mul(y: Interval, z: Interval) -> Interval:
    p = (y.lo * z.lo, y.lo * z.hi, y.hi * z.lo, y.hi * z.hi)
    return Interval(min(p), max(p))


def div(y: Interval, z: Interval) -> Interval:
    if z.lo <= 0.0 <= z.hi:
        raise DivisionByIntervalContainingZero(f"0 lies in divisor {z}")
    return mul(y, Interval(1.0 / z.hi, 1.0 / z.lo))


def scale(delta: Real, y: Interval) -> Interval:
    """Scalar multiple; a negative factor swaps the endpoints."""
    delta = float(delta)
    if delta >= 0:
        return Interval(delta * y.lo, delta * y.hi)
    return Interval(delta * y.hi, delta * y.lo)


def power(y: Interval, k: int) -> Interval:
    if not isinstance(k, int) or k < 0:
        raise IntervalError(f"exponent must be a nonnegative integer, got {k!r}")
    if k == 0:
        return Interval(1.0, 1.0)
    if y.is_degenerate:
        return Interval.point(y.lo**k)
    if k % 2 == 1:
        return Interval(y.lo**k, y.hi**k)
    a, b = abs(y.lo), abs(y.hi)
    if y.lo <= 0.0 <= y.hi:
        return Interval(0.0, max(a, b) ** k)
    return Interval(min(a, b) ** k, max(a, b) ** k)


def gh_sub(y: Interval, z: Interval) -> Interval:
    if isinstance(y, InfiniteInterval) or isinstance(z, InfiniteInterval):
        raise NonFiniteArithmetic("gH-difference with an infinite operand")
    a = y.lo - z.lo
    b = y.hi - z.hi
    return Interval(min(a, b), max(a, b))


class Dominance(enum.Enum):
    """Relation of a first interval to a second one.

    For distinct intervals weak and strict dominance coincide, so the strict
    names are aliases of the weak ones.
    """

    EQUAL = "equal"
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    INCOMPARABLE = "incomparable"
    STRICTLY_DOMINATES = "dominates"
    STRICTLY_DOMINATED_BY = "dominated_by"


def _rank(x: ExtendedInterval) -> int:
    if isinstance(x, InfiniteInterval):
        return x.sign
    return 0


def preceq(y: ExtendedInterval, z: ExtendedInterval) -> bool:
    """``y ⪯ z``: both endpoints of ``y`` are at most those of ``z``."""
    ry, rz = _rank(y), _rank(z)
    if ry or rz:
        return ry < rz or (ry == rz)
    return y.lo <= z.lo and y.hi <= z.hi


def prec(y: ExtendedInterval, z: ExtendedInterval) -> bool:
    """``y ≺ z``: ``y ⪯ z`` with at least one strict endpoint inequality."""
    ry, rz = _rank(y), _rank(z)
    if ry or rz:
        return ry < rz
    return y.lo <= z.lo and y.hi <= z.hi and (y.lo < z.lo or y.hi < z.hi)


def compare(y: ExtendedInterval, z: ExtendedInterval) -> Dominance:
    le, ge = preceq(y, z), preceq(z, y)
    if le and ge:
        return Dominance.EQUAL
    if le:
        return Dominance.DOMINATES
    if ge:
        return Dominance.DOMINATED_BY
    return Dominance.INCOMPARABLE


def comparable(y: Interval, z: Interval) -> bool:
    return preceq(y, z) or preceq(z, y)


def norm(y: Interval) -> float:
    return max(abs(y.lo), abs(y.hi))


def min_max_comparable(s: Sequence[Interval]) -> tuple[Interval, Interval]:
    if not s:
        raise NotAChain("empty set has no minimum or maximum")
    ordered = sorted(s, key=lambda x: (x.lo, x.hi))
    for a, b in zip(ordered, ordered[1:]):
        if not preceq(a, b):
            raise NotAChain(f"{a} and {b} are not comparable")
    return ordered[0], ordered[-1]


@dataclass(frozen=True, slots=True)
class IntervalVector:
    components: tuple[Interval, ...]

    def __init__(self, components: Iterable) -> None:
        comps = tuple(as_interval(c) for c in components)
        if not comps:
            raise DimensionMismatch("interval vector needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zeros(cls, n: int) -> "IntervalVector":
        return cls([ZERO] * n)

    @classmethod
    def from_pairs(cls, pairs) -> "IntervalVector":
        return cls(Interval(lo, hi) for lo, hi in pairs)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.components)

    def __getitem__(self, j: int) -> Interval:
        return self.components[j]

    def _check(self, other: "IntervalVector") -> None:
        if len(self) != len(other):
            raise DimensionMismatch(f"lengths {len(self)} and {len(other)} differ")

    def __add__(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector(a + b for a, b in zip(self, other))

    def gh(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector(gh_sub(a, b) for a, b in zip(self, other))

    def scale(self, delta: Real) -> "IntervalVector":
        return IntervalVector(scale(delta, c) for c in self)

    __rmul__ = scale

    def norm(self) -> float:
        return math.fsum(norm(c) for c in self)

    def is_zero(self) -> bool:
        return all(c.lo == 0.0 and c.hi == 0.0 for c in self)

    def pairs(self) -> list[list[float]]:
        return [[c.lo, c.hi] for c in self]

    def __str__(self) -> str:
        return "(" + ", ".join(format_interval(c) for c in self) + ")"


def vec_preceq(x: IntervalVector, y: IntervalVector) -> bool:
    x._check(y)
    return all(preceq(a, b) for a, b in zip(x, y))


def vec_compare(x: IntervalVector, y: IntervalVector) -> Dominance:
    le, ge = vec_preceq(x, y), vec_preceq(y, x)
    if le and ge:
        return Dominance.EQUAL
    if le:
        return Dominance.DOMINATES
    if ge:
        return Dominance.DOMINATED_BY
    return Dominance.INCOMPARABLE


def dot(d: Sequence[Real], g: IntervalVector) -> Interval:
    """Contract a real direction with an interval vector: ⊕_j d_j ⊙ G_j."""
    if len(d) != len(g):
        raise DimensionMismatch(f"direction has length {len(d)}, vector {len(g)}")
    total = ZERO
    for dj, gj in zip(d, g):
        total = total + scale(dj, gj)
    return total


def format_real(x: float) -> str:
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def format_interval(y: Interval) -> str:
    return f"[{format_real(y.lo)},{format_real(y.hi)}]"


_INTERVAL_RE = re.compile(r"^\s*\[\s*([^,\s\]]+)\s*,\s*([^,\s\]]+)\s*\]\s*$")


def parse_interval(text: str) -> Interval:
    m = _INTERVAL_RE.match(text)
    if not m:
        raise IntervalError(f"not an interval literal: {text!r}")
    try:
        return Interval(float(m.group(1)), float(m.group(2)))
    except ValueError as exc:
        raise IntervalError(f"not an interval literal: {text!r}") from exc
