"""Finite sets and sequences of intervals and interval vectors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .interval import (
    DimensionMismatch,
    Interval,
    IntervalError,
    IntervalVector,
)

WEIGHT_SUM_TOL = 1e-12


class EmptySet(IntervalError):
    pass


class BadWeights(IntervalError):
    pass


def inf_set(s: Sequence[Interval]) -> Interval:
    """Greatest lower bound of a finite set; need not belong to the set."""
    if not s:
        raise EmptySet("infimum of an empty set")
    return Interval(min(x.lo for x in s), min(x.hi for x in s))


def sup_set(s: Sequence[Interval]) -> Interval:
    if not s:
        raise EmptySet("supremum of an empty set")
    return Interval(max(x.lo for x in s), max(x.hi for x in s))


@dataclass(frozen=True)
class FiniteIntervalSet:
    elements: tuple[IntervalVector, ...]

    def __init__(self, elements) -> None:
        elems = tuple(e if isinstance(e, IntervalVector) else IntervalVector(e) for e in elements)
        if not elems:
            raise EmptySet("a finite interval set needs at least one element")
        n = len(elems[0])
        if any(len(e) != n for e in elems):
            raise DimensionMismatch("elements of a finite interval set must share dimension")
        object.__setattr__(self, "elements", elems)

    @property
    def dim(self) -> int:
        return len(self.elements[0])

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def convex_combination(points: Sequence[IntervalVector], weights: Sequence[float]) -> IntervalVector:
    if len(points) != len(weights) or not points:
        raise BadWeights("need one weight per point and at least one point")
    if any(w < 0 or math.isnan(w) for w in weights):
        raise BadWeights(f"weights must be nonnegative: {list(weights)}")
    if abs(math.fsum(weights) - 1.0) > WEIGHT_SUM_TOL:
        raise BadWeights(f"weights sum to {math.fsum(weights)!r}, not 1")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise DimensionMismatch("points must share dimension")
    total = IntervalVector.zeros(n)
    for p, w in zip(points, weights):
        total = total + p.scale(w)
    return total


def hull_bounds(s: FiniteIntervalSet) -> tuple[IntervalVector, IntervalVector]:
    """Bounds ``(lower, upper)`` with ``lower ⪯ Z ⪯ upper`` for all ``Z`` in co(S)."""
    if not isinstance(s, FiniteIntervalSet):
        s = FiniteIntervalSet(s)
    lower = IntervalVector(inf_set([e[j] for e in s]) for j in range(s.dim))
    upper = IntervalVector(sup_set([e[j] for e in s]) for j in range(s.dim))
    return lower, upper


@dataclass(frozen=True)
class IntervalSequence:
    """Sequence of interval vectors indexed from k = 1; ``generator`` must be pure."""

    generator: Callable[[int], IntervalVector]
    dim: int

    def __call__(self, k: int) -> IntervalVector:
        term = self.generator(k)
        if not isinstance(term, IntervalVector):
            term = IntervalVector(term if isinstance(term, (list, tuple)) else [term])
        if len(term) != self.dim:
            raise DimensionMismatch(f"term {k} has dimension {len(term)}, expected {self.dim}")
        return term

    def subsequence(self, index: Callable[[int], int]) -> "IntervalSequence":
        """Terms ``seq(index(k))``; ``index`` must be strictly increasing."""
        return IntervalSequence(lambda k: self(index(k)), self.dim)


@dataclass(frozen=True)
class LimitVerdict:
    converged: bool
    m: int | None = None

    def __bool__(self) -> bool:
        return self.converged


NOT_WITHIN_HORIZON = LimitVerdict(False)


def seq_limit_check(seq: IntervalSequence, limit: IntervalVector, eps: float, horizon: int) -> LimitVerdict:
    """Finite-horizon convergence test.

    Returns ``Converged(m)`` for the smallest ``m <= horizon`` such that every
    term ``k`` in ``[m, horizon]`` is within ``eps`` of ``limit`` in the
    gH-norm. This says nothing about terms past the horizon.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if not isinstance(limit, IntervalVector):
        limit = IntervalVector([limit])
    lim = [(c.lo, c.hi) for c in limit]
    if len(lim) != seq.dim:
        raise DimensionMismatch(f"limit has dimension {len(lim)}, expected {seq.dim}")
    m = None
    for k in range(horizon, 0, -1):
        # ‖X ⊖gH L‖ for an interval is max(|Δlo|, |Δhi|); skip building the vector
        dist = math.fsum(max(abs(c.lo - a), abs(c.hi - b)) for c, (a, b) in zip(seq(k), lim))
        if dist < eps:
            m = k
        else:
            break
    if m is None:
        return NOT_WITHIN_HORIZON
    return LimitVerdict(True, m)

