"""Interval-valued functions ``T(y) = [t_lower(y), t_upper(y)]`` over real boxes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .interval import (
    PLUS_INF,
    ZERO,
    DimensionMismatch,
    ExtendedInterval,
    Interval,
    IntervalError,
    NotAChain,
    gh_sub,
    min_max_comparable,
    norm,
    preceq,
    scale,
)

CONVEXITY_TOL = 1e-9


class OutOfDomain(IntervalError):
    pass


class EndpointOrderViolation(IntervalError):
    pass


class NotComparableAt(IntervalError):
    def __init__(self, y, detail: str = "") -> None:
        self.y = np.asarray(y, dtype=float)
        super().__init__(f"values not comparable at y={self.y.tolist()} {detail}".rstrip())


def as_point(y) -> np.ndarray:
    return np.atleast_1d(np.asarray(y, dtype=float))


@dataclass(frozen=True)
class Box:
    """Closed box ``prod_j [lows[j], highs[j]]``; infinite bounds allowed."""

    lows: tuple[float, ...]
    highs: tuple[float, ...]

    def __post_init__(self) -> None:
        lows = tuple(float(a) for a in self.lows)
        highs = tuple(float(b) for b in self.highs)
        if len(lows) != len(highs) or not lows:
            raise DimensionMismatch("box bounds must be nonempty and of equal length")
        if any(a > b for a, b in zip(lows, highs)):
            raise IntervalError(f"empty box {lows} x {highs}")
        object.__setattr__(self, "lows", lows)
        object.__setattr__(self, "highs", highs)

    @classmethod
    def from_intervals(cls, intervals: Iterable[Interval]) -> "Box":
        ivs = list(intervals)
        return cls(tuple(i.lo for i in ivs), tuple(i.hi for i in ivs))

    @classmethod
    def whole(cls, n: int) -> "Box":
        return cls((-np.inf,) * n, (np.inf,) * n)

    @property
    def dim(self) -> int:
        return len(self.lows)

    def contains(self, y) -> bool:
        y = as_point(y)
        if y.shape != (self.dim,):
            raise DimensionMismatch(f"point of dimension {y.size} for box of dimension {self.dim}")
        return bool(np.all(np.asarray(self.lows) <= y) and np.all(y <= np.asarray(self.highs)))

    def grid(self, per_dim: int) -> np.ndarray:
        """Tensor grid with ``per_dim`` points per coordinate, shape (N, dim)."""
        if not (np.all(np.isfinite(self.lows)) and np.all(np.isfinite(self.highs))):
            raise IntervalError("cannot grid an unbounded box")
        # integer weights keep symmetric grids symmetric, with an exact 0 midpoint
        i = np.arange(per_dim, dtype=float)
        m = per_dim - 1
        axes = [(a * (m - i) + b * i) / m if m else np.array([a]) for a, b in zip(self.lows, self.highs)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


class _EndpointPair:
    __slots__ = ("lower", "upper")

    def __init__(self, lower, upper):
        self.lower = lower
        self.upper = upper

    def __call__(self, y) -> Interval:
        lo, hi = float(self.lower(y)), float(self.upper(y))
        if lo > hi:
            raise EndpointOrderViolation(f"t_lower={lo!r} > t_upper={hi!r} at y={y.tolist()}")
        return Interval(lo, hi)

    def __getstate__(self):
        return (self.lower, self.upper)

    def __setstate__(self, state):
        self.lower, self.upper = state


class Ivf:
    """An interval-valued function on a closed box.

    Built either from two real endpoint callables or, via
    :meth:`from_interval_fn`, from a callable that returns an ``Interval``.
    Callables receive a 1-D float array and must be pure.
    """

    def __init__(self, lower: Callable, upper: Callable, domain: Box | None = None, dim: int | None = None):
        self._init(_EndpointPair(lower, upper), domain, dim)

    def _init(self, fn, domain, dim) -> None:
        self._fn = fn
        self.domain = domain
        self.dim = dim if dim is not None else (domain.dim if domain is not None else 1)
        if domain is not None and domain.dim != self.dim:
            raise DimensionMismatch("domain dimension differs from function dimension")

    @classmethod
    def from_interval_fn(cls, fn: Callable[[np.ndarray], Interval], domain: Box | None = None, dim: int | None = None) -> "Ivf":
        obj = cls.__new__(cls)
        obj._init(fn, domain, dim)
        return obj

    @classmethod
    def constant(cls, value: Interval, domain: Box | None = None, dim: int | None = None) -> "Ivf":
        return cls.from_interval_fn(_Constant(value), domain, dim)

    def in_domain(self, y) -> bool:
        return self.domain is None or self.domain.contains(y)

    def raw(self, y) -> Interval:
        """Evaluate without the domain check (endpoint order is still enforced)."""
        y = as_point(y)
        if y.shape != (self.dim,):
            raise DimensionMismatch(f"point of dimension {y.size} for IVF of dimension {self.dim}")
        return self._fn(y)

    def __call__(self, y) -> Interval:
        y = as_point(y)
        if not self.in_domain(y):
            raise OutOfDomain(f"y={y.tolist()} outside {self.domain}")
        return self.raw(y)

    eval = __call__

    def lower(self, y) -> float:
        return self.raw(y).lo

    def upper(self, y) -> float:
        return self.raw(y).hi

    def __add__(self, other: "Ivf") -> "Ivf":
        return add_ivf(self, other)

    def __rmul__(self, delta: float) -> "Ivf":
        return scale_ivf(delta, self)


@dataclass(frozen=True)
class _Constant:
    value: Interval

    def __call__(self, y) -> Interval:
        return self.value


def eval_ivf(t: Ivf, y) -> Interval:
    return t(y)


def _shared_domain(fs: Sequence[Ivf]) -> Box | None:
    dims = {f.dim for f in fs}
    if len(dims) != 1:
        raise DimensionMismatch(f"IVFs of dimensions {sorted(dims)}")
    doms = [f.domain for f in fs if f.domain is not None]
    if not doms:
        return None
    lows = np.max([d.lows for d in doms], axis=0)
    highs = np.min([d.highs for d in doms], axis=0)
    return Box(tuple(lows), tuple(highs))


def add_ivf(t1: Ivf, t2: Ivf) -> Ivf:
    dom = _shared_domain([t1, t2])
    return Ivf.from_interval_fn(lambda y: t1.raw(y) + t2.raw(y), dom, t1.dim)


def scale_ivf(delta: float, t: Ivf) -> Ivf:
    if delta < 0:
        raise ValueError("scale_ivf expects a nonnegative factor")
    return Ivf.from_interval_fn(lambda y: scale(delta, t.raw(y)), t.domain, t.dim)


def max_ivf(ts: Sequence[Ivf]) -> Ivf:
    """Pointwise maximum of IVFs whose values form a chain at every point."""
    if not ts:
        raise ValueError("max_ivf needs at least one IVF")
    ts = list(ts)
    dom = _shared_domain(ts)

    def fn(y):
        try:
            return min_max_comparable([t.raw(y) for t in ts])[1]
        except NotAChain as exc:
            raise NotComparableAt(y, str(exc)) from exc

    return Ivf.from_interval_fn(fn, dom, ts[0].dim)


@dataclass(frozen=True)
class ExtendedIvf:
    """``base`` on the effective domain, ``+inf`` elsewhere."""

    base: Ivf
    effective_domain: Callable[[np.ndarray], bool]

    @property
    def dim(self) -> int:
        return self.base.dim

    def __call__(self, y) -> ExtendedInterval:
        y = as_point(y)
        if not self.effective_domain(y):
            return PLUS_INF
        return self.base.raw(y)

    def in_domain(self, y) -> bool:
        return bool(self.effective_domain(as_point(y)))


def indicator(box: Box) -> ExtendedIvf:
    return ExtendedIvf(Ivf.constant(ZERO, None, box.dim), box.contains)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a sampling oracle: it can refute a property, never prove it."""

    holds: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


HOLDS = Verdict(True)


def convexity_samples(box: Box, count: int, rng: np.random.Generator) -> list[tuple[np.ndarray, np.ndarray, float]]:
    lows, highs = np.asarray(box.lows), np.asarray(box.highs)
    y1 = rng.uniform(lows, highs, size=(count, box.dim))
    y2 = rng.uniform(lows, highs, size=(count, box.dim))
    lam = rng.uniform(0.0, 1.0, size=count)
    return [(y1[i], y2[i], float(lam[i])) for i in range(count)]


def is_convex_sampled(t: Ivf, samples, tol: float = CONVEXITY_TOL) -> Verdict:
    """Check ``T(λy1+(1-λ)y2) ⪯ λT(y1) ⊕ (1-λ)T(y2)`` (up to ``tol``) on samples."""
    for y1, y2, lam in samples:
        y1, y2 = as_point(y1), as_point(y2)
        mid = t(lam * y1 + (1.0 - lam) * y2)
        chord = scale(lam, t(y1)) + scale(1.0 - lam, t(y2))
        if not preceq(mid, Interval(chord.lo + tol, chord.hi + tol)):
            return Verdict(False, (y1, y2, lam), f"T(mid)={mid} above chord {chord}")
    return HOLDS


def is_endpoint_convex_sampled(f: Callable, samples, tol: float = CONVEXITY_TOL) -> Verdict:
    """Scalar convexity check for one endpoint function on the same samples."""
    for y1, y2, lam in samples:
        y1, y2 = as_point(y1), as_point(y2)
        if f(lam * y1 + (1.0 - lam) * y2) > lam * f(y1) + (1.0 - lam) * f(y2) + tol:
            return Verdict(False, (y1, y2, lam))
    return HOLDS


def _unit_directions(n: int, extra: int, rng: np.random.Generator) -> list[np.ndarray]:
    dirs = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        dirs += [e, -e]
    for _ in range(extra):
        v = rng.normal(size=n)
        dirs.append(v / np.linalg.norm(v))
    return dirs


def is_gh_continuous_at(
    t,
    ybar,
    radii: Sequence[float] | None = None,
    directions: Sequence | None = None,
    tol: float = 1e-6,
    seed: int = 0,
) -> Verdict:
    """Probe ``‖T(ȳ+h) ⊖gH T(ȳ)‖`` along shrinking radii.

    Holds when, in every probed direction, the gap at the smallest radius is
    below ``tol``. Pass ``directions`` to restrict to one-sided approaches.
    Works for :class:`Ivf` and :class:`ExtendedIvf`.
    """
    ybar = as_point(ybar)
    if radii is None:
        radii = [10.0**-k for k in range(1, 13)]
    if directions is None:
        directions = _unit_directions(ybar.size, 4, np.random.default_rng(seed))
    base = t(ybar)
    for d in directions:
        d = as_point(d)
        gaps = []
        for r in radii:
            val = t(ybar + r * d)
            if val is PLUS_INF or not isinstance(val, Interval):
                gaps.append(np.inf)
            else:
                gaps.append(norm(gh_sub(val, base)))
        if not gaps[-1] < tol:
            return Verdict(False, d, f"gap {gaps[-1]!r} at radius {radii[-1]!r}")
    return HOLDS
