"""Representable gH-subdifferential sets and subgradient oracles.

A set is a ``Singleton``, a dominance ``Box`` ``{G : L ⪯ G ⪯ U}``, or a
``ScaledSum`` (Minkowski ⊕ of nonnegatively scaled members).

Membership and distance are exact per component. In endpoint coordinates
``(g_lo, g_hi)`` every member set, and every nonnegative Minkowski sum of
them, is the polygon

    g_lo in [p1, p2],  g_hi in [q1, q2],  g_hi - g_lo >= k

because all edge normals of the pieces lie in {±e_lo, ±e_hi, (1, -1)} and
support functions add under Minkowski sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .calculus import DEFAULT_CONFIG, DiffConfig, gh_gradient
from .interval import (
    Interval,
    IntervalError,
    IntervalVector,
    as_interval,
    dot,
    gh_sub,
    preceq,
    scale,
    vec_preceq,
)
from .ivf import HOLDS, ExtendedIvf, OutOfDomain, Verdict, as_point


class UnsupportedShape(IntervalError):
    pass


class NotOnKinkPlane(IntervalError):
    pass


class NegativeScale(IntervalError):
    pass


@dataclass(frozen=True)
class Singleton:
    value: IntervalVector

    @property
    def dim(self) -> int:
        return len(self.value)


@dataclass(frozen=True)
class Box:
    lower: IntervalVector
    upper: IntervalVector

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper):
            raise IntervalError("box corners differ in dimension")
        if not vec_preceq(self.lower, self.upper):
            raise IntervalError(f"box corners not ordered: {self.lower} vs {self.upper}")

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, g: IntervalVector) -> bool:
        return vec_preceq(self.lower, g) and vec_preceq(g, self.upper)


@dataclass(frozen=True)
class ScaledSum:
    terms: tuple[tuple[float, "SubdiffSet"], ...]

    def __init__(self, terms) -> None:
        terms = tuple((float(d), s) for d, s in terms)
        if not terms:
            raise UnsupportedShape("empty scaled sum")
        if any(d < 0 for d, _ in terms):
            raise NegativeScale("scaled sum with a negative factor")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        return self.terms[0][1].dim


SubdiffSet = Union[Singleton, Box, ScaledSum]


def _flatten(s: SubdiffSet, factor: float = 1.0, depth: int = 0) -> list[tuple[float, Singleton | Box]]:
    if isinstance(s, (Singleton, Box)):
        return [(factor, s)]
    if isinstance(s, ScaledSum):
        if depth >= 2:
            raise UnsupportedShape("scaled sums nested deeper than two levels")
        out = []
        for d, member in s.terms:
            out += _flatten(member, factor * d, depth + 1)
        return out
    raise UnsupportedShape(f"not a subdifferential set: {s!r}")


def _atom_params(a: Singleton | Box) -> np.ndarray:
    """Per-component polygon parameters ``(p1, p2, q1, q2, k)``, shape (n, 5)."""
    if isinstance(a, Singleton):
        return np.array([[c.lo, c.lo, c.hi, c.hi, c.hi - c.lo] for c in a.value])
    return np.array(
        [[lo.lo, up.lo, lo.hi, up.hi, max(lo.hi - up.lo, 0.0)] for lo, up in zip(a.lower, a.upper)]
    )


def polygon(s: SubdiffSet) -> np.ndarray:
    terms = _flatten(s)
    n = terms[0][1].dim
    if any(t.dim != n for _, t in terms):
        raise IntervalError("members of a scaled sum differ in dimension")
    params = sum(d * _atom_params(t) for d, t in terms)
    # exact arithmetic gives k <= q2 - p1; rounding must not empty the set
    params[:, 4] = np.minimum(params[:, 4], params[:, 3] - params[:, 0])
    return params


def _distance_rows(params: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Per-row ``min over members Y of max(|Y.lo-x.lo|, |Y.hi-x.hi|)``.

    ``params`` has trailing shape (..., 5), ``target`` (..., 2).
    """
    u1 = params[..., 0] - target[..., 0]
    u2 = params[..., 1] - target[..., 0]
    v1 = params[..., 2] - target[..., 1]
    v2 = params[..., 3] - target[..., 1]
    width = target[..., 1] - target[..., 0]
    k = params[..., 4] - width
    # a + b from the clamped params so that k <= a + b survives rounding
    cap = (params[..., 3] - params[..., 0]) - width
    t_u = np.maximum(np.maximum(u1, -u2), 0.0)
    t_v = np.maximum(np.maximum(v1, -v2), 0.0)
    a = np.minimum(v2, -u1)
    t_k = np.where(k <= 2 * a, k / 2, np.where(k <= cap, k - a, np.inf))
    return np.maximum(np.maximum(t_u, t_v), np.maximum(t_k, 0.0))


def _target(g: IntervalVector | None, n: int) -> np.ndarray:
    if g is None:
        return np.zeros((n, 2))
    if len(g) != n:
        raise IntervalError(f"vector of dimension {len(g)} for a set of dimension {n}")
    return np.array(g.pairs())


def distance(s: SubdiffSet, g: IntervalVector | None = None) -> float:
    """``min over Y in S of ‖g ⊖gH Y‖``; ``g`` defaults to the zero vector."""
    params = polygon(s)
    return float(np.sum(_distance_rows(params, _target(g, params.shape[0]))))


def contains(s: SubdiffSet, g: IntervalVector) -> bool:
    if isinstance(s, Singleton):
        return s.value == g
    if isinstance(s, Box):
        return s.contains(g)
    params = polygon(s)
    x = _target(g, params.shape[0])
    lo_ok = (params[:, 0] <= x[:, 0]) & (x[:, 0] <= params[:, 1])
    hi_ok = (params[:, 2] <= x[:, 1]) & (x[:, 1] <= params[:, 3])
    return bool(np.all(lo_ok & hi_ok & (params[:, 4] <= x[:, 1] - x[:, 0])))


def contains_zero(s: SubdiffSet) -> bool:
    if isinstance(s, Singleton):
        return s.value.is_zero()
    return contains(s, IntervalVector.zeros(s.dim))


def scale_subdiff(delta: float, s: SubdiffSet) -> SubdiffSet:
    if delta < 0:
        raise NegativeScale(f"factor {delta} is negative")
    if delta == 0:
        return Singleton(IntervalVector.zeros(s.dim))
    if isinstance(s, Singleton):
        return Singleton(s.value.scale(delta))
    if isinstance(s, Box):
        return Box(s.lower.scale(delta), s.upper.scale(delta))
    return ScaledSum([(delta * d, m) for d, m in s.terms])


def sum_subdiff(*sets: SubdiffSet) -> ScaledSum:
    return ScaledSum([(1.0, s) for s in sets])


def subdiff_smooth(t, ybar, cfg: DiffConfig = DEFAULT_CONFIG) -> Singleton:
    return Singleton(gh_gradient(t, ybar, cfg))


def subdiff_abs_weighted(c: Interval, n: int, coord: int, ybar) -> SubdiffSet:
    """Subdifferential of ``H(y) = C ⊙ |y_coord|`` on the plane ``y_coord = 0``.

    The kink coordinate gets the box ``(-1)⊙C ⪯ G ⪯ C``; the other
    coordinates, on which H does not depend, get ``[0, 0]``.
    """
    c = as_interval(c)
    if not preceq(Interval(0.0, 0.0), c):
        raise IntervalError(f"weight {c} must dominate zero from above")
    ybar = as_point(ybar)
    if ybar.size != n or not 0 <= coord < n:
        raise IntervalError(f"coordinate {coord} invalid for dimension {n}")
    if ybar[coord] != 0:
        raise NotOnKinkPlane(f"y[{coord}]={ybar[coord]!r} is off the kink plane; H is smooth there")
    if c.hi == 0:
        return Singleton(IntervalVector.zeros(n))
    z = Interval(0.0, 0.0)
    lower = [scale(-1.0, c) if j == coord else z for j in range(n)]
    upper = [c if j == coord else z for j in range(n)]
    return Box(IntervalVector(lower), IntervalVector(upper))


def is_subgradient(t, ybar, g: IntervalVector, probe, tol: float = 0.0) -> Verdict:
    """Falsify ``(y-ȳ)ᵀ ⊙ G ⪯ T(y) ⊖gH T(ȳ)`` over the probe points.

    Comparisons are exact unless ``tol`` is positive. Probe points outside
    the effective domain of an extended IVF are skipped, since the right-hand
    side is +inf there.
    """
    ybar = as_point(ybar)
    if not t.in_domain(ybar):
        raise OutOfDomain(f"ȳ={ybar.tolist()} outside the domain")
    t0 = t(ybar)
    pts = np.asarray(probe, dtype=float).reshape(-1, ybar.size)
    extended = isinstance(t, ExtendedIvf)
    if extended:
        keep = np.array([t.in_domain(y) for y in pts], dtype=bool)
        pts = pts[keep] if len(pts) else pts
        evaluate = t.base.raw
    else:
        dom = t.domain
        if dom is not None and len(pts):
            inside = np.all((pts >= np.asarray(dom.lows)) & (pts <= np.asarray(dom.highs)), axis=1)
            if not inside.all():
                bad = pts[int(np.argmin(inside))]
                raise OutOfDomain(f"probe point {bad.tolist()} outside the domain")
        evaluate = t.raw
    for y in pts:
        lhs = dot(y - ybar, g)
        rhs = gh_sub(evaluate(y), t0)
        if not (lhs.lo <= rhs.lo + tol and lhs.hi <= rhs.hi + tol):
            return Verdict(False, y, f"{lhs} not ⪯ {rhs}")
    return HOLDS


def probe_points(box, per_dim: int | None = None, n_random: int = 100, seed: int = 0) -> np.ndarray:
    """About 1e3 tensor-grid points on the box plus ``n_random`` uniform points."""
    if per_dim is None:
        per_dim = max(2, int(round(1000 ** (1.0 / box.dim))))
    rng = np.random.default_rng(seed)
    grid = box.grid(per_dim)
    rand = rng.uniform(box.lows, box.highs, size=(n_random, box.dim))
    return np.vstack([grid, rand])


def to_json(s: SubdiffSet) -> dict:
    if isinstance(s, Singleton):
        return {"kind": "singleton", "value": s.value.pairs()}
    if isinstance(s, Box):
        return {"kind": "box", "lower": s.lower.pairs(), "upper": s.upper.pairs()}
    if isinstance(s, ScaledSum):
        return {"kind": "scaled_sum", "terms": [{"scale": d, "set": to_json(m)} for d, m in s.terms]}
    raise UnsupportedShape(f"not a subdifferential set: {s!r}")


def from_json(obj: dict) -> SubdiffSet:
    kind = obj.get("kind")
    if kind == "singleton":
        return Singleton(IntervalVector.from_pairs(obj["value"]))
    if kind == "box":
        return Box(IntervalVector.from_pairs(obj["lower"]), IntervalVector.from_pairs(obj["upper"]))
    if kind == "scaled_sum":
        return ScaledSum([(t["scale"], from_json(t["set"])) for t in obj["terms"]])
    raise UnsupportedShape(f"unknown subdifferential kind {kind!r}")


def real_gradient_set(grad: Sequence[float]) -> Singleton:
    """Subdifferential of a differentiable real function as degenerate intervals."""
    return Singleton(IntervalVector(Interval.point(float(v)) for v in grad))
