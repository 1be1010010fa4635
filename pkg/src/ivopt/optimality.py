"""Efficiency oracles and optimality-condition checkers for interval
optimization problems ``min T(y) s.t. g_j(y) <= 0, y in box``.

Every "holds" from a grid oracle means "holds on the supplied grid".
"""
from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .calculus import DEFAULT_CONFIG, DiffConfig, gh_gradient
from .interval import Interval, IntervalError, IntervalVector, gh_sub, prec, preceq
from .ivf import Box, Ivf, as_point
from .sets import inf_set, sup_set
from .subdiff import (
    SubdiffSet,
    contains_zero,
    distance,
    polygon,
    real_gradient_set,
    _distance_rows,
)

ACTIVITY_TOL = 1e-9
RESIDUAL_TOL = 1e-9
CONVEXITY_CAVEAT = "holds certifies weak efficiency only when the smooth part is convex"


class InfeasiblePoint(IntervalError):
    pass


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Certificate:
    delta0: float
    delta: tuple[float, ...]


@dataclass
class CheckReport:
    verdict: Status
    residual: float = 0.0
    certificate: Certificate | None = None
    witness: list[float] | None = None
    grid: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict is Status.HOLDS

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        cert = None
        if self.certificate is not None:
            cert = {"delta0": self.certificate.delta0, "delta": list(self.certificate.delta)}
        return {
            "verdict": self.verdict.value,
            "residual": self.residual,
            "certificate": cert,
            "witness": self.witness,
            "grid": self.grid,
            "notes": self.notes,
            "flags": self.flags,
        }


@dataclass(frozen=True)
class MultiplierGrid:
    resolution: int = 100
    delta_max: float = 10.0

    def __post_init__(self) -> None:
        if self.resolution < 2 or not self.delta_max > 0:
            raise ValueError(f"invalid multiplier grid {self}")


@dataclass
class Iop:
    objective: Ivf
    constraints: list[Callable[[np.ndarray], float]]
    box: Box

    @property
    def dim(self) -> int:
        return self.box.dim

    def constraint_values(self, y) -> list[float]:
        y = as_point(y)
        return [float(g(y)) for g in self.constraints]

    def is_feasible(self, y) -> bool:
        y = as_point(y)
        return self.box.contains(y) and all(v <= 0 for v in self.constraint_values(y))


def _require_feasible(p: Iop, ybar) -> np.ndarray:
    ybar = as_point(ybar)
    if not p.is_feasible(ybar):
        raise InfeasiblePoint(f"ȳ={ybar.tolist()} is not feasible")
    return ybar


def _as_points(grid, dim: int) -> np.ndarray:
    pts = np.asarray(grid, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, dim) if dim > 1 else pts.reshape(-1, 1)
    return pts


@dataclass(frozen=True)
class _FeasibleValue:
    problem: Iop

    def __call__(self, y):
        return self.problem.objective(y) if self.problem.is_feasible(y) else None


def feasible_values(p: Iop, grid, jobs: int = 1) -> list[tuple[np.ndarray, Interval]]:
    """Objective values at the feasible grid points, in grid order.

    With ``jobs > 1`` evaluation is spread over processes; the problem must
    then be picklable (problems compiled from the DSL are).
    """
    pts = _as_points(grid, p.dim)
    fn = _FeasibleValue(p)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            vals = list(ex.map(fn, list(pts), chunksize=max(1, len(pts) // (4 * jobs))))
    else:
        vals = [fn(y) for y in pts]
    return [(y, v) for y, v in zip(pts, vals) if v is not None]


def is_efficient_oracle(p: Iop, ybar, grid, jobs: int = 1) -> CheckReport:
    """Fails with the first feasible grid point ``y*`` where ``T(y*) ≺ T(ȳ)``."""
    ybar = _require_feasible(p, ybar)
    t0 = p.objective(ybar)
    vals = feasible_values(p, grid, jobs)
    info = {"points": len(_as_points(grid, p.dim)), "feasible": len(vals)}
    for y, v in vals:
        if prec(v, t0):
            return CheckReport(Status.FAILS, witness=y.tolist(), grid=info,
                               notes=[f"T(witness)={v} strictly dominates T(ȳ)={t0}"])
    return CheckReport(Status.HOLDS, grid=info, notes=["relative to the grid"])


def is_weak_efficient_oracle(p: Iop, ybar, grid, jobs: int = 1) -> CheckReport:
    """Fails with the first feasible grid point ``y*`` where ``T(ȳ) ⪯ T(y*)`` is false."""
    ybar = _require_feasible(p, ybar)
    t0 = p.objective(ybar)
    vals = feasible_values(p, grid, jobs)
    info = {"points": len(_as_points(grid, p.dim)), "feasible": len(vals)}
    for y, v in vals:
        if not preceq(t0, v):
            return CheckReport(Status.FAILS, witness=y.tolist(), grid=info,
                               notes=[f"T(ȳ)={t0} does not dominate T(witness)={v}"])
    return CheckReport(Status.HOLDS, grid=info, notes=["relative to the grid"])


def weak_efficient_set(p: Iop, grid, jobs: int = 1) -> list[list[float]]:
    """Feasible grid points passing ``is_weak_efficient_oracle`` against the grid.

    One pass: ``T(ȳ) ⪯ T(y)`` for every feasible ``y`` iff ``T(ȳ)`` is
    dominated by the endpointwise minimum over the feasible values.
    """
    vals = feasible_values(p, grid, jobs)
    if not vals:
        return []
    lo = min(v.lo for _, v in vals)
    hi = min(v.hi for _, v in vals)
    return [y.tolist() for y, v in vals if v.lo <= lo and v.hi <= hi]


def efficiency_report(p: Iop, ybar, grid, jobs: int = 1) -> dict[str, CheckReport]:
    return {
        "efficient": is_efficient_oracle(p, ybar, grid, jobs),
        "weak_efficient": is_weak_efficient_oracle(p, ybar, grid, jobs),
    }


def fermat_check(t: Ivf, ybar, s: SubdiffSet, tol: float = 0.0) -> CheckReport:
    """Zero-subgradient test; exact unless ``tol`` is positive."""
    res = distance(s)
    ok = contains_zero(s) or res <= tol
    return CheckReport(Status.HOLDS if ok else Status.FAILS, residual=0.0 if ok else res)


@dataclass(frozen=True)
class _TStar:
    objective: Ivf
    constraints: tuple
    t_inf: Interval

    def __call__(self, y) -> Interval:
        vals = [gh_sub(self.objective.raw(y), self.t_inf)]
        vals += [Interval.point(float(g(y))) for g in self.constraints]
        return sup_set(vals)


def tstar_build(p: Iop, t_inf: Interval) -> Ivf:
    """``T*(y) = sup{T(y) ⊖gH T_inf, g_1(y), ..., g_p(y)}`` over the box."""
    return Ivf.from_interval_fn(_TStar(p.objective, tuple(p.constraints), t_inf), p.box, p.dim)


def estimate_t_inf(p: Iop, grid) -> Interval:
    """Grid infimum of T over the feasible grid points (an estimate)."""
    vals = [v for _, v in feasible_values(p, grid)]
    return inf_set(vals)


def tstar_problem(p: Iop, t_inf: Interval) -> Iop:
    return Iop(tstar_build(p, t_inf), [], p.box)


def slater_check(p: Iop, samples) -> CheckReport:
    if not p.constraints:
        return CheckReport(Status.HOLDS, notes=["no constraints; holds vacuously"])
    pts = _as_points(samples, p.dim)
    for y in pts:
        if p.box.contains(y) and all(v < 0 for v in p.constraint_values(y)):
            return CheckReport(Status.HOLDS, witness=y.tolist())
    return CheckReport(Status.INCONCLUSIVE, grid={"points": len(pts)},
                       notes=["no strictly feasible sample found"])


def _simplex_grid(m: int, resolution: int) -> np.ndarray:
    """All points of the unit simplex in R^m with coordinates in (1/R)·Z."""
    rows = []
    for cuts in itertools.combinations(range(resolution + m - 1), m - 1):
        prev, parts = -1, []
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(resolution + m - 2 - prev)
        rows.append(parts)
    return np.asarray(rows, dtype=float) / resolution


class _Residual:
    """Distance from 0̂ to ``Σ_k δ_k S_k`` as a function of the multipliers."""

    def __init__(self, sets: Sequence[SubdiffSet]):
        self.params = np.stack([polygon(s) for s in sets])  # (m, n, 5)

    def __call__(self, deltas: np.ndarray) -> np.ndarray:
        deltas = np.atleast_2d(deltas)
        agg = np.tensordot(deltas, self.params, axes=(1, 0))  # (N, n, 5)
        return _distance_rows(agg, np.zeros(agg.shape[:-1] + (2,))).sum(axis=-1)


def _refine(f: _Residual, start: np.ndarray, moves: list[np.ndarray], project, step: float, tol: float):
    """Pattern search; the residual is convex in the multipliers."""
    x, fx = start, float(f(start)[0])
    while step > 1e-13 and fx > tol:
        cands = [project(x + step * d) for d in moves]
        cands = [c for c in cands if c is not None]
        vals = f(np.array(cands)) if cands else np.array([])
        if len(vals) and vals.min() < fx:
            i = int(vals.argmin())
            x, fx = cands[i], float(vals[i])
        else:
            step /= 2
    return x, fx


def _active(p: Iop, ybar) -> list[int]:
    return [j for j, v in enumerate(p.constraint_values(ybar)) if v >= -ACTIVITY_TOL]


def _constraint_sets(subg, n: int) -> list[SubdiffSet]:
    out = []
    for g in subg:
        if isinstance(g, IntervalVector) or hasattr(g, "dim"):
            out.append(g)
        else:
            grad = as_point(g)
            if grad.size != n:
                raise IntervalError(f"constraint gradient of dimension {grad.size}, expected {n}")
            out.append(real_gradient_set(grad))
    return out


def fritz_john_check(p: Iop, ybar, sub_t: SubdiffSet, subg, mg: MultiplierGrid = MultiplierGrid(),
                     tol: float = RESIDUAL_TOL) -> CheckReport:
    """Search ``δ_0, δ_J`` on the unit simplex with ``0̂ ∈ δ_0 ∂T(ȳ) ⊕ Σ δ_j ∂g_j(ȳ)``.

    Inactive constraints get ``δ_j = 0``. ``subg`` holds one real gradient
    (or subdifferential set) per constraint.
    """
    ybar = _require_feasible(p, ybar)
    g_sets = _constraint_sets(subg, sub_t.dim)
    act = _active(p, ybar)
    f = _Residual([sub_t] + [g_sets[j] for j in act])
    m = 1 + len(act)
    pts = _simplex_grid(m, mg.resolution)
    vals = f(pts)
    best = int(vals.argmin())
    x, fx = pts[best], float(vals[best])
    moves = [np.eye(m)[i] - np.eye(m)[j] for i in range(m) for j in range(m) if i != j]

    def project(z):
        return z if np.all(z >= 0) else None

    x, fx = _refine(f, x, moves, project, 1.0 / mg.resolution, tol)
    full = [0.0] * len(p.constraints)
    for k, j in enumerate(act):
        full[j] = float(x[1 + k])
    info = {"simplex_resolution": mg.resolution, "points": len(pts), "active": act}
    if fx <= tol:
        return CheckReport(Status.HOLDS, residual=fx, certificate=Certificate(float(x[0]), tuple(full)), grid=info)
    return CheckReport(Status.FAILS, residual=fx, grid=info,
                       notes=[f"closest multipliers delta0={float(x[0])!r} delta={full}"])


def kkt_check(p: Iop, ybar, sub_t: SubdiffSet, subg, mg: MultiplierGrid = MultiplierGrid(),
              slater_samples=None, tol: float = RESIDUAL_TOL) -> CheckReport:
    """Search ``δ_J in [0, δ_max]`` with ``0̂ ∈ ∂T(ȳ) ⊕ Σ δ_j ∂g_j(ȳ)``.

    Without a Slater witness the verdict is inconclusive (flagged), since
    the necessity direction needs Slater's condition.
    """
    ybar = _require_feasible(p, ybar)
    if slater_samples is None:
        slater_samples = p.box.grid(21) if np.all(np.isfinite(p.box.lows + p.box.highs)) else [ybar]
    slater = slater_check(p, slater_samples)
    g_sets = _constraint_sets(subg, sub_t.dim)
    act = _active(p, ybar)
    f = _Residual([sub_t] + [g_sets[j] for j in act])
    k = len(act)
    axis = np.linspace(0.0, mg.delta_max, mg.resolution + 1)
    free = np.array(list(itertools.product(axis, repeat=k))) if k else np.zeros((1, 0))
    pts = np.hstack([np.ones((len(free), 1)), free])
    vals = f(pts)
    best = int(vals.argmin())
    x, fx = pts[best], float(vals[best])
    moves = [s * np.eye(k + 1)[i] for i in range(1, k + 1) for s in (1.0, -1.0)]

    def project(z):
        return z if np.all(z[1:] >= 0) and np.all(z[1:] <= mg.delta_max) else None

    if k:
        x, fx = _refine(f, x, moves, project, mg.delta_max / mg.resolution, tol)
    full = [0.0] * len(p.constraints)
    for i, j in enumerate(act):
        full[j] = float(x[1 + i])
    gvals = p.constraint_values(ybar)
    slack = max((abs(d * g) for d, g in zip(full, gvals)), default=0.0)
    info = {"resolution": mg.resolution, "delta_max": mg.delta_max, "points": len(pts), "active": act}
    cert = Certificate(1.0, tuple(full)) if fx <= tol else None
    notes = [f"max |delta_j g_j(ȳ)| = {slack!r}"]
    if slater.verdict is not Status.HOLDS:
        return CheckReport(Status.INCONCLUSIVE, residual=fx, certificate=cert, grid=info,
                           notes=notes + ["Slater's condition not witnessed"], flags=["slater_not_witnessed"])
    if cert is not None:
        return CheckReport(Status.HOLDS, residual=fx, certificate=cert, grid=info, notes=notes)
    return CheckReport(Status.FAILS, residual=fx, grid=info, notes=notes + [f"closest multipliers delta={full}"])


def composite_check(t_smooth: Ivf, h_subdiff: SubdiffSet, ybar, cfg: DiffConfig = DEFAULT_CONFIG,
                    tol: float = 1e-6) -> CheckReport:
    """Test ``(-1) ⊙ ∇T(ȳ) ∈ ∂H(ȳ)`` for ``min T ⊕ H``.

    The gradient is numerical, so membership is accepted within ``tol``
    in the gH-distance.
    """
    g = gh_gradient(t_smooth, ybar, cfg).scale(-1.0)
    res = distance(h_subdiff, g)
    status = Status.HOLDS if res <= tol else Status.FAILS
    return CheckReport(status, residual=res, notes=[f"(-1)⊙∇T(ȳ) = {g}", CONVEXITY_CAVEAT])
