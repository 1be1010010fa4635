"""Numerical gH-derivatives of interval-valued functions.

Limits are approximated on the geometric step schedule ``h0 * shrink**k``.
Each raw difference quotient is Richardson-extrapolated against the previous
step, and a limit is declared when two consecutive extrapolated estimates
agree within ``tol``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .interval import (
    PLUS_INF,
    Interval,
    IntervalError,
    IntervalVector,
    NotAChain,
    gh_sub,
    min_max_comparable,
    norm,
)
from .ivf import Ivf, NotComparableAt, as_point
from .sets import sup_set


class NoConvergence(IntervalError):
    def __init__(self, what: str, component: int | None = None) -> None:
        self.component = component
        super().__init__(what)


class LeavesDomain(IntervalError):
    pass


@dataclass(frozen=True)
class DiffConfig:
    h0: float = 1e-2
    shrink: float = 0.5
    max_steps: int = 30
    tol: float = 1e-7

    def __post_init__(self) -> None:
        if not (self.h0 > 0 and 0 < self.shrink < 1 and self.max_steps >= 2 and self.tol > 0):
            raise ValueError(f"invalid DiffConfig {self}")

    def steps(self):
        return (self.h0 * self.shrink**k for k in range(self.max_steps))


DEFAULT_CONFIG = DiffConfig()


def _inside(t, y: np.ndarray) -> bool:
    return t.in_domain(y)


def _partial(t: Ivf, ybar: np.ndarray, j: int, cfg: DiffConfig) -> tuple[float, float]:
    """Endpoint partial derivatives along coordinate ``j``.

    Central differences where the stencil fits in the domain, one-sided
    toward the interior otherwise.
    """
    e = np.zeros_like(ybar)
    e[j] = 1.0
    f0 = t.raw(ybar)
    r = cfg.shrink
    prev_raw = prev_mode = prev_est = None
    for h in cfg.steps():
        fwd, bwd = _inside(t, ybar + h * e), _inside(t, ybar - h * e)
        if fwd and bwd:
            mode = "central"
            a, b = t.raw(ybar + h * e), t.raw(ybar - h * e)
            raw = np.array([(a.lo - b.lo) / (2 * h), (a.hi - b.hi) / (2 * h)])
        elif fwd or bwd:
            mode = "forward" if fwd else "backward"
            s = 1.0 if fwd else -1.0
            a = t.raw(ybar + s * h * e)
            raw = np.array([(a.lo - f0.lo) / (s * h), (a.hi - f0.hi) / (s * h)])
        else:
            continue
        if prev_mode == mode:
            order = 2 if mode == "central" else 1
            est = (raw - r**order * prev_raw) / (1 - r**order)
            if prev_est is not None and np.all(np.abs(est - prev_est) < cfg.tol):
                return float(est[0]), float(est[1])
            prev_est = est
        else:
            prev_est = None
        prev_raw, prev_mode = raw, mode
    raise NoConvergence(f"partial derivative {j} did not settle within {cfg.max_steps} steps", j)


def gh_gradient(t: Ivf, ybar, cfg: DiffConfig = DEFAULT_CONFIG) -> IntervalVector:
    """gH-gradient: component j is [min, max] of the two endpoint partials."""
    ybar = as_point(ybar)
    comps = []
    for j in range(ybar.size):
        dl, du = _partial(t, ybar, j, cfg)
        comps.append(Interval(min(dl, du), max(dl, du)))
    return IntervalVector(comps)


def gh_dir_derivative(t, ybar, h, cfg: DiffConfig = DEFAULT_CONFIG) -> Interval:
    """One-sided limit of ``(1/δ) ⊙ (T(ȳ+δh) ⊖gH T(ȳ))`` as δ → 0+."""
    ybar, h = as_point(ybar), as_point(h)
    if not np.any(h):
        return Interval(0.0, 0.0)
    f0 = t.raw(ybar) if isinstance(t, Ivf) else t(ybar)
    r = cfg.shrink
    prev_raw = prev_est = None
    entered = False
    for delta in cfg.steps():
        y = ybar + delta * h
        if not _inside(t, y):
            if entered:
                raise LeavesDomain(f"ray from {ybar.tolist()} along {h.tolist()} leaves the domain")
            continue
        entered = True
        val = t.raw(y) if isinstance(t, Ivf) else t(y)
        if val is PLUS_INF:
            raise LeavesDomain(f"T is +inf at {y.tolist()}")
        raw = np.array([(val.lo - f0.lo) / delta, (val.hi - f0.hi) / delta])
        if prev_raw is not None:
            ext = (raw - r * prev_raw) / (1 - r)
            est = Interval(ext.min(), ext.max())
            if prev_est is not None and norm(gh_sub(est, prev_est)) < cfg.tol:
                return est
            prev_est = est
        prev_raw = raw
    if not entered:
        raise LeavesDomain(f"ray from {ybar.tolist()} along {h.tolist()} leaves the domain")
    raise NoConvergence(f"directional derivative did not settle within {cfg.max_steps} steps")


@dataclass(frozen=True)
class ActiveSet:
    indices: frozenset[int]
    tau_act: float

    def __contains__(self, i: int) -> bool:
        return i in self.indices

    def __iter__(self):
        return iter(sorted(self.indices))

    def __len__(self) -> int:
        return len(self.indices)


def active_set(ts: Sequence[Ivf], ybar, tau_act: float = 1e-9) -> ActiveSet:
    """Indices (0-based) whose value at ȳ equals the maximum value."""
    ybar = as_point(ybar)
    vals = [t.raw(ybar) for t in ts]
    try:
        top = min_max_comparable(vals)[1]
    except NotAChain as exc:
        raise NotComparableAt(ybar, str(exc)) from exc
    return ActiveSet(frozenset(i for i, v in enumerate(vals) if norm(gh_sub(v, top)) <= tau_act), tau_act)


def dir_derivative_of_max(
    ts: Sequence[Ivf], ybar, d, cfg: DiffConfig = DEFAULT_CONFIG, tau_act: float = 1e-9
) -> Interval:
    """Directional derivative of ``max_i T_i`` as the max over the active members."""
    act = active_set(ts, ybar, tau_act)
    derivs = [gh_dir_derivative(ts[i], ybar, d, cfg) for i in act]
    # Numerical estimates of equal derivatives can cross by rounding, so the
    # chain condition is checked up to a multiple of the step tolerance.
    top = sup_set(derivs)
    best = min(derivs, key=lambda g: norm(gh_sub(g, top)))
    if norm(gh_sub(best, top)) > 10 * cfg.tol:
        raise NotComparableAt(as_point(ybar), f"directional derivatives {[str(g) for g in derivs]}")
    return best


def endpoint_gradient(f: Callable[[np.ndarray], float], ybar, cfg: DiffConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Gradient of a real function, through the degenerate IVF ``[f, f]``."""
    ybar = as_point(ybar)
    g = gh_gradient(Ivf(f, f, None, ybar.size), ybar, cfg)
    return np.array([c.lo for c in g])
