"""Pinned example problems, as problem-file text."""
from __future__ import annotations

from . import dsl

# convex, efficient on [-1, 0], yet no Fritz-John multipliers at y = 0
FJ_COUNTEREXAMPLE = """\
var y in [-2,0]
min [1,2]*y^2 + [0,2]*y + [2,5]
st y - 1 <= 0
"""

KKT_POSITIVE = """\
var y in [-1,3]
min [1,2]*(y - 1)^2
st -y <= 0
"""

KKT_INTERIOR = """\
var y in [-2,0]
min [1,2]*y^2
st y - 1 <= 0
"""

SLATER_FAILS = """\
var y in [-1,1]
min [1,2]*y^2
st y^2 <= 0
"""

COMPOSITE_CONVEX = """\
var y in [-1,1]
min smooth: [1,1]*y^2 + nonsmooth: [1,2]*abs(y)
"""

# smooth part not convex
COMPOSITE_CUBIC = """\
var y in [-5,5]
min smooth: [2,4]*y^3 + [1,1] + nonsmooth: [3,3]
"""

ALL = {
    "fj_counterexample": FJ_COUNTEREXAMPLE,
    "kkt_positive": KKT_POSITIVE,
    "kkt_interior": KKT_INTERIOR,
    "slater_fails": SLATER_FAILS,
    "composite_convex": COMPOSITE_CONVEX,
    "composite_cubic": COMPOSITE_CUBIC,
}


def load(name: str) -> dsl.ProblemFile:
    return dsl.parse(ALL[name])
