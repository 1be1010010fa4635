import json

import numpy as np
import pytest
from hypothesis import example, given, settings, strategies as st

from ivopt.interval import Interval, IntervalVector, gh_sub, norm, scale
from ivopt.ivf import Box as DomainBox
from ivopt.ivf import ExtendedIvf, Ivf, OutOfDomain, indicator
from ivopt.subdiff import (
    Box,
    NegativeScale,
    NotOnKinkPlane,
    ScaledSum,
    Singleton,
    UnsupportedShape,
    contains,
    contains_zero,
    distance,
    from_json,
    is_subgradient,
    probe_points,
    scale_subdiff,
    subdiff_abs_weighted,
    subdiff_smooth,
    sum_subdiff,
    to_json,
)
from conftest import dyadic

I = Interval


def v(*ivs):
    return IntervalVector(ivs)


Z1 = v(I(0, 0))


def test_abs_weighted_box():
    b = subdiff_abs_weighted(I(1, 2), 1, 0, [0.0])
    assert b == Box(v(I(-2, -1)), v(I(1, 2)))
    assert contains(b, Z1) and contains_zero(b)
    assert subdiff_abs_weighted(I(0, 0), 1, 0, [0.0]) == Singleton(Z1)
    with pytest.raises(NotOnKinkPlane):
        subdiff_abs_weighted(I(1, 2), 1, 0, [0.5])


def test_abs_weighted_other_coordinates_fixed():
    b = subdiff_abs_weighted(I(1, 2), 2, 1, [0.7, 0.0])
    assert b.lower[0] == I(0, 0) and b.upper[0] == I(0, 0)
    assert b.lower[1] == I(-2, -1)


def test_scale_subdiff():
    assert scale_subdiff(2, Singleton(v(I(1, 2)))) == Singleton(v(I(2, 4)))
    b = Box(v(I(-2, -1)), v(I(1, 2)))
    assert scale_subdiff(0, b) == Singleton(Z1)
    assert scale_subdiff(1, b) == b
    with pytest.raises(NegativeScale):
        scale_subdiff(-1, b)


def test_contains_zero_cases():
    assert contains_zero(Singleton(v(I(0, 0), I(0, 0))))
    assert contains_zero(Box(v(I(-2, -1)), v(I(1, 2))))
    for d0, d1 in [(1, 0), (0, 1), (0.5, 0.5), (0.01, 3)]:
        s = ScaledSum([(d0, Singleton(v(I(0, 2)))), (d1, Singleton(v(I(1, 1))))])
        assert not contains_zero(s)
        assert distance(s) > 0


def test_nesting_limit():
    s = Singleton(Z1)
    deep = ScaledSum([(1, ScaledSum([(1, ScaledSum([(1, s)]))]))])
    with pytest.raises(UnsupportedShape):
        contains_zero(deep)
    assert contains_zero(ScaledSum([(1, ScaledSum([(2, s)]))]))


def s_params(s):
    from ivopt.subdiff import polygon
    return polygon(s)[0]


def _members(params, n=121):
    p1, p2, q1, q2, k = params
    lo = np.linspace(p1, p2, n)
    hi = np.linspace(q1, q2, n)
    L, H = np.meshgrid(lo, hi)
    ok = H - L >= k - 1e-12
    return L[ok], H[ok]


@given(st.lists(st.tuples(st.floats(0, 2), dyadic(3, 2), dyadic(3, 2), dyadic(3, 2), dyadic(3, 2)), min_size=1, max_size=3),
       dyadic(3, 2), dyadic(3, 2))
@example([(3.322077315926981e-117, 0.0, 0.25, 0.0, 0.25)], 0.25, 0.25)  # tiny scale, cancellation
@settings(max_examples=80)
def test_distance_matches_enumeration(raw, t1, t2):
    terms = []
    for d, a, b, c, e in raw:
        x, y = sorted((a, b))
        u, w = sorted((c, e))
        lower = I(min(x, u), min(y, w))
        upper = I(max(x, u), max(y, w))
        terms.append((d, Box(v(lower), v(upper))))
    s = ScaledSum(terms)
    params = s_params(s)
    target = v(I(min(t1, t2), max(t1, t2)))
    L, H = _members(params)
    if len(L) == 0:
        return
    brute = np.min(np.maximum(np.abs(L - target[0].lo), np.abs(H - target[0].hi)))
    d = distance(s, target)
    assert d <= brute + 1e-9
    # grid spacing bounds how far enumeration can be from the true minimum
    step = max(params[1] - params[0], params[3] - params[2]) / 120
    assert d >= brute - 2 * step - 1e-9
    assert contains(s, target) == (d == 0)


@given(dyadic(4, 2), dyadic(4, 2), dyadic(4, 2), dyadic(4, 2))
def test_box_membership_is_exact_dominance(a, b, c, d):
    box = Box(v(I(-2, -1)), v(I(1, 2)))
    g = v(I(min(a, b), max(a, b)))
    expected = -2 <= g[0].lo <= 1 and -1 <= g[0].hi <= 2
    assert contains(box, g) == expected
    assert (distance(box, g) == 0) == expected


def test_is_subgradient_examples():
    t = Ivf(lambda y: y[0] ** 2, lambda y: 2 * y[0] ** 2, DomainBox((-3,), (3,)))
    probes = probe_points(t.domain)
    assert is_subgradient(t, [0.0], Z1, probes)
    assert not is_subgradient(t, [0.0], v(I(0.5, 0.5)), probes)
    with pytest.raises(OutOfDomain):
        is_subgradient(t, [0.0], Z1, [[5.0]])


def test_is_subgradient_skips_outside_extended_domain():
    d = indicator(DomainBox((-1,), (1,)))
    assert is_subgradient(d, [0.0], Z1, [[-3.0], [0.5], [4.0]])


def test_smooth_subdifferential():
    frit = Ivf(lambda y: y[0] ** 2 + 2 * y[0] + 2, lambda y: 2 * y[0] ** 2 + 5, DomainBox((-2,), (0,)))
    s = subdiff_smooth(frit, [0.0])
    assert norm(gh_sub(s.value[0], I(0, 2))) < 1e-8
    cubic = Ivf.from_interval_fn(lambda y: scale(y[0] ** 3, I(2, 4)) + I(1, 1), DomainBox((-5,), (5,)), 1)
    assert subdiff_smooth(cubic, [0.0]).value.norm() < 1e-8
    assert subdiff_smooth(Ivf.constant(I(1, 2), None, 1), [0.4]).value.is_zero()
    # smooth consistency on the convex example
    for y in np.linspace(-1.9, -0.1, 7):
        g = subdiff_smooth(frit, [y]).value
        assert is_subgradient(frit, [y], g, probe_points(frit.domain, 200, 20), tol=1e-7)


@given(st.one_of(st.just(0.0), st.floats(1e-6, 4)), dyadic(5, 3), dyadic(5, 3))
@settings(max_examples=60)
def test_scaling_law(delta, a, b):
    g = v(I(min(a, b), max(a, b)))
    t = Ivf(lambda y: abs(y[0]), lambda y: 2 * abs(y[0]) + y[0] ** 2, DomainBox((-2,), (2,)))
    dt = Ivf.from_interval_fn(lambda y: scale(delta, t.raw(y)), t.domain, 1)
    probes = probe_points(t.domain, 101, 10)
    lhs = bool(is_subgradient(t, [0.0], g, probes))
    rhs = bool(is_subgradient(dt, [0.0], g.scale(delta), probes, tol=1e-12 * delta))
    if delta > 0:
        assert lhs == rhs
    else:
        assert rhs


def test_sum_subdiff_and_json():
    s = sum_subdiff(Singleton(v(I(0, 1))), Box(v(I(-2, -1)), v(I(1, 2))))
    back = from_json(json.loads(json.dumps(to_json(s))))
    assert back == s
    assert to_json(Singleton(Z1)) == {"kind": "singleton", "value": [[0.0, 0.0]]}
