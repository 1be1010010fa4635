import pickle

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ivopt.interval import PLUS_INF, Interval, preceq, scale
from ivopt.ivf import (
    Box,
    EndpointOrderViolation,
    Ivf,
    NotComparableAt,
    OutOfDomain,
    add_ivf,
    convexity_samples,
    indicator,
    is_convex_sampled,
    is_endpoint_convex_sampled,
    is_gh_continuous_at,
    max_ivf,
    scale_ivf,
)

I = Interval


def frit():
    # [1,2]y^2 + [0,2]y + [2,5] on [-2,0]
    return Ivf(lambda y: y[0] ** 2 + 2 * y[0] + 2, lambda y: 2 * y[0] ** 2 + 5, Box((-2,), (0,)))


def cubic():
    def fn(y):
        c = y[0] ** 3
        return scale(c, I(2, 4)) + I(1, 1)
    return Ivf.from_interval_fn(fn, Box((-5,), (5,)), 1)


def test_eval_examples():
    assert frit()(-1.0) == I(1, 7)
    assert frit()(0.0) == I(2, 5)
    assert cubic()(-1.0) == I(-3, -1)


def test_domain_and_order_errors():
    with pytest.raises(OutOfDomain):
        frit()(0.5)
    bad = Ivf(lambda y: y[0], lambda y: -y[0], Box((-1,), (1,)))
    with pytest.raises(EndpointOrderViolation):
        bad(0.5)


def test_algebra():
    sq = Ivf(lambda y: y[0] ** 2, lambda y: y[0] ** 2)
    three = Ivf.constant(I(3, 3))
    assert add_ivf(sq, three)(1.0) == I(4, 4)
    assert (sq + three)(1.0) == I(4, 4)
    t = Ivf(lambda y: y[0] ** 2, lambda y: 2 * y[0] ** 2)
    assert scale_ivf(2, t)(1.0) == I(2, 4)
    with pytest.raises(ValueError):
        scale_ivf(-1, t)


def test_max_ivf():
    a = Ivf(lambda y: y[0], lambda y: y[0])
    b = Ivf(lambda y: 2 * y[0], lambda y: 2 * y[0])
    assert max_ivf([a, b])(1.0) == I(2, 2)
    assert max_ivf([a])(0.3) == a(0.3)
    t = Ivf(lambda y: y[0] ** 2, lambda y: 2 * y[0] ** 2)
    g = Ivf(lambda y: y[0] - 1, lambda y: y[0] - 1)
    assert max_ivf([t, g])(0.0) == I(0, 0)
    wide = Ivf(lambda y: -10.0, lambda y: 10.0)
    with pytest.raises(NotComparableAt):
        max_ivf([wide, a])(0.0)


@given(st.floats(-3, 3))
def test_max_is_a_member(y):
    fam = [Ivf(lambda x, c=c: c * x[0], lambda x, c=c: c * x[0] + 1) for c in (-1.0, 0.5, 2.0)]
    m = max_ivf(fam)(y)
    assert m in [f(y) for f in fam]


def test_indicator():
    d = indicator(Box((-1,), (1,)))
    assert d(0.0) == I(0, 0)
    assert d(2.0) is PLUS_INF
    assert d(1.0) == I(0, 0)


def test_convexity_oracles(rng):
    samples = convexity_samples(Box((-2,), (0,)), 500, rng)
    assert is_convex_sampled(frit(), samples)
    affine = Ivf(lambda y: 2 * y[0] - 1, lambda y: 3 * y[0] + 7)
    assert is_convex_sampled(affine, convexity_samples(Box((-5,), (5,)), 200, rng))
    v = is_convex_sampled(cubic(), convexity_samples(Box((-5,), (5,)), 500, rng))
    assert not v and v.witness is not None


def test_convexity_equals_endpoint_convexity(rng):
    # interval form of the chord test holds iff both endpoint tests hold
    box = Box((-2, -2), (2, 2))
    fams = [
        Ivf(lambda y: y @ y, lambda y: y @ y + abs(y[0]), box),
        Ivf(lambda y: -abs(y[0]), lambda y: y @ y, box),
        Ivf(lambda y: y[0] ** 2, lambda y: y[0] ** 2 + np.sin(3 * y[1]) + 2, box),
    ]
    for t in fams:
        s = convexity_samples(box, 400, rng)
        both = bool(is_endpoint_convex_sampled(t.lower, s)) and bool(is_endpoint_convex_sampled(t.upper, s))
        assert bool(is_convex_sampled(t, s)) == both


def test_sum_of_convex_is_convex(rng):
    for _ in range(20):
        a, b, c, d = rng.uniform(0.1, 2, size=4)
        t1 = Ivf(lambda y, a=a: a * y[0] ** 2, lambda y, a=a, b=b: (a + b) * y[0] ** 2 + 1)
        t2 = Ivf(lambda y, c=c: c * (y[0] - 1) ** 2, lambda y, c=c, d=d: (c + d) * (y[0] - 1) ** 2)
        assert is_convex_sampled(t1 + t2, convexity_samples(Box((-3,), (3,)), 200, rng))


def test_endpoint_order_on_random_points(rng):
    t, c = frit(), cubic()
    for y in rng.uniform(-2, 0, size=2000):
        r = t(y)
        assert r.lo <= r.hi
    for y in rng.uniform(-5, 5, size=2000):
        r = c(y)
        assert r.lo <= r.hi


def test_continuity():
    assert is_gh_continuous_at(frit(), [-1.0])
    step = Ivf(lambda y: 0.0 if y[0] < 0 else 1.0, lambda y: 2.0)
    assert not is_gh_continuous_at(step, [0.0])
    d = indicator(Box((-1,), (1,)))
    assert is_gh_continuous_at(d, [1.0], directions=[np.array([-1.0])])
    assert not is_gh_continuous_at(d, [1.0])


def test_compiled_style_ivf_pickles():
    t = Ivf.constant(I(1, 2), Box((0,), (1,)))
    assert pickle.loads(pickle.dumps(t))(0.5) == I(1, 2)
