import numpy as np
import pytest
from hypothesis import settings, strategies as st

from ivopt.interval import Interval

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def dyadic(bits: int = 10, frac: int = 4):
    """Floats k / 2**frac with |k| <= 2**bits; sums and small products stay exact."""
    return st.integers(-(2**bits), 2**bits).map(lambda k: k / 2**frac)


@st.composite
def intervals(draw, elements=None):
    if elements is None:
        elements = st.floats(-1e6, 1e6, allow_nan=False)
    a, b = draw(elements), draw(elements)
    return Interval(min(a, b), max(a, b))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
