"""Randomized audit of the interval order identities on dyadic data.

Dyadic endpoints keep every operation exact, so any violation is a real
counterexample, not rounding. Prints one count per identity.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from ivopt.interval import Interval, gh_sub, preceq, scale
from ivopt.sets import inf_set, sup_set


@dataclass
class AuditConfig:
    instances: int = 10_000
    seed: int = 0


def _iv(rng):
    a, b = rng.integers(-512, 513, size=2) / 16
    return Interval(min(a, b), max(a, b))


def _above(rng, x):
    lo = x.lo + rng.integers(0, 257) / 16
    return Interval(lo, max(lo, x.hi + rng.integers(0, 257) / 16))


def _transitive(rng):
    x = _iv(rng)
    y = _above(rng, x)
    return preceq(x, _above(rng, y))


def _translation(rng):
    x, z = _iv(rng), _iv(rng)
    y = _above(rng, x)
    return preceq(x + z, y + z) and preceq(gh_sub(z, y), gh_sub(z, x))


def _scaling(rng):
    s = [_iv(rng) for _ in range(int(rng.integers(1, 6)))]
    d = rng.integers(0, 65) / 8
    return inf_set([scale(d, x) for x in s]) == scale(d, inf_set(s)) and sup_set(
        [scale(d, x) for x in s]
    ) == scale(d, sup_set(s))


def _superadditive(rng):
    k = int(rng.integers(1, 6))
    a = [_iv(rng) for _ in range(k)]
    b = [_iv(rng) for _ in range(k)]
    tot = [x + y for x, y in zip(a, b)]
    return preceq(inf_set(a) + inf_set(b), inf_set(tot)) and preceq(sup_set(tot), sup_set(a) + sup_set(b))


def _self_difference(rng):
    x = _iv(rng)
    return gh_sub(x, x) == Interval(0.0, 0.0)


CHECKS = {
    "transitivity": _transitive,
    "translation": _translation,
    "scaling of inf/sup": _scaling,
    "inf/sup of sums": _superadditive,
    "self gH-difference": _self_difference,
}


def run(cfg: AuditConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    total = 0
    for name, fn in CHECKS.items():
        bad = sum(not fn(rng) for _ in range(cfg.instances))
        total += bad
        print(f"{name:22} violations {bad}/{cfg.instances}")
    return total


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=AuditConfig.instances)
    ap.add_argument("--seed", type=int, default=AuditConfig.seed)
    a = ap.parse_args()
    raise SystemExit(1 if run(AuditConfig(a.instances, a.seed)) else 0)
