"""Fritz John fails at an efficient point when the constraint is inactive.

Prints the gradient at 0, the FJ report, and efficiency along the box.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from ivopt import dsl
from ivopt.optimality import MultiplierGrid, fritz_john_check, is_efficient_oracle
from ivopt.problems import load
from ivopt.subdiff import subdiff_smooth


@dataclass
class Config:
    grid_points: int = 201
    simplex_res: int = 100


def run(cfg: Config) -> None:
    p = dsl.compile(load("fj_counterexample"))
    sub = subdiff_smooth(p.objective, [0.0])
    print("gH-gradient at 0:", sub.value[0])
    rep = fritz_john_check(p, [0.0], sub, [[1.0]], MultiplierGrid(cfg.simplex_res))
    print("fritz john:", rep.verdict.value, "residual", round(rep.residual, 6))
    for note in rep.notes:
        print("  ", note)
    g = np.linspace(-2, 0, cfg.grid_points).reshape(-1, 1)
    for y in (-2.0, -1.5, -1.0, -0.5, 0.0):
        r = is_efficient_oracle(p, [y], g)
        extra = f" witness {r.witness}" if r.witness else ""
        print(f"efficient at {y:5}: {r.verdict.value}{extra}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid-points", type=int, default=Config.grid_points)
    ap.add_argument("--simplex-res", type=int, default=Config.simplex_res)
    a = ap.parse_args()
    run(Config(a.grid_points, a.simplex_res))
