"""Tabulate the two one-dimensional example objectives as CSV for plotting.

    python3 scripts/sweep_figures.py --out-dir out/
"""
import argparse
import io
from dataclasses import dataclass
from pathlib import Path

from ivopt.cli import main
from ivopt.problems import ALL


@dataclass
class SweepConfig:
    out_dir: Path = Path("out")
    points: int = 201


RUNS = {
    # name -> (problem, extra sweep args)
    "fj_counterexample": ("fj_counterexample", []),
    "composite_cubic": ("composite_cubic", ["--over=-1,1"]),
}


def run(cfg: SweepConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name, (problem, extra) in RUNS.items():
        src = cfg.out_dir / f"{problem}.ivp"
        src.write_text(ALL[problem])
        buf = io.StringIO()
        code = main(["sweep", str(src), "--grid", str(cfg.points), *extra], buf)
        if code:
            raise SystemExit(code)
        dest = cfg.out_dir / f"{name}.csv"
        dest.write_text(buf.getvalue())
        print(f"wrote {dest} ({cfg.points} rows)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", type=Path, default=SweepConfig.out_dir)
    ap.add_argument("--points", type=int, default=SweepConfig.points)
    a = ap.parse_args()
    run(SweepConfig(a.out_dir, a.points))
