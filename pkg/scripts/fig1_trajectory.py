"""Simulate one path on [0, 3] and plot it.

    python3 scripts/fig1_trajectory.py [--theta 1] [--seed 42] [--out results/fig1]

Writes ``<out>.events.csv`` and ``<out>.grid.csv`` through the CLI, and
``<out>.png`` when matplotlib is available.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from bipoisson.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--horizon", type=float, default=3.0)
    ap.add_argument("--delta", type=float, default=1e-3, help="window around t = 1 left undrawn")
    ap.add_argument("--out", default="results/fig1")
    args = ap.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    events, grid = f"{out}.events.csv", f"{out}.grid.csv"
    code = cli_main(["simulate", "--theta", str(args.theta), "--seed", str(args.seed), "--horizon", str(args.horizon),
                     "--delta", str(args.delta), "--grid-points", "3001", "--out", events, "--grid-out", grid])
    if code:
        return code
    rows = list(csv.DictReader(open(grid)))
    t = [float(r["t"]) for r in rows]
    x = [float(r["x"]) for r in rows]
    print(f"wrote {events} and {grid} ({len(rows)} grid points)")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return 0
    fig, ax = plt.subplots(figsize=(7, 3.5))
    left = [(a, b) for a, b in zip(t, x) if a < 1]
    right = [(a, b) for a, b in zip(t, x) if a > 1]
    for seg in (left, right):
        if seg:
            ax.plot(*zip(*seg), lw=0.8, color="k")
    ax.axvline(1.0, color="0.7", lw=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("X_t")
    ax.set_title(f"theta = {args.theta:g}, seed {args.seed}")
    fig.tight_layout()
    fig.savefig(f"{out}.png", dpi=150)
    print(f"wrote {out}.png")
    return 0


if __name__ == "__main__":
    sys.exit(main())
