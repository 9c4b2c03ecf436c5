#!/usr/bin/env python3
"""Sweep the frame-potential optimizer over signatures, sizes and seeds.

Prints one row per run: signature, k, seed, final excess over k^2/n,
iterations, and whether the result is tight and FF-critical.

    python scripts/optimizer_sweep.py --max-n 4 --extra 3 --seeds 0 1 2
"""
import argparse
import time
from dataclasses import dataclass, field

from kreinframes.frames import is_frame, is_tight
from kreinframes.kspace import KreinSpace
from kreinframes.potential import OptimizerOptions, is_ff_critical, minimize_potential


@dataclass
class SweepConfig:
    max_n: int = 4
    extra: int = 3  # k ranges over n .. n + extra
    seeds: list = field(default_factory=lambda: [0, 1, 42])
    options: OptimizerOptions = field(default_factory=OptimizerOptions)


def signatures(max_n):
    for n in range(1, max_n + 1):
        for p in range(n + 1):
            yield p, n - p


def run(cfg: SweepConfig):
    rows = []
    for p, q in signatures(cfg.max_n):
        n = p + q
        for k in range(n, n + cfg.extra + 1):
            for seed in cfg.seeds:
                t0 = time.perf_counter()
                r = minimize_potential(KreinSpace(p, q), k, seed=seed, options=cfg.options)
                dt = time.perf_counter() - t0
                tight = is_frame(r.frame) and is_tight(r.frame, tol=1e-5)
                rows.append((p, q, k, seed, r.potential - k * k / n, r.iterations, tight,
                             is_ff_critical(r.frame), dt))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    ap.add_argument("--extra", type=int, default=SweepConfig.extra)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 42])
    ap.add_argument("--max-iters", type=int, default=OptimizerOptions.max_iters)
    a = ap.parse_args()
    cfg = SweepConfig(a.max_n, a.extra, a.seeds, OptimizerOptions(max_iters=a.max_iters))

    print(f"{'(p,q)':>7} {'k':>3} {'seed':>5} {'excess':>10} {'iters':>6} tight ff-crit {'sec':>6}")
    rows = run(cfg)
    for p, q, k, seed, ex, it, tight, ff, dt in rows:
        print(f"{f'({p},{q})':>7} {k:>3} {seed:>5} {ex:>10.2e} {it:>6} {str(tight):>5} {str(ff):>7} {dt:>6.3f}")
    bad = [r for r in rows if abs(r[4]) > 1e-6 or not r[6]]
    print(f"\n{len(rows)} runs, {len(bad)} missed k^2/n or tightness")


if __name__ == "__main__":
    main()
