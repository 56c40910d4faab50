#!/usr/bin/env python3
"""Time the squaring chains and the fold reduction across indices.

Reports per-squaring cost and squarings/second for each n, which is the
number that matters when estimating a long half-residue run, plus a
sanity column comparing the full chain against pow() on sizes where
pow() is still reasonable.

    python3 scripts/bench_chains.py
    python3 scripts/bench_chains.py --n-min 8 --n-max 16 --repeats 5
"""

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fermatlab.arith import fermat_value, mod_square_chain, reduce_fold

POW_CROSSCHECK_MAX_N = 13


@dataclass(frozen=True)
class BenchConfig:
    n_min: int
    n_max: int
    repeats: int
    base: int


def parse_args() -> BenchConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=6)
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--repeats", type=int, default=3,
                    help="keep the fastest of this many timings")
    ap.add_argument("--base", type=int, default=3)
    a = ap.parse_args()
    if a.n_min > a.n_max or a.repeats < 1:
        ap.error("empty range or repeats < 1")
    return BenchConfig(a.n_min, a.n_max, a.repeats, a.base)


def bench_one(cfg: BenchConfig, n: int):
    count = (1 << n) - 1  # the half-residue chain length
    start = reduce_fold(cfg.base, n)
    best = float("inf")
    result = None
    for _ in range(cfg.repeats):
        t0 = time.perf_counter()
        result = mod_square_chain(start, count)
        best = min(best, time.perf_counter() - t0)
    agree = ""
    if n <= POW_CROSSCHECK_MAX_N:
        m = fermat_value(n)
        agree = "ok" if result.value == pow(cfg.base, 1 << count, m) \
            else "MISMATCH"
    return count, best, agree


def main() -> int:
    cfg = parse_args()
    print(f"base={cfg.base} repeats={cfg.repeats}")
    print(f"{'n':>3} {'bits':>7} {'squarings':>10} {'total_s':>9} "
          f"{'us/squaring':>12} {'sq/s':>10} pow_check")
    for n in range(cfg.n_min, cfg.n_max + 1):
        count, best, agree = bench_one(cfg, n)
        per = best / count
        print(f"{n:>3} {1 << n:>7} {count:>10} {best:>9.3f} "
              f"{per * 1e6:>12.2f} {count / best:>10.0f} {agree}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
