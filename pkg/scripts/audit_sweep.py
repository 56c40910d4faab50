#!/usr/bin/env python3
"""Sweep the quarter-residue congruence rules over a grid and tabulate.

Bigger sibling of `fermatlab audit`: runs the same rule checks over a
wider grid, prints one line per (n, base) with the interesting columns,
and optionally dumps the raw audit record as JSON for archiving.

    python3 scripts/audit_sweep.py --n-min 5 --n-max 12 --base-count 50
    python3 scripts/audit_sweep.py --n-max 10 --json-out sweep.json
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fermatlab import records
from fermatlab.primality import applicable_rules, audit_range, first_primes


@dataclass(frozen=True)
class SweepConfig:
    n_min: int
    n_max: int
    base_count: int
    json_out: Path | None

    @property
    def bases(self):
        return first_primes(self.base_count)


def parse_args() -> SweepConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--base-count", type=int, default=50,
                    help="audit the first this-many primes as bases")
    ap.add_argument("--json-out", type=Path, default=None,
                    help="also write the machine-readable record here")
    a = ap.parse_args()
    if a.n_min > a.n_max:
        ap.error("--n-min must not exceed --n-max")
    if a.base_count < 1:
        ap.error("--base-count must be >= 1")
    return SweepConfig(a.n_min, a.n_max, a.base_count, a.json_out)


def main() -> int:
    cfg = parse_args()
    t0 = time.perf_counter()
    report = audit_range(range(cfg.n_min, cfg.n_max + 1), cfg.bases)
    elapsed = time.perf_counter() - t0

    print(f"{'n':>3} {'base':>5} {'class':<26} {'quarter':<9} "
          f"{'congruence':<10} rules")
    pseudo = 0
    for row in report.rows:
        if not row.coprime:
            print(f"{row.n:>3} {row.base:>5} NOT COPRIME gcd={row.gcd}")
            continue
        v = row.verdict
        if v.fermat_congruence_holds and not v.pepin_prime:
            pseudo += 1
        failed = {x.rule for x in row.violations}
        marks = " ".join(
            ("!" if r in failed else ".") for r in
            applicable_rules(row.n, row.base))
        print(f"{row.n:>3} {row.base:>5} {v.classification.value:<26} "
              f"{v.quarter.tag.value:<9} "
              f"{str(v.fermat_congruence_holds):<10} {marks}")

    print(f"\nrows={len(report.rows)} pseudoprime_cases={pseudo} "
          f"violations={len(report.violations)} "
          f"all_passed={report.all_passed} elapsed={elapsed:.2f}s")

    if cfg.json_out is not None:
        doc = records.audit_record(report, [cfg.n_min, cfg.n_max],
                                   cfg.bases, applicable_rules, elapsed)
        cfg.json_out.write_text(records.dump(doc), encoding="utf-8")
        print(f"record written to {cfg.json_out}")
    return 0 if report.all_passed else 4


if __name__ == "__main__":
    sys.exit(main())
