"""Command-line front end.

One JSON record per invocation on stdout (``--format text`` for a human
rendering), diagnostics on stderr, and a fixed exit-code contract:

    0  success
    1  selftest failure
    2  usage or precondition error
    3  corrupt or mismatched checkpoint
    4  congruence-rule violation (the headline event; see classify)

Long half-residue runs can write checkpoints (--checkpoint-dir) and are
resumed automatically from them; a checkpoint that fails its digest is
refused with exit 3 rather than silently restarted, since a bad file
usually means trouble outside this program.  --stop-after ends the run
cleanly right after writing a checkpoint, which is also how the resume
machinery is exercised in tests.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

from . import records
from .checkpoint import (
    DEFAULT_EVERY_SECONDS,
    DEFAULT_EVERY_SQUARINGS,
    ChainPaused,
    CheckpointWriter,
    load_matching,
)
from .errors import CheckpointError, FermatLabError, TheoremViolationError
from .factors import lucas_search
from .orders import order_alpha
from .primality import (
    PEPIN_ADMISSIBLE_BASES,
    applicable_rules,
    audit_range,
    classify_report,
    default_audit_bases,
    pepin_test,
)
from .selftest import run_selftest

EXIT_OK = 0
EXIT_SELFTEST_FAILURE = 1
EXIT_USAGE = 2
EXIT_CORRUPT_CHECKPOINT = 3
EXIT_THEOREM_VIOLATION = 4

PROG = "fermatlab"


def _log(message: str) -> None:
    print(f"{PROG}: {message}", file=sys.stderr)


def _emit(doc: Dict[str, object], fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(records.dump(doc))
    else:
        sys.stdout.write(render_text(doc))


def _parse_bases(text: str) -> List[int]:
    try:
        bases = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}") from None
    if not bases:
        raise argparse.ArgumentTypeError("base list is empty")
    return bases


def _parse_range(text: str):
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected N or LO..HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def cmd_pepin(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    resume_index = 0
    resume_value: Optional[int] = None
    writer: Optional[CheckpointWriter] = None
    if args.stop_after is not None and args.checkpoint_dir is None:
        _log("--stop-after needs --checkpoint-dir (the state must go "
             "somewhere to be resumable)")
        return EXIT_USAGE
    if args.checkpoint_dir is not None:
        directory = Path(args.checkpoint_dir)
        cp = load_matching(directory, "pepin", args.n, args.base)
        if cp is not None:
            resume_index = cp.squaring_index
            resume_value = cp.residue
            _log(f"resuming n={args.n} base={args.base} from squaring "
                 f"{resume_index} (checkpoint of {cp.created_at})")
        writer = CheckpointWriter(
            "pepin", args.n, args.base, directory,
            every_squarings=args.checkpoint_every,
            every_seconds=args.checkpoint_seconds,
            stop_after=args.stop_after)
    try:
        prime, half = pepin_test(
            args.n, args.base, observer=writer,
            allow_any_base=args.allow_any_base,
            resume_index=resume_index, resume_value=resume_value)
    except ChainPaused as pause:
        elapsed = time.perf_counter() - t0
        _log(f"paused after squaring {pause.index}; checkpoint at "
             f"{pause.path}")
        _emit(records.paused_record(args.n, args.base, pause.index,
                                    str(pause.path), elapsed), args.format)
        return EXIT_OK
    if writer is not None:
        writer.finished()
    elapsed = time.perf_counter() - t0
    _emit(records.pepin_record(args.n, args.base,
                               args.base in PEPIN_ADMISSIBLE_BASES,
                               prime, half.to_hex(), elapsed), args.format)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    verdict, violations = classify_report(args.n, args.base)
    elapsed = time.perf_counter() - t0
    _emit(records.classify_record(verdict,
                                  applicable_rules(args.n, args.base),
                                  violations, elapsed), args.format)
    if violations:
        _log(f"{len(violations)} congruence rule(s) FAILED; "
             "this should be impossible, please preserve the output")
        return EXIT_THEOREM_VIOLATION
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    lo, hi = args.n_range
    bases = args.bases if args.bases is not None else default_audit_bases()
    report = audit_range(range(lo, hi + 1), bases)
    elapsed = time.perf_counter() - t0
    doc = records.audit_record(report, [lo, hi], bases, applicable_rules,
                               elapsed)
    if args.report is not None:
        Path(args.report).write_text(records.dump(doc), encoding="utf-8")
        _log(f"report written to {args.report}")
    _emit(doc, args.format)
    if not report.all_passed:
        _log(f"{len(report.violations)} audit violation(s) found")
        return EXIT_THEOREM_VIOLATION
    return EXIT_OK


def cmd_factor(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    found = lucas_search(args.n, args.k_max, args.prime_filter)
    elapsed = time.perf_counter() - t0
    doc = records.factor_record(args.n, args.k_max, args.prime_filter,
                                found, elapsed)
    _emit(doc, args.format)
    if doc["violations"]:
        _log("a prime divisor violated the k-form constraints; "
             "this should be impossible, please preserve the output")
        return EXIT_THEOREM_VIOLATION
    return EXIT_OK


def cmd_order(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    result = order_alpha(args.n, args.base)
    elapsed = time.perf_counter() - t0
    _emit(records.order_record(result, elapsed), args.format)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    result = run_selftest()
    _emit(records.selftest_record(result.passed, result.checks_run,
                                  list(result.failures)), args.format)
    if not result.passed:
        first = result.first_failure
        _log(f"selftest FAILED ({len(result.failures)} of "
             f"{result.checks_run} checks); first: {first.describe()}")
        return EXIT_SELFTEST_FAILURE
    return EXIT_OK


def render_text(doc: Dict[str, object]) -> str:
    kind = doc["record"]
    lines: List[str] = []
    skip = {"record", "format_version", "library_version"}
    if kind == "audit":
        lines.append(f"audit n_range={doc['n_range'][0]}.."
                     f"{doc['n_range'][1]} bases={len(doc['bases'])} "
                     f"all_passed={doc['all_passed']}")
        for row in doc["rows"]:
            base10 = int(row["base"], 16)
            if not row["coprime"]:
                lines.append(f"  n={row['n']} base={base10} "
                             f"NOT COPRIME gcd=0x{row['gcd']}")
                continue
            failed = [r["rule"] for r in row["rules"] if not r["passed"]]
            status = "FAIL " + ",".join(failed) if failed else "ok"
            lines.append(
                f"  n={row['n']} base={base10} "
                f"quarter={row['quarter_tag']} "
                f"congruence={row['fermat_congruence_holds']} "
                f"prime={row['pepin_prime']} "
                f"class={row['classification']} {status}")
    elif kind == "factor":
        lines.append(f"factor n={doc['n']} k_max={doc['k_max']} "
                     f"found={len(doc['found'])}")
        for d in doc["found"]:
            lines.append(f"  k={d['k']} p={int(d['p'], 16)} "
                         f"prime={d['prime']} "
                         f"form_valid={d['divisor_form_valid']} ")
        for v in doc["violations"]:
            lines.append(f"  VIOLATION k={v['k']}: {v['reason']}")
    elif kind == "selftest":
        lines.append(f"selftest passed={doc['passed']} "
                     f"checks_run={doc['checks_run']}")
        for f in doc["failures"]:
            lines.append(f"  FAIL {f['check']} [{f['subject']}] "
                         f"expected={f['expected']} actual={f['actual']}")
    else:
        lines.append(str(kind))
        for key, value in doc.items():
            if key in skip:
                continue
            if isinstance(value, dict):
                inner = " ".join(f"{k}={v}" for k, v in value.items())
                lines.append(f"  {key}: {inner}")
            elif isinstance(value, list):
                for item in value:
                    lines.append(f"  {key}[]: {item}")
            else:
                lines.append(f"  {key}: {value}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"),
                        default="json",
                        help="output rendering (default json)")

    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Primality, pseudoprimality and divisor search for "
                    "numbers of the form 2^(2^n)+1.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pepin", parents=[common],
                       help="half-residue primality test (n >= 2)")
    p.add_argument("n", type=int)
    p.add_argument("--base", type=int, default=3,
                   help="admissible bases: 3, 5, 10 (default 3)")
    p.add_argument("--allow-any-base", action="store_true",
                   help="run a non-admissible base anyway; the result "
                        "then carries no primality claim")
    p.add_argument("--checkpoint-dir", metavar="DIR",
                   help="directory for resumable chain state")
    p.add_argument("--checkpoint-every", type=int,
                   default=DEFAULT_EVERY_SQUARINGS, metavar="SQUARINGS",
                   help="checkpoint cadence in squarings "
                        f"(default {DEFAULT_EVERY_SQUARINGS})")
    p.add_argument("--checkpoint-seconds", type=float,
                   default=DEFAULT_EVERY_SECONDS, metavar="SECONDS",
                   help="also checkpoint after this many seconds "
                        f"(default {DEFAULT_EVERY_SECONDS:g})")
    p.add_argument("--stop-after", type=int, metavar="INDEX",
                   help="write a checkpoint at this squaring index and "
                        "exit cleanly (resume by rerunning)")
    p.set_defaults(func=cmd_pepin)

    p = sub.add_parser("classify", parents=[common],
                       help="full verdict: primality, congruence, "
                            "quarter residue, rule audit")
    p.add_argument("n", type=int)
    p.add_argument("--base", type=int, default=3)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("audit", parents=[common],
                       help="sweep the congruence rules over a grid")
    p.add_argument("--n-range", type=_parse_range, default=(5, 8),
                   metavar="LO..HI",
                   help="indices to audit (default 5..8)")
    p.add_argument("--bases", type=_parse_bases, default=None,
                   metavar="B1,B2,...",
                   help="bases to audit (default: 2 plus first 50 primes)")
    p.add_argument("--report", metavar="PATH",
                   help="also write the JSON record to this file")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("factor", parents=[common],
                       help="search divisors of the form k*2^(n+2)+1")
    p.add_argument("n", type=int)
    p.add_argument("--k-max", type=int, default=1000, metavar="K")
    p.add_argument("--prime-filter", action="store_true",
                   help="skip composite candidate divisors")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("order", parents=[common],
                       help="multiplicative order as a power of two")
    p.add_argument("n", type=int)
    p.add_argument("--base", type=int, default=3)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("selftest", parents=[common],
                       help="deterministic cross-check battery")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CheckpointError as err:
        _log(f"checkpoint problem: {err}")
        return EXIT_CORRUPT_CHECKPOINT
    except TheoremViolationError as err:
        _log(f"congruence violation: {err}")
        for key, value in err.transcript.items():
            _log(f"  {key}: {value}")
        return EXIT_THEOREM_VIOLATION
    except (FermatLabError, ValueError) as err:
        _log(str(err))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
