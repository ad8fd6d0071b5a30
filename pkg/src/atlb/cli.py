"""Command-line surface for batch proof search.

Subcommands:

    best-c ANNOTATION       bracket the best provable exponent
    search                  exhaustive sweep up to a length, resumable
    enumerate               list or count valid annotations of a length
    family NAME PARAMS...   best-c along a named annotation family
    verify FILE             check a stored derivation, exit 0 iff valid
    print FILE              render a stored derivation line by line
    export-lp ANNOTATION    write the compiled LP in text form

Environment variables supply defaults for the recurring knobs; an
explicit flag always wins:

    ATLB_PRECISION, ATLB_WORKERS, ATLB_LEDGER, ATLB_EXACT,
    ATLB_FEASIBILITY_TOLERANCE, ATLB_PIVOT_TOLERANCE,
    ATLB_MAX_ITERATIONS, ATLB_MAX_BITS, ATLB_STALL_ITERATIONS

Exit status is 0 on success (and on a valid proof), 1 on domain
failures (invalid annotation, malformed proof file, verification
failure, unwritable ledger), 2 on usage errors. Machine-readable output
goes to stdout; progress lines go to stderr, rate-limited, and only
when stderr is a terminal. Interrupting a search flushes the ledger so
a rerun resumes where it stopped.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .annotation import Annotation, count, enumerate_annotations
from .derivation import (
    DerivationError,
    Proof,
    parse_pretty,
    pretty_print,
    proof_dumps,
    proof_loads,
    verify_proof,
)
from .lp_model import ExtractionError, build_lp, export_lp_text
from .lp_solver import SolverConfig, SolverError
from .search import (
    SearchError,
    SearchLedger,
    best_c,
    config_hash,
    exhaustive,
    family_sweep,
    report,
    report_csv,
)


class _UsageError(Exception):
    """Bad flag or environment value; maps to exit status 2."""


def _truthy(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


# attribute -> (environment variable, parser, built-in default)
_ENV_DEFAULTS = {
    "precision": ("ATLB_PRECISION", float, 1e-6),
    "workers": ("ATLB_WORKERS", int, 1),
    "ledger": ("ATLB_LEDGER", str, "atlb_ledger.jsonl"),
    "exact": ("ATLB_EXACT", _truthy, False),
    "feasibility_tolerance": ("ATLB_FEASIBILITY_TOLERANCE", float, 1e-9),
    "pivot_tolerance": ("ATLB_PIVOT_TOLERANCE", float, 1e-9),
    "max_iterations": ("ATLB_MAX_ITERATIONS", int, 20000),
    "max_bits": ("ATLB_MAX_BITS", int, 100000),
    "stall_iterations": ("ATLB_STALL_ITERATIONS", int, 60),
}


def _fill_defaults(args: argparse.Namespace) -> None:
    """Resolve unset flags from the environment, validating both."""
    for attr, (env, cast, default) in _ENV_DEFAULTS.items():
        if not hasattr(args, attr) or getattr(args, attr) is not None:
            continue
        raw = os.environ.get(env)
        if raw is None:
            setattr(args, attr, default)
            continue
        try:
            setattr(args, attr, cast(raw))
        except ValueError:
            raise _UsageError(f"environment variable {env}={raw!r} is invalid")
    if getattr(args, "precision", 1.0) <= 0:
        raise _UsageError("precision must be positive")
    if getattr(args, "workers", 1) < 1:
        raise _UsageError("workers must be at least 1")
    for attr in ("max_iterations", "max_bits", "stall_iterations"):
        if getattr(args, attr, 1) < 1:
            raise _UsageError(f"{attr.replace('_', '-')} must be at least 1")


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        exact_mode=args.exact,
        feasibility_tolerance=args.feasibility_tolerance,
        pivot_tolerance=args.pivot_tolerance,
        max_iterations=args.max_iterations,
        max_bits=args.max_bits,
        stall_iterations=args.stall_iterations,
    )


class _Progress:
    """Progress printer: stderr only, terminal only, at most ~2/s."""

    def __init__(self, min_interval: float = 0.5) -> None:
        self.min_interval = min_interval
        self.last = 0.0
        self.enabled = sys.stderr.isatty()

    def __call__(self, annotation: str, best: float, i: int, total: int) -> None:
        if not self.enabled:
            return
        now = time.monotonic()
        if now - self.last < self.min_interval and i != total:
            return
        self.last = now
        print(f"[{i}/{total}] {annotation} best_c={best:.6f}", file=sys.stderr)


def _fraction(raw: str) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {raw!r}")


def _read_proof(path: str) -> Proof:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return proof_loads(text)
    return parse_pretty(text)


def _bracket_mid(result) -> float:
    lo, hi = result.bracket
    return float((lo + hi) / 2)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_best_c(args: argparse.Namespace) -> int:
    result = best_c(args.annotation, args.precision, _solver_config(args))
    lo, hi = result.bracket
    print(f"annotation {result.annotation}")
    print(f"best_c {_bracket_mid(result):.6f}")
    print(f"bracket_lo {lo.numerator}/{lo.denominator}")
    print(f"bracket_hi {hi.numerator}/{hi.denominator}")
    cc = result.certificate.c
    print(f"certificate_c {cc.numerator}/{cc.denominator}")
    print(f"lp_solves {result.stats.lp_solves}")
    if args.certificate:
        Path(args.certificate).write_text(proof_dumps(result.certificate))
        print(f"certificate_file {args.certificate}")
    if args.derivation:
        print(pretty_print(result.certificate), end="")
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    cfg = _solver_config(args)
    if args.seed_results:
        seed = SearchLedger(args.seed_results).load()
        target = SearchLedger(args.ledger).recover()
        try:
            _check_seed_meta(seed, args, cfg)
            added = target.merge_from(seed)
            for ann in seed.records:
                src = seed.certificate_path(ann)
                dst = target.certificate_path(ann)
                if src.exists() and not dst.exists():
                    target.write_certificate(ann, src.read_text())
        finally:
            target.close()
        print(f"seeded {added} results from {args.seed_results}", file=sys.stderr)
    ledger = exhaustive(
        args.max_length,
        precision=args.precision,
        ledger_path=args.ledger,
        workers=args.workers,
        config=cfg,
        progress=_Progress(),
        limit=args.limit,
    )
    out = report_csv(ledger) if args.csv else report(ledger)
    print(out, end="")
    return 0


def _check_seed_meta(seed: SearchLedger, args, cfg: SolverConfig) -> None:
    """Seeded records must have been computed under the same semantics.

    Only the keys that change what a record means are compared; the seed
    run's max_length may differ (merging a shorter sweep is the point).
    """
    if seed.meta is None:
        return
    ours = {
        "precision": args.precision,
        "exact_mode": cfg.exact_mode,
        "feasibility_tolerance": cfg.feasibility_tolerance,
    }
    for key, want in ours.items():
        have = seed.meta.get(key)
        if have is not None and have != want:
            raise SearchError(
                f"seed ledger {seed.path} has {key}={have}, this run uses {want}"
            )


def _cmd_enumerate(args: argparse.Namespace) -> int:
    if args.count_only:
        print(count(args.length))
        return 0
    for ann in enumerate_annotations(args.length):
        print(ann)
    return 0


def _parse_family_params(family: str, raw: Sequence[str]) -> list:
    try:
        if family == "fvm":
            return [int(p) for p in raw]
        return [tuple(int(part) for part in p.split(",")) for p in raw]
    except ValueError:
        raise _UsageError(
            "family parameters must be integers (fvm) or outer,inner pairs (w)"
        )


def _cmd_family(args: argparse.Namespace) -> int:
    params = _parse_family_params(args.family, args.params)
    results = family_sweep(
        args.family, params, args.precision, _solver_config(args), _Progress()
    )
    for param, result in results:
        label = ",".join(str(p) for p in param)
        print(f"{label} {result.annotation} {_bracket_mid(result):.6f}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    proof = _read_proof(args.file)
    problems = verify_proof(proof)
    if not problems:
        print("valid")
        return 0
    for violation in problems:
        print(violation)
    return 1


def _cmd_print(args: argparse.Namespace) -> int:
    print(pretty_print(_read_proof(args.file)), end="")
    return 0


def _cmd_export_lp(args: argparse.Namespace) -> int:
    lp = build_lp(args.annotation, args.c, loose_speedup_inputs=args.loose)
    text = export_lp_text(lp)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text, end="")
    return 0


# ---------------------------------------------------------------------------
# Parser


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver options")
    g.add_argument(
        "--exact",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="force exact rational arithmetic (env ATLB_EXACT)",
    )
    g.add_argument(
        "--feasibility-tolerance", type=float, default=None, metavar="T",
        help="float-path feasibility tolerance (env ATLB_FEASIBILITY_TOLERANCE)",
    )
    g.add_argument(
        "--pivot-tolerance", type=float, default=None, metavar="T",
        help="float-path pivot tolerance (env ATLB_PIVOT_TOLERANCE)",
    )
    g.add_argument(
        "--max-iterations", type=int, default=None, metavar="N",
        help="simplex iteration cap per phase (env ATLB_MAX_ITERATIONS)",
    )
    g.add_argument(
        "--max-bits", type=int, default=None, metavar="N",
        help="exact-path coefficient size cap (env ATLB_MAX_BITS)",
    )
    g.add_argument(
        "--stall-iterations", type=int, default=None, metavar="N",
        help="float iterations without progress before switching to"
        " Bland's rule (env ATLB_STALL_ITERATIONS)",
    )


def _add_precision_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--precision", type=float, default=None, metavar="W",
        help="bracket width to bisect down to (env ATLB_PRECISION, 1e-6)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atlb",
        description="Search and verify alternation-trading lower-bound proofs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("best-c", help="bracket the best provable exponent")
    p.add_argument("annotation", help="annotation bits, e.g. 1100100")
    _add_precision_flag(p)
    p.add_argument(
        "--certificate", metavar="PATH",
        help="also write the certificate derivation as JSON",
    )
    p.add_argument(
        "--derivation", action="store_true",
        help="also print the certificate derivation line by line",
    )
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_best_c)

    p = sub.add_parser("search", help="exhaustive sweep up to a length, resumable")
    p.add_argument("--max-length", type=int, required=True, metavar="N")
    p.add_argument(
        "--ledger", default=None, metavar="PATH",
        help="results file, JSON lines (env ATLB_LEDGER, atlb_ledger.jsonl)",
    )
    p.add_argument(
        "--workers", type=int, default=None, metavar="N",
        help="worker processes (env ATLB_WORKERS, 1)",
    )
    p.add_argument(
        "--limit", type=int, default=None, metavar="N",
        help="stop after N new annotations; rerun to continue",
    )
    p.add_argument(
        "--seed-results", metavar="PATH",
        help="merge records from a prior ledger before searching",
    )
    p.add_argument(
        "--csv", action="store_true",
        help="print the final summary as CSV instead of a table",
    )
    _add_precision_flag(p)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("enumerate", help="list or count valid annotations")
    p.add_argument("--length", type=int, required=True, metavar="N")
    p.add_argument("--count-only", action="store_true", help="print only the count")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("family", help="best-c along a named annotation family")
    p.add_argument("family", choices=("fvm", "w"))
    p.add_argument(
        "params", nargs="+",
        help="fvm: integers k; w: outer,inner pairs like 2,1",
    )
    _add_precision_flag(p)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("verify", help="check a stored derivation")
    p.add_argument("file", help="derivation file (JSON or printed form)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("print", help="render a stored derivation")
    p.add_argument("file", help="derivation file (JSON or printed form)")
    p.set_defaults(func=_cmd_print)

    p = sub.add_parser("export-lp", help="write the compiled LP in text form")
    p.add_argument("annotation")
    p.add_argument("--c", type=_fraction, required=True, help="exponent, e.g. 1.4 or 8/5")
    p.add_argument(
        "--loose", action="store_true",
        help="drop the speedup input floor at the previous core input",
    )
    p.add_argument("--output", "-o", metavar="PATH", help="write here instead of stdout")
    p.set_defaults(func=_cmd_export_lp)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage, 0 on --help
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        _fill_defaults(args)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("interrupted; results so far are flushed, rerun to resume", file=sys.stderr)
        return 130
    except (
        DerivationError,
        ExtractionError,
        SearchError,
        SolverError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
