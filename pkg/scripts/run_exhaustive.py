#!/usr/bin/env python3
"""Exhaustive sweep with a progress line, then the summary table.

Equivalent to `atlb search` but handy to edit for one-off experiments.
Interrupt freely: rerunning the same command resumes from the ledger.
"""

import argparse
import sys
import time

from atlb.search import exhaustive, report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-length", type=int, default=13)
    ap.add_argument("--ledger", default="atlb_ledger.jsonl")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--precision", type=float, default=1e-6)
    args = ap.parse_args()

    started = time.monotonic()

    def progress(annotation: str, best: float, i: int, total: int) -> None:
        elapsed = time.monotonic() - started
        print(
            f"[{i}/{total}] {annotation} best_c={best:.6f} ({elapsed:.0f}s)",
            file=sys.stderr,
        )

    ledger = exhaustive(
        args.max_length,
        precision=args.precision,
        ledger_path=args.ledger,
        workers=args.workers,
        progress=progress,
    )
    print(report(ledger), end="")
    print(f"total {time.monotonic() - started:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
