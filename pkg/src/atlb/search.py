"""Best-exponent search, exhaustive sweeps, and the persistent ledger.

For one annotation, `best_c` binary-searches the largest exponent c in
[1, 2] whose compiled linear program stays feasible. Both endpoints are
confirmed before narrowing (c = 1 is always provable; c = 2 never is),
and the returned bracket comes with a certificate: a fully replayed,
independently verified proof at the bracket's feasible endpoint, so no
downstream consumer has to trust the LP route.

`exhaustive` runs best_c over every valid annotation up to a length
bound, across a worker pool, persisting each result as one JSON line.
Records are written only by the parent process, contain nothing
nondeterministic (no timing), and are keyed by annotation, so runs can
be killed, resumed, partitioned, and merged with identical final
content; `SearchLedger.canonical_text` is the comparison form.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

from .annotation import Annotation, enumerate_annotations, family_fvm, family_w
from .derivation import Proof, format_rational, proof_dumps
from .lp_model import ExtractionError, build_lp, extract_proof
from .lp_solver import SolverConfig, solve

BRACKET_LOW = Fraction(1)
BRACKET_HIGH = Fraction(2)

Progress = Callable[[str, float, int, int], None]


class SearchError(RuntimeError):
    """Search preconditions failed (endpoint checks, broken ledger)."""


@dataclass
class SearchStats:
    """Deterministic effort counters; wall-clock time is deliberately
    excluded so ledger records are reproducible byte for byte."""

    lp_solves: int = 0
    pivots: int = 0
    exact_solves: int = 0

    def absorb(self, solution) -> None:
        self.lp_solves += 1
        self.pivots += solution.stats.iterations
        if solution.stats.exact:
            self.exact_solves += 1


@dataclass(frozen=True)
class SearchResult:
    """Outcome for one annotation: the bracket around the feasibility
    boundary and a verified proof at its feasible endpoint."""

    annotation: Annotation
    bracket: tuple[Fraction, Fraction]
    certificate: Proof
    stats: SearchStats

    @property
    def best_c(self) -> float:
        return float(self.bracket[0])

    def to_record(self) -> dict:
        return {
            "type": "result",
            "annotation": self.annotation.to_string(),
            "length": len(self.annotation),
            "best_c": self.best_c,
            "bracket_lo": format_rational(self.bracket[0]),
            "bracket_hi": format_rational(self.bracket[1]),
            "certificate_c": format_rational(self.certificate.c),
            "lp_solves": self.stats.lp_solves,
            "pivots": self.stats.pivots,
            "exact_solves": self.stats.exact_solves,
        }


def _coerce(annotation) -> Annotation:
    if isinstance(annotation, Annotation):
        return annotation
    if isinstance(annotation, str):
        return Annotation.from_string(annotation)
    return Annotation(tuple(annotation))


def _feasible(
    ann: Annotation, c: Fraction, cfg: SolverConfig, stats: SearchStats
):
    lp = build_lp(ann, c)
    sol = solve(lp.n_vars, lp.rows(), lp.objective, cfg)
    stats.absorb(sol)
    if sol.status == "unbounded":
        raise SearchError(f"LP for {ann} at c={float(c):.6f} claims unbounded")
    return (sol.is_optimal, lp, sol)


def _certificate(ann, lo, sol_lo, cfg, stats, precision) -> Proof:
    """Extract a verified proof at the feasible endpoint.

    The bisection's own solution sits exactly on the win boundary (the
    objective squeezes it there), so after float rounding it replays as
    a win only by luck. The reliable route re-solves with a small slack
    forced into the win row, which moves the optimum strictly inside the
    feasible region; rounding noise is then far too small to push the
    replay back over the boundary. If even that fails (lo can lie within
    the slack of the true threshold), escalate to exact arithmetic and
    finally retreat c a little below the boundary."""
    lp = build_lp(ann, lo)
    try:
        return extract_proof(lp, sol_lo)
    except ExtractionError:
        pass
    slack = Fraction(precision) / 16
    lp_s = build_lp(ann, lo, win_slack=slack)
    sol_s = solve(lp_s.n_vars, lp_s.rows(), lp_s.objective, cfg)
    stats.absorb(sol_s)
    if sol_s.is_optimal:
        try:
            return extract_proof(lp_s, sol_s)
        except ExtractionError:
            pass
    exact_cfg = SolverConfig(
        exact_mode=True, max_iterations=cfg.max_iterations, max_bits=cfg.max_bits
    )
    sol = solve(lp.n_vars, lp.rows(), lp.objective, exact_cfg)
    stats.absorb(sol)
    if sol.is_optimal:
        try:
            return extract_proof(lp, sol)
        except ExtractionError:
            pass
    step = Fraction(precision)
    for factor in (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2)):
        c_retry = max(BRACKET_LOW, lo - step * factor)
        lp_r = build_lp(ann, c_retry)
        sol_r = solve(lp_r.n_vars, lp_r.rows(), lp_r.objective, exact_cfg)
        stats.absorb(sol_r)
        if sol_r.is_optimal:
            try:
                return extract_proof(lp_r, sol_r)
            except ExtractionError:
                continue
    raise SearchError(f"no certificate extractable near c={float(lo):.8f} for {ann}")


def best_c(
    annotation,
    precision: float = 1e-6,
    config: SolverConfig | None = None,
) -> SearchResult:
    """Bracket the best provable exponent for one annotation.

    Bisects feasibility of the compiled LP over c in [1, 2] down to the
    requested bracket width. Feasibility at 1 and infeasibility at 2 are
    verified first; either failing is reported as SearchError since both
    would contradict basic properties of the proof system.
    """
    ann = _coerce(annotation)
    if not precision > 0:
        raise ValueError(f"precision must be positive, got {precision}")
    cfg = config or SolverConfig()
    width = Fraction(precision)
    stats = SearchStats()

    lo, hi = BRACKET_LOW, BRACKET_HIGH
    ok, _, sol_lo = _feasible(ann, lo, cfg, stats)
    if not ok:
        raise SearchError(f"annotation {ann} infeasible even at c = 1")
    ok_hi, _, _ = _feasible(ann, hi, cfg, stats)
    if ok_hi:
        raise SearchError(f"annotation {ann} feasible at c = 2")

    while hi - lo > width:
        mid = (lo + hi) / 2
        ok, _, sol = _feasible(ann, mid, cfg, stats)
        if ok:
            lo, sol_lo = mid, sol
        else:
            hi = mid

    cert = _certificate(ann, lo, sol_lo, cfg, stats, precision)
    return SearchResult(ann, (lo, hi), cert, stats)


# ---------------------------------------------------------------------------
# Ledger


class SearchLedger:
    """Append-only JSON-lines store of search results plus run metadata.

    The first line is a metadata record carrying the semantic search
    parameters and their hash; every other line is one annotation's
    result. Appends go through a single handle with a flush per record,
    so a killed run loses at most a partial trailing line, which
    `recover` trims before resuming.
    """

    def __init__(self, path: str | os.PathLike) -> None:
        self.path = Path(path)
        self.meta: dict | None = None
        self.records: dict[str, dict] = {}
        self._fh = None

    # -- reading

    def load(self) -> "SearchLedger":
        if not self.path.exists():
            return self
        for line in self.path.read_text().splitlines():
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn tail from a killed run
            self._take(data)
        return self

    def _take(self, data: dict) -> None:
        if data.get("type") == "meta":
            if self.meta is None:
                self.meta = data
        elif data.get("type") == "result":
            self.records[data["annotation"]] = data

    def recover(self) -> "SearchLedger":
        """Load, then rewrite the file without torn or duplicate lines."""
        self.load()
        if self.path.exists():
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            tmp.write_text(self._file_text())
            tmp.replace(self.path)
        return self

    def done(self) -> set[str]:
        return set(self.records)

    # -- writing

    def ensure_meta(self, meta: dict) -> None:
        meta = {"type": "meta", **meta, "config_hash": config_hash(meta)}
        if self.meta is not None:
            if {k: v for k, v in self.meta.items() if k != "config_hash"} != {
                k: v for k, v in meta.items() if k != "config_hash"
            }:
                raise SearchError(
                    f"ledger {self.path} was created with different parameters;"
                    " use a fresh path or matching flags"
                )
            return
        self.meta = meta
        self._write_line(meta)

    def append(self, record: dict) -> None:
        self.records[record["annotation"]] = record
        self._write_line(record)

    def _write_line(self, data: dict) -> None:
        if self._fh is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = self.path.open("a")
        self._fh.write(json.dumps(data, sort_keys=True) + "\n")
        self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "SearchLedger":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- certificates

    @property
    def cert_dir(self) -> Path:
        return self.path.parent / (self.path.stem + "_certs")

    def certificate_path(self, annotation: str) -> Path:
        return self.cert_dir / f"{annotation}.json"

    def write_certificate(self, annotation: str, text: str) -> Path:
        self.cert_dir.mkdir(parents=True, exist_ok=True)
        target = self.certificate_path(annotation)
        target.write_text(text)
        return target

    # -- comparison and merge

    def _file_text(self) -> str:
        lines = []
        if self.meta is not None:
            lines.append(json.dumps(self.meta, sort_keys=True))
        lines.extend(
            json.dumps(self.records[k], sort_keys=True)
            for k in sorted(self.records, key=lambda a: (len(a), a))
        )
        return "\n".join(lines) + "\n" if lines else ""

    def canonical_text(self) -> str:
        """Deterministic serialization: metadata first, then records
        sorted by (length, annotation). Two ledgers holding the same
        results compare equal regardless of write order or restarts."""
        return self._file_text()

    def merge_from(self, other: "SearchLedger") -> int:
        """Adopt records from another ledger (prior partial runs).

        Records for annotations already present must agree exactly;
        a contradiction aborts rather than silently picking one.
        """
        added = 0
        for ann, rec in other.records.items():
            mine = self.records.get(ann)
            if mine is None:
                self.append(rec)
                added += 1
            elif mine != rec:
                raise SearchError(
                    f"merge conflict for annotation {ann}: ledgers disagree"
                )
        return added


def config_hash(meta: dict) -> str:
    semantic = {k: v for k, v in meta.items() if k not in ("type", "config_hash")}
    blob = json.dumps(semantic, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Exhaustive search and sweeps


def all_annotations(max_length: int) -> Iterator[Annotation]:
    """Every valid annotation up to max_length, shortest first."""
    for length in range(3, max_length + 1, 2):
        yield from enumerate_annotations(length)


def _search_task(args: tuple[str, float, SolverConfig]) -> tuple[dict, str]:
    ann, precision, cfg = args
    result = best_c(ann, precision, cfg)
    return result.to_record(), proof_dumps(result.certificate)


def exhaustive(
    max_length: int,
    precision: float = 1e-6,
    ledger_path: str | os.PathLike = "atlb_ledger.jsonl",
    workers: int = 1,
    config: SolverConfig | None = None,
    progress: Progress | None = None,
    limit: int | None = None,
) -> SearchLedger:
    """Run best_c over every annotation up to max_length, resumably.

    Already-recorded annotations are skipped, so rerunning the same
    command continues where a previous (possibly killed) run stopped.
    `limit` caps how many new annotations this call processes, which
    tests use to simulate partial runs. The pool feeds results back to
    the parent in submission order; only the parent writes.
    """
    if max_length < 3:
        raise ValueError(f"max_length must be >= 3, got {max_length}")
    cfg = config or SolverConfig()
    ledger = SearchLedger(ledger_path).recover()
    ledger.ensure_meta(
        {
            "kind": "exhaustive",
            "max_length": max_length,
            "precision": precision,
            "exact_mode": cfg.exact_mode,
            "feasibility_tolerance": cfg.feasibility_tolerance,
        }
    )
    todo = [
        a.to_string() for a in all_annotations(max_length)
        if a.to_string() not in ledger.done()
    ]
    if limit is not None:
        todo = todo[:limit]
    total = len(todo) + len(ledger.records)
    finished = len(ledger.records)
    tasks = [(ann, precision, cfg) for ann in todo]

    def consume(stream) -> None:
        nonlocal finished
        for record, cert_text in stream:
            ledger.write_certificate(record["annotation"], cert_text)
            ledger.append(record)
            finished += 1
            if progress is not None:
                progress(record["annotation"], record["best_c"], finished, total)

    try:
        if workers <= 1 or len(tasks) <= 1:
            consume(map(_search_task, tasks))
        else:
            with multiprocessing.Pool(workers) as pool:
                consume(pool.imap(_search_task, tasks))
    finally:
        ledger.close()
    return ledger


def family_sweep(
    family: str,
    params: Sequence,
    precision: float = 1e-6,
    config: SolverConfig | None = None,
    progress: Progress | None = None,
) -> list[tuple[tuple, SearchResult]]:
    """best_c along one named annotation family.

    family "fvm" takes integer parameters k; family "w" takes (outer,
    inner) pairs. Returns (parameter, result) pairs in input order.
    """
    if family == "fvm":
        anns = [((int(k),), family_fvm(int(k))) for k in params]
    elif family == "w":
        anns = [(tuple(p), family_w(*p)) for p in params]
    else:
        raise ValueError(f"unknown family {family!r} (expected fvm or w)")
    out: list[tuple[tuple, SearchResult]] = []
    for i, (param, ann) in enumerate(anns, start=1):
        result = best_c(ann, precision, config)
        out.append((param, result))
        if progress is not None:
            progress(ann.to_string(), result.best_c, i, len(anns))
    return out


# ---------------------------------------------------------------------------
# Reporting


def _by_length(ledger: SearchLedger) -> dict[int, list[dict]]:
    groups: dict[int, list[dict]] = {}
    for rec in ledger.records.values():
        groups.setdefault(rec["length"], []).append(rec)
    for recs in groups.values():
        recs.sort(key=lambda r: r["annotation"])
    return dict(sorted(groups.items()))


def report(ledger: SearchLedger) -> str:
    """Aligned per-length summary: counts, maxima, and the frontier."""
    groups = _by_length(ledger)
    if not groups:
        return "ledger is empty\n"
    header = f"{'length':>6}  {'searched':>8}  {'max best_c':>10}  best annotation"
    lines = [header, "-" * len(header)]
    frontier: dict | None = None
    for length, recs in groups.items():
        top = max(recs, key=lambda r: (r["best_c"], r["annotation"]))
        lines.append(
            f"{length:>6}  {len(recs):>8}  {top['best_c']:>10.6f}  {top['annotation']}"
        )
        if frontier is None or top["best_c"] > frontier["best_c"]:
            frontier = top
    lines.append(
        f"frontier: {frontier['best_c']:.6f} by {frontier['annotation']}"
        f" (certificate {ledger.certificate_path(frontier['annotation']).name})"
    )
    return "\n".join(lines) + "\n"


def report_csv(ledger: SearchLedger) -> str:
    """All records as CSV, sorted by (length, annotation)."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["length", "annotation", "best_c", "bracket_lo", "bracket_hi", "lp_solves"]
    )
    for length, recs in _by_length(ledger).items():
        for rec in recs:
            writer.writerow(
                [
                    length,
                    rec["annotation"],
                    f"{rec['best_c']:.9f}",
                    rec["bracket_lo"],
                    rec["bracket_hi"],
                    rec["lp_solves"],
                ]
            )
    return buf.getvalue()
