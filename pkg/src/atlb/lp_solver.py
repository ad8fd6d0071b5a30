"""Linear-program solver tuned for the proof-search workload.

Problems arrive as exact rational rows over nonnegative variables:

    minimize  sum_j obj_j x_j   subject to   sum_j a_ij x_j  {<=, >=, =}  b_i,
    x >= 0.

The instances are small (a few hundred rows and columns) but are solved
tens of thousands of times during a search, and the winning ones sit on
the feasibility boundary where their optima have zero slack, so the
solver offers two arithmetic paths over the same presolve and two-phase
dense simplex:

* a float path (numpy) with a largest-coefficient pivot rule that falls
  back to Bland's rule when it stalls, used for throughput during
  bisection, and
* an exact path over `fractions.Fraction` with Bland's rule throughout,
  used to confirm answers and extract certificates whose feasibility is
  checkable without tolerances.

Float solves that hit degeneracy or tiny pivots are retried exactly and
transparently. A presolve pass eliminates the many fixed and pairwise-
equal variables these programs contain, which is what keeps the exact
path affordable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import numpy as np

Rel = Literal["<=", ">=", "="]
# one constraint: sparse coefficients, relation, right-hand side
Row = tuple[dict[int, Fraction], str, Fraction]

_RELS = ("<=", ">=", "=")


class SolverError(Exception):
    """Base class for solver failures that are not statuses."""


class SimplexIterationLimit(SolverError):
    """Pivot budget exhausted; the caller may retry with a larger one."""


class ExactArithmeticOverflow(SolverError):
    """Exact tableau entries outgrew the configured bit budget."""


class _FloatInstability(SolverError):
    """Internal: float pivoting became untrustworthy; retry exactly."""


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for one solve call.

    exact_mode forces Fraction arithmetic end to end. Otherwise floats
    run first and the exact path is an automatic fallback. Tolerances
    apply to the float path only.
    """

    exact_mode: bool = False
    feasibility_tolerance: float = 1e-9
    pivot_tolerance: float = 1e-9
    max_iterations: int = 20000
    max_bits: int = 100000
    stall_iterations: int = 60


@dataclass
class SolveStats:
    exact: bool = False
    float_retried_exactly: bool = False
    phase1_iterations: int = 0
    phase2_iterations: int = 0
    presolve_fixed: int = 0
    presolve_aliased: int = 0
    presolve_dropped_rows: int = 0
    reduced_vars: int = 0
    reduced_rows: int = 0

    @property
    def iterations(self) -> int:
        return self.phase1_iterations + self.phase2_iterations


@dataclass(frozen=True)
class LpSolution:
    """Outcome of a solve. `values` has one entry per original variable;
    entries are Fractions on the exact path and floats otherwise. For
    infeasible or unbounded problems `values` is empty."""

    status: Literal["optimal", "infeasible", "unbounded"]
    values: tuple = ()
    objective: Fraction | float | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def _as_fraction(value, what: str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{what} is not numeric: {value!r}") from exc


def _normalize_rows(rows: Iterable[Row]) -> list[Row]:
    out: list[Row] = []
    for coeffs, rel, rhs in rows:
        if rel not in _RELS:
            raise ValueError(f"unknown relation {rel!r}")
        clean = {
            int(j): _as_fraction(v, "coefficient")
            for j, v in coeffs.items()
            if Fraction(v) != 0
        }
        out.append((clean, rel, _as_fraction(rhs, "rhs")))
    return out


# ---------------------------------------------------------------------------
# Presolve


class _Infeasible(Exception):
    pass


class _ScaledUnionFind:
    """Union-find over variables with x_i = weight_i * x_root relations."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.weight = [Fraction(1)] * n
        self.fixed: dict[int, Fraction] = {}

    def find(self, i: int) -> tuple[int, Fraction]:
        if self.parent[i] == i:
            return i, self.weight[i]
        root, scale = self.find(self.parent[i])
        self.parent[i] = root
        self.weight[i] = self.weight[i] * scale
        return root, self.weight[i]

    def value_of(self, i: int) -> Fraction | None:
        root, scale = self.find(i)
        if root in self.fixed:
            return scale * self.fixed[root]
        return None

    def fix(self, i: int, value: Fraction) -> bool:
        root, scale = self.find(i)
        target = value / scale
        if target < 0:
            raise _Infeasible(f"variable {i} forced to {target}")
        if root in self.fixed:
            if self.fixed[root] != target:
                raise _Infeasible(
                    f"variable {i} forced to both {self.fixed[root]} and {target}"
                )
            return False
        self.fixed[root] = target
        return True

    def alias(self, i: int, j: int, ratio: Fraction) -> bool:
        """Record x_i = ratio * x_j (ratio > 0). Returns True if new."""
        ri, si = self.find(i)
        rj, sj = self.find(j)
        if ri == rj:
            # si * root = ratio * sj * root; unequal scales force root 0
            if si != ratio * sj:
                return self.fix(i, Fraction(0))
            return False
        vi, vj = self.value_of(i), self.value_of(j)
        if vi is not None:
            return self.fix(j, vi / ratio)
        if vj is not None:
            return self.fix(i, ratio * vj)
        # attach ri under rj: x_i = si * x_ri => x_ri = (ratio * sj / si) x_rj
        self.parent[ri] = rj
        self.weight[ri] = ratio * sj / si
        return True


@dataclass
class PresolveResult:
    """Reduced problem plus the recipe to reconstruct full solutions."""

    n_vars: int
    reduced_rows: list[Row]
    reduced_objective: dict[int, Fraction]
    free_roots: list[int]
    uf: _ScaledUnionFind
    infeasible_reason: str | None
    stats_fixed: int
    stats_aliased: int
    stats_dropped: int

    @property
    def n_reduced(self) -> int:
        return len(self.free_roots)

    def expand(self, reduced_values: Sequence) -> tuple:
        """Map a reduced solution vector back to all original variables."""
        column = {root: k for k, root in enumerate(self.free_roots)}
        out = []
        for i in range(self.n_vars):
            root, scale = self.uf.find(i)
            if root in self.uf.fixed:
                base = self.uf.fixed[root]
            else:
                base = reduced_values[column[root]]
            out.append(base * float(scale) if isinstance(base, float) else base * scale)
        return tuple(out)


def presolve(n_vars: int, rows: Iterable[Row], objective: Sequence) -> PresolveResult:
    """Shrink the problem with safe reductions that exploit x >= 0.

    Applied to a fixpoint: single-variable equalities fix variables,
    two-variable zero equalities with opposite signs become scaled
    aliases, all-same-sign zero equalities fix every participant to
    zero, and rows made trivial by substitution are dropped (or, when
    violated, the whole problem is reported infeasible).
    """
    uf = _ScaledUnionFind(n_vars)
    work = _normalize_rows(rows)
    fixed_count = aliased_count = dropped = 0
    reason: str | None = None

    try:
        changed = True
        while changed:
            changed = False
            kept: list[Row] = []
            for coeffs, rel, rhs in work:
                # substitute aliases and fixed values
                folded: dict[int, Fraction] = {}
                shift = Fraction(0)
                for j, v in coeffs.items():
                    root, scale = uf.find(j)
                    if root in uf.fixed:
                        shift += v * scale * uf.fixed[root]
                    else:
                        folded[root] = folded.get(root, Fraction(0)) + v * scale
                folded = {j: v for j, v in folded.items() if v != 0}
                rhs2 = rhs - shift

                if not folded:
                    ok = (
                        rhs2 == 0
                        if rel == "="
                        else (rhs2 >= 0 if rel == "<=" else rhs2 <= 0)
                    )
                    if not ok:
                        raise _Infeasible(f"constant row violates 0 {rel} {rhs2}")
                    dropped += 1
                    changed = True
                    continue

                values = list(folded.values())
                all_pos = all(v > 0 for v in values)
                all_neg = all(v < 0 for v in values)
                if all_neg:
                    # flip so the sign analysis below sees positives
                    folded = {j: -v for j, v in folded.items()}
                    rhs2 = -rhs2
                    rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
                    all_pos = True

                if len(folded) == 1:
                    (j, a), = folded.items()
                    bound = rhs2 / a
                    if rel == "=":
                        if uf.fix(j, bound):
                            fixed_count += 1
                        changed = True
                        continue
                    # a > 0 after the flip above
                    if rel == ">=":
                        if bound <= 0:
                            dropped += 1
                            changed = True
                            continue
                    else:
                        if bound < 0:
                            raise _Infeasible(
                                f"variable {j} needs x <= {bound} but x >= 0"
                            )
                        if bound == 0:
                            if uf.fix(j, Fraction(0)):
                                fixed_count += 1
                            changed = True
                            continue
                    kept.append((folded, rel, rhs2))
                    continue

                if all_pos:
                    if rel == ">=" and rhs2 <= 0:
                        dropped += 1
                        changed = True
                        continue
                    if rel in ("<=", "=") and rhs2 < 0:
                        raise _Infeasible(
                            f"nonnegative combination forced {rel} {rhs2}"
                        )
                    if rel == "=" and rhs2 == 0:
                        for j in folded:
                            if uf.fix(j, Fraction(0)):
                                fixed_count += 1
                        changed = True
                        continue
                    if rel == "<=" and rhs2 == 0:
                        for j in folded:
                            if uf.fix(j, Fraction(0)):
                                fixed_count += 1
                        changed = True
                        continue

                if rel == "=" and rhs2 == 0 and len(folded) == 2:
                    (j, a), (k, b) = folded.items()
                    if (a > 0) != (b > 0):
                        if uf.alias(j, k, -b / a):
                            aliased_count += 1
                        changed = True
                        continue

                kept.append((folded, rel, rhs2))
            work = kept
    except _Infeasible as exc:
        reason = str(exc)
        work = []

    # fold the objective onto free roots
    reduced_obj: dict[int, Fraction] = {}
    if reason is None:
        for j, v in enumerate(objective):
            v = _as_fraction(v, "objective")
            if v == 0:
                continue
            root, scale = uf.find(j)
            if root not in uf.fixed:
                reduced_obj[root] = reduced_obj.get(root, Fraction(0)) + v * scale

    free = sorted(
        {uf.find(j)[0] for j in range(n_vars)} - set(uf.fixed)
    ) if reason is None else []
    column = {root: k for k, root in enumerate(free)}
    reduced_rows = [
        ({column[j]: v for j, v in coeffs.items()}, rel, rhs)
        for coeffs, rel, rhs in work
    ]
    reduced_obj = {column[j]: v for j, v in reduced_obj.items()}
    return PresolveResult(
        n_vars=n_vars,
        reduced_rows=reduced_rows,
        reduced_objective=reduced_obj,
        free_roots=free,
        uf=uf,
        infeasible_reason=reason,
        stats_fixed=fixed_count,
        stats_aliased=aliased_count,
        stats_dropped=dropped,
    )


# ---------------------------------------------------------------------------
# Two-phase simplex, float path


def _build_arrays(
    n: int, rows: Sequence[Row]
) -> tuple[list[list[Fraction]], list[int], int, int]:
    """Standard-form tableau data: returns (matrix rows with rhs last,
    initial basis, number of structural+slack columns, artificial count).

    Column order: structural 0..n-1, then one slack/surplus per
    inequality, then artificials, then the rhs.
    """
    n_slack = sum(1 for _, rel, _ in rows if rel in ("<=", ">="))
    slack_at = n
    art_at = n + n_slack
    n_art = 0
    # first pass to place artificials: <= with rhs >= 0 needs none
    prepared = []
    for coeffs, rel, rhs in rows:
        flip = rhs < 0
        if flip:
            coeffs = {j: -v for j, v in coeffs.items()}
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        prepared.append((coeffs, rel, rhs))
        if rel in (">=", "="):
            n_art += 1

    width = n + n_slack + n_art + 1
    matrix: list[list[Fraction]] = []
    basis: list[int] = []
    si = slack_at
    ai = art_at
    zero = Fraction(0)
    for coeffs, rel, rhs in prepared:
        row = [zero] * width
        for j, v in coeffs.items():
            row[j] = v
        row[-1] = rhs
        if rel == "<=":
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        elif rel == ">=":
            row[si] = Fraction(-1)
            si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            ai += 1
        else:
            row[ai] = Fraction(1)
            basis.append(ai)
            ai += 1
        matrix.append(row)
    return matrix, basis, art_at, n_art


def _float_phase(
    T: np.ndarray,
    basis: list[int],
    cost: np.ndarray,
    allowed: int,
    cfg: SolverConfig,
    iters_used: int,
) -> tuple[int, bool]:
    """Run one simplex phase in place. `cost` is the reduced-cost row with
    the (negated) objective value in its last slot; `allowed` bounds the
    entering column index. Returns (iterations, hit_unbounded)."""
    m = T.shape[0]
    tol = cfg.feasibility_tolerance
    bland = False
    stall = 0
    best_obj = cost[-1]
    it = 0
    while True:
        if iters_used + it >= cfg.max_iterations:
            raise SimplexIterationLimit(f"over {cfg.max_iterations} pivots")
        body = cost[:allowed]
        if bland:
            negative = np.flatnonzero(body < -tol)
            if negative.size == 0:
                return it, False
            enter = int(negative[0])
        else:
            enter = int(np.argmin(body))
            if body[enter] >= -tol:
                return it, False
        col = T[:, enter]
        positive = col > cfg.pivot_tolerance
        if not positive.any():
            return it, True
        ratios = np.full(m, np.inf)
        ratios[positive] = T[positive, -1] / col[positive]
        leave = int(np.argmin(ratios))
        # deterministic anti-cycling tie-break on the basis index
        best = ratios[leave]
        ties = np.flatnonzero(ratios <= best * (1 + 1e-12) + 1e-15)
        if ties.size > 1:
            leave = int(min(ties, key=lambda r: basis[r]))
        pivot = T[leave, enter]
        if abs(pivot) < cfg.pivot_tolerance:
            raise _FloatInstability(f"pivot {pivot} below tolerance")
        T[leave] /= pivot
        colvals = T[:, enter].copy()
        colvals[leave] = 0.0
        T -= np.outer(colvals, T[leave])
        cost_entry = cost[enter]
        if cost_entry != 0.0:
            cost -= cost_entry * T[leave]
        basis[leave] = enter
        it += 1
        # the last cost entry holds the negated objective, which climbs
        # while the minimization makes progress
        if cost[-1] > best_obj + tol:
            best_obj = cost[-1]
            stall = 0
        else:
            stall += 1
            if stall >= cfg.stall_iterations and not bland:
                bland = True
                stall = 0


def _solve_float(
    n: int, rows: Sequence[Row], objective: dict[int, Fraction], cfg: SolverConfig
) -> tuple[str, np.ndarray | None, int, int]:
    matrix, basis, art_at, n_art = _build_arrays(n, rows)
    if not matrix:
        return "optimal", np.zeros(n), 0, 0
    T = np.array([[float(v) for v in row] for row in matrix])
    tol = cfg.feasibility_tolerance

    # phase 1: drive the artificial variables to zero
    p1 = 0
    if n_art:
        cost = np.zeros(T.shape[1])
        cost[art_at:-1] = 1.0
        for i, b in enumerate(basis):
            if b >= art_at:
                cost -= T[i]
        p1, unbounded = _float_phase(T, basis, cost, art_at, cfg, 0)
        if unbounded:
            raise _FloatInstability("phase 1 claims unbounded")
        if -cost[-1] > 1e-7:
            return "infeasible", None, p1, 0
        for i, b in enumerate(basis):
            if b >= art_at:
                # pivot the leftover zero-level artificial out if possible
                row = T[i, :art_at]
                cands = np.flatnonzero(np.abs(row) > cfg.pivot_tolerance)
                if cands.size:
                    enter = int(cands[0])
                    pivot = T[i, enter]
                    T[i] /= pivot
                    colvals = T[:, enter].copy()
                    colvals[i] = 0.0
                    T -= np.outer(colvals, T[i])
                    basis[i] = enter

    keep_rows = [i for i, b in enumerate(basis) if b < art_at]
    T = T[keep_rows][:, list(range(art_at)) + [-1]]
    basis = [basis[i] for i in keep_rows]

    cost = np.zeros(T.shape[1])
    for j, v in objective.items():
        cost[j] = float(v)
    for i, b in enumerate(basis):
        if cost[b] != 0.0:
            cost -= cost[b] * T[i]
    p2, unbounded = _float_phase(T, basis, cost, art_at, cfg, p1)
    if unbounded:
        return "unbounded", None, p1, p2
    values = np.zeros(art_at)
    for i, b in enumerate(basis):
        values[b] = T[i, -1]
    if (values < -1e-7).any():
        raise _FloatInstability("negative basic value after optimization")
    return "optimal", np.clip(values[:n], 0.0, None), p1, p2


# ---------------------------------------------------------------------------
# Two-phase simplex, exact path


def _exact_phase(
    T: list[list[Fraction]],
    basis: list[int],
    cost: list[Fraction],
    allowed: int,
    cfg: SolverConfig,
    iters_used: int,
) -> tuple[int, bool]:
    """Bland's rule throughout: finite termination, no tolerances."""
    zero = Fraction(0)
    it = 0
    while True:
        if iters_used + it >= cfg.max_iterations:
            raise SimplexIterationLimit(f"over {cfg.max_iterations} pivots")
        enter = -1
        for j in range(allowed):
            if cost[j] < zero:
                enter = j
                break
        if enter < 0:
            return it, False
        leave = -1
        best: Fraction | None = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > zero:
                ratio = row[-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return it, True
        pivot_row = T[leave]
        pivot = pivot_row[enter]
        T[leave] = pivot_row = [v / pivot for v in pivot_row]
        for i, row in enumerate(T):
            if i != leave and row[enter] != zero:
                f = row[enter]
                T[i] = [v - f * p for v, p in zip(row, pivot_row)]
        f = cost[enter]
        if f != zero:
            cost[:] = [v - f * p for v, p in zip(cost, pivot_row)]
        basis[leave] = enter
        it += 1
        if cfg.max_bits:
            worst = max(
                max(
                    v.numerator.bit_length() + v.denominator.bit_length()
                    for v in T[leave]
                ),
                1,
            )
            if worst > cfg.max_bits:
                raise ExactArithmeticOverflow(
                    f"tableau entries reached {worst} bits (limit {cfg.max_bits})"
                )


def _solve_exact(
    n: int, rows: Sequence[Row], objective: dict[int, Fraction], cfg: SolverConfig
) -> tuple[str, list[Fraction] | None, int, int]:
    matrix, basis, art_at, n_art = _build_arrays(n, rows)
    zero = Fraction(0)
    if not matrix:
        return "optimal", [zero] * n, 0, 0
    T = [list(row) for row in matrix]
    width = len(T[0])

    p1 = 0
    if n_art:
        cost = [zero] * width
        for j in range(art_at, width - 1):
            cost[j] = Fraction(1)
        for i, b in enumerate(basis):
            if b >= art_at:
                cost = [v - t for v, t in zip(cost, T[i])]
        p1, unbounded = _exact_phase(T, basis, cost, art_at, cfg, 0)
        if unbounded:
            raise SolverError("phase 1 cannot be unbounded")
        if -cost[-1] != 0:
            return "infeasible", None, p1, 0
        for i, b in enumerate(basis):
            if b >= art_at:
                enter = next(
                    (j for j in range(art_at) if T[i][j] != zero), None
                )
                if enter is not None:
                    pivot_row = T[i]
                    pivot = pivot_row[enter]
                    T[i] = pivot_row = [v / pivot for v in pivot_row]
                    for k, row in enumerate(T):
                        if k != i and row[enter] != zero:
                            f = row[enter]
                            T[k] = [v - f * p for v, p in zip(row, pivot_row)]
                    basis[i] = enter

    keep = [i for i, b in enumerate(basis) if b < art_at]
    T = [T[i][:art_at] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    cost = [zero] * (art_at + 1)
    for j, v in objective.items():
        cost[j] = v
    for i, b in enumerate(basis):
        if cost[b] != zero:
            f = cost[b]
            cost = [v - f * p for v, p in zip(cost, T[i])]
    p2, unbounded = _exact_phase(T, basis, cost, art_at, cfg, p1)
    if unbounded:
        return "unbounded", None, p1, p2
    values = [zero] * art_at
    for i, b in enumerate(basis):
        values[b] = T[i][-1]
    if any(v < zero for v in values):
        raise SolverError("negative basic value in exact solve")
    return "optimal", values[:n], p1, p2


# ---------------------------------------------------------------------------
# Public entry points


def solve(
    n_vars: int,
    rows: Iterable[Row],
    objective: Sequence = (),
    config: SolverConfig | None = None,
) -> LpSolution:
    """Minimize `objective` over the rows with all variables >= 0.

    Runs presolve, then float simplex, escalating to exact arithmetic
    when floats misbehave; `config.exact_mode` skips floats entirely.
    The reported objective value is recomputed from the full solution
    vector, exactly on the exact path.
    """
    cfg = config or SolverConfig()
    obj = list(objective)
    if not obj:
        obj = [0] * n_vars
    if len(obj) != n_vars:
        raise ValueError(f"objective length {len(obj)} != n_vars {n_vars}")
    pre = presolve(n_vars, rows, obj)
    stats = SolveStats(
        presolve_fixed=pre.stats_fixed,
        presolve_aliased=pre.stats_aliased,
        presolve_dropped_rows=pre.stats_dropped,
        reduced_vars=pre.n_reduced,
        reduced_rows=len(pre.reduced_rows),
    )
    if pre.infeasible_reason is not None:
        return LpSolution("infeasible", stats=stats)

    n = pre.n_reduced
    status: str
    reduced: Sequence | None

    if cfg.exact_mode:
        stats.exact = True
        status, reduced, stats.phase1_iterations, stats.phase2_iterations = (
            _solve_exact(n, pre.reduced_rows, pre.reduced_objective, cfg)
        )
    else:
        try:
            status, fl, stats.phase1_iterations, stats.phase2_iterations = (
                _solve_float(n, pre.reduced_rows, pre.reduced_objective, cfg)
            )
            reduced = None if fl is None else [float(v) for v in fl]
        except (_FloatInstability, SimplexIterationLimit):
            stats.exact = True
            stats.float_retried_exactly = True
            status, reduced, stats.phase1_iterations, stats.phase2_iterations = (
                _solve_exact(n, pre.reduced_rows, pre.reduced_objective, cfg)
            )

    if status != "optimal" or reduced is None:
        return LpSolution(status, stats=stats)  # type: ignore[arg-type]
    values = pre.expand(reduced)
    if stats.exact:
        total = sum(
            (_as_fraction(c, "objective") * v for c, v in zip(obj, values)),
            Fraction(0),
        )
    else:
        values = tuple(float(v) for v in values)
        total = float(sum(float(c) * v for c, v in zip(obj, values)))
    return LpSolution("optimal", values, total, stats)


def check_point(
    n_vars: int,
    rows: Iterable[Row],
    point: Sequence,
    tolerance: Fraction | float = 0,
) -> list[str]:
    """Independently check a candidate point against every row.

    Float entries are rationalized first, so a zero tolerance performs
    an exact feasibility check. Returns human-readable violations; an
    empty list means the point satisfies everything including x >= 0.
    """
    tol = Fraction(tolerance)
    xs = []
    for v in point:
        if isinstance(v, float):
            xs.append(Fraction(v).limit_denominator(10**12))
        else:
            xs.append(Fraction(v))
    if len(xs) != n_vars:
        return [f"point has {len(xs)} entries, expected {n_vars}"]
    problems = [
        f"x[{j}] = {x} is negative" for j, x in enumerate(xs) if x < -tol
    ]
    for idx, (coeffs, rel, rhs) in enumerate(_normalize_rows(rows)):
        lhs = sum((v * xs[j] for j, v in coeffs.items()), Fraction(0))
        ok = (
            lhs <= rhs + tol
            if rel == "<="
            else lhs >= rhs - tol if rel == ">=" else abs(lhs - rhs) <= tol
        )
        if not ok:
            problems.append(f"row {idx}: {lhs} {rel} {rhs} fails")
    return problems
