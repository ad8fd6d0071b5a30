"""Compile (rule sequence, c) pairs into linear programs and back.

A proof annotation fixes which rewrite rule fires on each line, so the
only unknowns in a derivation are the exponents. Every rule is built
from additions and maxima of earlier exponents, hence each max{u, v}
target t relaxes into t >= u, t >= v; because every rule is monotone
nondecreasing in every exponent, minimizing the sum of all variables
makes the relaxation exact for feasibility. The resulting LP is
feasible at a given c exactly when some choice of speedup parameters
and initial exponent yields a winning derivation at that c (up to the
open-interval endpoints, restored during extraction).

Variable layout per proof line i: slot j = 1 holds the DTS pair
(a_{i,1} = core exponent, b_{i,1} = core input bound) and slots j >= 2
hold quantifier blocks innermost-first, each as (speed, own input
bound). All lines get the same number of slots m = max blocks + 1;
slots a line does not use are pinned to zero so the column layout is
uniform. One extra variable x_t carries each speedup's parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .annotation import Annotation
from .derivation import (
    DerivationError,
    Proof,
    Quantifier,
    Rat,
    RuleTag,
    annotation_rules,
    as_rational,
    describe_rules_problem,
    format_rational,
    line_block_counts,
    plain_dts,
    apply_slowdown,
    apply_speedup0,
    apply_speedup1,
    apply_speedup2,
    replay_rules,
    verify_proof,
)
from .lp_solver import Row

EPSILON = Fraction(1, 10**9)


class ExtractionError(RuntimeError):
    """A feasible LP point could not be repaired into a valid proof."""


@dataclass(frozen=True)
class Constraint:
    """One row: sparse coefficients over columns, a relation, a bound,
    and a label naming the rule fact it encodes."""

    coeffs: tuple[tuple[int, Fraction], ...]
    rel: str
    rhs: Fraction
    label: str

    def as_row(self) -> Row:
        return (dict(self.coeffs), self.rel, self.rhs)


@dataclass(frozen=True)
class VarIndex:
    """Column layout for a rule sequence: lines x slots plus one
    parameter column per speedup."""

    lines: int
    slots: int
    speedup_lines: tuple[int, ...]

    @property
    def n_vars(self) -> int:
        return 2 * self.lines * self.slots + len(self.speedup_lines)

    def a(self, line: int, slot: int) -> int:
        return self._pair(line, slot)

    def b(self, line: int, slot: int) -> int:
        return self._pair(line, slot) + 1

    def _pair(self, line: int, slot: int) -> int:
        if not (0 <= line < self.lines and 1 <= slot <= self.slots):
            raise IndexError(f"no slot {slot} on line {line}")
        return 2 * (line * self.slots + (slot - 1))

    def x(self, line: int) -> int:
        """Parameter column for the speedup applied to produce `line`."""
        try:
            t = self.speedup_lines.index(line)
        except ValueError:
            raise IndexError(f"line {line} is not a speedup line") from None
        return 2 * self.lines * self.slots + t

    def name(self, column: int) -> str:
        pairs = 2 * self.lines * self.slots
        if column >= pairs:
            return f"x_{column - pairs + 1}"
        line, rest = divmod(column, 2 * self.slots)
        slot, kind = divmod(rest, 2)
        return f"{'ab'[kind]}_{line}_{slot + 1}"


@dataclass(frozen=True)
class LinearProgram:
    """An immutable compiled instance, remembering where it came from."""

    rules: tuple[RuleTag, ...]
    c: Fraction
    index: VarIndex
    constraints: tuple[Constraint, ...]
    annotation: Annotation | None
    loose_speedup_inputs: bool

    @property
    def n_vars(self) -> int:
        return self.index.n_vars

    @property
    def objective(self) -> tuple[int, ...]:
        return (1,) * self.n_vars

    def rows(self) -> list[Row]:
        return [con.as_row() for con in self.constraints]


class _Builder:
    def __init__(self, index: VarIndex) -> None:
        self.index = index
        self.out: list[Constraint] = []

    def add(self, coeffs: dict[int, Fraction], rel: str, rhs: Rat, label: str) -> None:
        self.out.append(
            Constraint(
                tuple(sorted(coeffs.items())), rel, Fraction(rhs), label
            )
        )

    def equal(self, col: int, value: Rat, label: str) -> None:
        self.add({col: Fraction(1)}, "=", value, label)

    def copy(self, dst: int, src: int, label: str) -> None:
        self.add({dst: Fraction(1), src: Fraction(-1)}, "=", 0, label)

    def at_least(self, col: int, others: dict[int, Fraction], label: str) -> None:
        """col >= sum of others (each with its multiplier)."""
        coeffs = {col: Fraction(1)}
        for other, mult in others.items():
            coeffs[other] = coeffs.get(other, Fraction(0)) - mult
        self.add(coeffs, ">=", 0, label)


def build_lp_from_rules(
    rules: Sequence[RuleTag],
    c: Rat,
    loose_speedup_inputs: bool = False,
    win_slack: Rat = 0,
) -> LinearProgram:
    """Compile a rule sequence at exponent c into a linear program.

    With `loose_speedup_inputs` the inserted speedup block's input bound
    is only floored at the parameter x (and the global bound of 1),
    dropping the floor at the previous core input. That looser variant
    exists for cross-checking against hand-built constraint systems;
    the default encodes exactly what the rewrite rules produce.

    A positive `win_slack` demands the initial exponent beat the final
    one by that margin instead of merely matching it. Feasibility
    questions should use the default 0; the slack variant pushes the
    optimum off the win boundary so that a rounded point still replays
    as a strict win (certificate extraction uses this).
    """
    problem = describe_rules_problem(rules)
    if problem is not None:
        raise DerivationError(problem)
    c = as_rational(c, "c")
    if c < 1:
        raise DerivationError(f"need c >= 1, got {format_rational(c)}")
    win_slack = as_rational(win_slack, "win_slack")
    if win_slack < 0:
        raise DerivationError(
            f"need win_slack >= 0, got {format_rational(win_slack)}"
        )
    rules = tuple(rules)
    counts = line_block_counts(rules)
    lines = len(counts)
    m = max(counts) + 1
    speedup_lines = tuple(
        i for i, tag in enumerate(rules, start=1) if tag.is_speedup
    )
    ix = VarIndex(lines, m, speedup_lines)
    bld = _Builder(ix)
    last = lines - 1

    bld.add({ix.a(0, 1): Fraction(1)}, ">=", 1, "initial exponent >= 1")
    bld.add({ix.a(last, 1): Fraction(1)}, ">=", 1, "final exponent >= 1")
    bld.add(
        {ix.a(0, 1): Fraction(1), ix.a(last, 1): Fraction(-1)},
        ">=",
        win_slack,
        "win: initial exponent >= final exponent"
        + (f" + {format_rational(win_slack)}" if win_slack else ""),
    )

    for i in range(lines):
        k = counts[i]
        for j in range(1, k + 2):
            bld.add({ix.b(i, j): Fraction(1)}, ">=", 1, f"b_{i}_{j} >= 1")
        bld.equal(ix.b(i, k + 1), 1, f"line {i}: outermost input is 1")
        for j in range(k + 2, m + 1):
            bld.equal(ix.a(i, j), 0, f"line {i}: slot {j} unused")
            bld.equal(ix.b(i, j), 0, f"line {i}: slot {j} unused")

    for i, tag in enumerate(rules, start=1):
        k = counts[i]
        if tag is RuleTag.SLOWDOWN:
            removed = {
                "core exponent": ix.a(i - 1, 1),
                "removed block speed": ix.a(i - 1, 2),
                "core input": ix.b(i - 1, 1),
                "removed block input": ix.b(i - 1, 2),
            }
            for what, col in removed.items():
                bld.at_least(
                    ix.a(i, 1), {col: c}, f"line {i} slowdown: new core >= c * {what}"
                )
            bld.copy(
                ix.b(i, 1), ix.b(i - 1, 2),
                f"line {i} slowdown: core input from removed block",
            )
            for j in range(2, k + 2):
                bld.copy(ix.a(i, j), ix.a(i - 1, j + 1), f"line {i}: slot {j} shifts")
                bld.copy(ix.b(i, j), ix.b(i - 1, j + 1), f"line {i}: slot {j} shifts")
            continue

        x = ix.x(i)
        bld.add(
            {ix.a(i - 1, 1): Fraction(1), ix.a(i, 1): Fraction(-1), x: Fraction(-1)},
            "=",
            0,
            f"line {i} speedup: core loses x",
        )
        bld.equal(ix.a(i, 2), 0, f"line {i} speedup: inserted block guesses log n")
        bld.at_least(ix.b(i, 2), {x: Fraction(1)}, f"line {i} speedup: b_{i}_2 >= x")
        if tag is RuleTag.SPEEDUP0:
            bld.equal(ix.b(i, 1), 1, f"line {i} speedup: fresh core input")
            bld.copy(ix.a(i, 3), x, f"line {i} speedup: outer block guesses n^x")
            # slot 3's input bound of 1 is the outermost pin above
            continue
        bld.copy(ix.b(i, 1), ix.b(i - 1, 1), f"line {i} speedup: core input kept")
        if not loose_speedup_inputs:
            bld.at_least(
                ix.b(i, 2),
                {ix.b(i - 1, 1): Fraction(1)},
                f"line {i} speedup: b_{i}_2 >= previous core input",
            )
        if tag is RuleTag.SPEEDUP1:
            bld.at_least(
                ix.a(i, 3),
                {ix.a(i - 1, 2): Fraction(1)},
                f"line {i} speedup: merged speed >= old innermost",
            )
            bld.at_least(ix.a(i, 3), {x: Fraction(1)}, f"line {i} speedup: merged speed >= x")
            bld.copy(
                ix.b(i, 3), ix.b(i - 1, 2), f"line {i} speedup: merged keeps its input"
            )
            shift = 1
        else:
            bld.copy(ix.a(i, 3), x, f"line {i} speedup: new block guesses n^x")
            bld.copy(
                ix.b(i, 3), ix.b(i - 1, 1), f"line {i} speedup: new block input"
            )
            shift = 2
        for j in range(4, k + 2):
            bld.copy(ix.a(i, j), ix.a(i - 1, j - shift), f"line {i}: slot {j} copies")
            bld.copy(ix.b(i, j), ix.b(i - 1, j - shift), f"line {i}: slot {j} copies")

    annotation = (
        None
        if RuleTag.SPEEDUP2 in rules
        else Annotation(tuple(1 if t.is_speedup else 0 for t in rules))
    )
    return LinearProgram(
        rules, c, ix, tuple(bld.out), annotation, loose_speedup_inputs
    )


def build_lp(
    annotation: Annotation | Sequence[int] | str,
    c: Rat,
    loose_speedup_inputs: bool = False,
    win_slack: Rat = 0,
) -> LinearProgram:
    """Compile an annotation at exponent c; see build_lp_from_rules."""
    if isinstance(annotation, str):
        annotation = Annotation.from_string(annotation)
    elif not isinstance(annotation, Annotation):
        annotation = Annotation(tuple(annotation))
    return build_lp_from_rules(
        annotation_rules(annotation), c, loose_speedup_inputs, win_slack
    )


def _rationalize(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


def extract_proof(
    lp: LinearProgram,
    solution,
    epsilon: Fraction = EPSILON,
    max_repair: int = 60,
    outer_kind: Quantifier = Quantifier.EXISTENTIAL,
) -> Proof:
    """Turn a feasible LP point into a verified Proof at the same c.

    The LP works on closed intervals and relaxed maxima, so its point
    need not replay verbatim. Speedup parameters are read as core
    differences a(i-1,1) - a(i,1) rather than from the x columns: the
    two agree on any exact LP point, but after float rounding the core
    values are the ones the telescoping replay must match, so using the
    differences cancels the rounding noise that an independently rounded
    x column reintroduces. Each parameter is then clamped into the open
    interval the exact replay actually allows (at least epsilon from
    either end, or the midpoint when the core is very short), and the
    initial exponent is adjusted until the replayed final exponent no
    longer overshoots it. The overshoot map is piecewise
    linear, nondecreasing, and convex in the initial exponent, so the
    adjustment uses secant jumps: extending the line through the last
    two replays to where it meets the identity. Each jump stays on the
    losing side until two samples share the linear piece containing a
    crossing, at which point the jump lands on it exactly, so a winning
    value is found after finitely many pieces whenever one exists. The
    result always passes `verify_proof`; ExtractionError reports the
    rare c values, at the very edge of feasibility, where repair fails.
    """
    values = getattr(solution, "values", solution)
    if not values:
        raise ExtractionError("solution has no values (infeasible or unbounded?)")
    vals = [_rationalize(v) for v in values]
    if len(vals) != lp.n_vars:
        raise ExtractionError(f"expected {lp.n_vars} values, got {len(vals)}")
    xs_raw: list[Fraction] = []
    for i in lp.index.speedup_lines:
        diff = vals[lp.index.a(i - 1, 1)] - vals[lp.index.a(i, 1)]
        xs_raw.append(diff if diff > 0 else vals[lp.index.x(i)])
    initial = max(vals[lp.index.a(0, 1)], Fraction(1))

    def replayed(start: Fraction) -> tuple[Fraction, list[Fraction]]:
        xs: list[Fraction] = []
        line = plain_dts(start)
        raw = iter(xs_raw)
        for tag in lp.rules:
            if tag is RuleTag.SLOWDOWN:
                line = apply_slowdown(line, lp.c)
                continue
            margin = min(epsilon, line.dts_speed / 2)
            x = min(max(next(raw), margin), line.dts_speed - margin)
            xs.append(x)
            if tag is RuleTag.SPEEDUP0:
                line = apply_speedup0(line, x, outer_kind)
            elif tag is RuleTag.SPEEDUP1:
                line = apply_speedup1(line, x)
            else:
                line = apply_speedup2(line, x)
        return line.dts_speed, xs

    prev: tuple[Fraction, Fraction] | None = None
    for _ in range(max_repair):
        try:
            final, xs = replayed(initial)
        except DerivationError:
            # a core hit exactly zero, leaving no room for its speedup
            # parameter; more initial budget restores the open interval
            prev = None
            initial *= 2
            continue
        if final <= initial:
            proof = replay_rules(lp.rules, lp.c, initial, xs, outer_kind)
            problems = verify_proof(proof)
            if problems:
                raise ExtractionError(
                    "repaired point fails verification: " + "; ".join(map(str, problems))
                )
            return proof
        step = final
        if prev is not None and initial != prev[0]:
            slope = (final - prev[1]) / (initial - prev[0])
            if slope != 1:
                jump = initial + (final - initial) / (1 - slope)
                # shallow pieces (slope < 1) cross the identity above,
                # steep pieces (slope > 1) cross below; jump either way
                if jump >= 1 and jump != initial:
                    step = jump
        prev = (initial, final)
        initial = max(step, Fraction(1))
    raise ExtractionError(
        f"no winning replay near the LP point at c = {format_rational(lp.c)}"
    )


def proof_point(lp: LinearProgram, proof: Proof) -> list[Fraction]:
    """Embed a proof's exponents as an LP point (the plug-in direction).

    Any proof that wins and follows lp.rules lands inside the feasible
    region, which is what makes LP feasibility complete for proof
    existence; tests check this with `lp_solver.check_point`.
    """
    if proof.rules != lp.rules:
        raise ValueError("proof was derived with a different rule sequence")
    vals = [Fraction(0)] * lp.n_vars
    for i, line in enumerate(proof.lines):
        k = line.block_count
        vals[lp.index.a(i, 1)] = line.dts_speed
        vals[lp.index.b(i, 1)] = line.dts_input
        for j in range(2, k + 2):
            block = line.blocks[k - j + 1]
            vals[lp.index.a(i, j)] = block.speed
            own = line.blocks[k - j].input if j <= k else Fraction(1)
            vals[lp.index.b(i, j)] = own
    for x, i in zip(proof.speedup_params, lp.index.speedup_lines):
        vals[lp.index.x(i)] = x
    return vals


def export_lp_text(lp: LinearProgram) -> str:
    """Render in the common LP text format for external solvers.

    Rationals are written as repr floats, which round-trips float64;
    exact coefficients live only in the LinearProgram object itself.
    """

    def fmt(q: Fraction) -> str:
        return repr(float(q))

    def term(coeff: Fraction, col: int, first: bool) -> str:
        sign = "- " if coeff < 0 else ("" if first else "+ ")
        mag = abs(coeff)
        head = "" if mag == 1 else f"{fmt(mag)} "
        return f"{sign}{head}{lp.index.name(col)}"

    lines = [
        f"\\ rules: {' '.join(t.value for t in lp.rules)}",
        f"\\ c = {format_rational(lp.c)} ~ {float(lp.c)!r}",
        "Minimize",
        " obj: " + " + ".join(lp.index.name(j) for j in range(lp.n_vars)),
        "Subject To",
    ]
    rel_map = {"<=": "<=", ">=": ">=", "=": "="}
    for idx, con in enumerate(lp.constraints):
        parts = [
            term(coeff, col, pos == 0)
            for pos, (col, coeff) in enumerate(con.coeffs)
        ]
        lines.append(
            f" c{idx + 1}: {' '.join(parts)} {rel_map[con.rel]} {fmt(con.rhs)}"
            f"  \\ {con.label}"
        )
    lines.append("Bounds")
    lines.extend(f" 0 <= {lp.index.name(j)}" for j in range(lp.n_vars))
    lines.append("End")
    return "\n".join(lines) + "\n"
