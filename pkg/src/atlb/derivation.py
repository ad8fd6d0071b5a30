"""Exact rewrite engine for alternation-trading proof lines.

A proof line is a simple class: a stack of quantifier blocks wrapped
around a deterministic time-space core,

    (Q1 n^a1)^b2 (Q2 n^a2)^b3 ... (Qk n^ak)^bk+1 DTS[n^ak+1]

where each block guesses n^ai+o(1) bits, the superscript after a block
bounds the input passed to the next stage, and DTS[n^a] is deterministic
time n^(a+o(1)) in subpolynomial space. A speed of 0 encodes an O(log n)
quantifier. Proofs assume NTIME[n] is contained in DTS[n^c] and derive
DTS[n^a] inside DTS[n^a'] with a >= a', contradicting a hierarchy
theorem; the rewrite rules below are the only derivation steps.

All arithmetic is exact: exponents are `fractions.Fraction` values and
floats are rejected at the boundary. Operations are pure functions over
frozen dataclasses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .annotation import Annotation, InvalidAnnotation

Rat = Fraction | int | str


class DerivationError(ValueError):
    """Raised when a rewrite rule is applied outside its preconditions."""


def as_rational(value: Rat, what: str = "value") -> Fraction:
    """Coerce to Fraction, rejecting floats to keep the module exact."""
    if isinstance(value, float):
        raise DerivationError(
            f"{what} must be an exact rational (Fraction, int, or string), got float"
        )
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DerivationError(f"{what} is not a rational: {value!r}") from exc


def format_rational(q: Fraction) -> str:
    """Canonical p/q string used by the JSON proof format."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_exponent(q: Fraction) -> str:
    """Short decimal used in rendered derivations (9 places, then trimmed)."""
    if q.denominator == 1:
        return str(q.numerator)
    text = f"{float(q):.9f}".rstrip("0").rstrip(".")
    return text or "0"


class Quantifier(Enum):
    EXISTENTIAL = "E"
    UNIVERSAL = "A"

    @property
    def opposite(self) -> "Quantifier":
        if self is Quantifier.EXISTENTIAL:
            return Quantifier.UNIVERSAL
        return Quantifier.EXISTENTIAL

    @property
    def symbol(self) -> str:
        return "∃" if self is Quantifier.EXISTENTIAL else "∀"


@dataclass(frozen=True)
class QuantifierBlock:
    """One quantifier stage: its polarity, speed exponent, and the
    input-constraint exponent written after it (what it may pass inward)."""

    kind: Quantifier
    speed: Fraction
    input: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "speed", as_rational(self.speed, "block speed"))
        object.__setattr__(self, "input", as_rational(self.input, "block input"))
        if self.speed < 0:
            raise DerivationError(f"block speed must be >= 0, got {self.speed}")
        if self.input < 1:
            raise DerivationError(f"block input must be >= 1, got {self.input}")


@dataclass(frozen=True)
class SimpleClass:
    """One proof line: quantifier blocks (outermost first) around a DTS core.

    The input constraint feeding the core is the innermost block's input
    superscript, or 1 for a plain DTS line, so it is exposed as a derived
    property rather than stored twice.
    """

    blocks: tuple[QuantifierBlock, ...]
    dts_speed: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(
            self, "dts_speed", as_rational(self.dts_speed, "dts speed")
        )
        if self.dts_speed < 0:
            raise DerivationError(f"dts speed must be >= 0, got {self.dts_speed}")

    @property
    def dts_input(self) -> Fraction:
        return self.blocks[-1].input if self.blocks else Fraction(1)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def is_plain(self) -> bool:
        return not self.blocks

    @property
    def is_alternating(self) -> bool:
        return all(
            a.kind is not b.kind for a, b in zip(self.blocks, self.blocks[1:])
        )

    def notation(self) -> str:
        parts = [
            f"({blk.kind.symbol} n^{_format_exponent(blk.speed)})"
            f"^{_format_exponent(blk.input)}"
            for blk in self.blocks
        ]
        parts.append(f"DTS[n^{_format_exponent(self.dts_speed)}]")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.notation()

    @classmethod
    def make(
        cls,
        blocks: Sequence[tuple] = (),
        dts_speed: Rat = 1,
    ) -> "SimpleClass":
        """Build a class from (kind, speed) or (kind, speed, input) tuples.

        An omitted input constraint defaults to max(next stage's speed, 1),
        the largest output the next stage could read anyway.
        """
        dts = as_rational(dts_speed, "dts speed")
        speeds = [as_rational(spec[1], "block speed") for spec in blocks]
        resolved: list[QuantifierBlock] = []
        for i, spec in enumerate(blocks):
            kind = spec[0]
            if not isinstance(kind, Quantifier):
                raise DerivationError(f"block kind must be a Quantifier, got {kind!r}")
            if len(spec) >= 3 and spec[2] is not None:
                inp = as_rational(spec[2], "block input")
            else:
                nxt = speeds[i + 1] if i + 1 < len(blocks) else dts
                inp = max(nxt, Fraction(1))
            resolved.append(QuantifierBlock(kind, speeds[i], inp))
        return cls(tuple(resolved), dts)


def plain_dts(speed: Rat) -> SimpleClass:
    return SimpleClass((), as_rational(speed, "dts speed"))


# ---------------------------------------------------------------------------
# Rewrite rules


def _check_x(cls: SimpleClass, x: Fraction) -> None:
    if not (0 < x < cls.dts_speed):
        raise DerivationError(
            f"speedup needs 0 < x < {format_rational(cls.dts_speed)},"
            f" got x = {format_rational(x)}"
        )


def apply_speedup0(cls: SimpleClass, x: Rat, outer_kind: Quantifier) -> SimpleClass:
    """Split a plain DTS line into a guessed prefix and a shorter core.

    DTS[n^a] is contained in (Q n^x)^max(x,1) (Q' n^0)^1 DTS[n^(a-x)] for
    either polarity Q: guess n^x intermediate configurations, then guess
    an O(log n) index of a bad gap. Only applies to plain lines.
    """
    x = as_rational(x, "x")
    if not cls.is_plain:
        raise DerivationError("speedup rule 0 applies only to a plain DTS line")
    _check_x(cls, x)
    blocks = (
        QuantifierBlock(outer_kind, x, max(x, Fraction(1))),
        QuantifierBlock(outer_kind.opposite, 0, Fraction(1)),
    )
    return SimpleClass(blocks, cls.dts_speed - x)


def apply_speedup1(cls: SimpleClass, x: Rat) -> SimpleClass:
    """Speed up the core, folding the new guess into the innermost block.

    (Qk n^ak)^bk+1 DTS[n^ak+1] becomes
    (Qk n^max(ak,x))^max(x,bk+1) (Qk+1 n^0)^bk+1 DTS[n^(ak+1-x)].
    """
    x = as_rational(x, "x")
    if cls.is_plain:
        raise DerivationError("speedup rule 1 needs at least one quantifier block")
    _check_x(cls, x)
    inner = cls.blocks[-1]
    b_in = cls.dts_input
    merged = QuantifierBlock(inner.kind, max(inner.speed, x), max(x, b_in))
    inserted = QuantifierBlock(inner.kind.opposite, 0, b_in)
    return SimpleClass(cls.blocks[:-1] + (merged, inserted), cls.dts_speed - x)


def apply_speedup2(cls: SimpleClass, x: Rat) -> SimpleClass:
    """Speed up the core with the guess kept as its own block.

    Appends (Qk+1 n^x)^max(x,bk+1) (Qk+2 n^0)^bk+1 before the shortened
    core, where Qk+1 repeats the innermost polarity. The output is the
    uncombined form of rule 1: combining its adjacent equal-polarity
    blocks yields exactly `apply_speedup1` of the same input, which is
    why searches skip this rule by default.
    """
    x = as_rational(x, "x")
    if cls.is_plain:
        raise DerivationError("speedup rule 2 needs at least one quantifier block")
    _check_x(cls, x)
    inner = cls.blocks[-1]
    b_in = cls.dts_input
    guessed = QuantifierBlock(inner.kind, x, max(x, b_in))
    inserted = QuantifierBlock(inner.kind.opposite, 0, b_in)
    return SimpleClass(cls.blocks + (guessed, inserted), cls.dts_speed - x)


def apply_slowdown(cls: SimpleClass, c: Rat) -> SimpleClass:
    """Remove the innermost block by simulating it deterministically.

    Under the assumption NTIME[n] in DTS[n^c], the innermost stage and
    the core collapse into DTS[n^(c*max(ak+1, ak, bk, bk+1))], where bk
    is the removed block's own input constraint (1 when it was the
    outermost block).
    """
    c = as_rational(c, "c")
    if cls.is_plain:
        raise DerivationError("slowdown needs at least one quantifier block")
    if c < 1:
        raise DerivationError(f"slowdown needs c >= 1, got {format_rational(c)}")
    removed = cls.blocks[-1]
    b_outer = cls.blocks[-2].input if len(cls.blocks) >= 2 else Fraction(1)
    new_speed = c * max(cls.dts_speed, removed.speed, b_outer, cls.dts_input)
    return SimpleClass(cls.blocks[:-1], new_speed)


def combine_adjacent(cls: SimpleClass) -> SimpleClass:
    """Merge adjacent equal-polarity blocks: speeds take the max, the
    inner block's input constraint survives. Idempotent."""
    merged: list[QuantifierBlock] = []
    for blk in cls.blocks:
        if merged and merged[-1].kind is blk.kind:
            merged[-1] = QuantifierBlock(
                blk.kind, max(merged[-1].speed, blk.speed), blk.input
            )
        else:
            merged.append(blk)
    return SimpleClass(tuple(merged), cls.dts_speed)


# ---------------------------------------------------------------------------
# Rule sequences and replay


class RuleTag(Enum):
    SPEEDUP0 = "speedup0"
    SPEEDUP1 = "speedup1"
    SPEEDUP2 = "speedup2"
    SLOWDOWN = "slowdown"

    @property
    def is_speedup(self) -> bool:
        return self is not RuleTag.SLOWDOWN

    @property
    def block_delta(self) -> int:
        if self is RuleTag.SLOWDOWN:
            return -1
        if self is RuleTag.SPEEDUP1:
            return 1
        return 2


@dataclass(frozen=True)
class RuleApplication:
    """One proof step: the rule plus its speedup parameter, if any."""

    rule: RuleTag
    x: Fraction | None = None

    def __post_init__(self) -> None:
        if self.rule.is_speedup:
            if self.x is None:
                raise DerivationError(f"{self.rule.value} needs a parameter x")
            object.__setattr__(self, "x", as_rational(self.x, "x"))
        elif self.x is not None:
            raise DerivationError("slowdown takes no parameter")


def describe_rules_problem(rules: Sequence[RuleTag]) -> str | None:
    """Like `annotation.describe_problem` but over explicit rule tags,
    so sequences using speedup rule 2 (block delta +2) can be checked."""
    if not rules:
        return "rule sequence is empty"
    if rules[0] is not RuleTag.SPEEDUP0:
        return "first rule must be speedup rule 0 (the first line is plain DTS)"
    count = 0
    for pos, tag in enumerate(rules, start=1):
        if pos > 1 and tag is RuleTag.SPEEDUP0:
            return f"speedup rule 0 at position {pos} (only the first line is plain)"
        count += tag.block_delta
        if count == 0 and pos < len(rules):
            return f"block count reaches 0 at position {pos} (interior DTS line)"
    if count != 0:
        return f"block count is {count} at the end (expected 0)"
    return None


def annotation_rules(annotation: Annotation) -> tuple[RuleTag, ...]:
    """Map bits to rules: the leading 1 is rule 0, later 1s rule 1."""
    return tuple(
        (RuleTag.SPEEDUP0 if pos == 0 else RuleTag.SPEEDUP1) if bit else RuleTag.SLOWDOWN
        for pos, bit in enumerate(annotation.bits)
    )


def rules_bits(rules: Sequence[RuleTag]) -> tuple[int, ...]:
    return tuple(1 if tag.is_speedup else 0 for tag in rules)


def line_block_counts(rules: Sequence[RuleTag]) -> tuple[int, ...]:
    """Blocks on each proof line, line 0 through the last."""
    counts = [0]
    for tag in rules:
        counts.append(counts[-1] + tag.block_delta)
    return tuple(counts)


@dataclass(frozen=True)
class Proof:
    """A replayed derivation: parameters plus every intermediate line.

    `annotation` is None exactly when the rule sequence uses speedup
    rule 2, whose steps have no bit-vector counterpart.
    """

    c: Fraction
    initial_speed: Fraction
    speedup_params: tuple[Fraction, ...]
    rules: tuple[RuleTag, ...]
    annotation: Annotation | None
    lines: tuple[SimpleClass, ...]

    @property
    def wins(self) -> bool:
        """Whether the contradiction closes: first exponent >= last."""
        return self.lines[0].dts_speed >= self.lines[-1].dts_speed

    @property
    def outer_kind(self) -> Quantifier:
        if len(self.lines) > 1 and self.lines[1].blocks:
            return self.lines[1].blocks[0].kind
        return Quantifier.EXISTENTIAL


def replay_rules(
    rules: Sequence[RuleTag],
    c: Rat,
    initial_speed: Rat,
    xs: Sequence[Rat],
    outer_kind: Quantifier = Quantifier.EXISTENTIAL,
) -> Proof:
    """Run a rule sequence from DTS[n^initial_speed], consuming one x per
    speedup, and record every line. Raises DerivationError when a rule's
    precondition fails (x outside its open interval, bad shape)."""
    problem = describe_rules_problem(rules)
    if problem is not None:
        raise DerivationError(problem)
    c = as_rational(c, "c")
    if c < 1:
        raise DerivationError(f"replay needs c >= 1, got {format_rational(c)}")
    initial = as_rational(initial_speed, "initial speed")
    if initial < 1:
        raise DerivationError(
            f"initial speed must be >= 1, got {format_rational(initial)}"
        )
    xs = tuple(as_rational(x, "x") for x in xs)
    speedups = sum(1 for tag in rules if tag.is_speedup)
    if len(xs) != speedups:
        raise DerivationError(
            f"rule sequence has {speedups} speedups but {len(xs)} parameters given"
        )

    lines = [plain_dts(initial)]
    it = iter(xs)
    for tag in rules:
        cur = lines[-1]
        if tag is RuleTag.SPEEDUP0:
            cur = apply_speedup0(cur, next(it), outer_kind)
        elif tag is RuleTag.SPEEDUP1:
            cur = apply_speedup1(cur, next(it))
        elif tag is RuleTag.SPEEDUP2:
            cur = apply_speedup2(cur, next(it))
        else:
            cur = apply_slowdown(cur, c)
        lines.append(cur)

    rules = tuple(rules)
    uses_rule2 = RuleTag.SPEEDUP2 in rules
    bits_annotation = None if uses_rule2 else Annotation(rules_bits(rules))
    return Proof(c, initial, xs, rules, bits_annotation, tuple(lines))


def replay(
    annotation: Annotation,
    c: Rat,
    initial_speed: Rat,
    xs: Sequence[Rat],
    outer_kind: Quantifier = Quantifier.EXISTENTIAL,
) -> Proof:
    """Replay an annotation: the leading 1-bit applies speedup rule 0,
    later 1-bits rule 1, 0-bits the slowdown."""
    if not isinstance(annotation, Annotation):
        annotation = Annotation(tuple(annotation))
    return replay_rules(annotation_rules(annotation), c, initial_speed, xs, outer_kind)


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class Violation:
    """One discrepancy found by the verifier; line is a proof-line index
    or None for structural problems."""

    line: int | None
    message: str

    def __str__(self) -> str:
        where = "proof" if self.line is None else f"line {self.line}"
        return f"{where}: {self.message}"


def verify_proof(proof: Proof) -> list[Violation]:
    """Independently re-derive every line and report all discrepancies.

    Each stored line is recomputed from the stored previous line using
    the claimed rule, so a single tampered line is flagged exactly where
    it sits. The win condition and the normal-form shape are checked as
    well. An empty list means the proof is valid. No linear programming
    is involved; this is the exact replay route.
    """
    violations: list[Violation] = []

    problem = describe_rules_problem(proof.rules)
    if problem is not None:
        return [Violation(None, f"invalid rule sequence: {problem}")]
    if len(proof.lines) != len(proof.rules) + 1:
        return [
            Violation(
                None,
                f"{len(proof.lines)} lines for {len(proof.rules)} rules"
                f" (expected {len(proof.rules) + 1})",
            )
        ]
    speedups = sum(1 for tag in proof.rules if tag.is_speedup)
    if len(proof.speedup_params) != speedups:
        return [
            Violation(
                None,
                f"{len(proof.speedup_params)} speedup parameters for"
                f" {speedups} speedup steps",
            )
        ]
    if proof.c < 1:
        violations.append(Violation(None, f"c must be >= 1, got {proof.c}"))
    if proof.initial_speed < 1:
        violations.append(
            Violation(0, f"initial speed must be >= 1, got {proof.initial_speed}")
        )
    if proof.annotation is not None and rules_bits(proof.rules) != proof.annotation.bits:
        violations.append(Violation(None, "annotation does not match rule sequence"))

    if proof.lines[0] != plain_dts(proof.initial_speed):
        violations.append(
            Violation(0, "first line is not DTS[n^initial_speed]")
        )

    outer = proof.outer_kind
    it = iter(proof.speedup_params)
    for i, tag in enumerate(proof.rules, start=1):
        prev = proof.lines[i - 1]
        try:
            if tag is RuleTag.SPEEDUP0:
                derived = apply_speedup0(prev, next(it), outer)
            elif tag is RuleTag.SPEEDUP1:
                derived = apply_speedup1(prev, next(it))
            elif tag is RuleTag.SPEEDUP2:
                derived = apply_speedup2(prev, next(it))
            else:
                derived = apply_slowdown(prev, proof.c)
        except DerivationError as exc:
            violations.append(Violation(i, f"{tag.value} precondition fails: {exc}"))
            continue
        stored = proof.lines[i]
        if stored != derived:
            violations.append(
                Violation(
                    i,
                    f"stored line differs from {tag.value} of line {i - 1}:"
                    f" stored {stored}, derived {derived}",
                )
            )

    for i, line in enumerate(proof.lines):
        edge = i in (0, len(proof.lines) - 1)
        if edge and not line.is_plain:
            violations.append(Violation(i, "first and last lines must be plain DTS"))
        if not edge and line.is_plain:
            violations.append(Violation(i, "interior line is plain DTS"))

    first = proof.lines[0].dts_speed
    last = proof.lines[-1].dts_speed
    if first < last:
        violations.append(
            Violation(
                len(proof.lines) - 1,
                f"win condition fails: initial exponent {format_rational(first)}"
                f" < final exponent {format_rational(last)}",
            )
        )
    return violations


# ---------------------------------------------------------------------------
# Rendering and serialization


_COMBINE = "combine"


def _display_steps(proof: Proof) -> list[tuple[str, SimpleClass]]:
    """Expand rule-1 steps into their uncombined speedup line followed by
    the combining step, mirroring how worked derivations are laid out."""
    steps: list[tuple[str, SimpleClass]] = [("start", proof.lines[0])]
    it = iter(proof.speedup_params)
    for i, tag in enumerate(proof.rules, start=1):
        line = proof.lines[i]
        if tag is RuleTag.SLOWDOWN:
            steps.append(("(Slowdown)", line))
            continue
        x = next(it)
        label = f"(Speedup, x = {_format_exponent(x)})"
        if tag is RuleTag.SPEEDUP1:
            uncombined = apply_speedup2(proof.lines[i - 1], x)
            steps.append((label, uncombined))
            steps.append((f"(Combine {line.blocks[-2].kind.symbol})", line))
        else:
            steps.append((label, line))
    return steps


def pretty_print(proof: Proof) -> str:
    """Render the derivation, one numbered line per displayed step.

    The header carries the exact parameters, so the text parses back to
    an equal Proof via `parse_pretty`; body exponents are shortened for
    reading.
    """
    head = [
        "# alternation-trading derivation",
        f"# c = {format_rational(proof.c)}",
        f"# initial = {format_rational(proof.initial_speed)}",
        f"# rules = {' '.join(tag.value for tag in proof.rules)}",
        f"# xs = {' '.join(format_rational(x) for x in proof.speedup_params)}",
        f"# outer = {proof.outer_kind.value}",
    ]
    if proof.annotation is not None:
        head.insert(3, f"# annotation = {proof.annotation}")
    body = []
    for idx, (label, line) in enumerate(_display_steps(proof)):
        prefix = "  " if idx == 0 else "⊆ "
        suffix = "" if label == "start" else f"   {label}"
        body.append(f"{idx:3d}. {prefix}{line.notation()}{suffix}")
    first, last = proof.lines[0].dts_speed, proof.lines[-1].dts_speed
    relation = ">=" if proof.wins else "<"
    footer = (
        f"conclusion: DTS[n^{_format_exponent(first)}]"
        f" ⊆ DTS[n^{_format_exponent(last)}]"
        f"   [win: {_format_exponent(first)} {relation} {_format_exponent(last)}]"
    )
    return "\n".join(head + body + [footer]) + "\n"


def parse_pretty(text: str) -> Proof:
    """Rebuild a Proof from `pretty_print` output via its exact header."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#") and "=" in line:
            key, _, value = line.lstrip("# ").partition("=")
            fields[key.strip()] = value.strip()
    try:
        rules = tuple(RuleTag(tok) for tok in fields["rules"].split())
        xs = tuple(Fraction(tok) for tok in fields["xs"].split())
        outer = Quantifier(fields.get("outer", "E"))
        return replay_rules(
            rules, Fraction(fields["c"]), Fraction(fields["initial"]), xs, outer
        )
    except (KeyError, ValueError) as exc:
        raise DerivationError(f"unparseable derivation text: {exc}") from exc


def _line_to_json(line: SimpleClass) -> dict:
    return {
        "blocks": [
            {
                "kind": blk.kind.value,
                "speed": format_rational(blk.speed),
                "input": format_rational(blk.input),
            }
            for blk in line.blocks
        ],
        "dts_speed": format_rational(line.dts_speed),
        "dts_input": format_rational(line.dts_input),
    }


def _line_from_json(data: dict) -> SimpleClass:
    blocks = tuple(
        QuantifierBlock(
            Quantifier(blk["kind"]),
            Fraction(blk["speed"]),
            Fraction(blk["input"]),
        )
        for blk in data["blocks"]
    )
    line = SimpleClass(blocks, Fraction(data["dts_speed"]))
    stated = Fraction(data["dts_input"])
    if stated != line.dts_input:
        raise DerivationError(
            f"inconsistent dts_input: stated {stated}, blocks give {line.dts_input}"
        )
    return line


def proof_to_json(proof: Proof) -> dict:
    """JSON proof format: rationals as p/q strings, annotation as a bit
    string, lines in full. Rule sequences with speedup rule 2 carry an
    explicit "rules" key instead of an annotation."""
    data: dict = {
        "c": format_rational(proof.c),
        "initial": format_rational(proof.initial_speed),
        "xs": [format_rational(x) for x in proof.speedup_params],
        "outer": proof.outer_kind.value,
        "lines": [_line_to_json(line) for line in proof.lines],
    }
    if proof.annotation is not None:
        data["annotation"] = proof.annotation.to_string()
    else:
        data["rules"] = [tag.value for tag in proof.rules]
    return data


def proof_from_json(data: dict) -> Proof:
    """Inverse of `proof_to_json`. Lines are taken as stored, not
    re-derived, so a tampered file still loads and `verify_proof`
    reports where it breaks."""
    try:
        if "rules" in data:
            rules = tuple(RuleTag(tok) for tok in data["rules"])
        else:
            rules = annotation_rules(Annotation.from_string(data["annotation"]))
        xs = tuple(Fraction(x) for x in data["xs"])
        lines = tuple(_line_from_json(line) for line in data["lines"])
        bits_annotation = (
            None if RuleTag.SPEEDUP2 in rules else Annotation(rules_bits(rules))
        )
        return Proof(
            Fraction(data["c"]),
            Fraction(data["initial"]),
            xs,
            rules,
            bits_annotation,
            lines,
        )
    except (KeyError, ValueError, TypeError, InvalidAnnotation) as exc:
        raise DerivationError(f"unparseable proof JSON: {exc}") from exc


def proof_dumps(proof: Proof) -> str:
    return json.dumps(proof_to_json(proof), indent=2, sort_keys=True) + "\n"


def proof_loads(text: str) -> Proof:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DerivationError(f"not JSON: {exc}") from exc
    return proof_from_json(data)
