"""Proof annotations: which rewrite rule fires on each proof line.

An annotation is a bit vector. A 1-bit applies a speedup step, a 0-bit a
slowdown step. Walking the vector left to right while tracking the number
of quantifier blocks on the current line (the first 1-bit creates two
blocks, every later 1-bit adds one, every 0-bit removes one) gives the
shape of the whole proof. A vector is valid when the running block count
stays positive strictly inside the proof and lands on exactly zero at the
end, so that the first and last lines are the only plain deterministic
lines. Valid vectors of length 2k+1 are counted by the Catalan numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class InvalidAnnotation(ValueError):
    """Raised when a bit vector is not a valid proof annotation."""


def describe_problem(bits: Sequence[int]) -> str | None:
    """Return a description of the first rule violated by ``bits``, or None.

    Checks run in order: emptiness, bit alphabet, odd length, the forced
    endpoint bits, then the running block-count walk.
    """
    n = len(bits)
    if n == 0:
        return "annotation is empty (a proof needs at least two lines)"
    if any(b not in (0, 1) for b in bits):
        return "annotation bits must be 0 or 1"
    if n % 2 == 0:
        return f"annotation length {n} is even (must be odd)"
    if n < 3:
        return f"annotation length {n} is too short (shortest valid is 1,0,0)"
    if bits[0] != 1:
        return "first bit must be 1 (a proof opens with a speedup)"
    if bits[-1] != 0 or bits[-2] != 0:
        return "last two bits must be 0 (a proof closes with two slowdowns)"
    count = 0
    for pos, bit in enumerate(bits, start=1):
        if bit:
            count += 2 if pos == 1 else 1
        else:
            count -= 1
        if count == 0 and pos < n:
            return f"block count reaches 0 at position {pos} (interior DTS line)"
    if count != 0:
        return f"block count is {count} at the end (expected 0)"
    return None


def validate(bits: Sequence[int]) -> None:
    """Raise InvalidAnnotation unless ``bits`` is a valid annotation."""
    problem = describe_problem(bits)
    if problem is not None:
        raise InvalidAnnotation(problem)


@dataclass(frozen=True)
class Annotation:
    """A validated speedup/slowdown strategy vector.

    Instances are always valid: the constructor rejects anything that
    fails `validate`. The canonical text form is a contiguous bit string
    such as "1100100".
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        validate(self.bits)

    @classmethod
    def from_string(cls, text: str) -> "Annotation":
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise InvalidAnnotation(
                f"annotation string must be nonempty over 0/1, got {text!r}"
            )
        return cls(tuple(int(ch) for ch in text))

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __str__(self) -> str:
        return self.to_string()

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    @property
    def ones(self) -> int:
        return sum(self.bits)

    @property
    def zeros(self) -> int:
        return len(self.bits) - self.ones

    def block_counts(self) -> tuple[int, ...]:
        """Blocks on each proof line, from line 0 (zero) to the last (zero)."""
        counts = [0]
        for pos, bit in enumerate(self.bits, start=1):
            if bit:
                counts.append(counts[-1] + (2 if pos == 1 else 1))
            else:
                counts.append(counts[-1] - 1)
        return tuple(counts)


def count(length: int) -> int:
    """Number of valid annotations of exactly ``length`` bits.

    Dynamic program over (position, block count). Equals the Catalan
    number C_k for length 2k+1 and 0 for lengths no annotation can have.
    """
    if length < 3 or length % 2 == 0:
        return 0
    # ways[h] = number of prefixes reaching block count h at this position
    ways = {2: 1}  # after the forced leading 1-bit
    for pos in range(2, length + 1):
        nxt: dict[int, int] = {}
        last = pos == length
        for h, w in ways.items():
            for h2 in (h + 1, h - 1):
                if last:
                    if h2 == 0:
                        nxt[h2] = nxt.get(h2, 0) + w
                elif h2 >= 1:
                    nxt[h2] = nxt.get(h2, 0) + w
        ways = nxt
    return ways.get(0, 0)


def _coerce_prefix(prefix: Sequence[int] | str) -> tuple[int, ...]:
    if isinstance(prefix, str):
        prefix = tuple(int(ch) for ch in prefix.strip())
    prefix = tuple(int(b) for b in prefix)
    if any(b not in (0, 1) for b in prefix):
        raise InvalidAnnotation("prefix bits must be 0 or 1")
    return prefix


def enumerate_annotations(
    length: int, prefix: Sequence[int] | str = ()
) -> Iterator[Annotation]:
    """Yield all valid annotations of ``length`` bits in lexicographic order.

    ``prefix`` restricts the walk to extensions of the given bits (a full
    annotation as prefix yields just itself), which lets parallel
    searches partition the space by prefix without coordination. Lengths
    no annotation can have yield nothing.
    """
    if length < 3 or length % 2 == 0:
        return
    prefix = _coerce_prefix(prefix)
    if len(prefix) > length:
        return

    def feasible(pos: int, h: int) -> bool:
        # pos bits placed, block count h; can the remaining bits reach 0?
        rest = length - pos
        if pos < length and h < 1:
            return False
        if h > rest:
            return False
        return (rest - h) % 2 == 0

    bits: list[int] = []
    h = 0
    for pos, b in enumerate(prefix, start=1):
        if b:
            h += 2 if pos == 1 else 1
        else:
            h -= 1
        bits.append(b)
        if not feasible(pos, h):
            return

    def walk(pos: int, h: int) -> Iterator[Annotation]:
        if pos == length:
            yield Annotation(tuple(bits))
            return
        for b in (0, 1):
            if pos == 0 and b == 0:
                continue
            h2 = h + (2 if pos == 0 else 1) if b else h - 1
            if feasible(pos + 1, h2):
                bits.append(b)
                yield from walk(pos + 1, h2)
                bits.pop()

    yield from walk(len(prefix), h)


def family_fvm(k: int) -> Annotation:
    """k speedups followed by k+1 slowdowns: 1^k 0^(k+1).

    Best provable exponents along this family increase toward the golden
    ratio as k grows.
    """
    if k < 1:
        raise InvalidAnnotation(f"family_fvm needs k >= 1, got {k}")
    return Annotation((1,) * k + (0,) * (k + 1))


def family_w(outer: int, inner: int) -> Annotation:
    """1^outer followed by outer+1 copies of the block 1,(0,1)^inner,0,0.

    Best provable exponents along this family approach 2cos(pi/7) as both
    parameters grow.
    """
    if outer < 0 or inner < 1:
        raise InvalidAnnotation(
            f"family_w needs outer >= 0 and inner >= 1, got ({outer}, {inner})"
        )
    block = (1,) + (0, 1) * inner + (0, 0)
    return Annotation((1,) * outer + block * (outer + 1))


def shard_of(annotation: Annotation, shards: int) -> int:
    """Deterministic shard index from the bits after the forced leading 1."""
    if shards < 1:
        raise ValueError(f"shards must be >= 1, got {shards}")
    if shards == 1:
        return 0
    width = max(1, (shards - 1).bit_length())
    window = annotation.bits[1 : 1 + width]
    value = 0
    for b in window:
        value = (value << 1) | b
    return value % shards
