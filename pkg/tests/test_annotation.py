"""Annotation validity, counting, enumeration, and the two named families."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atlb.annotation import (
    Annotation,
    InvalidAnnotation,
    count,
    describe_problem,
    enumerate_annotations,
    family_fvm,
    family_w,
    shard_of,
    validate,
)


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


class TestValidity:
    def test_minimal_annotation(self):
        validate((1, 0, 0))

    @pytest.mark.parametrize(
        "bits,fragment",
        [
            ((), "empty"),
            ((1, 0), "even"),
            ((1,), "too short"),
            ((0, 1, 0), "first bit must be 1"),
            ((1, 0, 1), "last two bits must be 0"),
            ((1, 1, 0), "last two bits must be 0"),
            ((1, 0, 0, 1, 1, 0, 0), "reaches 0 at position 3"),
            ((1, 1, 1, 0, 0), "is 2 at the end"),
            ((1, 0, 2), "must be 0 or 1"),
        ],
    )
    def test_first_violation_reported(self, bits, fragment):
        msg = describe_problem(bits)
        assert msg is not None and fragment in msg
        with pytest.raises(InvalidAnnotation):
            validate(bits)

    def test_interior_zero_is_position_not_index(self):
        # positions are 1-based so they match proof line numbers
        msg = describe_problem((1, 0, 0, 1, 0, 0, 1, 0, 0))
        assert "position 3" in msg

    def test_annotation_constructor_validates(self):
        with pytest.raises(InvalidAnnotation):
            Annotation((1, 1, 0))
        assert Annotation((1, 0, 0)).bits == (1, 0, 0)

    def test_from_string_round_trip(self):
        a = Annotation.from_string("1100100")
        assert a.to_string() == "1100100"
        assert str(a) == "1100100"
        assert len(a) == 7
        assert list(a) == [1, 1, 0, 0, 1, 0, 0]

    def test_block_counts_walk(self):
        a = Annotation.from_string("1100100")
        assert a.block_counts() == (0, 2, 3, 2, 1, 2, 1, 0)

    def test_ones_zeros(self):
        a = Annotation.from_string("1100100")
        assert a.ones == 3 and a.zeros == 4


class TestCounting:
    @pytest.mark.parametrize("k", range(1, 13))
    def test_count_is_catalan(self, k):
        assert count(2 * k + 1) == catalan(k)

    @pytest.mark.parametrize("length", [0, 1, 2, 4, 10])
    def test_even_or_tiny_lengths_have_none(self, length):
        assert count(length) == 0

    def test_total_up_to_15(self):
        assert sum(count(n) for n in range(1, 16)) == 625

    def test_ratio_approaches_four(self):
        # consecutive odd-length counts grow like 4^k from below
        r = count(203) / count(201)
        assert 3.9 < r < 4.0
        assert count(21) / count(19) < r


class TestEnumeration:
    @pytest.mark.parametrize("length", [3, 5, 7, 9, 11, 13, 15])
    def test_matches_validity_filter(self, length):
        from itertools import product

        brute = [
            bits
            for bits in product((0, 1), repeat=length)
            if describe_problem(bits) is None
        ]
        enumerated = [a.bits for a in enumerate_annotations(length)]
        assert enumerated == brute
        assert len(enumerated) == count(length)

    def test_lexicographic_order(self):
        outs = [a.to_string() for a in enumerate_annotations(7)]
        assert outs == sorted(outs)

    @pytest.mark.parametrize("prefix", ["11", "10", "1100", "10110"])
    def test_prefix_selects_extensions(self, prefix):
        full = [a.to_string() for a in enumerate_annotations(9)]
        got = [a.to_string() for a in enumerate_annotations(9, prefix=prefix)]
        assert got == [s for s in full if s.startswith(prefix)]

    def test_full_prefix_yields_itself(self):
        last = list(enumerate_annotations(7))[-1]
        assert list(enumerate_annotations(7, prefix=last.bits)) == [last]

    def test_prefixes_partition_the_space(self):
        full = [a.bits for a in enumerate_annotations(9)]
        split = [
            a.bits
            for p in ("10", "11")
            for a in enumerate_annotations(9, prefix=p)
        ]
        assert sorted(split) == sorted(full)

    def test_impossible_lengths_yield_nothing(self):
        assert list(enumerate_annotations(4)) == []
        assert list(enumerate_annotations(1)) == []

    @given(st.integers(min_value=1, max_value=6))
    def test_shard_partition(self, shards):
        whole = list(enumerate_annotations(9))
        pieces = [
            [a for a in whole if shard_of(a, shards) == s] for s in range(shards)
        ]
        assert sum(len(p) for p in pieces) == len(whole)


class TestFamilies:
    @pytest.mark.parametrize("k", range(1, 8))
    def test_fvm_shape(self, k):
        a = family_fvm(k)
        assert a.bits == (1,) * k + (0,) * (k + 1)
        assert describe_problem(a.bits) is None

    @pytest.mark.parametrize("outer,inner", [(1, 1), (2, 1), (1, 2), (3, 2), (2, 3)])
    def test_w_valid(self, outer, inner):
        a = family_w(outer, inner)
        assert describe_problem(a.bits) is None
        assert len(a) == outer + (outer + 1) * (2 * inner + 3)

    def test_w_smallest(self):
        assert family_w(1, 1).to_string() == "1" + "10100" * 2

    def test_w_outer_zero_is_single_block(self):
        assert family_w(0, 2).to_string() == "1010100"

    @pytest.mark.parametrize("bad", [0, -1])
    def test_family_arguments_validated(self, bad):
        with pytest.raises(ValueError):
            family_fvm(bad)
        with pytest.raises(ValueError):
            family_w(-1, 1)
        with pytest.raises(ValueError):
            family_w(1, bad)


@given(st.integers(min_value=1, max_value=8), st.data())
@settings(max_examples=80)
def test_random_valid_annotation_passes(k, data):
    """Any block-count walk staying positive maps to a valid annotation."""
    length = 2 * k + 1
    bits = [1]
    height = 2
    for pos in range(1, length):
        rest = length - pos - 1

        def reachable(h: int) -> bool:
            if rest == 0:
                return h == 0
            return 1 <= h <= rest and (rest - h) % 2 == 0

        choices = [b for b in (0, 1) if reachable(height + (1 if b else -1))]
        bit = data.draw(st.sampled_from(choices))
        bits.append(bit)
        height += 1 if bit else -1
    assert describe_problem(tuple(bits)) is None
