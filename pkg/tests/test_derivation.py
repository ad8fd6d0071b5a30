"""Rewrite rules, replay, verification, rendering, and serialization.

Numeric expectations are computed by hand from the rule definitions.
The main worked example, annotation 1100100 at c = 8/5, has the exact
exponent chain 82/25, 2, 1, 8/5, 64/25, 32/25, 256/125, 2048/625.
"""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atlb.annotation import Annotation, enumerate_annotations
from atlb.derivation import (
    DerivationError,
    Proof,
    Quantifier,
    QuantifierBlock,
    RuleApplication,
    RuleTag,
    SimpleClass,
    annotation_rules,
    apply_slowdown,
    apply_speedup0,
    apply_speedup1,
    apply_speedup2,
    combine_adjacent,
    describe_rules_problem,
    line_block_counts,
    parse_pretty,
    plain_dts,
    pretty_print,
    proof_dumps,
    proof_loads,
    replay,
    replay_rules,
    verify_proof,
)

E, A = Quantifier.EXISTENTIAL, Quantifier.UNIVERSAL


def rationals(min_value=0, max_value=4):
    return st.fractions(
        min_value=min_value, max_value=max_value, max_denominator=64
    )


class TestBuildingBlocks:
    def test_float_rejected_everywhere(self):
        with pytest.raises(DerivationError):
            plain_dts(1.5)
        with pytest.raises(DerivationError):
            QuantifierBlock(E, 0.5, F(1))
        with pytest.raises(DerivationError):
            apply_slowdown(SimpleClass.make([(E, 1)], dts_speed=2), 1.5)

    def test_string_and_int_speeds_accepted(self):
        cls = SimpleClass.make([(E, "3/2")], dts_speed=2)
        assert cls.blocks[0].speed == F(3, 2)
        assert plain_dts(3).dts_speed == F(3)

    def test_make_defaults_input_to_next_stage(self):
        cls = SimpleClass.make([(E, 2), (A, "1/2")], dts_speed="5/2")
        # first block bounds the second stage's n^(1/2) guess, floored at 1
        assert cls.blocks[0].input == F(1)
        # second block bounds the DTS core's runtime
        assert cls.blocks[1].input == F(5, 2)
        assert cls.dts_input == F(5, 2)

    def test_explicit_input_wins(self):
        cls = SimpleClass.make([(E, 2, "7/3")], dts_speed=1)
        assert cls.blocks[0].input == F(7, 3)

    def test_dts_input_of_plain_line(self):
        assert plain_dts(2).dts_input == F(1)

    def test_inputs_below_one_rejected(self):
        with pytest.raises(DerivationError):
            QuantifierBlock(E, F(1), F(1, 2))

    def test_notation(self):
        cls = SimpleClass.make([(E, "32/25", "32/25"), (A, 0, 1)], dts_speed=2)
        assert str(cls) == "(∃ n^1.28)^1.28 (∀ n^0)^1 DTS[n^2]"

    def test_alternation_check(self):
        assert SimpleClass.make([(E, 1), (A, 1)], dts_speed=1).is_alternating
        assert not SimpleClass.make([(E, 1), (E, 1)], dts_speed=1).is_alternating


class TestSpeedupRules:
    def test_rule0(self):
        out = apply_speedup0(plain_dts(F(49, 25)), 1, E)
        assert out == SimpleClass(
            (QuantifierBlock(E, F(1), F(1)), QuantifierBlock(A, F(0), F(1))),
            F(24, 25),
        )

    def test_rule0_small_x_floors_superscript(self):
        out = apply_speedup0(plain_dts(2), F(1, 4), A)
        assert out.blocks[0] == QuantifierBlock(A, F(1, 4), F(1))

    def test_rule0_needs_plain_line(self):
        with pytest.raises(DerivationError):
            apply_speedup0(SimpleClass.make([(E, 1)], dts_speed=2), 1, E)

    @pytest.mark.parametrize("x", [0, 2, "5/2"])
    def test_x_must_be_interior(self, x):
        with pytest.raises(DerivationError):
            apply_speedup0(plain_dts(2), x, E)

    def test_rule1_folds_into_innermost(self):
        cls = SimpleClass.make([(E, "32/25", "32/25")], dts_speed="64/25")
        out = apply_speedup1(cls, "32/25")
        assert out == SimpleClass(
            (
                QuantifierBlock(E, F(32, 25), F(32, 25)),
                QuantifierBlock(A, F(0), F(32, 25)),
            ),
            F(32, 25),
        )

    def test_rule1_speed_and_superscript_take_max(self):
        cls = SimpleClass.make([(A, 1, 1)], dts_speed=3)
        out = apply_speedup1(cls, 2)
        assert out.blocks[0] == QuantifierBlock(A, F(2), F(2))
        assert out.blocks[1] == QuantifierBlock(E, F(0), F(1))
        assert out.dts_speed == F(1)

    def test_rule1_needs_a_block(self):
        with pytest.raises(DerivationError):
            apply_speedup1(plain_dts(2), 1)

    def test_rule2_appends_same_polarity(self):
        cls = SimpleClass.make([(E, "32/25", "32/25")], dts_speed="64/25")
        out = apply_speedup2(cls, "32/25")
        assert [b.kind for b in out.blocks] == [E, E, A]
        assert not out.is_alternating

    @given(
        rationals(min_value=1, max_value=3),
        rationals(min_value=0, max_value=2),
        rationals(min_value=1, max_value=2),
        st.sampled_from([E, A]),
        st.data(),
    )
    @settings(max_examples=120)
    def test_rule2_then_combine_equals_rule1(self, dts, speed, inp, kind, data):
        cls = SimpleClass((QuantifierBlock(kind, speed, inp),), dts)
        x = dts * data.draw(
            st.fractions(min_value=F(1, 64), max_value=F(63, 64), max_denominator=64)
        )
        assert combine_adjacent(apply_speedup2(cls, x)) == apply_speedup1(cls, x)

    @given(
        rationals(min_value=1, max_value=3),
        rationals(min_value=0, max_value=2),
        st.sampled_from([E, A]),
        st.data(),
    )
    @settings(max_examples=120)
    def test_rule1_output_already_combined(self, dts, speed, kind, data):
        cls = SimpleClass((QuantifierBlock(kind, speed, max(speed, F(1))),), dts)
        x = dts * data.draw(
            st.fractions(min_value=F(1, 64), max_value=F(63, 64), max_denominator=64)
        )
        out = apply_speedup1(cls, x)
        assert out.is_alternating
        assert combine_adjacent(out) == out


class TestSlowdown:
    def test_innermost_of_one(self):
        # only block removed: its own input bound is 1
        cls = SimpleClass.make([(E, 1, "7/5")], dts_speed="7/5")
        out = apply_slowdown(cls, F(7, 5))
        assert out == plain_dts(F(49, 25))

    def test_takes_max_over_all_four(self):
        base = [(E, 1, 3), (A, 2, "3/2")]
        # dts dominates
        assert apply_slowdown(
            SimpleClass.make(base, dts_speed=4), 2
        ).dts_speed == F(8)
        # removed block's speed dominates
        assert apply_slowdown(
            SimpleClass.make([(E, 1, 3), (A, 5, "3/2")], dts_speed=1), 2
        ).dts_speed == F(10)
        # outer input bound dominates
        assert apply_slowdown(
            SimpleClass.make(base, dts_speed=1), 2
        ).dts_speed == F(6)
        # removed block's own input bound dominates
        assert apply_slowdown(
            SimpleClass.make([(E, 1, 1), (A, 1, 4)], dts_speed=1), 2
        ).dts_speed == F(8)

    def test_keeps_outer_blocks(self):
        cls = SimpleClass.make([(E, 1, 3), (A, 2, "3/2")], dts_speed=1)
        out = apply_slowdown(cls, 2)
        assert out.blocks == cls.blocks[:-1]

    def test_needs_block_and_sane_c(self):
        with pytest.raises(DerivationError):
            apply_slowdown(plain_dts(2), 2)
        with pytest.raises(DerivationError):
            apply_slowdown(SimpleClass.make([(E, 1)], dts_speed=1), "1/2")


class TestCombine:
    def test_merges_runs(self):
        cls = SimpleClass.make(
            [(E, 1, 2), (E, 3, "1/1"), (A, 0, 5), (A, 1, 1)], dts_speed=1
        )
        out = combine_adjacent(cls)
        assert out.blocks == (
            QuantifierBlock(E, F(3), F(1)),
            QuantifierBlock(A, F(1), F(1)),
        )
        assert out.is_alternating

    def test_idempotent_and_preserves_alternating(self):
        cls = SimpleClass.make([(E, 1), (A, 2)], dts_speed=1)
        assert combine_adjacent(cls) == cls


class TestRuleSequences:
    def test_annotation_to_rules(self):
        rules = annotation_rules(Annotation.from_string("1100100"))
        assert rules == (
            RuleTag.SPEEDUP0,
            RuleTag.SPEEDUP1,
            RuleTag.SLOWDOWN,
            RuleTag.SLOWDOWN,
            RuleTag.SPEEDUP1,
            RuleTag.SLOWDOWN,
            RuleTag.SLOWDOWN,
        )

    def test_rule2_sequences_checkable(self):
        seq = (RuleTag.SPEEDUP0, RuleTag.SPEEDUP2) + (RuleTag.SLOWDOWN,) * 4
        assert describe_rules_problem(seq) is None
        assert line_block_counts(seq) == (0, 2, 4, 3, 2, 1, 0)

    def test_rule0_only_first(self):
        seq = (RuleTag.SPEEDUP0, RuleTag.SPEEDUP0) + (RuleTag.SLOWDOWN,) * 4
        assert "position 2" in describe_rules_problem(seq)

    def test_rule_application_parameter_discipline(self):
        with pytest.raises(DerivationError):
            RuleApplication(RuleTag.SLOWDOWN, F(1))
        with pytest.raises(DerivationError):
            RuleApplication(RuleTag.SPEEDUP1)
        assert RuleApplication(RuleTag.SPEEDUP1, "3/2").x == F(3, 2)


class TestReplay:
    def test_smallest_annotation_exact_equality(self):
        # initial c^2 with x = 1 closes with equality for 1 < c < 2
        p = replay(Annotation.from_string("100"), F(7, 5), F(49, 25), [1])
        assert [l.dts_speed for l in p.lines] == [F(49, 25), F(24, 25), F(7, 5), F(49, 25)]
        assert p.wins
        assert verify_proof(p) == []

    def test_worked_example_chain(self):
        p = replay(
            Annotation.from_string("1100100"),
            F(8, 5),
            F(82, 25),
            [F(32, 25), 1, F(32, 25)],
        )
        assert [l.dts_speed for l in p.lines] == [
            F(82, 25), F(2), F(1), F(8, 5), F(64, 25),
            F(32, 25), F(256, 125), F(2048, 625),
        ]
        assert p.wins
        assert verify_proof(p) == []
        # every interior line alternates and stays in normal form
        assert all(l.is_alternating for l in p.lines)
        assert p.lines[0].is_plain and p.lines[-1].is_plain
        assert not any(l.is_plain for l in p.lines[1:-1])

    def test_same_parameters_lose_above_threshold(self):
        # at c = 161/100 the same shape cannot close: the final exponent
        # lands above the initial one
        p = replay(
            Annotation.from_string("1100100"),
            F(161, 100),
            F(65921, 20000),
            [F(25921, 20000), 1, F(25921, 20000)],
        )
        assert not p.wins
        assert any("win condition" in v.message for v in verify_proof(p))

    def test_universal_outer_kind(self):
        p = replay(Annotation.from_string("100"), F(7, 5), F(49, 25), [1], outer_kind=A)
        assert p.lines[1].blocks[0].kind is A
        assert verify_proof(p) == []

    def test_replay_rules_with_rule2(self):
        seq = (
            RuleTag.SPEEDUP0,
            RuleTag.SPEEDUP2,
            RuleTag.SLOWDOWN,
            RuleTag.SLOWDOWN,
            RuleTag.SLOWDOWN,
            RuleTag.SLOWDOWN,
        )
        p = replay_rules(seq, F(6, 5), F(4), [2, 1])
        assert p.annotation is None
        assert verify_proof(p) == []
        assert line_block_counts(seq) == tuple(l.block_count for l in p.lines)

    def test_parameter_count_checked(self):
        with pytest.raises(DerivationError):
            replay(Annotation.from_string("100"), F(3, 2), F(2), [1, 1])

    def test_x_interval_enforced_midway(self):
        # second x exceeds the remaining core exponent
        with pytest.raises(DerivationError):
            replay(Annotation.from_string("11000"), F(3, 2), F(3), [1, 3])

    def test_c_and_initial_floors(self):
        with pytest.raises(DerivationError):
            replay(Annotation.from_string("100"), F(1, 2), F(2), [1])
        with pytest.raises(DerivationError):
            replay(Annotation.from_string("100"), F(3, 2), F(1, 2), [F(1, 4)])

    def test_c_equal_one_admitted(self):
        p = replay(Annotation.from_string("100"), 1, 1, ["1/2"])
        assert p.wins
        assert verify_proof(p) == []


class TestVerifier:
    def good(self):
        return replay(
            Annotation.from_string("1100100"),
            F(8, 5),
            F(82, 25),
            [F(32, 25), 1, F(32, 25)],
        )

    def test_clean_proof_has_no_violations(self):
        assert verify_proof(self.good()) == []

    def test_tampered_line_localized(self):
        p = self.good()
        lines = list(p.lines)
        bad = SimpleClass(lines[4].blocks, lines[4].dts_speed + F(1, 100))
        lines[4] = bad
        tampered = Proof(
            p.c, p.initial_speed, p.speedup_params, p.rules, p.annotation, tuple(lines)
        )
        flagged = verify_proof(tampered)
        # the corrupt line mismatches its derivation, and the next line
        # no longer follows from it
        assert {v.line for v in flagged} == {4, 5}

    def test_tampered_final_line_breaks_win(self):
        p = self.good()
        lines = list(p.lines)
        lines[-1] = plain_dts(F(4))
        tampered = Proof(
            p.c, p.initial_speed, p.speedup_params, p.rules, p.annotation, tuple(lines)
        )
        msgs = [v.message for v in verify_proof(tampered)]
        assert any("win condition" in m for m in msgs)
        assert any("differs" in m for m in msgs)

    def test_wrong_line_count(self):
        p = self.good()
        tampered = Proof(
            p.c, p.initial_speed, p.speedup_params, p.rules, p.annotation, p.lines[:-1]
        )
        assert any("lines" in str(v) for v in verify_proof(tampered))

    def test_mismatched_annotation(self):
        p = self.good()
        tampered = Proof(
            p.c,
            p.initial_speed,
            p.speedup_params,
            p.rules,
            Annotation.from_string("1101000"),
            p.lines,
        )
        assert any("annotation" in v.message for v in verify_proof(tampered))

    def test_violation_str(self):
        v = verify_proof(
            Proof(
                F(3, 2),
                F(2),
                (F(1),),
                (RuleTag.SPEEDUP0,),
                None,
                (plain_dts(2), plain_dts(1)),
            )
        )
        assert all(str(x) for x in v)


class TestRendering:
    def example(self):
        return replay(
            Annotation.from_string("1100100"),
            F(8, 5),
            F(82, 25),
            [F(32, 25), 1, F(32, 25)],
        )

    def test_layout(self):
        text = pretty_print(self.example())
        body = [l for l in text.splitlines() if l and l[0] != "#" and "." in l.split()[0]]
        # rule-1 steps render as speedup plus combine: 7 rules, 2 of them
        # rule 1, plus the start line gives 10 displayed steps
        assert len(body) == 10
        assert body[0].lstrip().startswith("0.")
        assert "DTS[n^3.28]" in body[0]
        assert "(Combine ∀)" in text and "(Combine ∃)" in text
        assert text.count("(Slowdown)") == 4
        assert "conclusion: DTS[n^3.28] ⊆ DTS[n^3.2768]" in text

    def test_round_trip_through_text(self):
        p = self.example()
        assert parse_pretty(pretty_print(p)) == p

    def test_round_trip_rule2(self):
        seq = (RuleTag.SPEEDUP0, RuleTag.SPEEDUP2) + (RuleTag.SLOWDOWN,) * 4
        p = replay_rules(seq, F(6, 5), F(4), [2, 1], outer_kind=A)
        assert parse_pretty(pretty_print(p)) == p

    def test_unparseable_text(self):
        with pytest.raises(DerivationError):
            parse_pretty("not a derivation")


class TestJson:
    def example(self):
        return replay(
            Annotation.from_string("1100100"),
            F(8, 5),
            F(82, 25),
            [F(32, 25), 1, F(32, 25)],
        )

    def test_round_trip(self):
        p = self.example()
        assert proof_loads(proof_dumps(p)) == p

    def test_rationals_stored_exactly(self):
        text = proof_dumps(self.example())
        assert '"82/25"' in text and '"2048/625"' in text
        assert "3.28" not in text

    def test_tampered_file_loads_and_fails_verification(self):
        import json

        data = json.loads(proof_dumps(self.example()))
        data["lines"][4]["dts_speed"] = "5/2"
        data["lines"][4]["dts_input"] = data["lines"][4]["dts_input"]
        p = proof_loads(json.dumps(data))
        assert any(v.line == 4 for v in verify_proof(p))

    def test_inconsistent_dts_input_rejected(self):
        import json

        data = json.loads(proof_dumps(self.example()))
        data["lines"][1]["dts_input"] = "9/2"
        with pytest.raises(DerivationError):
            proof_loads(json.dumps(data))

    def test_garbage_rejected(self):
        with pytest.raises(DerivationError):
            proof_loads("{")
        with pytest.raises(DerivationError):
            proof_loads('{"c": "3/2"}')


def _walk_classes(draw_rationals):
    """Strategy for small alternating classes used by rule properties."""
    return st.builds(
        lambda kinds, speeds, dts: SimpleClass.make(
            list(zip(kinds, speeds)), dts_speed=dts
        ),
        st.sampled_from([(E,), (A,), (E, A), (A, E)]),
        st.lists(draw_rationals, min_size=2, max_size=2),
        st.fractions(min_value=1, max_value=4, max_denominator=32),
    )


@given(_walk_classes(st.fractions(min_value=0, max_value=3, max_denominator=32)))
@settings(max_examples=100)
def test_slowdown_never_increases_block_count(cls):
    out = apply_slowdown(cls, F(3, 2))
    assert out.block_count == cls.block_count - 1
    assert out.dts_speed >= F(3, 2) * cls.dts_speed


@given(
    st.integers(min_value=1, max_value=4),
    st.fractions(min_value=F(101, 100), max_value=F(199, 100), max_denominator=100),
    st.data(),
)
@settings(max_examples=60, deadline=None)
def test_replayed_block_counts_match_annotation(k, c, data):
    """Replaying any annotation reproduces its block-count walk."""
    pool = list(enumerate_annotations(2 * k + 1))
    ann = data.draw(st.sampled_from(pool))
    xs = []
    lines = [plain_dts(F(4))]
    # draw each x inside the open interval the current line allows
    for bit in ann.bits:
        if bit:
            hi = lines[-1].dts_speed
            frac = data.draw(
                st.fractions(min_value=F(1, 100), max_value=F(99, 100), max_denominator=100)
            )
            x = hi * frac
            xs.append(x)
            if lines[-1].is_plain:
                lines.append(apply_speedup0(lines[-1], x, E))
            else:
                lines.append(apply_speedup1(lines[-1], x))
        else:
            lines.append(apply_slowdown(lines[-1], c))
    p = replay(ann, c, F(4), xs)
    assert tuple(l.block_count for l in p.lines) == ann.block_counts()
    assert all(l.is_alternating for l in p.lines)
    assert p.lines == tuple(lines)
