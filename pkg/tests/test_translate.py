import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typeframes.documents import read_document
from typeframes.errors import ArityMismatch, NonUniqueBeliefExtension
from typeframes.frames import ProbabilityFrame, ProbabilityModel, satisfies, validate_frame
from typeframes.generators import random_model, random_separated
from typeframes.logic import DENSE, ThresholdSet, enumerate_formulas, parse_formula
from typeframes.spaces import FiniteMeasurableSpace, RationalMeasure
from typeframes.translate import (
    Partition,
    check_witness_merge,
    description_partition,
    describes,
    event_of_formula,
    generator_event,
    interpreted_to_model,
    model_to_typespace,
    round_trip,
    typespace_to_frame,
    witness_merge,
)
from typeframes.typespaces import truth_set_ts, validate_typespace

from pathlib import Path

F = Fraction
DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def _three_worlds():
    """a and b look alike propositionally; agent 1 is sure of a at a, of c at b."""
    w = FiniteMeasurableSpace(["a", "b", "c"])
    pa = RationalMeasure.from_points(w, {"a": 1})
    pc = RationalMeasure.from_points(w, {"c": 1})
    return ProbabilityModel(ProbabilityFrame(w, [{"a": pa, "b": pc, "c": pc}]), {"p": ["a", "b"]})


class TestPartition:
    def test_basics(self):
        p = Partition(["a", "b", "c"], [["a", "c"], ["b"]])
        assert p.same("a", "c") and not p.same("a", "b")
        assert p.class_id("c") == ("a", "c")
        assert Partition(["a", "b", "c"], [["a"], ["b"], ["c"]]).refines(p)
        assert not p.refines(Partition(["a", "b", "c"], [["a"], ["b"], ["c"]]))
        assert len(p) == 2


class TestDescriptionPartition:
    def test_three_worlds_all_split(self):
        dp = description_partition(_three_worlds())
        assert dp.zero.as_sets() == {frozenset("ab"), frozenset("c")}
        assert dp.full.as_sets() == {frozenset("a"), frozenset("b"), frozenset("c")}
        assert dp.agents[0].as_sets() == {frozenset("a"), frozenset("bc")}

    def test_two_world_uniform(self, two_world):
        dp = description_partition(two_world)
        assert len(dp.full) == 2
        assert dp.agents[0].same("u", "v")

    def test_certainty_only_uses_support(self):
        w = FiniteMeasurableSpace(["a", "b", "c"])
        m1 = RationalMeasure.from_points(w, {"a": F(1, 3), "c": F(2, 3)})
        m2 = RationalMeasure.from_points(w, {"a": F(1, 2), "c": F(1, 2)})
        m = ProbabilityModel(ProbabilityFrame(w, [{"a": m1, "b": m2, "c": m1}]), {"p": ["a", "b"]})
        assert description_partition(m, ThresholdSet.explicit([1])).full.same("a", "b")
        assert not description_partition(m, DENSE).full.same("a", "b")

    def test_explicit_threshold_merges(self):
        doc = read_document(DATA / "ambiguous.json")
        dp = description_partition(doc.value, doc.thresholds)
        assert dp.full.same("a1", "a2") and dp.full.same("b1", "b2")
        assert not description_partition(doc.value, DENSE).full.same("a1", "a2")

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_same_block_same_formulas(self, seed):
        rng = random.Random(seed)
        m = random_model(rng, rng.randint(1, 5))
        dp = description_partition(m)
        thetas = [F(0), F(1, 3), F(1, 2), F(1)]
        fs = list(enumerate_formulas(["p", "q"], 2, thetas, 2, 4))
        for block in dp.full.blocks:
            for f in fs:
                assert len({describes(m, w, f) for w in block}) == 1


class TestWitnessMerge:
    def test_arity(self, two_world):
        with pytest.raises(ArityMismatch):
            witness_merge(two_world, ["u"])

    def test_star_takes_parts(self):
        m = _three_worlds()
        merged, star = witness_merge(m, ["c", "a"])
        assert validate_frame(merged.frame).ok
        assert satisfies(merged, star, parse_formula("!p"))
        assert satisfies(merged, star, parse_formula("B{1,1} p"))
        assert check_witness_merge(m, ["c", "a"]).ok
        assert str(star).startswith("*merge")

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_random(self, seed):
        rng = random.Random(seed)
        m = random_model(rng, rng.randint(1, 5))
        targets = [rng.choice(m.worlds.carrier) for _ in range(3)]
        assert check_witness_merge(m, targets).ok


class TestFactoring:
    def test_two_world(self, two_world):
        fts = model_to_typespace(two_world)
        t = fts.space
        assert len(t.states) == 2 and len(t.types[0]) == 1
        assert validate_typespace(t).ok
        b = t.beta(1, t.types[0].carrier[0])
        assert sorted(w for _, w in b.items()) == [F(1, 2), F(1, 2)]
        assert fts.profile_of("u") != fts.profile_of("v")

    def test_ambiguous_refused(self):
        doc = read_document(DATA / "ambiguous.json")
        with pytest.raises(NonUniqueBeliefExtension) as err:
            model_to_typespace(doc.value, doc.thresholds)
        assert err.value.agent == 1

    def test_ambiguous_fine_when_dense(self):
        doc = read_document(DATA / "ambiguous.json")
        assert validate_typespace(model_to_typespace(doc.value, DENSE).space).ok

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_events_match_generators(self, seed):
        rng = random.Random(seed)
        m = random_model(rng, rng.randint(1, 5))
        fts = model_to_typespace(m)
        thetas = [F(0), F(1, 2), F(2, 3), F(1)]
        for f in enumerate_formulas(["p", "q"], 2, thetas, 2, 4):
            e = event_of_formula(fts, f)
            assert e == generator_event(fts, f)
            assert e.points == truth_set_ts(fts.result, f).points


class TestRoundTrip:
    def test_frame_of_example(self, example_space):
        assert validate_frame(typespace_to_frame(example_space)).ok

    def test_model_truth(self, example_its):
        m = interpreted_to_model(example_its)
        f = parse_formula("B{1,1/2} x1 & !B{2,1} !x1")
        assert {w for w in m.worlds.carrier if satisfies(m, w, f)} == set(m.worlds.carrier)

    def test_example_is_recovered(self, example_its):
        assert round_trip(example_its).bijective

    def test_shared_valuation_rejected(self, example_space):
        from typeframes.typespaces import InterpretedTypeSpace
        its = InterpretedTypeSpace(example_space, {"p": []})
        with pytest.raises(ValueError):
            round_trip(its)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6))
    def test_separated(self, seed):
        rng = random.Random(seed)
        try:
            its = random_separated(rng, rng.randint(1, 3), [rng.randint(1, 3), rng.randint(1, 3)], tries=30)
        except RuntimeError:
            return
        assert round_trip(its).bijective
