import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typeframes.errors import BudgetExceeded, StateSpaceMismatch, VocabMismatch
from typeframes.generators import random_typespace
from typeframes.logic import parse_formula
from typeframes.spaces import FiniteMeasurableSpace, RationalMeasure, point_mass, product
from typeframes.typespaces import (
    InterpretedTypeSpace,
    TypeMorphism,
    TypeSpace,
    check_type_morphism,
    compose,
    find_type_morphisms,
    identity_morphism,
    morphism_search_space,
    truth_set_ts,
    validate_typespace,
)

F = Fraction


def _one_point():
    x, t1, t2 = (FiniteMeasurableSpace([n]) for n in ("x", "s", "t"))
    prod = product([x, t1, t2])
    d = point_mass(prod, ("x", "s", "t"))
    return TypeSpace(x, [t1, t2], [{"s": d}, {"t": d}])


def _with_duplicate(example_space):
    """Example space plus a second agent-1 type with the same beliefs as s."""
    x = example_space.states
    t1 = FiniteMeasurableSpace(["s", "s2"])
    t2 = FiniteMeasurableSpace(["t"])
    prod = product([x, t1, t2])
    half = {("x1", "s", "t"): F(1, 2), ("x2", "s", "t"): F(1, 2)}
    half2 = {("x1", "s2", "t"): F(1, 2), ("x2", "s2", "t"): F(1, 2)}
    b2 = RationalMeasure.from_points(prod, {("x1", "s", "t"): F(1, 2), ("x1", "s2", "t"): F(1, 2)})
    return TypeSpace(x, [t1, t2], [
        {"s": RationalMeasure.from_points(prod, half), "s2": RationalMeasure.from_points(prod, half2)},
        {"t": b2}])


class TestValidation:
    def test_example_ok(self, example_space):
        assert validate_typespace(example_space).ok

    def test_marginal_violation(self, example_space):
        x = example_space.states
        t1 = FiniteMeasurableSpace(["s", "s2"])
        t2 = FiniteMeasurableSpace(["t"])
        prod = product([x, t1, t2])
        bad = RationalMeasure.from_points(prod, {("x1", "s", "t"): F(1, 2), ("x1", "s2", "t"): F(1, 2)})
        good = point_mass(prod, ("x1", "s2", "t"))
        t = TypeSpace(x, [t1, t2], [{"s": bad, "s2": good}, {"t": good}])
        rep = validate_typespace(t)
        found = [v for v in rep.violations if v.condition == "marginal"]
        assert found and found[0].data["type"] == "s"
        assert found[0].data["mass_off_own_type"] == F(1, 2)

    def test_one_point(self):
        assert validate_typespace(_one_point()).ok

    def test_measurability_violation(self, example_space):
        x = example_space.states
        t1 = FiniteMeasurableSpace(["s", "s2"], [["s", "s2"]])
        t2 = FiniteMeasurableSpace(["t"])
        prod = product([x, t1, t2])
        a = RationalMeasure.from_points(prod, {("x1", "s", "t"): 1})
        b = RationalMeasure.from_points(prod, {("x2", "s", "t"): 1})
        t = TypeSpace(x, [t1, t2], [{"s": a, "s2": b}, {"t": a}])
        assert "measurability" in validate_typespace(t).conditions()

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_generated_spaces_validate(self, seed):
        rng = random.Random(seed)
        t = random_typespace(rng, rng.randint(1, 4), [rng.randint(1, 3), rng.randint(1, 3)])
        assert validate_typespace(t).ok


class TestSemantics:
    def test_sure_belief(self, example_its):
        got = truth_set_ts(example_its, parse_formula("B{2,1} x1"))
        assert got.points == frozenset(example_its.space.product.carrier)

    def test_atom(self, example_its):
        got = truth_set_ts(example_its, parse_formula("x1"))
        assert got.points == {("x1", "s", "t")}

    def test_uniform_half(self, example_its):
        got = truth_set_ts(example_its, parse_formula("B{1,1/2} x1"))
        assert got.points == frozenset(example_its.space.product.carrier)
        assert truth_set_ts(example_its, parse_formula("B{1,3/4} x1")).points == frozenset()

    def test_vocab_mismatch(self, example_its):
        with pytest.raises(VocabMismatch):
            truth_set_ts(example_its, parse_formula("x2"))
        with pytest.raises(VocabMismatch):
            truth_set_ts(example_its, parse_formula("B{3,1} x1"))

    def test_interp_measurable(self, example_space):
        coarse = FiniteMeasurableSpace(["x1", "x2"], [["x1", "x2"]])
        prod = product([coarse, *example_space.types])
        d = RationalMeasure(prod, [1])
        t = TypeSpace(coarse, example_space.types, [{"s": d}, {"t": d}])
        with pytest.raises(ValueError):
            InterpretedTypeSpace(t, {"x1": ["x1"]})


class TestMorphisms:
    def test_identity(self, example_space):
        assert check_type_morphism(example_space, example_space, identity_morphism(example_space)).ok

    def test_collapse_duplicates(self, example_space):
        dup = _with_duplicate(example_space)
        m = TypeMorphism([{"s": "s", "s2": "s"}, {"t": "t"}])
        assert validate_typespace(dup).ok
        assert check_type_morphism(dup, example_space, m).ok

    def test_wrong_target_reports_event(self, example_space):
        dup = _with_duplicate(example_space)
        # agent 2's belief in dup splits mass between s and s2; mapping t to t is fine,
        # but pointing s at s2 breaks agent 1's belief
        m = TypeMorphism([{"s": "s2", "s2": "s2"}, {"t": "t"}])
        rep = check_type_morphism(example_space, dup, m)
        assert not rep.ok
        v = rep.violations[0]
        assert v.condition == "belief" and v.data["pulled_back"] != v.data["target"]

    def test_totality(self, example_space):
        rep = check_type_morphism(example_space, example_space, TypeMorphism([{}, {"t": "t"}]))
        assert "totality" in rep.conditions()

    def test_state_mismatch(self, example_space):
        with pytest.raises(StateSpaceMismatch):
            check_type_morphism(example_space, _one_point(), identity_morphism(example_space))

    def test_find_identity_only(self, example_space):
        assert find_type_morphisms(example_space, example_space) == [identity_morphism(example_space)]

    def test_find_collapse(self, example_space):
        dup = _with_duplicate(example_space)
        found = find_type_morphisms(dup, example_space)
        assert found == [TypeMorphism([{"s": "s", "s2": "s"}, {"t": "t"}])]

    def test_find_none_when_belief_missing(self, example_space):
        x = example_space.states
        prod = example_space.product
        other = TypeSpace(x, example_space.types,
                          [{"s": point_mass(prod, ("x2", "s", "t"))}, {"t": example_space.beta(2, "t")}])
        assert find_type_morphisms(example_space, other) == []

    def test_budget(self, example_space):
        dup = _with_duplicate(example_space)
        assert morphism_search_space(dup, dup) == 4
        with pytest.raises(BudgetExceeded):
            find_type_morphisms(dup, dup, budget=3)

    def test_compose(self, example_space):
        dup = _with_duplicate(example_space)
        f = TypeMorphism([{"s": "s", "s2": "s"}, {"t": "t"}])
        g = compose(f, identity_morphism(example_space))
        assert g == f and check_type_morphism(dup, example_space, g).ok
        assert not f.is_bijective(dup, example_space)
        assert identity_morphism(dup).is_bijective(dup, dup)
