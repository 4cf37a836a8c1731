import random

from hypothesis import given, settings
from hypothesis import strategies as st

from typeframes.frames import validate_frame
from typeframes.generators import (
    random_formula,
    random_model,
    random_partition,
    random_separated,
    random_typespace,
    random_weights,
    type_classes,
)
from typeframes.logic import modal_depth
from typeframes.spaces import FiniteMeasurableSpace, RationalMeasure, point_mass, product
from typeframes.typespaces import TypeSpace, validate_typespace

seeds = st.integers(0, 10**6)


@given(seeds)
def test_partition_covers(seed):
    rng = random.Random(seed)
    items = list(range(rng.randint(0, 7)))
    blocks = random_partition(rng, items, max_blocks=3)
    assert sorted(x for b in blocks for x in b) == items
    assert len(blocks) <= 3


@given(seeds, st.integers(1, 6))
def test_weights(seed, n):
    w = random_weights(random.Random(seed), n)
    assert sum(w) == 1 and all(x > 0 for x in w)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_models_validate(seed):
    rng = random.Random(seed)
    assert validate_frame(random_model(rng, rng.randint(1, 8)).frame).ok


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_typespaces_validate(seed):
    rng = random.Random(seed)
    assert validate_typespace(random_typespace(rng, rng.randint(1, 3), [2, 3], discrete_types=False)).ok


def test_reproducible():
    a = random_model(random.Random(5), 4)
    b = random_model(random.Random(5), 4)
    assert a.interp == b.interp and a.worlds == b.worlds


@given(seeds)
def test_formula_depth(seed):
    rng = random.Random(seed)
    f = random_formula(rng, ["p"], 2, [0, 1], 2)
    assert modal_depth(f) <= 2


def test_swap_is_not_separated():
    """Distinct beliefs, yet swapping a<->b and c<->d maps the space onto itself."""
    x = FiniteMeasurableSpace(["x"])
    t1, t2 = FiniteMeasurableSpace(["a", "b"]), FiniteMeasurableSpace(["c", "d"])
    prod = product([x, t1, t2])
    ac, bd = point_mass(prod, ("x", "a", "c")), point_mass(prod, ("x", "b", "d"))
    t = TypeSpace(x, [t1, t2], [{"a": ac, "b": bd}, {"c": ac, "d": bd}])
    assert validate_typespace(t).ok
    assert type_classes(t) == [[["a", "b"]], [["c", "d"]]]


def test_separated_classes_are_singletons():
    its = random_separated(random.Random(1), 2, [2, 2])
    assert all(len(c) == 1 for cls in type_classes(its.space) for c in cls)
