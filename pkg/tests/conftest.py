from fractions import Fraction

import pytest
from hypothesis import strategies as st

from typeframes.frames import ProbabilityFrame, ProbabilityModel
from typeframes.logic import And, Atom, Believes, Not
from typeframes.spaces import FiniteMeasurableSpace, RationalMeasure, point_mass, product
from typeframes.typespaces import InterpretedTypeSpace, TypeSpace

thresholds = st.fractions(min_value=0, max_value=1, max_denominator=12)


def formulas(vocab=("p", "q"), agents=2, max_leaves=8):
    atoms = st.sampled_from(vocab).map(Atom)

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda lr: And(*lr)),
            st.tuples(st.integers(1, agents), thresholds, children).map(lambda t: Believes(*t)),
        )

    return st.recursive(atoms, extend, max_leaves=max_leaves)


@pytest.fixture
def two_world():
    """Worlds u, v; p true at u; agent 1 uniform everywhere."""
    w = FiniteMeasurableSpace(["u", "v"])
    uni = RationalMeasure.uniform(w)
    return ProbabilityModel(ProbabilityFrame(w, [{"u": uni, "v": uni}]), {"p": ["u"]})


@pytest.fixture
def example_space():
    """X = {x1, x2}; one type per agent; agent 1 uniform, agent 2 sure of x1."""
    x = FiniteMeasurableSpace(["x1", "x2"])
    t1, t2 = FiniteMeasurableSpace(["s"]), FiniteMeasurableSpace(["t"])
    prod = product([x, t1, t2])
    b1 = RationalMeasure.from_points(prod, {("x1", "s", "t"): Fraction(1, 2), ("x2", "s", "t"): Fraction(1, 2)})
    b2 = point_mass(prod, ("x1", "s", "t"))
    return TypeSpace(x, [t1, t2], [{"s": b1}, {"t": b2}])


@pytest.fixture
def example_its(example_space):
    return InterpretedTypeSpace(example_space, {"x1": ["x1"]})
