import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typeframes.documents import dump_document, load_document, point_id, read_document, write_document
from typeframes.errors import SchemaError
from typeframes.frames import ProbabilityModel
from typeframes.generators import random_interpreted, random_model, random_typespace
from typeframes.logic import DENSE, ThresholdSet
from typeframes.spaces import FiniteMeasurableSpace
from typeframes.typespaces import InterpretedTypeSpace

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def _same_model(a: ProbabilityModel, b: ProbabilityModel):
    assert a.worlds == b.worlds and a.interp == b.interp
    for i in range(1, a.n_agents + 1):
        for w in a.worlds.carrier:
            assert a.frame.pr(i, w) == b.frame.pr(i, w)


def test_point_ids():
    assert point_id("a") == "a"
    assert point_id(("x", ("a", "b"))) == "(x,(a,b))"
    assert point_id(3) == "3"


@pytest.mark.parametrize("name", ["two_world", "swapped", "ambiguous", "example_space"])
def test_demo_files_load(name):
    doc = read_document(DATA / f"{name}.json")
    again = load_document(dump_document(doc.value, doc.thresholds))
    assert again.kind == doc.kind and again.thresholds == doc.thresholds


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_model_round_trip(seed):
    rng = random.Random(seed)
    m = random_model(rng, rng.randint(1, 6))
    doc = load_document(json.loads(json.dumps(dump_document(m))))
    _same_model(m, doc.value)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_typespace_round_trip(seed):
    rng = random.Random(seed)
    its = random_interpreted(rng, random_typespace(rng, rng.randint(1, 3), [rng.randint(1, 3)] * 2))
    back = load_document(json.loads(json.dumps(dump_document(its)))).value
    assert isinstance(back, InterpretedTypeSpace)
    assert back.space.states == its.space.states and back.space.types == its.space.types
    assert back.interp == its.interp
    for i in (1, 2):
        for u in its.space.types[i - 1].carrier:
            assert back.space.beta(i, u) == its.space.beta(i, u)


def test_family_and_space(tmp_path, two_world):
    path = tmp_path / "fam.json"
    write_document(path, [two_world, two_world], ThresholdSet.explicit([0, 1]))
    doc = read_document(path)
    assert doc.kind == "family" and len(doc.value) == 2
    assert doc.thresholds == ThresholdSet.explicit([0, 1])
    space = FiniteMeasurableSpace(["a", "b", "c"], [["a", "b"], ["c"]])
    assert load_document(dump_document(space)).value == space


BASE = {"kind": "model", "version": 1, "worlds": ["u"], "beliefs": [{"u": {"u": "1"}}], "interp": {}}


@pytest.mark.parametrize("patch", [
    {"kind": "spreadsheet"},
    {"version": 2},
    {"worlds": ["u", "u"]},
    {"beliefs": [{"u": {"u": "1/0"}}]},
    {"beliefs": [{"u": {"u": 1}}]},
    {"beliefs": [{"u": {"u": "1/2"}}]},
    {"beliefs": [{"u": {"z": "1"}}]},
    {"beliefs": [{}]},
    {"beliefs": []},
    {"thresholds": "3/2"},
    {"interp": {"p": ["z"]}},
    {"worlds": ["u", "v"], "atoms": [["u", "v"]],
     "beliefs": [{"u": {"u": "1/2", "v": "1/2"}, "v": {"u": "1"}}]},
])
def test_schema_errors(patch):
    with pytest.raises(SchemaError):
        load_document({**BASE, **patch})


def test_base_is_valid():
    doc = load_document(BASE)
    assert doc.thresholds == DENSE


def test_bad_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{nope")
    with pytest.raises(SchemaError):
        read_document(p)


def test_unserialisable():
    with pytest.raises(TypeError):
        dump_document(42)
