import random

import pytest

from typeframes.errors import NonDenseThresholds, NonSingletonStateAlgebra, StateSpaceMismatch, VocabMismatch
from typeframes.frames import ProbabilityFrame, ProbabilityModel, satisfies
from typeframes.generators import random_model, random_typespace
from typeframes.logic import ThresholdSet, parse_formula
from typeframes.spaces import FiniteMeasurableSpace, RationalMeasure
from typeframes.typespaces import validate_typespace
from typeframes.universal import (
    ModelFamily,
    UniquenessCertificate,
    check_universality,
    universal_model,
    universal_typespace,
)


def _copy(m):
    """Same model with renamed worlds."""
    ren = {w: w + "'" for w in m.worlds.carrier}
    space = FiniteMeasurableSpace(list(ren.values()))
    beliefs = [{ren[w]: RationalMeasure.from_points(space, {ren[x]: m.frame.pr(i, w)(m.worlds.event([x]))
                                                          for x in m.worlds.carrier})
                for w in m.worlds.carrier} for i in range(1, m.n_agents + 1)]
    return ProbabilityModel(ProbabilityFrame(space, beliefs),
                            {p: [ren[w] for w in pts] for p, pts in m.interp.items()})


class TestUniversalModel:
    def test_copies_collapse(self, two_world):
        res = universal_model(ModelFamily([two_world, _copy(two_world)]))
        assert len(res.model.worlds) == 2
        assert res.description_maps[0]["u"] == res.description_maps[1]["u'"]
        assert all(r.ok for r in res.truth_reports)

    def test_realises_member_descriptions(self):
        rng = random.Random(3)
        fam = ModelFamily([random_model(rng, 3), random_model(rng, 4)])
        res = universal_model(fam)
        assert all(r.ok for r in res.truth_reports)
        f = parse_formula("B{1,1/2} p & !q")
        for m, mp in zip(fam.members, res.description_maps):
            for w in m.worlds.carrier:
                assert satisfies(m, w, f) == satisfies(res.model, mp[w], f)

    def test_refusals(self, two_world):
        with pytest.raises(NonDenseThresholds):
            universal_model(ModelFamily([two_world], ThresholdSet.explicit([1])))
        other = ProbabilityModel(two_world.frame, {"q": ["u"]})
        with pytest.raises(VocabMismatch):
            ModelFamily([two_world, other])
        with pytest.raises(ValueError):
            ModelFamily([])


class TestUniversalTypeSpace:
    def test_example(self, example_space):
        res = universal_typespace(example_space.states, [example_space])
        assert res.ok
        assert validate_typespace(res.space).ok
        assert res.uniqueness_certificates[0].unique
        assert res.space.states == example_space.states

    def test_random_family(self):
        rng = random.Random(11)
        fam = [random_typespace(rng, 2, sizes, discrete_states=True) for sizes in ([2, 1], [1, 2])]
        res = universal_typespace(fam[0].states, fam)
        assert res.ok
        assert all(c.unique for c in res.uniqueness_certificates)
        assert not check_universality(res.space, fam).violations

    def test_budget_marks_certificate(self, example_space):
        res = universal_typespace(example_space.states, [example_space], budget=0)
        cert = res.uniqueness_certificates[0]
        assert not cert.exhaustive and "not certified" in cert.describe()
        assert res.ok

    def test_refusals(self, example_space):
        coarse = FiniteMeasurableSpace(["x1", "x2"], [["x1", "x2"]])
        with pytest.raises(NonSingletonStateAlgebra):
            universal_typespace(coarse, [example_space])
        with pytest.raises(StateSpaceMismatch):
            universal_typespace(FiniteMeasurableSpace(["y"]), [example_space])


def test_certificate_text():
    assert UniquenessCertificate(4, 10, 1).describe() == "unique within 4 candidates"
    assert UniquenessCertificate(4, 10, 2).describe() == "2 morphisms within 4 candidates"
    assert not UniquenessCertificate(4, 10, 0).unique
