"""Universal objects relative to a finite family.

The universal model of a family is the disjoint union of its members with
description-equivalent worlds identified.  It realises exactly the
descriptions some member realises, and the quotient map of every member is
truth preserving.  Factoring that model over the state vocabulary gives a
type space that receives a unique type morphism from every member.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import frames
from .errors import NonDenseThresholds, NonSingletonStateAlgebra, StateSpaceMismatch, VocabMismatch
from .frames import ProbabilityFrame, ProbabilityModel, ValidationReport, achieved_values, check_truth_preservation
from .logic import DENSE, ThresholdSet
from .spaces import FiniteMeasurableSpace, pushforward
from .translate import (
    FactoredTypeSpace,
    align_states,
    description_partition,
    interpreted_to_model,
    model_to_typespace,
)
from .typespaces import (
    InterpretedTypeSpace,
    TypeMorphism,
    TypeSpace,
    check_type_morphism,
    find_type_morphisms,
    morphism_search_space,
)

__all__ = [
    "ModelFamily", "UniversalModelResult", "UniversalTypeSpaceResult", "UniquenessCertificate",
    "disjoint_union", "universal_model", "universal_typespace", "check_universality",
]


@dataclass
class ModelFamily:
    members: list[ProbabilityModel]
    thresholds: ThresholdSet = DENSE

    def __post_init__(self):
        self.members = list(self.members)
        if not self.members:
            raise ValueError("a family needs at least one member")
        first = self.members[0]
        for m in self.members[1:]:
            if set(m.interp) != set(first.interp):
                raise VocabMismatch("family members interpret different vocabularies")
            if m.n_agents != first.n_agents:
                raise VocabMismatch("family members have different agent counts")

    def __len__(self):
        return len(self.members)


@dataclass
class UniversalModelResult:
    model: ProbabilityModel
    description_maps: list[dict]
    union: ProbabilityModel
    truth_reports: list[ValidationReport] = field(default_factory=list)


@dataclass(frozen=True)
class UniquenessCertificate:
    """Evidence from exhaustive search: how many morphisms exist into the target."""
    search_space: int
    budget: int
    count: int | None

    @property
    def exhaustive(self) -> bool:
        return self.count is not None

    @property
    def unique(self) -> bool:
        return self.count == 1

    def describe(self) -> str:
        if not self.exhaustive:
            return f"not certified: {self.search_space} candidates exceed budget {self.budget}"
        if self.unique:
            return f"unique within {self.search_space} candidates"
        return f"{self.count} morphisms within {self.search_space} candidates"


@dataclass
class UniversalTypeSpaceResult:
    space: TypeSpace
    morphisms: list[TypeMorphism]
    uniqueness_certificates: list[UniquenessCertificate]
    reports: list[ValidationReport]
    model_result: UniversalModelResult
    factored: FactoredTypeSpace

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports) and all(
            c.unique for c in self.uniqueness_certificates if c.exhaustive)


def disjoint_union(fam: ModelFamily) -> ProbabilityModel:
    return frames.disjoint_union(fam.members)


def universal_model(fam: ModelFamily, verify_depth: int = 3, verify_size: int = 7) -> UniversalModelResult:
    """Quotient the family's union by its description partition.

    Each description map is checked for truth preservation over formulas
    within the given bounds, with thresholds taken from the values the
    models actually achieve (set ``verify_depth`` to -1 to skip).
    """
    if not fam.thresholds.is_dense:
        raise NonDenseThresholds("universal models are built for the dense threshold set only")
    union = disjoint_union(fam)
    dp = description_partition(union, DENSE)
    blocks = list(dp.full.blocks)
    space = FiniteMeasurableSpace(blocks, [[b] for b in blocks])
    cls = dp.full.class_id
    beliefs = [{b: pushforward(union.frame.pr(i, b[0]), cls, space) for b in blocks}
               for i in range(1, union.n_agents + 1)]
    interp = {p: [b for b in blocks if b[0] in pts] for p, pts in union.interp.items()}
    model = ProbabilityModel(ProbabilityFrame(space, beliefs), interp)
    maps = [{w: cls((k, w)) for w in m.worlds.carrier} for k, m in enumerate(fam.members)]
    result = UniversalModelResult(model, maps, union)
    if verify_depth >= 0:
        thetas = ThresholdSet.explicit(achieved_values(union))
        for m, mp in zip(fam.members, maps):
            result.truth_reports.append(
                check_truth_preservation(m, model, mp, thetas, verify_depth, verify_size))
    return result


def _state_names(x: FiniteMeasurableSpace) -> dict:
    names = {s: str(s) for s in x.carrier}
    if len(set(names.values())) != len(names):
        names = {s: repr(s) for s in x.carrier}
    if len(set(names.values())) != len(names):
        names = {s: f"x{k}" for k, s in enumerate(x.carrier)}
    return names


def universal_typespace(x: FiniteMeasurableSpace, fam: Sequence[TypeSpace],
                        budget: int = 10**6) -> UniversalTypeSpaceResult:
    """Universal type space for a finite family over a common state space.

    Each state x becomes an atom true exactly at x, the members become
    models, their universal model is factored back into a type space, and
    its states are renamed onto ``x``.  The morphism of a member sends a
    type to the type class of any world realising it.  Uniqueness is
    certified by exhaustive search when the search space fits the budget;
    otherwise the certificate is marked non-exhaustive.
    """
    if not all(len(a) == 1 for a in x.atoms):
        raise NonSingletonStateAlgebra("the state algebra must be generated by singletons")
    fam = list(fam)
    if not fam:
        raise ValueError("need at least one type space")
    for t in fam:
        if t.states != x:
            raise StateSpaceMismatch("every member must use the given state space")
    names = _state_names(x)
    models = [interpreted_to_model(InterpretedTypeSpace(t, {names[s]: [s] for s in x.carrier}))
              for t in fam]
    um = universal_model(ModelFamily(models, DENSE), verify_depth=-1)
    fts = model_to_typespace(um.model, DENSE)
    back = {}
    for x_class in fts.space.states.carrier:
        true_atoms = [p for p in um.model.vocab if x_class[0] in um.model.interp[p]]
        assert len(true_atoms) == 1, "state atoms must partition the worlds"
        back[x_class] = next(s for s in x.carrier if names[s] == true_atoms[0])
    assert len(set(back.values())) == len(back) == len(x)
    star = align_states(fts.space, back, x)

    morphisms, reports, certs = [], [], []
    for k, t in enumerate(fam):
        dmap = um.description_maps[k]
        maps = []
        for i, ti in enumerate(t.types, 1):
            tw = fts.type_of_world[i - 1]
            fi = {}
            for u in ti.carrier:
                w = next(pt for pt in t.product.carrier if pt[i] == u)
                fi[u] = tw[dmap[w]]
            maps.append(fi)
        mor = TypeMorphism(maps)
        morphisms.append(mor)
        reports.append(check_type_morphism(t, star, mor))
        size = morphism_search_space(t, star)
        count = len(find_type_morphisms(t, star, budget)) if size <= budget else None
        certs.append(UniquenessCertificate(size, budget, count))
    return UniversalTypeSpaceResult(star, morphisms, certs, reports, um, fts)


def check_universality(candidate: TypeSpace, fam: Sequence[TypeSpace], budget: int = 10**6) -> ValidationReport:
    """Existence and uniqueness of a type morphism from each member into ``candidate``."""
    report = ValidationReport()
    for k, t in enumerate(fam):
        found = find_type_morphisms(t, candidate, budget)
        if not found:
            report.add("existence", member=k)
        elif len(found) > 1:
            report.add("uniqueness", member=k, count=len(found), morphisms=found[:2])
    return report
