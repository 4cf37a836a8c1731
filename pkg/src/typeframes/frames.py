"""Probability frames and models on finite carriers.

A frame assigns each agent a map from worlds to probability measures on the
worlds; a model adds an interpretation of primitive propositions as events.
The two defining conditions (measurability of each belief map and
introspection stated with outer measure) are not enforced at construction;
:func:`validate_frame` checks them and reports every violation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import VocabMismatch
from .logic import DENSE, Formula, ThresholdSet, agents_of, atoms_of, enumerate_semantics, evaluate
from .spaces import (
    Event,
    FiniteMeasurableSpace,
    RationalMeasure,
    outer_measure,
    threshold_preimage,
    threshold_separation,
)

__all__ = [
    "ProbabilityFrame", "ProbabilityModel", "Violation", "ValidationReport", "ModelSemantics",
    "validate_frame", "validate_model", "truth_set", "satisfies", "is_valid_in", "is_satisfiable_in",
    "disjoint_union", "check_truth_preservation", "is_isomorphism", "check_belief_map",
    "achieved_values", "JointSemantics",
]


@dataclass
class Violation:
    condition: str
    agent: int | None = None
    data: dict = field(default_factory=dict)

    def __str__(self):
        who = "" if self.agent is None else f" agent {self.agent}"
        details = ", ".join(f"{k}={v}" for k, v in self.data.items())
        return f"{self.condition}{who}: {details}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, condition, agent=None, **data):
        self.violations.append(Violation(condition, agent, data))

    def extend(self, other: "ValidationReport"):
        self.violations.extend(other.violations)
        return self

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}


def _align(mu: RationalMeasure, space: FiniteMeasurableSpace) -> RationalMeasure:
    if mu.space is space:
        return mu
    if mu.space != space:
        raise ValueError("belief measure is not defined on the world space")
    if mu.space.atoms == space.atoms:
        return RationalMeasure(space, mu.weights)
    weights = mu.by_atom()
    return RationalMeasure(space, [weights.get(a, 0) for a in space.atoms])


class ProbabilityFrame:
    """Worlds plus one belief map ``world -> RationalMeasure`` per agent.

    Agents are numbered from 1; ``beliefs[i - 1]`` is agent i's map.
    """

    def __init__(self, worlds: FiniteMeasurableSpace, beliefs: Sequence[Mapping[Hashable, RationalMeasure]]):
        self.worlds = worlds
        maps = []
        for i, prmap in enumerate(beliefs, 1):
            missing = [w for w in worlds.carrier if w not in prmap]
            if missing:
                raise ValueError(f"agent {i}: no belief at worlds {missing[:3]!r}")
            maps.append({w: _align(prmap[w], worlds) for w in worlds.carrier})
        self.beliefs = tuple(maps)

    @property
    def n_agents(self) -> int:
        return len(self.beliefs)

    def pr(self, i: int, w) -> RationalMeasure:
        return self.beliefs[i - 1][w]

    def __repr__(self):
        return f"ProbabilityFrame({len(self.worlds)} worlds, {self.n_agents} agents)"


class ProbabilityModel:
    """A frame plus an interpretation ``atom name -> set of worlds``.

    Every interpreted set must be measurable.
    """

    def __init__(self, frame: ProbabilityFrame, interp: Mapping[str, Iterable]):
        self.frame = frame
        self.interp = {p: Event(frame.worlds, pts).points for p, pts in interp.items()}

    @property
    def worlds(self) -> FiniteMeasurableSpace:
        return self.frame.worlds

    @property
    def vocab(self) -> tuple[str, ...]:
        return tuple(sorted(self.interp))

    @property
    def n_agents(self) -> int:
        return self.frame.n_agents

    def valuation(self, w) -> frozenset:
        return frozenset(p for p, pts in self.interp.items() if w in pts)

    def __repr__(self):
        return f"ProbabilityModel({len(self.worlds)} worlds, {self.n_agents} agents, vocab={list(self.vocab)})"


class ModelSemantics:
    """Truth-set algebra of a model, on frozensets of worlds."""

    def __init__(self, model: ProbabilityModel):
        self.model = model
        self.universe = frozenset(model.worlds.carrier)

    def atom(self, name):
        try:
            return self.model.interp[name]
        except KeyError:
            raise VocabMismatch(f"atom {name!r} is not interpreted in this model") from None

    def neg(self, v):
        return self.universe - v

    def conj(self, v, w):
        return v & w

    def believes(self, i, theta, v):
        if not 1 <= i <= self.model.n_agents:
            raise VocabMismatch(f"agent {i} not among 1..{self.model.n_agents}")
        return threshold_preimage(self.model.frame.beliefs[i - 1], v, theta)


# --------------------------------------------------------------- validation

def check_belief_map(prmap: Mapping, domain: FiniteMeasurableSpace, thresholds: ThresholdSet,
                     agent: int, report: ValidationReport, label="measurability"):
    """Record points of one atom of ``domain`` that some (event, threshold) test
    tells apart; that is exactly when some preimage splits the atom."""
    thetas = None if thresholds.is_dense else thresholds.values
    for block in domain.atoms:
        members = [w for w in domain.carrier if w in block]
        ref = members[0]
        ref_mu = prmap[ref]
        for w in members[1:]:
            mu = prmap[w]
            if mu == ref_mu:
                continue
            sep = threshold_separation(ref_mu.weights, mu.weights, thetas)
            if sep is None:
                continue
            blocks, theta = sep
            event = ref_mu.space.union_of(blocks)
            report.add(label, agent, point=ref, other=w, event=event, theta=theta,
                       values=(ref_mu.weight_of(blocks), mu.weight_of(blocks)))


def validate_frame(frame: ProbabilityFrame, thresholds: ThresholdSet = DENSE) -> ValidationReport:
    """Check measurability and introspection of every belief map.

    Measurability: every preimage ``{w : Pr_i(w)(E) >= theta}`` must be a
    union of atoms.  Thresholds range over the explicit set, or over all of
    [0, 1] in dense mode (only achieved values matter there).
    Introspection: ``Pr_i(w)`` gives outer measure 1 to the set of worlds
    where agent i holds exactly the measure ``Pr_i(w)``.
    """
    report = ValidationReport()
    for i, prmap in enumerate(frame.beliefs, 1):
        check_belief_map(prmap, frame.worlds, thresholds, i, report)
        fibers: dict[RationalMeasure, set] = {}
        for w, mu in prmap.items():
            fibers.setdefault(mu, set()).add(w)
        for w in frame.worlds.carrier:
            mu = prmap[w]
            value = outer_measure(mu, fibers[mu])
            if value != 1:
                report.add("introspection", i, world=w, outer_measure=value)
    return report


def validate_model(model: ProbabilityModel, thresholds: ThresholdSet = DENSE) -> ValidationReport:
    return validate_frame(model.frame, thresholds)


# ---------------------------------------------------------------- semantics

def _check_formula(model, f):
    missing = atoms_of(f) - model.interp.keys()
    if missing:
        raise VocabMismatch(f"atoms {sorted(missing)} not in model vocabulary")
    bad = [i for i in agents_of(f) if not 1 <= i <= model.n_agents]
    if bad:
        raise VocabMismatch(f"agents {sorted(bad)} not among 1..{model.n_agents}")


def truth_set(m: ProbabilityModel, f: Formula) -> Event:
    _check_formula(m, f)
    points = evaluate(f, ModelSemantics(m))
    # raises if some truth set splits an atom, which validated frames rule out
    return Event(m.worlds, points)


def satisfies(m: ProbabilityModel, w, f: Formula) -> bool:
    return w in truth_set(m, f)


def is_valid_in(m: ProbabilityModel, f: Formula) -> bool:
    return len(truth_set(m, f)) == len(m.worlds)


def is_satisfiable_in(m: ProbabilityModel, f: Formula) -> bool:
    return len(truth_set(m, f)) > 0


# ------------------------------------------------------------ constructions

def disjoint_union(models: Sequence[ProbabilityModel]) -> ProbabilityModel:
    """Tagged union: world ``w`` of member ``k`` becomes ``(k, w)``."""
    if not models:
        raise ValueError("need at least one model")
    vocab = set(models[0].interp)
    n = models[0].n_agents
    for m in models[1:]:
        if set(m.interp) != vocab:
            raise VocabMismatch("members interpret different vocabularies")
        if m.n_agents != n:
            raise VocabMismatch("members have different agent counts")
    carrier = [(k, w) for k, m in enumerate(models) for w in m.worlds.carrier]
    atoms = [[(k, w) for w in a] for k, m in enumerate(models) for a in m.worlds.atoms]
    space = FiniteMeasurableSpace(carrier, atoms)
    beliefs = []
    for i in range(1, n + 1):
        prmap = {}
        for k, m in enumerate(models):
            cache = {}
            for w in m.worlds.carrier:
                mu = m.frame.pr(i, w)
                lifted = cache.get(id(mu))
                if lifted is None:
                    lifted = cache[id(mu)] = RationalMeasure.from_points(
                        space, {(k, next(iter(m.worlds.atoms[a]))): wt for a, wt in mu.items()})
                prmap[(k, w)] = lifted
        beliefs.append(prmap)
    interp = {p: [(k, w) for k, m in enumerate(models) for w in m.interp[p]] for p in vocab}
    return ProbabilityModel(ProbabilityFrame(space, beliefs), interp)


def check_truth_preservation(src: ProbabilityModel, dst: ProbabilityModel, mapping: Mapping,
                             thresholds, max_depth: int = 3, max_size: int = 7) -> ValidationReport:
    """Check ``w in [[phi]]_src <=> mapping[w] in [[phi]]_dst`` for every formula
    within the bounds (explicit ``thresholds`` drive the enumeration)."""
    sem = JointSemantics(ModelSemantics(src), ModelSemantics(dst))
    values = enumerate_semantics(sem, sorted(src.interp), src.n_agents, thresholds, max_depth, max_size)
    report = ValidationReport()
    for (a, b), f in values.items():
        for w in src.worlds.carrier:
            if (w in a) != (mapping[w] in b):
                report.add("truth-preservation", world=w, image=mapping[w], formula=str(f))
                break
    return report


class JointSemantics:
    """Evaluate in several semantics at once; values are tuples."""

    def __init__(self, *parts):
        self.parts = parts

    def atom(self, name):
        return tuple(p.atom(name) for p in self.parts)

    def neg(self, v):
        return tuple(p.neg(x) for p, x in zip(self.parts, v))

    def conj(self, v, w):
        return tuple(p.conj(x, y) for p, x, y in zip(self.parts, v, w))

    def believes(self, i, theta, v):
        return tuple(p.believes(i, theta, x) for p, x in zip(self.parts, v))


def is_isomorphism(m1: ProbabilityModel, m2: ProbabilityModel, mapping: Mapping) -> bool:
    """``mapping`` is a world bijection carrying atoms, beliefs and interpretation."""
    w1, w2 = m1.worlds, m2.worlds
    if set(mapping) != set(w1.carrier) or set(mapping.values()) != set(w2.carrier):
        return False
    if len(set(mapping.values())) != len(w1.carrier):
        return False
    if {frozenset(mapping[x] for x in a) for a in w1.atoms} != set(w2.atoms):
        return False
    if set(m1.interp) != set(m2.interp) or m1.n_agents != m2.n_agents:
        return False
    for p, pts in m1.interp.items():
        if frozenset(mapping[x] for x in pts) != m2.interp[p]:
            return False
    for i in range(1, m1.n_agents + 1):
        for w in w1.carrier:
            mu, nu = m1.frame.pr(i, w), m2.frame.pr(i, mapping[w])
            image = {frozenset(mapping[x] for x in w1.atoms[a]): wt for a, wt in mu.items()}
            if image != nu.by_atom():
                return False
    return True


def achieved_values(model: ProbabilityModel) -> list[Fraction]:
    """Every value ``Pr_i(w)(E)``: a finite stand-in for the dense threshold
    set, since truth sets only change at achieved values."""
    out = {Fraction(0), Fraction(1)}
    for prmap in model.frame.beliefs:
        for mu in set(prmap.values()):
            sums = {Fraction(0)}
            for _, wt in mu.items():
                sums |= {s + wt for s in sums}
            out |= sums
    return sorted(out)
