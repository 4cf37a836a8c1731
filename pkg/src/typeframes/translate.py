"""Translations between type spaces and probability models.

Type space to model is direct: worlds are state-type tuples and agent i's
belief at ``(x, t)`` is ``beta_i(t_i)``.

Model to type space goes through the language.  Two worlds get the same
state when they satisfy the same purely propositional formulas, and the
same i-type when they satisfy the same Boolean combinations of
``B{i,theta}`` formulas.  On a finite model these "same description"
relations are computed as the coarsest partition that refines the
valuation classes and is stable under every belief test, instead of as
infinite formula sets.  Beliefs of a type are the image of a witness
world's measure under ``w -> (state(w), type_1(w), ..., type_n(w))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ArityMismatch, NonUniqueBeliefExtension
from .frames import (
    ModelSemantics,
    ProbabilityFrame,
    ProbabilityModel,
    ValidationReport,
    disjoint_union,
    satisfies,
    truth_set,
    validate_frame,
)
from .logic import DENSE, And, Atom, Believes, Formula, Not, ThresholdSet, evaluate
from .spaces import (
    Event,
    FiniteMeasurableSpace,
    RationalMeasure,
    generated_algebra,
    product,
    pushforward,
    threshold_separation,
)
from .typespaces import (
    InterpretedTypeSpace,
    TypeMorphism,
    TypeSpace,
    check_type_morphism,
)

__all__ = [
    "Partition", "DescriptionPartition", "FactoredTypeSpace", "Witness", "RoundTrip",
    "typespace_to_frame", "interpreted_to_model", "description_partition", "describes",
    "witness_merge", "check_witness_merge", "model_to_typespace", "event_of_formula",
    "generator_event", "event_semantics", "align_states", "round_trip",
]


@dataclass(frozen=True)
class Witness:
    """Extra world added by witness constructions; ``tag`` says what it realises."""
    tag: tuple

    def __str__(self):
        return "*" + self.tag[0] + "(" + ",".join(map(str, self.tag[1:])) + ")"

    def __repr__(self):
        return f"Witness({self.tag!r})"


class Partition:
    """Partition of an ordered carrier; blocks ordered by their first member."""

    def __init__(self, carrier: Sequence, groups):
        order = {w: k for k, w in enumerate(carrier)}
        blocks = [tuple(sorted(g, key=order.__getitem__)) for g in groups if g]
        blocks.sort(key=lambda b: order[b[0]])
        self.carrier = tuple(carrier)
        self.blocks: tuple[tuple, ...] = tuple(blocks)
        self._index = {w: k for k, b in enumerate(self.blocks) for w in b}

    def block_of(self, w) -> int:
        return self._index[w]

    def class_id(self, w) -> tuple:
        """Canonical id of w's block: its members in carrier order."""
        return self.blocks[self._index[w]]

    def same(self, a, b) -> bool:
        return self._index[a] == self._index[b]

    def refines(self, other: "Partition") -> bool:
        return all(len({other.block_of(w) for w in b}) == 1 for b in self.blocks)

    def as_sets(self) -> frozenset:
        return frozenset(frozenset(b) for b in self.blocks)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.as_sets() == other.as_sets()

    def __hash__(self):
        return hash(self.as_sets())

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return f"Partition({[list(b) for b in self.blocks]!r})"


@dataclass
class DescriptionPartition:
    model: ProbabilityModel
    thresholds: ThresholdSet
    zero: Partition
    full: Partition
    agents: tuple[Partition, ...]


# ------------------------------------------------------------ easy direction

def typespace_to_frame(t: TypeSpace) -> ProbabilityFrame:
    """Worlds are points of X x T; agent i believes ``beta_i(t_i)`` at ``(x, t)``."""
    beliefs = [{pt: t.beta(i, pt[i]) for pt in t.product.carrier}
               for i in range(1, t.n_agents + 1)]
    return ProbabilityFrame(t.product, beliefs)


def interpreted_to_model(its: InterpretedTypeSpace) -> ProbabilityModel:
    frame = typespace_to_frame(its.space)
    interp = {p: [pt for pt in frame.worlds.carrier if pt[0] in xs] for p, xs in its.interp.items()}
    return ProbabilityModel(frame, interp)


# ------------------------------------------------------------- descriptions

def _group(items, key=None, same=None):
    """Group items by hashable key, or by an equivalence predicate on representatives."""
    if key is not None:
        groups: dict = {}
        for w in items:
            groups.setdefault(key(w), []).append(w)
        return list(groups.values())
    reps: list[list] = []
    for w in items:
        for g in reps:
            if same(g[0], w):
                g.append(w)
                break
        else:
            reps.append([w])
    return reps


def _block_vectors(model: ProbabilityModel, partition: Partition):
    """Per agent: world -> tuple of probabilities of each block."""
    idx = [model.worlds.atom_indices(b) for b in partition.blocks]
    out = []
    for prmap in model.frame.beliefs:
        cache: dict = {}
        vecs = {}
        for w, mu in prmap.items():
            v = cache.get(id(mu))
            if v is None:
                v = cache[id(mu)] = tuple(mu.weight_of(ix) for ix in idx)
            vecs[w] = v
        out.append(vecs)
    return out


def _equivalence(thresholds: ThresholdSet):
    """Key function or predicate telling when two block vectors pass the same tests."""
    if thresholds.is_dense:
        return (lambda v: v), None
    thetas = thresholds.values
    if thetas == (Fraction(1),):
        # mu(U) >= 1 iff the support lies inside U
        return (lambda v: frozenset(k for k, x in enumerate(v) if x)), None
    return None, (lambda u, v: threshold_separation(u, v, thetas) is None)


def description_partition(m: ProbabilityModel, thresholds: ThresholdSet = DENSE) -> DescriptionPartition:
    """Same-description classes: full, propositional, and per agent.

    Starts from the valuation classes and splits blocks until every block
    is stable: for each agent and each union U of blocks, whether
    ``Pr_i(w)(U) >= theta`` holds does not vary inside a block, for every
    threshold in the set (dense: the block probabilities coincide).
    """
    carrier = m.worlds.carrier
    zero = Partition(carrier, _group(carrier, key=m.valuation))
    keyf, samef = _equivalence(thresholds)
    full = zero
    while True:
        vecs = _block_vectors(m, full)
        new_groups = []
        for block in full.blocks:
            if keyf is not None:
                groups = _group(block, key=lambda w: tuple(keyf(vs[w]) for vs in vecs))
            else:
                groups = _group(block, same=lambda a, b: all(samef(vs[a], vs[b]) for vs in vecs))
            new_groups.extend(groups)
        refined = Partition(carrier, new_groups)
        if len(refined) == len(full):
            break
        full = refined
    vecs = _block_vectors(m, full)
    agents = []
    for vs in vecs:
        if keyf is not None:
            groups = _group(carrier, key=lambda w, vs=vs: keyf(vs[w]))
        else:
            groups = _group(carrier, same=lambda a, b, vs=vs: samef(vs[a], vs[b]))
        agents.append(Partition(carrier, groups))
    dp = DescriptionPartition(m, thresholds, zero, full, tuple(agents))
    _check_invariants(dp)
    return dp


def _check_invariants(dp: DescriptionPartition):
    full = dp.full
    assert full.refines(dp.zero)
    for part in dp.agents:
        assert full.refines(part)
    # the full description is fixed by the propositional and agent parts
    meet = {(dp.zero.block_of(w), *(a.block_of(w) for a in dp.agents)) for w in full.carrier}
    assert len(meet) == len(full)
    for b in full.blocks:
        Event(dp.model.worlds, b)


def describes(m: ProbabilityModel, w, f: Formula) -> bool:
    """Whether ``f`` belongs to the description of world ``w``."""
    return satisfies(m, w, f)


# ---------------------------------------------------------- witness merging

def _lift(mu: RationalMeasure, space: FiniteMeasurableSpace, place) -> RationalMeasure:
    return RationalMeasure.from_points(
        space, {place(next(iter(mu.space.atoms[k]))): w for k, w in mu.items()})


def witness_merge(m: ProbabilityModel, targets: Sequence) -> tuple[ProbabilityModel, Witness]:
    """n disjoint copies of ``m`` plus one world ``star``.

    ``star`` has the atomic facts of ``targets[0]``, and agent i at ``star``
    holds the copy-i image of agent i's belief at ``targets[i]``.  So
    ``star`` shares the propositional description of ``targets[0]`` and the
    i-description of ``targets[i]``.
    """
    n = m.n_agents
    targets = tuple(targets)
    if len(targets) != n + 1:
        raise ArityMismatch(f"need {n + 1} target worlds for {n} agents, got {len(targets)}")
    for w in targets:
        m.worlds.atom_of(w)
    star = Witness(("merge", *targets))
    copies = range(1, n + 1)
    carrier = [(w, j) for j in copies for w in m.worlds.carrier] + [star]
    atoms = [[(w, j) for w in a] for j in copies for a in m.worlds.atoms] + [[star]]
    space = FiniteMeasurableSpace(carrier, atoms)
    beliefs = []
    for i in range(1, n + 1):
        prmap = {}
        for j in copies:
            cache: dict = {}
            for w in m.worlds.carrier:
                mu = m.frame.pr(i, w)
                if id(mu) not in cache:
                    cache[id(mu)] = _lift(mu, space, lambda x, j=j: (x, j))
                prmap[(w, j)] = cache[id(mu)]
        prmap[star] = _lift(m.frame.pr(i, targets[i]), space, lambda x, i=i: (x, i))
        beliefs.append(prmap)
    interp = {}
    for p, pts in m.interp.items():
        members = [(w, j) for j in copies for w in m.worlds.carrier if w in pts]
        if targets[0] in pts:
            members.append(star)
        interp[p] = members
    return ProbabilityModel(ProbabilityFrame(space, beliefs), interp), star


def check_witness_merge(m: ProbabilityModel, targets: Sequence,
                        thresholds: ThresholdSet = DENSE) -> ValidationReport:
    """Merge, then check the result validates and ``star`` carries the right
    partial descriptions (compared inside the disjoint union of both models)."""
    merged, star = witness_merge(m, targets)
    report = validate_frame(merged.frame, thresholds)
    union = disjoint_union([m, merged])
    dp = description_partition(union, thresholds)
    if not dp.zero.same((1, star), (0, targets[0])):
        report.add("witness-propositional", world=targets[0])
    for i, part in enumerate(dp.agents, 1):
        if not part.same((1, star), (0, targets[i])):
            report.add("witness-agent", i, world=targets[i])
    return report


# ---------------------------------------------------------------- factoring

@dataclass
class FactoredTypeSpace:
    """Type space read off a model, with the world-to-profile correspondence."""
    result: InterpretedTypeSpace
    model: ProbabilityModel
    thresholds: ThresholdSet
    partition: DescriptionPartition
    state_of_world: dict
    type_of_world: tuple[dict, ...]
    state_witness: dict
    type_witness: tuple[dict, ...]
    event_index: dict = field(default_factory=dict)
    _extension: tuple | None = field(default=None, repr=False)

    @property
    def space(self) -> TypeSpace:
        return self.result.space

    def profile_of(self, w) -> tuple:
        """``(state, type_1, ..., type_n)`` of world w."""
        return (self.state_of_world[w], *(tw[w] for tw in self.type_of_world))


def _separating_generators(points, vectors, thresholds):
    """Sets ``{t : mu_t(U) >= theta}`` for a separating (U, theta) of each pair."""
    thetas = None if thresholds.is_dense else thresholds.values
    gens = []
    pts = list(points)
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            sep = threshold_separation(vectors[pts[a]], vectors[pts[b]], thetas)
            if sep is None:
                continue
            blocks, theta = sep
            gens.append(frozenset(t for t in pts if sum(vectors[t][k] for k in blocks) >= theta))
    return gens


def model_to_typespace(m: ProbabilityModel, thresholds: ThresholdSet = DENSE) -> FactoredTypeSpace:
    """Factor worlds into states (propositional classes) and i-types (agent classes).

    Raises NonUniqueBeliefExtension when two worlds of one i-type induce
    different measures on X x T, which can only happen for a non-dense
    threshold set.
    """
    dp = description_partition(m, thresholds)
    carrier = m.worlds.carrier
    state_of = {w: dp.zero.class_id(w) for w in carrier}
    x_points = list(dp.zero.blocks)
    state_witness = {x: x[0] for x in x_points}
    vocab = sorted(m.interp)
    x_space = generated_algebra(
        x_points, [[x for x in x_points if x[0] in m.interp[p]] for p in vocab])
    assert x_space.is_discrete or len(x_points) == 1

    vecs = _block_vectors(m, dp.full)
    types, type_of, type_witness = [], [], []
    for part, vs in zip(dp.agents, vecs):
        t_points = list(part.blocks)
        t_vectors = {t: vs[t[0]] for t in t_points}
        t_space = generated_algebra(t_points, _separating_generators(t_points, t_vectors, thresholds))
        assert t_space.is_discrete
        types.append(t_space)
        type_of.append({w: part.class_id(w) for w in carrier})
        type_witness.append({t: t[0] for t in t_points})

    def profile(w):
        return (state_of[w], *(tw[w] for tw in type_of))

    prod_space = product([x_space, *types])
    beliefs = []
    for i, (part, t_space) in enumerate(zip(dp.agents, types), 1):
        bmap = {}
        for t in t_space.carrier:
            candidates = []
            for w in t:
                mu = pushforward(m.frame.pr(i, w), profile, prod_space)
                if mu not in candidates:
                    candidates.append(mu)
            if len(candidates) > 1:
                if thresholds.is_dense:
                    raise AssertionError("dense descriptions must fix a unique belief")
                raise NonUniqueBeliefExtension(i, t, candidates[:2])
            bmap[t] = candidates[0]
        beliefs.append(bmap)
    space = TypeSpace(x_space, types, beliefs)
    nu = {p: [x for x in x_points if x[0] in m.interp[p]] for p in vocab}
    return FactoredTypeSpace(
        result=InterpretedTypeSpace(space, nu), model=m, thresholds=thresholds, partition=dp,
        state_of_world=state_of, type_of_world=tuple(type_of),
        state_witness=state_witness, type_witness=tuple(type_witness))


# ------------------------------------------------------------ formula events

class _ExtensionSemantics:
    """Truth sets over the model extended by one world per product point.

    The world for ``(x, t_1, ..., t_n)`` has the atomic facts of a world in
    class x and, for each agent i, the belief of a world in class t_i.  No
    original world puts mass on the added worlds, so truth at original worlds
    is unchanged, and truth at an added world is truth at the distinguished
    world of the corresponding witness merge (the copies there are isomorphic
    to the model itself).  Values are pairs (original worlds, product points).
    """

    def __init__(self, fts: FactoredTypeSpace):
        self.fts = fts
        self.base = ModelSemantics(fts.model)
        self.points = frozenset(fts.space.product.carrier)
        self.universe = (self.base.universe, self.points)

    def atom(self, name):
        worlds = self.base.atom(name)
        sw = self.fts.state_witness
        return worlds, frozenset(pt for pt in self.points if sw[pt[0]] in worlds)

    def neg(self, v):
        return self.base.universe - v[0], self.points - v[1]

    def conj(self, v, w):
        return v[0] & w[0], v[1] & w[1]

    def believes(self, i, theta, v):
        worlds = self.base.believes(i, theta, v[0])
        tw = self.fts.type_witness[i - 1]
        return worlds, frozenset(pt for pt in self.points if tw[pt[i]] in worlds)


def event_semantics(fts: FactoredTypeSpace) -> _ExtensionSemantics:
    return _ExtensionSemantics(fts)


def event_of_formula(fts: FactoredTypeSpace, f: Formula) -> Event:
    """``[f]``: product points whose induced description contains ``f``."""
    hit = fts.event_index.get(f)
    if hit is None:
        truth_set(fts.model, f)  # vocabulary and agent checks
        worlds_pts = evaluate(f, _ExtensionSemantics(fts))
        hit = fts.event_index[f] = Event(fts.space.product, worlds_pts[1])
    return hit


def generator_event(fts: FactoredTypeSpace, f: Formula) -> Event:
    """``[f]`` assembled from the generating sets ``E_0(p) x T`` and
    ``X x E_i(B{i,theta} psi) x T_-i`` by Boolean operations."""
    prod = fts.space.product
    m = fts.model

    def go(g):
        if isinstance(g, Atom):
            e0 = {x for x, w in fts.state_witness.items() if w in m.interp[g.name]}
            return frozenset(pt for pt in prod.carrier if pt[0] in e0)
        if isinstance(g, Not):
            return frozenset(prod.carrier) - go(g.arg)
        if isinstance(g, And):
            return go(g.left) & go(g.right)
        if isinstance(g, Believes):
            holds = truth_set(m, g).points
            ei = {t for t, w in fts.type_witness[g.agent - 1].items() if w in holds}
            return fts.space.points_with_type(g.agent, ei)
        raise TypeError(f"not a formula: {g!r}")

    truth_set(m, f)
    return Event(prod, go(f))


# ---------------------------------------------------------------- round trip

def align_states(t: TypeSpace, mapping: Mapping, states: FiniteMeasurableSpace) -> TypeSpace:
    """Rename the states of ``t`` along a bijection onto ``states``."""
    types = list(t.types)
    prod = product([states, *types])

    def rename(pt):
        return (mapping[pt[0]], *pt[1:])

    beliefs = [{ti: pushforward(mu, rename, prod) for ti, mu in bmap.items()} for bmap in t.beliefs]
    return TypeSpace(states, types, beliefs)


@dataclass
class RoundTrip:
    original: InterpretedTypeSpace
    factored: FactoredTypeSpace
    aligned: TypeSpace
    morphism: TypeMorphism
    report: ValidationReport

    @property
    def bijective(self) -> bool:
        return self.report.ok and self.morphism.is_bijective(self.original.space, self.aligned)


def round_trip(its: InterpretedTypeSpace, thresholds: ThresholdSet = DENSE) -> RoundTrip:
    """Type space to model and back, with the comparison morphism.

    States of the factored space are renamed back onto X, which needs every
    state class to contain worlds of a single original state.
    """
    src = its.space
    fts = model_to_typespace(interpreted_to_model(its), thresholds)
    back = {}
    for x_class in fts.space.states.carrier:
        origin = {w[0] for w in x_class}
        if len(origin) != 1:
            raise ValueError(f"states {sorted(map(repr, origin))} share a valuation")
        back[x_class] = origin.pop()
    if set(back.values()) != set(src.states.carrier):
        raise ValueError("factoring lost a state")
    aligned = align_states(fts.space, back, src.states)
    maps = []
    for i, ti in enumerate(src.types, 1):
        tw = fts.type_of_world[i - 1]
        fi = {}
        for t in ti.carrier:
            w = next(pt for pt in src.product.carrier if pt[i] == t)
            fi[t] = tw[w]
        maps.append(fi)
    morphism = TypeMorphism(maps)
    report = check_type_morphism(src, aligned, morphism)
    return RoundTrip(its, fts, aligned, morphism, report)
