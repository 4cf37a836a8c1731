"""Seeded random structures for tests, demos and the acceptance suite.

Every generator takes a ``random.Random`` so runs are reproducible.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .frames import ProbabilityFrame, ProbabilityModel
from .logic import And, Atom, Believes, Formula, Not
from .spaces import FiniteMeasurableSpace, RationalMeasure, product
from .typespaces import InterpretedTypeSpace, TypeSpace

__all__ = [
    "random_partition", "random_space", "random_model", "random_typespace",
    "random_interpreted", "random_separated", "type_classes", "random_formula", "random_weights",
]


def random_partition(rng: random.Random, items, max_blocks: int | None = None) -> list[list]:
    """Random set partition of ``items`` (order inside blocks follows ``items``)."""
    items = list(items)
    if not items:
        return []
    k = rng.randint(1, min(len(items), max_blocks or len(items)))
    labels = [rng.randrange(k) for _ in items]
    blocks: dict = {}
    for x, lab in zip(items, labels):
        blocks.setdefault(lab, []).append(x)
    return list(blocks.values())


def random_space(rng: random.Random, points, discrete: bool | None = None) -> FiniteMeasurableSpace:
    points = list(points)
    if discrete is None:
        discrete = rng.random() < 0.5
    if discrete:
        return FiniteMeasurableSpace(points)
    return FiniteMeasurableSpace(points, random_partition(rng, points))


def random_weights(rng: random.Random, n: int, max_weight: int = 3) -> list[Fraction]:
    """n positive rationals with sum 1, from small integer weights."""
    raw = [rng.randint(1, max_weight) for _ in range(n)]
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def _measure_on(rng, space, atom_indices, max_weight):
    k = rng.randint(1, len(atom_indices))
    support = rng.sample(list(atom_indices), k)
    return RationalMeasure(space, _vector(space, dict(zip(support, random_weights(rng, k, max_weight)))))


def _vector(space, by_index):
    return [by_index.get(k, Fraction(0)) for k in range(len(space.atoms))]


def random_model(rng: random.Random, n_worlds: int, n_agents: int = 2,
                 vocab=("p", "q"), max_weight: int = 3, discrete: bool | None = None) -> ProbabilityModel:
    """A random validated model.

    For each agent the atoms are grouped into cells; all worlds of a cell
    share one measure supported inside the cell.  Every validated model
    has this shape, with the cells being the sets of worlds sharing a
    belief.
    """
    worlds = [f"w{k}" for k in range(n_worlds)]
    space = random_space(rng, worlds, discrete)
    n_atoms = len(space.atoms)
    beliefs = []
    for _ in range(n_agents):
        prmap = {}
        for cell in random_partition(rng, range(n_atoms)):
            mu = _measure_on(rng, space, cell, max_weight)
            for k in cell:
                for w in space.atoms[k]:
                    prmap[w] = mu
        beliefs.append(prmap)
    interp = {}
    for p in vocab:
        chosen = [k for k in range(n_atoms) if rng.random() < 0.5]
        interp[p] = [w for k in chosen for w in space.atoms[k]]
    return ProbabilityModel(ProbabilityFrame(space, beliefs), interp)


def random_typespace(rng: random.Random, n_states: int, n_types, n_agents: int = 2,
                     max_weight: int = 3, discrete_states: bool | None = None,
                     discrete_types: bool | None = None) -> TypeSpace:
    """A random validated type space.

    ``n_types`` is an int or a per-agent list.  Each belief is constant on
    type atoms and puts all its mass on points whose own-type coordinate
    lies in the type's atom, so measurability and the marginal condition
    hold by construction.
    """
    if isinstance(n_types, int):
        n_types = [n_types] * n_agents
    names = "stuvwyz"
    states = random_space(rng, [f"x{k + 1}" for k in range(n_states)], discrete_states)
    types = [random_space(rng, [f"{names[i % len(names)]}{k + 1}" for k in range(n)], discrete_types)
             for i, n in enumerate(n_types)]
    prod = product([states, *types])
    beliefs = []
    for i, ti in enumerate(types, 1):
        bmap = {}
        for a, block in enumerate(ti.atoms):
            own = [k for k, atom in enumerate(prod.atoms)
                   if ti.atom_of(next(iter(atom))[i]) == a]
            mu = _measure_on(rng, prod, own, max_weight)
            for t in block:
                bmap[t] = mu
        beliefs.append(bmap)
    return TypeSpace(states, types, beliefs)


def random_interpreted(rng: random.Random, t: TypeSpace, vocab=("p", "q")) -> InterpretedTypeSpace:
    atoms = t.states.atoms
    interp = {p: [x for a in atoms if rng.random() < 0.5 for x in a] for p in vocab}
    return InterpretedTypeSpace(t, interp)


def random_separated(rng: random.Random, n_states: int, n_types, n_agents: int = 2,
                     max_weight: int = 3, tries: int = 500) -> InterpretedTypeSpace:
    """A random interpreted type space whose factoring recovers it exactly.

    States carry distinct valuations and the type space is separated in
    the sense of :func:`type_classes`.
    """
    for _ in range(tries):
        t = random_typespace(rng, n_states, n_types, n_agents, max_weight,
                             discrete_states=True, discrete_types=True)
        if all(len(c) == len(ti) for c, ti in zip(type_classes(t), t.types)):
            bits = max(1, math.ceil(math.log2(n_states))) if n_states > 1 else 1
            xs = t.states.carrier
            interp = {f"b{j}": [x for k, x in enumerate(xs) if k >> j & 1] for j in range(bits)}
            return InterpretedTypeSpace(t, interp)
    raise RuntimeError("could not draw a separated type space; loosen the sizes")


def type_classes(t: TypeSpace) -> list[list[list]]:
    """Per agent, the coarsest grouping of types such that grouped types
    give equal probability to every (state atom, type groups) cell.

    Distinct belief measures are not enough for types to be told apart:
    if swapping two types of agent 1 and two of agent 2 maps every belief
    onto another, no formula separates the swapped pairs.  Types in
    different groups here are told apart by some formula (dense
    thresholds), so a space whose groups are all singletons is recovered
    exactly by factoring.
    """
    groups = [{u: 0 for u in ti.carrier} for ti in t.types]
    while True:
        keys = []
        for i, ti in enumerate(t.types, 1):
            k = {}
            for u in ti.carrier:
                cells: dict = {}
                for a, w in t.beta(i, u).items():
                    pt = next(iter(t.product.atoms[a]))
                    cell = (t.states.atom_of(pt[0]), *(g[v] for g, v in zip(groups, pt[1:])))
                    cells[cell] = cells.get(cell, 0) + w
                k[u] = (groups[i - 1][u], frozenset(cells.items()))
            keys.append(k)
        new = []
        for k in keys:
            ids: dict = {}
            new.append({u: ids.setdefault(key, len(ids)) for u, key in k.items()})
        if all(len(set(a.values())) == len(set(b.values())) for a, b in zip(new, groups)):
            break
        groups = new
    out = []
    for ti, g in zip(t.types, groups):
        blocks: dict = {}
        for u in ti.carrier:
            blocks.setdefault(g[u], []).append(u)
        out.append(list(blocks.values()))
    return out


def random_formula(rng: random.Random, vocab, n_agents: int, thresholds, depth: int,
                   max_size: int = 12) -> Formula:
    """Random formula of modal depth at most ``depth``, roughly ``max_size`` nodes."""
    thresholds = list(thresholds)
    vocab = list(vocab)

    budget = [max_size]

    def go(d):
        budget[0] -= 1
        roll = rng.random()
        if budget[0] <= 0 or roll < 0.3:
            return Atom(rng.choice(vocab))
        if roll < 0.5:
            return Not(go(d))
        if roll < 0.8:
            if d > 0:
                return Believes(rng.randint(1, n_agents), rng.choice(thresholds), go(d - 1))
            return Atom(rng.choice(vocab))
        return And(go(d), go(d))

    return go(depth)
