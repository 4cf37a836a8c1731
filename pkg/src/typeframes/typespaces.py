"""Harsanyi type spaces, their semantics, and type morphisms.

A type space has a state space X, one type space T_i per agent, and belief
maps ``beta_i: T_i -> Delta(X x T_1 x ... x T_n)``.  Points of the product
are tuples ``(x, t_1, ..., t_n)``.
"""
from __future__ import annotations

import itertools
import math
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import BudgetExceeded, NonMeasurableMap, StateSpaceMismatch, VocabMismatch
from .frames import ValidationReport, _align, check_belief_map
from .logic import DENSE, Formula, ThresholdSet, agents_of, atoms_of, evaluate
from .spaces import (
    Event,
    FiniteMeasurableSpace,
    RationalMeasure,
    marginal,
    point_mass,
    product,
    pushforward,
    threshold_preimage,
)

__all__ = [
    "TypeSpace", "InterpretedTypeSpace", "TypeMorphism", "TypeSpaceSemantics",
    "validate_typespace", "truth_set_ts", "check_type_morphism", "find_type_morphisms",
    "morphism_search_space", "identity_morphism", "compose",
]


class TypeSpace:
    def __init__(self, states: FiniteMeasurableSpace, types: Sequence[FiniteMeasurableSpace],
                 beliefs: Sequence[Mapping[Hashable, RationalMeasure]]):
        if len(types) != len(beliefs):
            raise ValueError("need one belief map per type space")
        self.states = states
        self.types = tuple(types)
        self.product = product([states, *self.types])
        maps = []
        for i, (ti, bmap) in enumerate(zip(self.types, beliefs), 1):
            missing = [t for t in ti.carrier if t not in bmap]
            if missing:
                raise ValueError(f"agent {i}: no belief for types {missing[:3]!r}")
            maps.append({t: _align(bmap[t], self.product) for t in ti.carrier})
        self.beliefs = tuple(maps)
        # agent -> type -> product points whose i-th type component is that type
        self._slices = tuple(
            {t: frozenset(pt for pt in self.product.carrier if pt[i] == t) for t in ti.carrier}
            for i, ti in enumerate(self.types, 1))

    @property
    def n_agents(self) -> int:
        return len(self.types)

    def beta(self, i: int, t) -> RationalMeasure:
        return self.beliefs[i - 1][t]

    def points_with_type(self, i: int, types: Iterable) -> frozenset:
        sl = self._slices[i - 1]
        return frozenset().union(*(sl[t] for t in types))

    def __repr__(self):
        sizes = "x".join(str(len(t)) for t in self.types)
        return f"TypeSpace(|X|={len(self.states)}, types {sizes})"


class InterpretedTypeSpace:
    """A type space with an interpretation ``atom name -> set of states``."""

    def __init__(self, space: TypeSpace, interp: Mapping[str, Iterable]):
        self.space = space
        self.interp = {p: Event(space.states, xs).points for p, xs in interp.items()}

    @property
    def vocab(self) -> tuple[str, ...]:
        return tuple(sorted(self.interp))

    def __repr__(self):
        return f"InterpretedTypeSpace({self.space!r}, vocab={list(self.vocab)})"


class TypeSpaceSemantics:
    """Truth-set algebra on frozensets of points of X x T."""

    def __init__(self, its: InterpretedTypeSpace):
        self.its = its
        self.universe = frozenset(its.space.product.carrier)

    def atom(self, name):
        try:
            xs = self.its.interp[name]
        except KeyError:
            raise VocabMismatch(f"atom {name!r} is not interpreted in this type space") from None
        return frozenset(pt for pt in self.universe if pt[0] in xs)

    def neg(self, v):
        return self.universe - v

    def conj(self, v, w):
        return v & w

    def believes(self, i, theta, v):
        space = self.its.space
        if not 1 <= i <= space.n_agents:
            raise VocabMismatch(f"agent {i} not among 1..{space.n_agents}")
        return space.points_with_type(i, threshold_preimage(space.beliefs[i - 1], v, theta))


def validate_typespace(t: TypeSpace, thresholds: ThresholdSet = DENSE) -> ValidationReport:
    """Check measurability of each beta_i and the own-type marginal condition."""
    report = ValidationReport()
    for i, (ti, bmap) in enumerate(zip(t.types, t.beliefs), 1):
        check_belief_map(bmap, ti, thresholds, i, report)
        for tp in ti.carrier:
            got = marginal(bmap[tp], i)
            want = point_mass(ti, tp)
            if got != want:
                stray = {ti.atoms[k]: w for k, w in got.items() if k != ti.atom_of(tp)}
                report.add("marginal", i, type=tp, mass_off_own_type=sum(stray.values()),
                           stray=stray)
    return report


def truth_set_ts(its: InterpretedTypeSpace, f: Formula) -> Event:
    missing = atoms_of(f) - its.interp.keys()
    if missing:
        raise VocabMismatch(f"atoms {sorted(missing)} not in type-space vocabulary")
    bad = [i for i in agents_of(f) if not 1 <= i <= its.space.n_agents]
    if bad:
        raise VocabMismatch(f"agents {sorted(bad)} not among 1..{its.space.n_agents}")
    return Event(its.space.product, evaluate(f, TypeSpaceSemantics(its)))


# ------------------------------------------------------------------ morphisms

class TypeMorphism:
    """Profile of type maps ``f_i: T_i -> T_i'``; acts as the identity on states."""

    def __init__(self, maps: Sequence[Mapping]):
        self.maps = tuple(dict(m) for m in maps)

    def induced(self, point: tuple) -> tuple:
        x, *ts = point
        return (x, *(m[t] for m, t in zip(self.maps, ts)))

    def __call__(self, point):
        return self.induced(point)

    def is_bijective(self, src: TypeSpace, dst: TypeSpace) -> bool:
        return all(
            set(m) == set(s.carrier) and set(m.values()) == set(d.carrier) and len(d) == len(m)
            for m, s, d in zip(self.maps, src.types, dst.types))

    def __eq__(self, other):
        return isinstance(other, TypeMorphism) and self.maps == other.maps

    def __hash__(self):
        return hash(tuple(frozenset(m.items()) for m in self.maps))

    def __repr__(self):
        return f"TypeMorphism({list(self.maps)!r})"


def identity_morphism(t: TypeSpace) -> TypeMorphism:
    return TypeMorphism([{x: x for x in ti.carrier} for ti in t.types])


def compose(first: TypeMorphism, second: TypeMorphism) -> TypeMorphism:
    """``second`` after ``first``."""
    return TypeMorphism([{t: g[f[t]] for t in f} for f, g in zip(first.maps, second.maps)])


def check_type_morphism(src: TypeSpace, dst: TypeSpace, m: TypeMorphism) -> ValidationReport:
    """Verify ``beta'_i(f_i(t))(E) == beta_i(t)(f^-1(E))`` for all i, t and E.

    Both sides are measures in E, so checking the atoms of the target
    product suffices.
    """
    if src.states != dst.states:
        raise StateSpaceMismatch("type morphisms need a common state space")
    if src.n_agents != dst.n_agents or len(m.maps) != src.n_agents:
        raise ValueError("agent counts of source, target and morphism differ")
    report = ValidationReport()
    for i, (fi, s, d) in enumerate(zip(m.maps, src.types, dst.types), 1):
        for t in s.carrier:
            if t not in fi:
                report.add("totality", i, type=t)
            elif fi[t] not in d:
                report.add("totality", i, type=t, image=fi[t])
        if report.violations:
            continue
        for block in s.atoms:
            targets = {d.atom_of(fi[t]) for t in block}
            if len(targets) > 1:
                report.add("measurability", i, atom=block)
    if report.violations:
        return report
    for i, (fi, bmap) in enumerate(zip(m.maps, src.beliefs), 1):
        for t, mu in bmap.items():
            try:
                image = pushforward(mu, m.induced, dst.product)
            except NonMeasurableMap as exc:
                report.add("measurability", i, type=t, detail=str(exc))
                continue
            want = dst.beta(i, fi[t])
            if image == want:
                continue
            for k, atom in enumerate(dst.product.atoms):
                if image.weights[k] != want.weights[k]:
                    report.add("belief", i, type=t, image=fi[t], event=atom,
                               pulled_back=image.weights[k], target=want.weights[k])
                    break
    return report


def morphism_search_space(src: TypeSpace, dst: TypeSpace) -> int:
    return math.prod(len(d) ** len(s) for s, d in zip(src.types, dst.types))


def find_type_morphisms(src: TypeSpace, dst: TypeSpace, budget: int = 10**6) -> list[TypeMorphism]:
    """All type morphisms from ``src`` to ``dst``, in lexicographic profile order.

    The search space is every profile of maps; candidates whose state
    marginal already disagrees with the source type are skipped, which
    cannot drop a morphism (marginalising both sides of the morphism
    equation onto X gives equal state marginals).
    """
    if src.states != dst.states:
        raise StateSpaceMismatch("type morphisms need a common state space")
    needed = morphism_search_space(src, dst)
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    slots = []
    options = []
    for i, (s, d) in enumerate(zip(src.types, dst.types), 1):
        dst_marg = {u: marginal(dst.beta(i, u), 0) for u in d.carrier}
        for t in s.carrier:
            mt = marginal(src.beta(i, t), 0)
            slots.append((i, t))
            options.append([u for u in d.carrier if dst_marg[u] == mt])
    found = []
    for choice in itertools.product(*options):
        maps = [dict() for _ in src.types]
        for (i, t), u in zip(slots, choice):
            maps[i - 1][t] = u
        m = TypeMorphism(maps)
        if check_type_morphism(src, dst, m).ok:
            found.append(m)
    return found
