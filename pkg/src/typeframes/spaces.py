"""Finite measure theory with exact rationals.

A sigma-algebra on a finite carrier is stored as its partition into atoms;
the measurable sets are exactly the unions of atoms.  Measures assign a
:class:`~fractions.Fraction` to every atom.  Point ids are opaque hashable
values; carriers keep the order they were given in, which fixes every
iteration order downstream.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import FactorIndexOutOfRange, NonMeasurableMap, PointNotInCarrier, SpaceMismatch

__all__ = [
    "FiniteMeasurableSpace", "ProductSpace", "Event", "RationalMeasure",
    "generated_algebra", "is_measurable", "measure", "outer_measure", "point_mass",
    "product", "marginal", "pushforward", "threshold_preimage", "threshold_separation",
]


class FiniteMeasurableSpace:
    """A finite carrier with the sigma-algebra given by an atom partition.

    ``atoms=None`` means the discrete algebra.  Atoms are reordered by the
    carrier position of their first member so that equal algebras given in
    different orders produce the same atom sequence.
    """

    def __init__(self, carrier: Iterable[Hashable], atoms: Iterable[Iterable[Hashable]] | None = None):
        carrier = tuple(carrier)
        if len(set(carrier)) != len(carrier):
            raise ValueError("carrier has repeated points")
        position = {x: k for k, x in enumerate(carrier)}
        if atoms is None:
            blocks = [frozenset([x]) for x in carrier]
        else:
            blocks = [frozenset(a) for a in atoms]
            seen = set()
            for b in blocks:
                if not b:
                    raise ValueError("atoms must be nonempty")
                if seen & b:
                    raise ValueError("atoms must be pairwise disjoint")
                unknown = b - position.keys()
                if unknown:
                    raise PointNotInCarrier(f"atom members {sorted(map(repr, unknown))} not in carrier")
                seen |= b
            if len(seen) != len(carrier):
                raise ValueError("atoms must cover the carrier")
            blocks.sort(key=lambda b: min(position[x] for x in b))
        self.carrier = carrier
        self.atoms: tuple[frozenset, ...] = tuple(blocks)
        self._atom_of = {x: k for k, b in enumerate(self.atoms) for x in b}
        self._hash = hash((frozenset(carrier), frozenset(self.atoms)))

    # identity ---------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteMeasurableSpace):
            return NotImplemented
        return (self._hash == other._hash and set(self.carrier) == set(other.carrier)
                and set(self.atoms) == set(other.atoms))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({len(self.carrier)} points, {len(self.atoms)} atoms)"

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(self.carrier)

    def __contains__(self, x):
        return x in self._atom_of

    # structure ----------------------------------------------------------
    @property
    def is_discrete(self) -> bool:
        return len(self.atoms) == len(self.carrier)

    def atom_of(self, x) -> int:
        try:
            return self._atom_of[x]
        except KeyError:
            raise PointNotInCarrier(f"{x!r} is not a point of this space") from None

    def atom_indices(self, points: Iterable) -> frozenset:
        """Indices of the atoms meeting ``points``."""
        atom_of = self._atom_of
        try:
            return frozenset(atom_of[x] for x in points)
        except KeyError as exc:
            raise PointNotInCarrier(f"{exc.args[0]!r} is not a point of this space") from None

    def union_of(self, indices: Iterable[int]) -> frozenset:
        return frozenset().union(*(self.atoms[k] for k in indices))

    def event(self, points: Iterable) -> "Event":
        return Event(self, points)

    def full(self) -> "Event":
        return Event(self, self.carrier)

    def empty(self) -> "Event":
        return Event(self, ())

    def events(self) -> Iterator["Event"]:
        """All 2**len(atoms) events, smallest first."""
        for r in range(len(self.atoms) + 1):
            for combo in itertools.combinations(range(len(self.atoms)), r):
                yield Event._trusted(self, self.union_of(combo))


class ProductSpace(FiniteMeasurableSpace):
    """Cartesian product whose atoms are products of factor atoms."""

    def __init__(self, factors: Sequence[FiniteMeasurableSpace]):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        carrier = list(itertools.product(*(f.carrier for f in self.factors)))
        atoms = [frozenset(itertools.product(*parts))
                 for parts in itertools.product(*(f.atoms for f in self.factors))]
        super().__init__(carrier, atoms)

    def component_atoms(self, k: int) -> tuple[int, ...]:
        """Factor-atom index vector of product atom ``k``."""
        x = next(iter(self.atoms[k]))
        return tuple(f.atom_of(c) for f, c in zip(self.factors, x))


class Event:
    """A measurable subset of a :class:`FiniteMeasurableSpace`."""

    __slots__ = ("space", "points", "_blocks")

    def __init__(self, space: FiniteMeasurableSpace, points: Iterable):
        points = frozenset(points)
        blocks = space.atom_indices(points)
        if sum(len(space.atoms[k]) for k in blocks) != len(points):
            raise ValueError("subset is not measurable (it splits an atom)")
        self.space = space
        self.points = points
        self._blocks = blocks

    @classmethod
    def _trusted(cls, space, points, blocks=None):
        e = object.__new__(cls)
        e.space = space
        e.points = frozenset(points)
        e._blocks = space.atom_indices(e.points) if blocks is None else blocks
        return e

    @property
    def blocks(self) -> frozenset:
        return self._blocks

    def _check(self, other):
        if other.space != self.space:
            raise SpaceMismatch("events live in different spaces")

    def __or__(self, other):
        self._check(other)
        return Event._trusted(self.space, self.points | other.points, self._blocks | other._blocks)

    def __and__(self, other):
        self._check(other)
        return Event._trusted(self.space, self.points & other.points, self._blocks & other._blocks)

    def __sub__(self, other):
        self._check(other)
        return Event._trusted(self.space, self.points - other.points, self._blocks - other._blocks)

    def __invert__(self):
        return Event._trusted(self.space, frozenset(self.space.carrier) - self.points,
                              frozenset(range(len(self.space.atoms))) - self._blocks)

    def __eq__(self, other):
        if not isinstance(other, Event):
            return NotImplemented
        return self.points == other.points and self.space == other.space

    def __hash__(self):
        return hash(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        order = {x: k for k, x in enumerate(self.space.carrier)}
        return iter(sorted(self.points, key=order.__getitem__))

    def __contains__(self, x):
        return x in self.points

    def __le__(self, other):
        return self.points <= other.points

    def __repr__(self):
        return "Event({" + ", ".join(sorted(map(str, self.points))) + "})"


class RationalMeasure:
    """Probability measure on a finite space: one exact weight per atom."""

    __slots__ = ("space", "weights", "_support", "_hash")

    def __init__(self, space: FiniteMeasurableSpace, weights: Sequence):
        weights = tuple(Fraction(w) for w in weights)
        if len(weights) != len(space.atoms):
            raise ValueError(f"expected {len(space.atoms)} atom weights, got {len(weights)}")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if sum(weights) != 1:
            raise ValueError(f"weights sum to {sum(weights)}, not 1")
        self.space = space
        self.weights = weights
        self._support = tuple((k, w) for k, w in enumerate(weights) if w)
        self._hash = None

    @classmethod
    def from_atoms(cls, space, weights: Mapping[int, object]) -> "RationalMeasure":
        vec = [Fraction(0)] * len(space.atoms)
        for k, w in weights.items():
            vec[k] += Fraction(w)
        return cls(space, vec)

    @classmethod
    def from_points(cls, space, weights: Mapping[Hashable, object]) -> "RationalMeasure":
        """Weight of each listed point goes to its atom (weights in one atom add up)."""
        vec = [Fraction(0)] * len(space.atoms)
        for x, w in weights.items():
            vec[space.atom_of(x)] += Fraction(w)
        return cls(space, vec)

    @classmethod
    def uniform(cls, space) -> "RationalMeasure":
        n = len(space.atoms)
        return cls(space, [Fraction(1, n)] * n)

    @property
    def support(self) -> frozenset:
        """Indices of atoms with positive weight."""
        return frozenset(k for k, _ in self._support)

    def items(self):
        """(atom index, weight) pairs with positive weight."""
        return self._support

    def weight_of(self, indices) -> Fraction:
        return sum((w for k, w in self._support if k in indices), Fraction(0))

    def __call__(self, e: Event) -> Fraction:
        return measure(self, e)

    def by_atom(self) -> dict:
        return {self.space.atoms[k]: w for k, w in self._support}

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RationalMeasure):
            return NotImplemented
        if self.space.atoms == other.space.atoms:
            return self.weights == other.weights
        return self.space == other.space and self.by_atom() == other.by_atom()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.by_atom().items()))
        return self._hash

    def __repr__(self):
        parts = ", ".join("{" + ", ".join(sorted(map(str, self.space.atoms[k]))) + f"}}: {w}"
                          for k, w in self._support)
        return f"RationalMeasure({{{parts}}})"


# ---------------------------------------------------------------- operations

def generated_algebra(carrier: Iterable, generators: Iterable[Iterable]) -> FiniteMeasurableSpace:
    """Smallest algebra containing ``generators``: points are grouped by
    which generators they belong to."""
    carrier = tuple(carrier)
    gens = [frozenset(g) for g in generators]
    classes: dict[tuple, list] = {}
    for x in carrier:
        classes.setdefault(tuple(x in g for g in gens), []).append(x)
    return FiniteMeasurableSpace(carrier, classes.values())


def is_measurable(space: FiniteMeasurableSpace, subset: Iterable) -> bool:
    subset = frozenset(subset)
    blocks = space.atom_indices(subset)
    return sum(len(space.atoms[k]) for k in blocks) == len(subset)


def measure(mu: RationalMeasure, e: Event) -> Fraction:
    if e.space is not mu.space and e.space != mu.space:
        raise SpaceMismatch("event and measure live in different spaces")
    if e.space.atoms is mu.space.atoms or e.space.atoms == mu.space.atoms:
        return mu.weight_of(e.blocks)
    return mu.weight_of(mu.space.atom_indices(e.points))


def outer_measure(mu: RationalMeasure, subset: Iterable) -> Fraction:
    """Measure of the smallest event covering ``subset``."""
    return mu.weight_of(mu.space.atom_indices(subset))


def point_mass(space: FiniteMeasurableSpace, x) -> RationalMeasure:
    return RationalMeasure.from_atoms(space, {space.atom_of(x): 1})


def product(factors: Sequence[FiniteMeasurableSpace]) -> ProductSpace:
    return ProductSpace(factors)


def marginal(mu: RationalMeasure, k: int) -> RationalMeasure:
    space = mu.space
    if not isinstance(space, ProductSpace):
        raise TypeError("marginal needs a measure on a ProductSpace")
    if not 0 <= k < len(space.factors):
        raise FactorIndexOutOfRange(f"factor {k} out of range 0..{len(space.factors) - 1}")
    vec = [Fraction(0)] * len(space.factors[k].atoms)
    for a, w in mu.items():
        vec[space.component_atoms(a)[k]] += w
    return RationalMeasure(space.factors[k], vec)


def pushforward(mu: RationalMeasure, f: Callable | Mapping, target: FiniteMeasurableSpace) -> RationalMeasure:
    """Image measure ``E -> mu(f^-1(E))``; ``f`` must be measurable."""
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    src = mu.space
    image_atom = []
    for k, block in enumerate(src.atoms):
        hits = {target.atom_of(fn(x)) for x in block}
        if len(hits) != 1:
            raise NonMeasurableMap(
                f"atom {sorted(map(repr, block))} is split across {len(hits)} target atoms")
        image_atom.append(hits.pop())
    vec = [Fraction(0)] * len(target.atoms)
    for k, w in mu.items():
        vec[image_atom[k]] += w
    return RationalMeasure(target, vec)


def threshold_preimage(prmap: Mapping, e, theta) -> frozenset:
    """``{w : prmap[w](e) >= theta}`` for a measurable ``e`` (Event or point set)."""
    theta = Fraction(theta)
    if not prmap:
        return frozenset()
    points = e.points if isinstance(e, Event) else frozenset(e)
    index_cache: dict = {}
    value_cache: dict = {}
    out = []
    for w, mu in prmap.items():
        hit = value_cache.get(id(mu))
        if hit is None:
            idx = index_cache.get(id(mu.space))
            if idx is None:
                idx = index_cache[id(mu.space)] = mu.space.atom_indices(points)
            hit = value_cache[id(mu)] = mu.weight_of(idx) >= theta
        if hit:
            out.append(w)
    return frozenset(out)


def threshold_separation(u: Sequence, v: Sequence, thetas: Iterable | None = None):
    """Find a block set U and threshold t with exactly one of u(U) >= t, v(U) >= t.

    ``u`` and ``v`` are weight vectors over the same blocks.  With
    ``thetas=None`` every threshold in [0, 1] is allowed, so the vectors are
    separated iff they differ.  Returns ``(frozenset of block indices, t)``
    or None.  The explicit case walks the Pareto frontier of achievable
    ``(u(U), v(U))`` pairs, which stays small for desk-scale inputs.
    """
    u = [Fraction(x) for x in u]
    v = [Fraction(x) for x in v]
    if thetas is None:
        for k, (a, b) in enumerate(zip(u, v)):
            if a != b:
                return frozenset([k]), max(a, b)
        return None
    thetas = sorted({Fraction(t) for t in thetas})
    for first, second in ((u, v), (v, u)):
        hit = _dominating_subset(first, second, thetas)
        if hit is not None:
            return hit
    return None


def _dominating_subset(a, b, thetas):
    # some U with a(U) >= t > b(U)?
    free = frozenset(k for k in range(len(a)) if a[k] > 0 and b[k] == 0)
    base_a = sum((a[k] for k in free), Fraction(0))
    items = [k for k in range(len(a)) if a[k] > 0 and b[k] > 0]
    frontier = [(base_a, Fraction(0), free)]
    for k in items:
        grown = frontier + [(sa + a[k], sb + b[k], m | {k}) for sa, sb, m in frontier]
        grown.sort(key=lambda t: (-t[0], t[1]))
        frontier = []
        best_b = None
        for sa, sb, m in grown:
            if best_b is None or sb < best_b:
                frontier.append((sa, sb, m))
                best_b = sb
    for t in thetas:
        for sa, sb, m in frontier:
            if sa >= t > sb:
                return m, t
    return None
