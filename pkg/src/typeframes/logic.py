"""Syntax of the graded belief language.

Formulas are built from primitive propositions with negation, conjunction
and the modality ``B{i,theta} phi`` ("agent i assigns phi probability at
least theta").  Disjunction, implication and equivalence are abbreviations
and are expanded away by the parser, so the AST only ever contains the four
primitive node kinds.

Thresholds are always :class:`fractions.Fraction`; no float ever enters a
formula.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence, Union

from .errors import (
    AgentOutOfRange,
    BudgetExceeded,
    FormulaSyntaxError,
    ThresholdNotInSet,
    ThresholdOutOfRange,
    UnknownAtom,
)

__all__ = [
    "Atom", "Not", "And", "Believes", "Formula",
    "Or", "Implies", "Iff",
    "ThresholdSet", "DENSE", "parse_rational", "format_rational",
    "parse_formula", "render",
    "modal_depth", "size", "atoms_of", "agents_of", "thresholds_of",
    "is_purely_propositional", "is_i_formula",
    "evaluate", "enumerate_formulas", "enumerate_semantics",
]


# ---------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Believes:
    agent: int
    threshold: Fraction
    arg: "Formula"

    def __post_init__(self):
        # normalise ints and decimal strings so equal thresholds compare equal
        object.__setattr__(self, "threshold", Fraction(self.threshold))

    def __str__(self):
        return render(self)


Formula = Union[Atom, Not, And, Believes]


def Or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


# -------------------------------------------------------------- thresholds

def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"``, ``"n"`` or a terminating decimal ``"n.ddd"`` exactly."""
    text = text.strip()
    m = re.fullmatch(r"(\d+)\s*/\s*(\d+)", text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    m = re.fullmatch(r"(\d+)(?:\.(\d+))?", text)
    if m:
        whole, frac = m.group(1), m.group(2) or ""
        return Fraction(int(whole + frac), 10 ** len(frac))
    raise ValueError(f"not a rational literal: {text!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class ThresholdSet:
    """Either an explicit finite set of thresholds or all rationals in [0, 1].

    >>> ThresholdSet.explicit(["1/2", 1]).values
    (Fraction(1, 2), Fraction(1, 1))
    >>> Fraction(1, 3) in DENSE
    True
    """

    __slots__ = ("values",)

    def __init__(self, values: Iterable | None = None):
        if values is None:
            self.values = None
            return
        vals = set()
        for v in values:
            q = parse_rational(v) if isinstance(v, str) else Fraction(v)
            if not 0 <= q <= 1:
                raise ThresholdOutOfRange(f"threshold {q} outside [0, 1]")
            vals.add(q)
        if not vals:
            raise ValueError("an explicit threshold set must be nonempty")
        if 1 not in vals:
            warnings.warn("threshold set lacks 1; introspection formulas are not expressible",
                          stacklevel=2)
        self.values = tuple(sorted(vals))

    @classmethod
    def dense(cls) -> "ThresholdSet":
        return DENSE

    @classmethod
    def explicit(cls, values: Iterable) -> "ThresholdSet":
        return cls(values)

    @property
    def is_dense(self) -> bool:
        return self.values is None

    def __contains__(self, q) -> bool:
        q = Fraction(q)
        if self.values is None:
            return 0 <= q <= 1
        return q in self.values

    def __eq__(self, other):
        return isinstance(other, ThresholdSet) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        if self.values is None:
            return "ThresholdSet.dense()"
        return f"ThresholdSet.explicit([{', '.join(map(format_rational, self.values))}])"

    def to_text(self) -> str:
        if self.values is None:
            return "dense"
        return ",".join(map(format_rational, self.values))

    @classmethod
    def from_text(cls, text: str) -> "ThresholdSet":
        text = text.strip()
        if text == "dense":
            return DENSE
        return cls(part for part in text.split(",") if part.strip())


DENSE = ThresholdSet()


# ------------------------------------------------------------------ parser

_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|(){},/.])|([A-Za-z_][A-Za-z0-9_]*)|(\d+))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("op", m.group(1), start))
        elif m.group(2):
            tokens.append(("ident", m.group(2), start))
        else:
            tokens.append(("nat", m.group(3), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, vocab, agents, thresholds):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.vocab = None if vocab is None else frozenset(vocab)
        self.agents = agents
        self.thresholds = thresholds

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind not in ("op", "ident"):
            raise FormulaSyntaxError(f"unexpected {val or 'end of input'!r}", pos, repr(value))

    def accept(self, value):
        kind, val, _ = self.peek()
        if kind == "op" and val == value:
            self.i += 1
            return True
        return False

    def parse(self):
        f = self.iff()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {val!r}", pos, "end of input")
        return f

    def iff(self):
        f = self.imp()
        while self.accept("<->"):
            f = Iff(f, self.imp())
        return f

    def imp(self):
        # right associative: a -> b -> c reads a -> (b -> c)
        f = self.or_()
        if self.accept("->"):
            return Implies(f, self.imp())
        return f

    def or_(self):
        f = self.and_()
        while self.accept("|"):
            f = Or(f, self.and_())
        return f

    def and_(self):
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "!":
            self.take()
            return Not(self.unary())
        if kind == "op" and val == "(":
            self.take()
            f = self.iff()
            self.expect(")")
            return f
        if kind == "ident":
            nxt = self.tokens[self.i + 1]
            if val == "B" and nxt[0] == "op" and nxt[1] == "{":
                return self.modality()
            self.take()
            if self.vocab is not None and val not in self.vocab:
                raise UnknownAtom(f"unknown atom {val!r} at position {pos}")
            return Atom(val)
        raise FormulaSyntaxError(f"unexpected {val or 'end of input'!r}", pos,
                                 "atom, '!', '(' or 'B{'")

    def nat(self):
        kind, val, pos = self.take()
        if kind != "nat":
            raise FormulaSyntaxError(f"unexpected {val or 'end of input'!r}", pos, "number")
        return val, pos

    def modality(self):
        self.take()  # B
        self.expect("{")
        agent_text, agent_pos = self.nat()
        agent = int(agent_text)
        if agent < 1 or (self.agents is not None and agent > self.agents):
            raise AgentOutOfRange(f"agent {agent} at position {agent_pos} not in 1..{self.agents}")
        self.expect(",")
        num, tpos = self.nat()
        if self.accept("/"):
            den, dpos = self.nat()
            if int(den) == 0:
                raise FormulaSyntaxError("zero denominator", dpos)
            theta = Fraction(int(num), int(den))
        elif self.accept("."):
            digits, _ = self.nat()
            theta = Fraction(int(num + digits), 10 ** len(digits))
        else:
            theta = Fraction(int(num))
        if not 0 <= theta <= 1:
            raise ThresholdOutOfRange(f"threshold {theta} at position {tpos} outside [0, 1]")
        if self.thresholds is not None and theta not in self.thresholds:
            raise ThresholdNotInSet(f"threshold {theta} at position {tpos} not in {self.thresholds!r}")
        self.expect("}")
        return Believes(agent, theta, self.unary())


def parse_formula(text: str, vocab: Iterable[str] | None = None, agents: int | None = None,
                  thresholds: ThresholdSet | None = None) -> Formula:
    """Parse concrete syntax into a formula over ``!``, ``&`` and ``B{i,theta}``.

    ``vocab``, ``agents`` and ``thresholds`` are checked when given.

    >>> parse_formula("p -> B{1,1} !q")
    Not(arg=And(left=Atom(name='p'), right=Not(arg=Believes(agent=1, threshold=Fraction(1, 1), arg=Not(arg=Atom(name='q'))))))
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", 0, "formula")
    return _Parser(text, vocab, agents, thresholds).parse()


def render(f: Formula) -> str:
    """Canonical text; conjunctions are always parenthesised."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + render(f.arg)
    if isinstance(f, And):
        return f"({render(f.left)} & {render(f.right)})"
    if isinstance(f, Believes):
        return f"B{{{f.agent},{format_rational(f.threshold)}}} {render(f.arg)}"
    raise TypeError(f"not a formula: {f!r}")


# -------------------------------------------------------- structural queries

def modal_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.arg)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.arg)


def size(f: Formula) -> int:
    """Number of AST nodes."""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, And):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.arg)


def _walk(f):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, And):
            stack += [g.right, g.left]
        elif isinstance(g, (Not, Believes)):
            stack.append(g.arg)


def atoms_of(f: Formula) -> frozenset:
    return frozenset(g.name for g in _walk(f) if isinstance(g, Atom))


def agents_of(f: Formula) -> frozenset:
    return frozenset(g.agent for g in _walk(f) if isinstance(g, Believes))


def thresholds_of(f: Formula) -> frozenset:
    return frozenset(g.threshold for g in _walk(f) if isinstance(g, Believes))


def _boolean_leaves(f):
    if isinstance(f, Not):
        yield from _boolean_leaves(f.arg)
    elif isinstance(f, And):
        yield from _boolean_leaves(f.left)
        yield from _boolean_leaves(f.right)
    else:
        yield f


def is_purely_propositional(f: Formula) -> bool:
    return not any(isinstance(g, Believes) for g in _walk(f))


def is_i_formula(f: Formula, i: int) -> bool:
    """True iff f is a Boolean combination of ``B{i,...}`` formulas."""
    return all(isinstance(g, Believes) and g.agent == i for g in _boolean_leaves(f))


# ---------------------------------------------------------------- semantics

def evaluate(f: Formula, semantics, memo: dict | None = None):
    """Fold a formula through ``semantics``.

    ``semantics`` provides ``atom(name)``, ``neg(v)``, ``conj(v, w)`` and
    ``believes(agent, theta, v)``; truth sets of models and type spaces are
    both computed this way.
    """
    memo = {} if memo is None else memo

    def go(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            v = semantics.atom(g.name)
        elif isinstance(g, Not):
            v = semantics.neg(go(g.arg))
        elif isinstance(g, And):
            v = semantics.conj(go(g.left), go(g.right))
        elif isinstance(g, Believes):
            v = semantics.believes(g.agent, g.threshold, go(g.arg))
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = v
        return v

    return go(f)


# -------------------------------------------------------------- enumeration

def _threshold_list(thresholds) -> list[Fraction]:
    if isinstance(thresholds, ThresholdSet):
        if thresholds.is_dense:
            raise ValueError("formula enumeration needs an explicit finite threshold set")
        return list(thresholds.values)
    return sorted({Fraction(t) for t in thresholds})


def enumerate_formulas(vocab: Sequence[str], agents: int, thresholds, max_depth: int,
                       max_size: int, cap: int = 1_000_000) -> list[Formula]:
    """Every formula with modal depth <= max_depth and at most max_size nodes.

    Order: by size; within a size, negations, then modalities (agent, then
    threshold ascending), then conjunctions (left size, left index, right
    index); atoms keep the order of ``vocab``.  Raises BudgetExceeded once
    more than ``cap`` formulas would be produced.
    """
    thetas = _threshold_list(thresholds)
    vocab = list(dict.fromkeys(vocab))
    # by_size[s][d]: formulas of exactly size s and exactly depth d
    by_size: list[list[list[Formula]]] = [[[] for _ in range(max_depth + 1)]
                                          for _ in range(max_size + 1)]
    out: list[Formula] = []

    def emit(s, d, f):
        by_size[s][d].append(f)
        out.append(f)
        if len(out) > cap:
            raise BudgetExceeded(len(out), cap)

    if max_size < 1:
        return out
    for name in vocab:
        emit(1, 0, Atom(name))
    for s in range(2, max_size + 1):
        for d in range(max_depth + 1):
            for g in list(by_size[s - 1][d]):
                emit(s, d, Not(g))
        for i in range(1, agents + 1):
            for theta in thetas:
                for d in range(max_depth):
                    for g in list(by_size[s - 1][d]):
                        emit(s, d + 1, Believes(i, theta, g))
        for ls in range(1, s - 1):
            rs = s - 1 - ls
            for dl in range(max_depth + 1):
                for left in by_size[ls][dl]:
                    for dr in range(max_depth + 1):
                        for right in by_size[rs][dr]:
                            emit(s, max(dl, dr), And(left, right))
    return out


def enumerate_semantics(semantics, vocab: Sequence[str], agents: int, thresholds,
                        max_depth: int, max_size: int, cap: int = 2_000_000) -> dict[Hashable, Formula]:
    """Semantic values of all formulas within the depth/size bounds.

    Returns a map from each value that some formula (depth <= max_depth,
    size <= max_size) takes under ``semantics`` to a smallest such formula.
    Values must be hashable.  Coverage is exhaustive: a compound formula's
    value depends only on its children's values, and replacing a child by a
    smallest formula with the same value and no greater depth never
    increases size, so only minimal representatives need to be combined.
    """
    thetas = _threshold_list(thresholds)
    vocab = list(dict.fromkeys(vocab))
    found: list[dict] = [dict() for _ in range(max_depth + 1)]   # value -> formula, depth <= d
    # new[s][d]: values first reached at size s under depth bound d
    new = [[dict() for _ in range(max_depth + 1)] for _ in range(max_size + 1)]
    count = 0

    def add(s, d, value, f):
        nonlocal count
        if value in found[d]:
            return
        found[d][value] = f
        new[s][d][value] = f
        count += 1
        if count > cap:
            raise BudgetExceeded(count, cap)

    if max_size < 1:
        return {}
    for d in range(max_depth + 1):
        for name in vocab:
            add(1, d, semantics.atom(name), Atom(name))
    for s in range(2, max_size + 1):
        for d in range(max_depth + 1):
            for v, f in list(new[s - 1][d].items()):
                add(s, d, semantics.neg(v), Not(f))
            if d >= 1:
                for i in range(1, agents + 1):
                    for theta in thetas:
                        for v, f in list(new[s - 1][d - 1].items()):
                            add(s, d, semantics.believes(i, theta, v), Believes(i, theta, f))
            for ls in range(1, s - 1):
                rs = s - 1 - ls
                lefts = list(new[ls][d].items())
                rights = list(new[rs][d].items())
                for lv, lf in lefts:
                    for rv, rf in rights:
                        add(s, d, semantics.conj(lv, rv), And(lf, rf))
    return dict(found[max_depth])

