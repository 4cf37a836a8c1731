"""JSON documents for models, type spaces, families and bare spaces.

Every document is an object with ``kind``, ``version`` and (except bare
spaces) ``thresholds``.  Probabilities are exact rationals written as
``"a/b"`` strings; point ids are strings.  A measure lists one point per
atom it charges.

Model::

    {"kind": "model", "version": 1, "thresholds": "dense",
     "worlds": ["u", "v"], "atoms": [["u"], ["v"]],
     "beliefs": [{"u": {"u": "1/2", "v": "1/2"}, "v": {"u": "1/2", "v": "1/2"}}],
     "interp": {"p": ["u"]}}

Type space (``interp`` optional)::

    {"kind": "typespace", "version": 1, "thresholds": "dense",
     "states": {"points": ["x1", "x2"]},
     "types": [{"points": ["s"]}, {"points": ["t"]}],
     "beliefs": [{"s": [[["x1", "s", "t"], "1/2"], [["x2", "s", "t"], "1/2"]]},
                 {"t": [[["x1", "s", "t"], "1"]]}],
     "interp": {"x1": ["x1"]}}

``atoms`` may be omitted for the discrete algebra.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import SchemaError, TypeFrameError
from .frames import ProbabilityFrame, ProbabilityModel
from .logic import DENSE, ThresholdSet, format_rational, parse_rational
from .spaces import FiniteMeasurableSpace, RationalMeasure, product
from .typespaces import InterpretedTypeSpace, TypeSpace

__all__ = [
    "VERSION", "Document", "load_document", "read_document", "dump_document", "write_document",
    "point_id", "model_to_json", "typespace_to_json", "space_to_json",
]

VERSION = 1
KINDS = ("model", "typespace", "family", "space")


@dataclass
class Document:
    kind: str
    value: Any
    thresholds: ThresholdSet = DENSE


# ------------------------------------------------------------------- writing

def point_id(x) -> str:
    """String id of a point; tuples become ``"(a,b)"``."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(point_id(y) for y in x) + ")"
    return str(x)


def _ids(points) -> dict:
    ids = {x: point_id(x) for x in points}
    if len(set(ids.values())) != len(ids):
        raise SchemaError("two points share a string id")
    return ids


def space_to_json(space: FiniteMeasurableSpace, ids=None) -> dict:
    ids = ids or _ids(space.carrier)
    out = {"points": [ids[x] for x in space.carrier]}
    if not space.is_discrete:
        out["atoms"] = [[ids[x] for x in space.carrier if x in a] for a in space.atoms]
    return out


def _measure_to_json(mu: RationalMeasure, ids) -> dict:
    return {ids[_first(mu.space, a)]: format_rational(w) for a, w in mu.items()}


def _first(space, a):
    atom = space.atoms[a]
    return next(x for x in space.carrier if x in atom)


def model_to_json(m: ProbabilityModel, thresholds: ThresholdSet = DENSE) -> dict:
    ids = _ids(m.worlds.carrier)
    doc = {"kind": "model", "version": VERSION, "thresholds": thresholds.to_text()}
    sp = space_to_json(m.worlds, ids)
    doc["worlds"] = sp["points"]
    if "atoms" in sp:
        doc["atoms"] = sp["atoms"]
    doc["beliefs"] = [{ids[w]: _measure_to_json(prmap[w], ids) for w in m.worlds.carrier}
                      for prmap in m.frame.beliefs]
    doc["interp"] = {p: [ids[w] for w in m.worlds.carrier if w in m.interp[p]] for p in m.vocab}
    return doc


def typespace_to_json(t: TypeSpace | InterpretedTypeSpace, thresholds: ThresholdSet = DENSE) -> dict:
    its = t if isinstance(t, InterpretedTypeSpace) else None
    space = its.space if its else t
    sid = _ids(space.states.carrier)
    tids = [_ids(ti.carrier) for ti in space.types]
    doc = {"kind": "typespace", "version": VERSION, "thresholds": thresholds.to_text(),
           "states": space_to_json(space.states, sid),
           "types": [space_to_json(ti, ids) for ti, ids in zip(space.types, tids)]}

    def pt(p):
        return [sid[p[0]], *(ids[u] for ids, u in zip(tids, p[1:]))]

    doc["beliefs"] = [
        {ids[u]: [[pt(_first(space.product, a)), format_rational(w)] for a, w in bmap[u].items()]
         for u in ti.carrier}
        for ti, ids, bmap in zip(space.types, tids, space.beliefs)]
    if its is not None:
        doc["interp"] = {p: [sid[x] for x in space.states.carrier if x in its.interp[p]]
                         for p in its.vocab}
    return doc


def dump_document(value, thresholds: ThresholdSet = DENSE) -> dict:
    if isinstance(value, ProbabilityModel):
        return model_to_json(value, thresholds)
    if isinstance(value, (TypeSpace, InterpretedTypeSpace)):
        return typespace_to_json(value, thresholds)
    if isinstance(value, FiniteMeasurableSpace):
        return {"kind": "space", "version": VERSION, **space_to_json(value)}
    if isinstance(value, (list, tuple)):
        return {"kind": "family", "version": VERSION, "thresholds": thresholds.to_text(),
                "members": [dump_document(v, thresholds) for v in value]}
    raise TypeError(f"cannot serialise {type(value).__name__}")


def write_document(path, value, thresholds: ThresholdSet = DENSE):
    Path(path).write_text(json.dumps(dump_document(value, thresholds), indent=2) + "\n", encoding="utf-8")


# ------------------------------------------------------------------- reading

def _need(doc: dict, key: str, kind=None):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"field {key!r} should be {kind.__name__}")
    return val


def _rational(text) -> Fraction:
    if not isinstance(text, str):
        raise SchemaError(f"probabilities are strings like \"1/2\", got {text!r}")
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _space(obj) -> FiniteMeasurableSpace:
    if not isinstance(obj, dict):
        raise SchemaError("a space is an object with \"points\" and optional \"atoms\"")
    points = _need(obj, "points", list)
    return _space_from(points, obj.get("atoms"))


def _space_from(points, atoms) -> FiniteMeasurableSpace:
    if not all(isinstance(p, str) for p in points):
        raise SchemaError("point ids must be strings")
    if len(set(points)) != len(points):
        raise SchemaError("duplicate point ids")
    try:
        return FiniteMeasurableSpace(points, atoms)
    except TypeFrameError as exc:
        raise SchemaError(str(exc)) from None
    except (ValueError, TypeError, KeyError) as exc:
        raise SchemaError(f"bad atom partition: {exc}") from None


def _measure(space: FiniteMeasurableSpace, pairs) -> RationalMeasure:
    by_atom: dict[int, Fraction] = {}
    for point, w in pairs:
        try:
            a = space.atom_of(point)
        except (KeyError, TypeError):
            raise SchemaError(f"unknown point {point!r} in a measure") from None
        if a in by_atom:
            raise SchemaError(f"measure names two points of one atom ({point!r})")
        by_atom[a] = _rational(w)
    try:
        return RationalMeasure(space, [by_atom.get(k, Fraction(0)) for k in range(len(space.atoms))])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _thresholds(doc) -> ThresholdSet:
    text = doc.get("thresholds", "dense")
    if isinstance(text, list):
        text = ",".join(map(str, text))
    if not isinstance(text, str):
        raise SchemaError("thresholds must be \"dense\" or a list of rationals")
    try:
        return ThresholdSet.from_text(text)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _model(doc) -> ProbabilityModel:
    worlds = _need(doc, "worlds", list)
    space = _space_from(worlds, doc.get("atoms"))
    beliefs = []
    for prmap in _need(doc, "beliefs", list):
        if not isinstance(prmap, dict):
            raise SchemaError("each agent's beliefs map worlds to measures")
        missing = [w for w in worlds if w not in prmap]
        if missing:
            raise SchemaError(f"no belief given at worlds {missing}")
        extra = [w for w in prmap if w not in space]
        if extra:
            raise SchemaError(f"beliefs given at unknown worlds {extra}")
        cache: dict = {}
        out = {}
        for w in worlds:
            raw = prmap[w]
            if not isinstance(raw, dict):
                raise SchemaError(f"belief at {w!r} should map points to weights")
            key = tuple(sorted(raw.items()))
            if key not in cache:
                cache[key] = _measure(space, raw.items())
            out[w] = cache[key]
        beliefs.append(out)
    if not beliefs:
        raise SchemaError("a model needs at least one agent")
    interp = _need(doc, "interp", dict)
    try:
        return ProbabilityModel(ProbabilityFrame(space, beliefs), interp)
    except TypeFrameError as exc:
        raise SchemaError(str(exc)) from None
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError(f"bad interpretation: {exc}") from None


def _typespace(doc):
    states = _space(_need(doc, "states"))
    types = [_space(t) for t in _need(doc, "types", list)]
    bl = _need(doc, "beliefs", list)
    if len(bl) != len(types):
        raise SchemaError("need one belief map per type space")
    prod = product([states, *types])
    beliefs = []
    for ti, bmap in zip(types, bl):
        if not isinstance(bmap, dict):
            raise SchemaError("beliefs map type ids to lists of [point, weight]")
        out = {}
        for u in ti.carrier:
            if u not in bmap:
                raise SchemaError(f"no belief for type {u!r}")
            pairs = []
            for entry in bmap[u]:
                if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)):
                    raise SchemaError(f"belief entries are [[x, t1, ...], weight], got {entry!r}")
                pairs.append((tuple(entry[0]), entry[1]))
            out[u] = _measure(prod, pairs)
        beliefs.append(out)
    try:
        t = TypeSpace(states, types, beliefs)
    except (TypeFrameError, ValueError) as exc:
        raise SchemaError(str(exc)) from None
    if "interp" in doc:
        try:
            return InterpretedTypeSpace(t, _need(doc, "interp", dict))
        except (TypeFrameError, ValueError, KeyError) as exc:
            raise SchemaError(f"bad interpretation: {exc}") from None
    return t


def load_document(doc: dict) -> Document:
    if not isinstance(doc, dict):
        raise SchemaError("a document is a JSON object")
    kind = _need(doc, "kind", str)
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    version = doc.get("version", VERSION)
    if version != VERSION:
        raise SchemaError(f"unsupported version {version!r}")
    if kind == "space":
        return Document(kind, _space(doc))
    thresholds = _thresholds(doc)
    if kind == "model":
        return Document(kind, _model(doc), thresholds)
    if kind == "typespace":
        return Document(kind, _typespace(doc), thresholds)
    members = [load_document(d) for d in _need(doc, "members", list)]
    if not members:
        raise SchemaError("a family needs members")
    if len({d.kind for d in members}) != 1 or members[0].kind not in ("model", "typespace"):
        raise SchemaError("family members must all be models or all type spaces")
    return Document(kind, [d.value for d in members], thresholds)


def read_document(path) -> Document:
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return load_document(raw)
