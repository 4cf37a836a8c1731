"""Command-line front end.

Exit codes: 0 ok, 1 input or usage error, 2 violations found,
3 the construction was refused (ambiguous beliefs, budget, threshold mode).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .documents import dump_document, point_id, read_document
from .errors import (
    BudgetExceeded,
    NonDenseThresholds,
    NonUniqueBeliefExtension,
    TypeFrameError,
)
from .frames import ProbabilityModel, ValidationReport, truth_set, validate_frame
from .logic import ThresholdSet, format_rational, parse_formula, render
from .spaces import Event, FiniteMeasurableSpace, RationalMeasure
from .translate import (
    description_partition,
    interpreted_to_model,
    model_to_typespace,
    round_trip,
    witness_merge,
    check_witness_merge,
)
from .typespaces import (
    InterpretedTypeSpace,
    TypeMorphism,
    TypeSpace,
    check_type_morphism,
    find_type_morphisms,
    truth_set_ts,
    validate_typespace,
)
from .universal import ModelFamily, universal_model, universal_typespace

OK, INPUT_ERROR, VIOLATIONS, REFUSED = 0, 1, 2, 3


class Refusal(Exception):
    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


# ------------------------------------------------------------- plain values

def plain(x):
    """JSON-ready form of results: rationals as "a/b", points as string ids."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, tuple):
        return point_id(x)
    if isinstance(x, (set, frozenset)):
        return sorted((plain(y) for y in x), key=str)
    if isinstance(x, list):
        return [plain(y) for y in x]
    if isinstance(x, dict):
        return {str(plain(k)) if not isinstance(k, (set, frozenset)) else "{" + ",".join(plain(k)) + "}":
                plain(v) for k, v in x.items()}
    if isinstance(x, Event):
        return sorted(point_id(p) for p in x.points)
    if isinstance(x, RationalMeasure):
        return {point_id(_first(x.space, a)): format_rational(w) for a, w in x.items()}
    if isinstance(x, TypeMorphism):
        return [{point_id(t): point_id(u) for t, u in m.items()} for m in x.maps]
    if isinstance(x, ValidationReport):
        return [{"condition": v.condition, "agent": v.agent, **plain(v.data)} for v in x.violations]
    return str(x)


def _first(space: FiniteMeasurableSpace, a):
    atom = space.atoms[a]
    return next(p for p in space.carrier if p in atom)


# ----------------------------------------------------------------- commands

def _thresholds(args, doc):
    return ThresholdSet.from_text(args.thresholds) if args.thresholds else doc.thresholds


def _report_status(report: ValidationReport):
    return OK if report.ok else VIOLATIONS


def cmd_validate(args):
    doc = read_document(args.path)
    ts = _thresholds(args, doc)
    members = doc.value if doc.kind == "family" else [doc.value]
    results = []
    code = OK
    for v in members:
        if isinstance(v, ProbabilityModel):
            rep = validate_frame(v.frame, ts)
        elif isinstance(v, (TypeSpace, InterpretedTypeSpace)):
            rep = validate_typespace(v.space if isinstance(v, InterpretedTypeSpace) else v, ts)
        else:
            raise TypeFrameError(f"nothing to validate in a {doc.kind} document")
        results.append({"ok": rep.ok, "violations": plain(rep)})
        code = max(code, _report_status(rep))
    body = results[0] if doc.kind != "family" else {"members": results}
    return code, {"kind": doc.kind, **body}


def cmd_eval(args):
    doc = read_document(args.path)
    ts = _thresholds(args, doc)
    v = doc.value
    if isinstance(v, ProbabilityModel):
        f = parse_formula(args.formula, vocab=v.vocab, agents=v.n_agents, thresholds=ts)
        result = truth_set(v, f)
    elif isinstance(v, (TypeSpace, InterpretedTypeSpace)):
        its = v if isinstance(v, InterpretedTypeSpace) else InterpretedTypeSpace(v, {})
        f = parse_formula(args.formula, vocab=its.vocab, agents=its.space.n_agents, thresholds=ts)
        result = truth_set_ts(its, f)
    else:
        raise TypeFrameError(f"cannot evaluate formulas on a {doc.kind} document")
    return OK, {"formula": render(f), "truth_set": plain(result)}


def cmd_describe(args):
    doc = read_document(args.path)
    m = _as_model(doc)
    dp = description_partition(m, _thresholds(args, doc))
    rows = {}
    for w in m.worlds.carrier:
        rows[point_id(w)] = {
            "full": point_id(dp.full.class_id(w)),
            "zero": point_id(dp.zero.class_id(w)),
            "agents": [point_id(a.class_id(w)) for a in dp.agents],
        }
    return OK, {"worlds": rows, "classes": {
        "full": len(dp.full), "zero": len(dp.zero), "agents": [len(a) for a in dp.agents]}}


def _as_model(doc) -> ProbabilityModel:
    if not isinstance(doc.value, ProbabilityModel):
        raise TypeFrameError(f"expected a model document, got {doc.kind}")
    return doc.value


def _as_typespace(doc) -> InterpretedTypeSpace:
    v = doc.value
    if isinstance(v, TypeSpace):
        return InterpretedTypeSpace(v, {})
    if isinstance(v, InterpretedTypeSpace):
        return v
    raise TypeFrameError(f"expected a typespace document, got {doc.kind}")


def cmd_translate(args):
    doc = read_document(args.path)
    ts = _thresholds(args, doc)
    if args.direction == "t2m":
        its = _as_typespace(doc)
        m = interpreted_to_model(its)
        corr = {point_id(w): [point_id(c) for c in w] for w in m.worlds.carrier}
        return OK, {"document": dump_document(m, ts), "correspondence": corr}
    if args.direction == "m2t":
        m = _as_model(doc)
        fts = _factor(m, ts)
        corr = {point_id(w): [point_id(c) for c in fts.profile_of(w)] for w in m.worlds.carrier}
        return OK, {"document": dump_document(fts.result, ts), "correspondence": corr}
    its = _as_typespace(doc)
    try:
        rt = round_trip(its, ts)
    except NonUniqueBeliefExtension as exc:
        raise _refusal(exc) from None
    body = {"bijective": rt.bijective, "morphism": plain(rt.morphism),
            "violations": plain(rt.report), "document": dump_document(rt.aligned, ts)}
    return (OK if rt.bijective else VIOLATIONS), body


def _factor(m, ts):
    try:
        return model_to_typespace(m, ts)
    except NonUniqueBeliefExtension as exc:
        raise _refusal(exc) from None


def _refusal(exc: NonUniqueBeliefExtension):
    return Refusal(str(exc), {"agent": exc.agent, "type": point_id(exc.type_point),
                              "candidates": [plain(c) for c in exc.candidates]})


def cmd_witness_merge(args):
    doc = read_document(args.path)
    m = _as_model(doc)
    ts = _thresholds(args, doc)
    ids = {point_id(w): w for w in m.worlds.carrier}
    try:
        targets = [ids[t] for t in args.targets]
    except KeyError as exc:
        raise TypeFrameError(f"unknown world {exc.args[0]!r}") from None
    merged, star = witness_merge(m, targets)
    check = check_witness_merge(m, targets, ts)
    return _report_status(check), {"star": point_id(star), "ok": check.ok,
                                   "violations": plain(check), "document": dump_document(merged, ts)}


def cmd_universal(args):
    docs = [read_document(p) for p in args.paths]
    members = []
    ts = None
    for d in docs:
        members.extend(d.value if d.kind == "family" else [d.value])
        ts = ts or _thresholds(args, d)
    if all(isinstance(v, ProbabilityModel) for v in members):
        if not ts.is_dense:
            raise Refusal(str(NonDenseThresholds("universal models need the dense threshold set")))
        res = universal_model(ModelFamily(members, ts))
        ok = all(r.ok for r in res.truth_reports)
        return (OK if ok else VIOLATIONS), {
            "document": dump_document(res.model, ts),
            "worlds": len(res.model.worlds),
            "description_maps": [{point_id(w): point_id(c) for w, c in mp.items()}
                                 for mp in res.description_maps],
            "truth_preserving": [r.ok for r in res.truth_reports]}
    spaces = []
    for v in members:
        if isinstance(v, InterpretedTypeSpace):
            v = v.space
        if not isinstance(v, TypeSpace):
            raise TypeFrameError("universal needs all models or all type spaces")
        spaces.append(v)
    if args.states:
        sdoc = read_document(args.states)
        states = sdoc.value if sdoc.kind == "space" else _as_typespace(sdoc).space.states
    else:
        states = spaces[0].states
    res = universal_typespace(states, spaces, args.budget)
    body = {
        "document": dump_document(res.space, ts),
        "morphisms": [plain(m) for m in res.morphisms],
        "verified": [r.ok for r in res.reports],
        "uniqueness": [c.describe() for c in res.uniqueness_certificates],
        "violations": [plain(r) for r in res.reports],
    }
    return (OK if res.ok else VIOLATIONS), body


def cmd_morphism_check(args):
    src = _as_typespace(read_document(args.src)).space
    dst = _as_typespace(read_document(args.dst)).space
    if args.map:
        raw = json.loads(open(args.map, encoding="utf-8").read())
        m = _morphism_from(raw, src, dst)
        rep = check_type_morphism(src, dst, m)
        return _report_status(rep), {"ok": rep.ok, "violations": plain(rep)}
    found = find_type_morphisms(src, dst, args.budget)
    return (OK if found else VIOLATIONS), {"count": len(found), "morphisms": [plain(m) for m in found]}


def _morphism_from(raw, src, dst):
    if not isinstance(raw, list) or len(raw) != src.n_agents:
        raise TypeFrameError("a morphism file is a list with one {type: type} map per agent")
    maps = []
    for fi, s, d in zip(raw, src.types, dst.types):
        sid = {point_id(t): t for t in s.carrier}
        did = {point_id(t): t for t in d.carrier}
        try:
            maps.append({sid[k]: did[v] for k, v in fi.items()})
        except KeyError as exc:
            raise TypeFrameError(f"unknown type {exc.args[0]!r} in morphism file") from None
    return TypeMorphism(maps)


COMMANDS = {
    "validate": cmd_validate,
    "eval": cmd_eval,
    "describe": cmd_describe,
    "translate": cmd_translate,
    "witness-merge": cmd_witness_merge,
    "universal": cmd_universal,
    "morphism-check": cmd_morphism_check,
}


# ------------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--thresholds", help='"dense" or a list like "0,1/2,1" (overrides the document)')
    common.add_argument("--budget", type=int, default=10**6, help="cap on morphism search spaces")
    common.add_argument("--seed", type=int, help="recorded in the report")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="add wall-clock time to the report")

    p = argparse.ArgumentParser(prog="typeframes",
                                description="Graded belief logic on probability models and type spaces.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="check measurability and introspection")
    s.add_argument("path")
    s = sub.add_parser("eval", parents=[common], help="print the truth set of a formula")
    s.add_argument("path")
    s.add_argument("formula")
    s = sub.add_parser("describe", parents=[common], help="description classes of every world")
    s.add_argument("path")
    s = sub.add_parser("translate", parents=[common], help="type space to model, model to type space")
    s.add_argument("path")
    s.add_argument("--direction", choices=("t2m", "m2t", "roundtrip"), required=True)
    s = sub.add_parser("witness-merge", parents=[common], help="merge n+1 partial descriptions")
    s.add_argument("path")
    s.add_argument("targets", nargs="+")
    s = sub.add_parser("universal", parents=[common], help="universal model or type space of a family")
    s.add_argument("paths", nargs="+")
    s.add_argument("--states", help="space document with the common states")
    s = sub.add_parser("morphism-check", parents=[common], help="check or search type morphisms")
    s.add_argument("src")
    s.add_argument("dst")
    s.add_argument("--map", help="JSON list of per-agent {type: type} maps")
    return p


def _emit(report, fmt, out):
    if fmt == "json":
        out.write(json.dumps(report, indent=2) + "\n")
        return
    for key, val in report.items():
        if isinstance(val, (dict, list)):
            out.write(f"{key}:\n")
            for line in json.dumps(val, indent=2).splitlines():
                out.write(f"  {line}\n")
        else:
            out.write(f"{key}: {val}\n")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    report = {"command": args.command, "argv": list(sys.argv[1:] if argv is None else argv),
              "seed": args.seed}
    start = time.perf_counter()
    try:
        code, results = COMMANDS[args.command](args)
        report["status"] = {OK: "ok", VIOLATIONS: "violations"}[code]
        report["results"] = results
    except Refusal as exc:
        code = REFUSED
        report.update(status="refused", error=str(exc), details=exc.details)
    except (NonUniqueBeliefExtension, BudgetExceeded, NonDenseThresholds) as exc:
        code = REFUSED
        report.update(status="refused", error=f"{type(exc).__name__}: {exc}")
        if isinstance(exc, NonUniqueBeliefExtension):
            report["details"] = _refusal(exc).details
    except (TypeFrameError, OSError, ValueError) as exc:
        code = INPUT_ERROR
        report.update(status="error", error=f"{type(exc).__name__}: {exc}")
    report["exit_code"] = code
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 6)
    _emit(report, args.format, out)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
