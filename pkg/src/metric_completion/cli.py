"""Command-line interface: ``metric-completion <command> ...``.

Exit codes: 0 success, 1 selftest failure, 2 parse or usage error,
3 unsupported input (UnsupportedRing, NotRepresentable, ...).
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import cauchy as Ca
from .classify import classify, compact_support_index
from . import metric as Mt
from . import selftest
from .derived import cone_of_module_map, graded_hom
from .errors import MetricCompletionError, SpecParseError
from .fields import FiniteField, Rational, SymbolicUncountable
from .indec import IntegerRing, Kronecker
from .specfile import parse, parse_file, parse_map

SCHEMA = "metric-completion/1"


class _Usage(Exception):
    pass


def _field(text):
    if text is None:
        return None
    if text == "rational":
        return Rational()
    if text == "symbolic":
        return SymbolicUncountable()
    try:
        return FiniteField(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--field expects q, rational or symbolic, not {text!r}")


def _pick(table, names, count, what):
    if names:
        missing = [n for n in names if n not in table]
        if missing:
            raise _Usage(f"unknown {what} {', '.join(missing)}")
        return [table[n] for n in names], list(names)
    if len(table) < count:
        raise _Usage(f"need {count} {what}(s) in the file")
    keys = list(table)[:count]
    return [table[k] for k in keys], keys


def _queries(spec, kind):
    return [q for q in spec.queries if q[0] == kind]


# --- commands -------------------------------------------------------------------

def cmd_classify(args):
    spec = parse_file(args.file, args.field)
    names = [n for q in _queries(spec, "classify") for n in q[1]] or list(spec.metrics)
    if not names:
        raise _Usage("no metric to classify")
    results = []
    for name in names:
        (M,), _ = _pick(spec.metrics, [name], 1, "metric")
        rep = classify(spec.ring, M)
        d = {"metric": name, "normalForm": Mt.normal_form_text(M)}
        d.update(rep.to_dict())
        results.append(d)
    supports = []
    for _, qargs, _ in _queries(spec, "support"):
        (X,), _ = _pick(spec.objects, qargs[:1], 1, "object")
        (M,), _ = _pick(spec.metrics, qargs[1:2], 1, "metric")
        cs = compact_support_index(X, M, args.horizon)
        supports.append({"object": str(X), "metric": qargs[1], "index": cs.index,
                         "horizon": cs.horizon, "certified": cs.certified})
    out = results[0] if len(results) == 1 else {"results": results}
    if supports:
        out["compactSupport"] = supports
    text = []
    for r in results:
        text.append(f"{r['metric']}: case {r['case']}; kernel {r['kernel']}; completion {r['category']}")
        text += [f"  - {e}" for e in r["evidence"]]
        if "generators" in r:
            text.append("  generators: " + ", ".join(r["generators"]))
    for s in supports:
        idx = s["index"] if s["index"] is not None else f"absent up to level {s['horizon']}"
        text.append(f"compact support of {s['object']} for {s['metric']}: {idx}")
    return out, "\n".join(text)


def cmd_lattice(args):
    spec = parse_file(args.file, args.field)
    if args.op not in ("meet", "join", "leq", "equivalent"):
        raise _Usage(f"unknown lattice operation {args.op!r}")
    names = args.names
    if not names:
        qs = [q for q in _queries(spec, "lattice") if q[1] and q[1][0] == args.op]
        names = qs[0][1][1:3] if qs else None
    (A, B), names = _pick(spec.metrics, names, 2, "metric")
    out = {"op": args.op, "left": names[0], "right": names[1]}
    if args.op in ("leq", "equivalent"):
        val = Mt.finer_leq(A, B) if args.op == "leq" else Mt.equivalent(A, B)
        out["result"] = val
        return out, "true" if val else "false"
    M = getattr(Mt, args.op)(A, B)
    out["result"] = {"normalForm": Mt.normal_form_text(M), "kernel": str(Mt.kernel_B(M)),
                     "convergesUniformly": Mt.converges_uniformly(M)}
    if Mt.equivalent(M, Mt.mk_t_structure(spec.ring)):
        out["result"]["recognized"] = "t_structure"
    return out, Mt.normal_form_text(M)


def cmd_hom(args):
    spec = parse_file(args.file, args.field)
    qs = _queries(spec, "hom")
    pairs = [q[1][:2] for q in qs] or [None]
    results, text = [], []
    for names in pairs:
        (X, Y), names = _pick(spec.objects, names, 2, "object")
        g = graded_hom(X, Y)
        results.append({"source": str(X), "target": str(Y),
                        "graded": {str(j): str(v) for j, v in g.items()}})
        body = ", ".join(f"Hom(X, Y[{j}]) = {v}" for j, v in g.items()) or "all zero"
        text.append(f"{X} -> {Y}: {body}")
    return (results[0] if len(results) == 1 else {"results": results}), "\n".join(text)


def _degree_text(cone):
    by = {}
    for d, M in cone.summands:
        by.setdefault(d, []).append(str(M))
    if not by:
        return "0"
    return "; ".join(f"{' + '.join(v)} in degree {d}" for d, v in sorted(by.items()))


def cmd_cone(args):
    target = " ".join(args.target)
    if os.path.exists(target):
        spec = parse_file(target, args.field)
        names = [q[1][0] for q in _queries(spec, "cone")] or list(spec.maps)
        (f,), _ = _pick(spec.maps, names[:1], 1, "map")
        label = names[0]
    else:
        ring = IntegerRing() if args.field is None else Kronecker(args.field)
        f = parse_map(ring, target)
        label = target
    cone = cone_of_module_map(f)
    out = {"map": label, "cone": str(cone),
           "cohomology": {str(d): " + ".join(str(M) for e, M in cone.summands if e == d)
                          for d in cone.degrees()}}
    return out, _degree_text(cone)


def _certificate_dict(cert):
    if not cert.ok:
        return {"ok": False, "level": cert.level, "index": cert.index, "cone": str(cert.cone),
                "verdict": cert.verdict.value}
    return {"ok": True, "horizon": cert.horizon,
            "stabilization": {str(m): n for m, n in cert.stabilization.items()},
            "cones": [{"n": n, "cone": str(c)} for n, c, _ in cert.cone_witnesses]}


_INLINE_BUILD = re.compile(r"^\s*(Z|kronecker(?:\s+(?:rational|symbolic|\d+))?)\s+(.*?)"
                           r"(?:\s+start\s+(.*?))?\s+steps\s*=?\s*(\d+)\s*$")


def _spec_for(target, field, mode):
    """A spec file path, or for ``build`` an inline ``<ring> <descriptor> steps=N``."""
    if os.path.exists(target) or mode != "build":
        return parse_file(target, field)
    m = _INLINE_BUILD.match(" ".join(target) if isinstance(target, list) else target)
    if not m:
        raise _Usage(f"{target!r} is neither a file nor '<ring> <descriptor> [start <object>] steps=N'")
    ring, desc, start, steps = m.groups()
    if ring == "kronecker":
        ring = "kronecker rational"
    start = start or ("Z" if ring == "Z" else "P0")
    return parse(f"ring {ring}\nquery build {desc} start {start} steps {steps}\n", field)


def cmd_cauchy(args):
    spec = _spec_for(" ".join(args.file), args.field, args.mode)
    if args.mode == "build":
        qs = _queries(spec, "build")
        if not qs:
            raise _Usage("cauchy build needs a 'query build <descriptor> start <object> steps <n>' line")
        C, X, steps = qs[0][1]
        seq = Ca.small_object_sequence(spec.ring, C, X, steps)
        M = Mt.mk_constant(C)
        h = min(args.horizon or steps, steps)
        cert = Ca.is_cauchy(seq, M, h)
        out = {"sequence": str(seq), "cones": [str(c) for c in seq.cones()],
               "metric": f"constant {C}", "certificate": _certificate_dict(cert)}
        try:
            model = Ca.hocolim_model(seq, spec.ring)
            out["hocolim"] = {"object": str(model.object), "checks": [c for _, c in model.map_checks]}
        except MetricCompletionError as e:
            out["hocolim"] = {"error": e.code, "message": str(e)}
        text = [str(seq), "cones: " + ", ".join(out["cones"]),
                f"Cauchy for constant {C} up to level {h}: {'yes' if cert.ok else 'no'}"]
        if "object" in out["hocolim"]:
            text.append(f"homotopy colimit: {out['hocolim']['object']}")
        return out, "\n".join(text)
    qs = _queries(spec, "check")
    if qs:
        names = qs[0][1]
        (S,), _ = _pick(spec.sequences, names[:1], 1, "sequence")
        (M,), _ = _pick(spec.metrics, names[1:2], 1, "metric")
        h = names[2] if len(names) > 2 else None
    else:
        (S,), _ = _pick(spec.sequences, None, 1, "sequence")
        (M,), _ = _pick(spec.metrics, None, 1, "metric")
        h = None
    h = args.horizon or h or len(S)
    cert = Ca.is_cauchy(S, M, h)
    out = {"sequence": str(S), "certificate": _certificate_dict(cert)}
    if cert.ok:
        text = f"Cauchy up to level {h}; stabilization " + ", ".join(f"{m}->{n}" for m, n in cert.stabilization.items())
    else:
        text = f"not Cauchy: cone {cert.cone} at map {cert.index} is not in ball {cert.level} ({cert.verdict.value})"
    return out, text


def cmd_selftest(args):
    results = selftest.run(args.bounds)
    rows = [r.to_dict() for r in results]
    ok = all(r.ok for r in results)
    width = max(len(r.name) for r in results)
    text = [f"{'suite':<{width}}  cases  failures  result"]
    for r in results:
        text.append(f"{r.name:<{width}}  {r.cases:>5}  {len(r.failures):>8}  {'PASS' if r.ok else 'FAIL'}")
    return {"bounds": args.bounds, "suites": rows, "ok": ok}, "\n".join(text)


# --- entry point ----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="metric-completion",
                                description="Completions of bounded derived categories with respect to metrics.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--horizon", type=int, help="search or certification horizon")
    common.add_argument("--field", type=_field, help="override the Kronecker field: q, rational or symbolic")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("classify", parents=[common], help="classify the completion of each metric")
    s.add_argument("file")
    s = sub.add_parser("lattice", parents=[common], help="meet, join, leq or equivalent of two metrics")
    s.add_argument("op")
    s.add_argument("file")
    s.add_argument("names", nargs="*")
    s = sub.add_parser("cauchy", parents=[common], help="build or check Cauchy sequences")
    s.add_argument("mode", choices=["build", "check"])
    s.add_argument("file", nargs="+", help="spec file, or for build an inline '<ring> <descriptor> steps=N'")
    s = sub.add_parser("hom", parents=[common], help="graded Hom between objects")
    s.add_argument("file")
    s = sub.add_parser("cone", parents=[common], help="cone of a module map (file or expression)")
    s.add_argument("target", nargs="+")
    s = sub.add_parser("selftest", parents=[common], help="replay the oracle-equivalence suites")
    s.add_argument("--bounds", choices=sorted(selftest.BOUNDS), default="small")
    return p


COMMANDS = {"classify": cmd_classify, "lattice": cmd_lattice, "cauchy": cmd_cauchy,
            "hom": cmd_hom, "cone": cmd_cone, "selftest": cmd_selftest}


def _emit(payload, as_json, stream):
    if as_json:
        stream.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        stream.write(payload + "\n")


def _error(name, message, **extra):
    d = {"name": name, "message": message}
    d.update(extra)
    return {"schema": SCHEMA, "error": d}


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        out, text = COMMANDS[args.command](args)
    except SpecParseError as e:
        err = _error(e.code, e.detail, line=e.line, column=e.column, rule=e.rule)
        _emit(err if args.json else f"parse error: {e}", args.json, stdout)
        return 2
    except _Usage as e:
        _emit(_error("UsageError", str(e)) if args.json else f"error: {e}", args.json, stdout)
        return 2
    except OSError as e:
        _emit(_error("FileError", str(e)) if args.json else f"error: {e}", args.json, stdout)
        return 2
    except MetricCompletionError as e:
        _emit(_error(e.code, str(e)) if args.json else f"{e.code}: {e}", args.json, stdout)
        return 3
    if args.json:
        _emit({"schema": SCHEMA, "command": args.command, **out}, True, stdout)
    else:
        _emit(text, False, stdout)
    if args.command == "selftest" and not out["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
