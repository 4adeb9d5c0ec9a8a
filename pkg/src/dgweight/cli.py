"""Command line front end.

Every command reads one problem file and prints a report
``{"status", "results", "diagnostics"}``.  Exit status is 0 on success,
1 for input that is malformed or fails validation, 2 for internal errors.
Groups are printed as invariant factor lists, with 0 standing for Z.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .complexes import NotAComplex
from .dgcore import validate_category
from .exactlinalg import FgAbGroup, IntMatrix, Subquotient
from .kshom import (as_twisted, check_invariants_coinvariants, ks_homology, ks_long_exact_check,
                    validate_ks)
from .problemio import Problem, ProblemError, canonical_dumps, matrix_from_json, parse
from .sncweight import (blowup_weight_homology, point_category, snc_weight_homology, validate_blowup,
                        validate_snc)
from .twisted import (cone, cone_triangle, delta, geq_triangle, identity_morphism, leq_triangle,
                      shift_morphism, truncation_triangle, validate_twisted)
from .weighthom import (AdditiveFunctor, evaluate_subquotient, gamma_A, h0_functor, long_exact_check,
                        validate_functor, vanishing_failures)

ACCEPTS = {
    "validate": {"category", "twisted_complex", "complex", "snc", "blowup", "ks"},
    "homology": {"twisted_complex", "complex", "snc"},
    "snc": {"snc"},
    "blowup": {"blowup"},
    "ks": {"ks"},
    "check-triangles": {"twisted_complex", "complex"},
}


class Invalid(Exception):
    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


# ---------------------------------------------------------------------------
# helpers


def group_json(g: FgAbGroup) -> list[int]:
    return list(g.invariant_factors)


def witness_json(s: Subquotient) -> dict:
    return {"generators": s.numerator.tolist(), "relations": s.denominator.tolist()}


def parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(-?\d+)\.\.(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if b < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(a, b + 1)


def build_functor(pr: Problem) -> AdditiveFunctor:
    J, A = pr.category.J, pr.coefficient
    if pr.functor == "H0":
        return h0_functor(J, A)
    errs = []
    values = {}
    for X in J.objects:
        if X not in pr.functor["values"]:
            errs.append(f"functor has no value on object {X!r}")
        else:
            values[X] = matrix_from_json(pr.functor["values"][X], f"functor.values[{X}]")
    images = {}
    for e in pr.functor["images"]:
        key = (e["source"], e["target"])
        if key in images:
            errs.append(f"functor images for {list(key)} given twice")
        images[key] = tuple(matrix_from_json(m, f"functor.images[{key}]") for m in e["matrices"])
    if errs:
        raise Invalid(errs)
    G = AdditiveFunctor(J, values, images, "G").with_coefficient(A)
    rep = validate_functor(G)
    if not rep.ok:
        raise Invalid([f"functor: {v}" for v in rep.violations])
    return G


def point_setup(pr: Problem):
    """A plain complex as a twisted complex over the point, with ``Gamma_A``."""
    J = point_category()
    P = as_twisted(J, pr.complex.complex)
    G = gamma_A(J, {"pt": 1}, {("pt", "pt"): (IntMatrix([[1]]),)}, pr.coefficient)
    return P, G


def validation_errors(pr: Problem) -> list[str]:
    if pr.kind in ("category", "twisted_complex"):
        errs = [f"category: {v}" for v in validate_category(pr.category.J).violations]
        if pr.kind == "twisted_complex":
            errs += [f"twisted complex: {v}" for v in validate_twisted(pr.twisted).violations]
            if not errs:
                try:
                    build_functor(pr)
                except Invalid as e:
                    errs += e.diagnostics
                except ValueError as e:
                    errs.append(f"functor: {e}")
        return errs
    if pr.kind == "complex":
        try:
            pr.complex.complex.check(pr.coefficient)
        except NotAComplex as e:
            return [f"complex: {e}"]
        return []
    if pr.kind == "snc":
        return [f"snc: {v}" for v in validate_snc(pr.snc).violations]
    if pr.kind == "blowup":
        return [f"blowup: {v}" for v in validate_blowup(pr.blowup).violations]
    return [f"ks: {e}" for e in validate_ks(pr.ks)]


# ---------------------------------------------------------------------------
# commands


def cmd_validate(pr: Problem, args) -> dict:
    return {"kind": pr.kind, "valid": True}


def cmd_homology(pr: Problem, args) -> dict:
    if pr.kind == "snc":
        return cmd_snc(pr, args)
    if pr.kind == "twisted_complex":
        P, G = pr.twisted, build_functor(pr)
        degrees = args.degree_range or P.window()
        to_slot = lambda n: n                       # noqa: E731
    else:
        P, G = point_setup(pr)
        ic = pr.complex
        C = ic.complex
        window = sorted(ic.to_internal(n) for n in C.window()) if C.degrees else []
        degrees = args.degree_range or (range(window[0], window[-1] + 1) if window else range(0))
        to_slot = ic.to_internal
    groups, wit = {}, {}
    for n in degrees:
        sq = evaluate_subquotient(G, P, to_slot(n))
        groups[str(n)] = group_json(sq.group())
        wit[str(n)] = witness_json(sq)
    out = {"homology": groups}
    if pr.kind == "complex":
        out["indexing"] = pr.complex.indexing
    if args.witnesses:
        out["witnesses"] = wit
    return out


def cmd_snc(pr: Problem, args) -> dict:
    res = snc_weight_homology(pr.snc, pr.coefficient)
    degrees = args.degree_range or range(pr.snc.dimension + 1)
    groups = {str(a): group_json(res.groups.get(a, FgAbGroup())) for a in degrees}
    out = {"homology": groups}
    if args.witnesses:
        out["witnesses"] = {str(a): witness_json(res.witnesses[a]) for a in degrees if a in res.witnesses}
    return out


def cmd_blowup(pr: Problem, args) -> dict:
    res = blowup_weight_homology(pr.blowup, pr.coefficient, args.degree_range)
    out = {"weight_homology": {str(k): group_json(g) for k, g in res.groups.items()},
           "notes": {str(k): v for k, v in res.notes.items()}}
    if args.witnesses:
        out["witnesses"] = {str(k): witness_json(s) for k, s in res.witnesses.items()}
    return out


def cmd_ks(pr: Problem, args) -> dict:
    res = ks_homology(pr.ks, with_sequence=False)
    les = ks_long_exact_check(pr.ks)
    seq = check_invariants_coinvariants(pr.ks)
    keep = (lambda n: n in args.degree_range) if args.degree_range else (lambda n: True)
    return {
        "ks": {str(n): group_json(g) for n, g in res.ks.items() if keep(n)},
        "ar": {str(n): group_json(g) for n, g in res.ar.items() if keep(n)},
        "cone_triangle": "exact" if les.ok else [str(f) for f in les.failures],
        "invariants_coinvariants": {str(i): ("exact" if not e else e) for i, e in seq.items()},
    }


def cmd_check_triangles(pr: Problem, args) -> dict:
    if pr.kind == "twisted_complex":
        P, G = pr.twisted, build_functor(pr)
    else:
        P, G = point_setup(pr)
    win = list(P.window())
    slots = args.degree_range or (range(win[0], win[-1] + 1) if win else range(0))
    tri, vanish, cone_delta = {}, {}, {}

    def record(t):
        rep = long_exact_check(G, t)
        tri[t.name] = "exact" if rep.ok else [str(f) for f in rep.failures]

    for n in slots:
        record(truncation_triangle(P, n))
        record(geq_triangle(P, n))
        record(leq_triangle(P, n))
        bad = vanishing_failures(G, P, n, range(min(slots) - 1, max(slots) + 2))
        vanish[str(n)] = "ok" if not bad else bad
        cone_delta[str(n)] = cone(shift_morphism(delta(P, n), -1)).cone == P
    t = cone_triangle(identity_morphism(P))
    t = type(t)(t.u, t.v, t.w, "cone(id)")
    record(t)
    return {"triangles": tri, "vanishing": vanish, "cone_of_delta": cone_delta}


COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "snc": cmd_snc,
    "blowup": cmd_blowup,
    "ks": cmd_ks,
    "check-triangles": cmd_check_triangles,
}


# ---------------------------------------------------------------------------
# output


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list) and all(isinstance(x, int) for x in v):
        return str(FgAbGroup(tuple(v)))
    if isinstance(v, list):
        return "; ".join(map(str, v))
    return str(v)


def render_text(report: dict) -> str:
    lines = [f"status: {report['status']}"]
    for key in sorted(report["results"]):
        val = report["results"][key]
        if isinstance(val, dict):
            show = (lambda x: json.dumps(x, sort_keys=True)) if key == "witnesses" else _text_value
            width = max((len(k) for k in val), default=0)
            lines.append(f"{key}:")
            for k in sorted(val, key=_order):
                lines.append(f"  {k:>{width}}  {show(val[k])}")
        else:
            lines.append(f"{key}: {_text_value(val)}")
    for d in report["diagnostics"]:
        lines.append(f"diagnostic: {d}")
    return "\n".join(lines) + "\n"


def _order(k: str):
    try:
        return (0, int(k), "")
    except ValueError:
        return (1, 0, k)


# ---------------------------------------------------------------------------
# entry points


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dgweight", description="Weight homology of twisted complexes.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="problem file (JSON)")
        p.add_argument("--degree-range", type=parse_range, default=None, metavar="A..B")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--witnesses", action="store_true", help="include cycle/boundary lattices")
    return ap


def run(args) -> tuple[dict, int]:
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        return _report("invalid", {}, [f"cannot read {args.input}: {e.strerror}"]), 1
    except json.JSONDecodeError as e:
        return _report("invalid", {}, [f"not JSON: line {e.lineno} column {e.colno}: {e.msg}"]), 1
    try:
        pr = parse(doc)
        if pr.kind not in ACCEPTS[args.command]:
            raise Invalid([f"command {args.command!r} does not accept kind {pr.kind!r}"])
        errs = validation_errors(pr)
        if errs:
            raise Invalid(errs)
        return _report("ok", COMMANDS[args.command](pr, args), []), 0
    except (ProblemError, Invalid) as e:
        return _report("invalid", {}, e.diagnostics), 1
    except Exception as e:     # pragma: no cover - reported, never swallowed silently
        return _report("error", {}, [f"internal error: {type(e).__name__}: {e}"]), 2


def _report(status: str, results: dict, diagnostics: list[str]) -> dict:
    return {"status": status, "results": results, "diagnostics": diagnostics}


def _join_range(argv: list[str]) -> list[str]:
    # "--degree-range -2..2" would otherwise read -2..2 as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--degree-range" and i + 1 < len(argv):
            out.append(f"--degree-range={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = _join_range(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stdout.write(canonical_dumps(_report("invalid", {}, [str(e)])))
        return 1
    report, code = run(args)
    out = canonical_dumps(report) if args.format == "json" else render_text(report)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
