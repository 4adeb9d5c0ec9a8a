"""Problem files: JSON in, domain objects out, and back.

``serialize(parse(doc))`` reproduces a canonical document exactly, where
canonical means the output of :func:`canonical_dumps` on a serialized
problem (sorted keys, lists in a fixed order, zero data omitted).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any

import jsonschema

from .complexes import ChainMap, CochainComplex
from .dgcore import HomComplex, HomElement, NegDgCategory, build_dgchain_instance
from .exactlinalg import ZZ, Coefficient, IntMatrix
from .kshom import KsInput
from .sncweight import BlowupData, SncConfiguration
from .twisted import BlockMap, TwistedComplex


class ProblemError(ValueError):
    """Malformed input; ``diagnostics`` lists every problem found."""

    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


def load_schema() -> dict:
    return json.loads(resources.files("dgweight").joinpath("problem.schema.json").read_text("utf-8"))


def canonical_dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# ---------------------------------------------------------------------------
# pieces


def matrix_from_json(m: dict, where: str) -> IntMatrix:
    rows, cols, entries = m["rows"], m["cols"], m["entries"]
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise ProblemError([f"{where}: entries do not form a {rows}x{cols} matrix"])
    return IntMatrix(entries, rows, cols)


def matrix_to_json(m: IntMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": m.tolist()}


def coefficient_from_json(c: dict) -> Coefficient:
    return ZZ if c["type"] == "Z" else Coefficient.mod(c["n"])


def coefficient_to_json(A: Coefficient) -> dict:
    return {"type": "Z"} if A.is_integers else {"type": "Zmod", "n": A.modulus}


@dataclass(frozen=True)
class IndexedComplex:
    complex: CochainComplex
    indexing: str = "cohomological"

    def to_internal(self, n: int) -> int:
        return n if self.indexing == "cohomological" else -n


def complex_from_json(c: dict, where: str) -> IndexedComplex:
    sign = 1 if c["indexing"] == "cohomological" else -1
    ranks = {sign * int(k): v for k, v in c["ranks"].items()}
    diffs = {}
    for k, m in c["diffs"].items():
        diffs[sign * int(k)] = matrix_from_json(m, f"{where}.diffs[{k}]")
    try:
        C = CochainComplex(ranks, diffs)
    except ValueError as e:
        raise ProblemError([f"{where}: {e}"]) from None
    return IndexedComplex(C, c["indexing"])


def complex_to_json(s: IndexedComplex) -> dict:
    sign = 1 if s.indexing == "cohomological" else -1
    return {"indexing": s.indexing,
            "ranks": {str(sign * n): r for n, r in s.complex.ranks.items()},
            "diffs": {str(sign * n): matrix_to_json(m) for n, m in s.complex.diffs.items()}}


def graded_from_json(g: dict, ic: IndexedComplex, where: str) -> dict[int, IntMatrix]:
    return {ic.to_internal(int(k)): matrix_from_json(m, f"{where}[{k}]") for k, m in g.items()}


def graded_to_json(maps, ic: IndexedComplex) -> dict:
    return {str(ic.to_internal(n)): matrix_to_json(m) for n, m in maps.items() if not m.is_zero()}


@dataclass(frozen=True)
class CategoryData:
    J: NegDgCategory
    complexes: dict[str, IndexedComplex] | None = None     # set for dgchain instances


def category_from_json(c: dict) -> CategoryData:
    if "dgchain" in c:
        indexed = {name: complex_from_json(x, f"dgchain.{name}") for name, x in c["dgchain"].items()}
        try:
            J = build_dgchain_instance({k: s.complex for k, s in indexed.items()})
        except ValueError as e:
            raise ProblemError([f"category: {e}"]) from None
        return CategoryData(J, indexed)
    p = c["presented"]
    objs = p["objects"]
    errs = []
    homs = {}
    for h in p["homs"]:
        diffs = {int(k): matrix_from_json(m, f"homs[{h['source']},{h['target']}]")
                 for k, m in h["diffs"].items()}
        homs[h["source"], h["target"]] = HomComplex({int(k): v for k, v in h["ranks"].items()}, diffs)
    comp = {}
    for e in p["composition"]:
        P, Q, R = e["objects"]
        b, a = e["degrees"]
        comp[P, Q, R, b, a] = matrix_from_json(e["matrix"], f"composition{[P, Q, R, b, a]}")
    for X in p["identities"]:
        if X not in objs:
            errs.append(f"identity given for unknown object {X!r}")
    if errs:
        raise ProblemError(errs)
    try:
        J = NegDgCategory(objs, homs, comp, p["identities"])
    except ValueError as e:
        raise ProblemError([f"category: {e}"]) from None
    return CategoryData(J)


def category_to_json(s: CategoryData) -> dict:
    if s.complexes is not None:
        return {"dgchain": {k: complex_to_json(v) for k, v in s.complexes.items()}}
    J = s.J
    homs = [{"source": P, "target": Q, "ranks": {str(d): r for d, r in h.ranks.items()},
             "diffs": {str(d): matrix_to_json(m) for d, m in h.diffs.items()}}
            for (P, Q), h in sorted(J.homs.items())]
    comp = [{"objects": [P, Q, R], "degrees": [b, a], "matrix": matrix_to_json(m)}
            for (P, Q, R, b, a), m in sorted(J.composition.items())]
    return {"presented": {"objects": list(J.objects), "homs": homs, "composition": comp,
                          "identities": {k: list(v) for k, v in J.identities.items()}}}


def twisted_from_json(p: dict, cat: CategoryData) -> TwistedComplex:
    J = cat.J
    errs = []
    slots = {int(k): tuple(v) for k, v in p["slots"].items()}
    for i, objs in slots.items():
        for o in objs:
            if o not in J.objects:
                errs.append(f"slot {i} refers to unknown object {o!r}")
    if errs:
        raise ProblemError(errs)
    q = {}
    for e in p["q"]:
        i, j = e["from"], e["to"]
        if j <= i:
            errs.append(f"q[{i},{j}] would have positive degree {i - j + 1}")
            continue
        src, tgt = slots.get(i, ()), slots.get(j, ())
        deg = i - j + 1
        blocks = e["blocks"]
        if len(blocks) != len(tgt) or any(len(r) != len(src) for r in blocks):
            errs.append(f"q[{i},{j}] needs a {len(tgt)}x{len(src)} grid of blocks")
            continue
        rows = []
        for r, t in enumerate(tgt):
            row = []
            for c, s in enumerate(src):
                coords = blocks[r][c]
                if len(coords) != J.rank(s, t, deg):
                    errs.append(f"q[{i},{j}] block ({r},{c}): hom^{deg}({s},{t}) has rank "
                                f"{J.rank(s, t, deg)}, got {len(coords)} coordinates")
                row.append(HomElement(s, t, deg, coords))
            rows.append(tuple(row))
        q[i, j] = BlockMap(src, tgt, deg, tuple(rows))
    if errs:
        raise ProblemError(errs)
    return TwistedComplex(J, slots, q)


def twisted_to_json(P: TwistedComplex) -> dict:
    return {"slots": {str(i): list(o) for i, o in P.objects.items()},
            "q": [{"from": i, "to": j, "blocks": [[list(e.coords) for e in row] for row in m.blocks]}
                  for (i, j), m in sorted(P.q.items())]}


def snc_from_json(p: dict) -> SncConfiguration:
    strata, inc = {}, {}
    for s in p["strata"]:
        T = tuple(s["indices"])
        if T in strata:
            raise ProblemError([f"stratum {list(T)} listed twice"])
        strata[T] = s["components"]
        if "faces" in s:
            inc[T] = s["faces"]
    return SncConfiguration(p["N"], strata, inc)


def snc_to_json(E: SncConfiguration) -> dict:
    strata = []
    for T, c in E.strata.items():
        d = {"indices": list(T), "components": c}
        if T in E.incidence:
            d["faces"] = [list(m) for m in E.incidence[T]]
        strata.append(d)
    return {"N": E.N, "strata": strata}


# ---------------------------------------------------------------------------
# whole problems


@dataclass(frozen=True)
class Problem:
    kind: str
    coefficient: Coefficient
    category: CategoryData | None = None
    twisted: TwistedComplex | None = None
    functor: Any = None                  # "H0" or the raw functor document
    complex: IndexedComplex | None = None
    snc: SncConfiguration | None = None
    blowup: BlowupData | None = None
    ks: KsInput | None = None
    ks_indexing: tuple[IndexedComplex, IndexedComplex] | None = None


def check_schema(doc: Any) -> None:
    v = jsonschema.Draft202012Validator(load_schema())
    errs = sorted(v.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errs:
        raise ProblemError([f"schema: at /{'/'.join(map(str, e.absolute_path))}: {e.message}"
                            for e in errs[:10]])


def parse(doc: Any) -> Problem:
    check_schema(doc)
    kind = doc["kind"]
    A = coefficient_from_json(doc["coefficient"])
    p = doc["payload"]
    if kind == "category":
        return Problem(kind, A, category=category_from_json(p["category"]))
    if kind == "twisted_complex":
        cat = category_from_json(p["category"])
        functor = p["functor"]
        if functor == "H0" and cat.complexes is None:
            raise ProblemError(["functor H0 needs a dgchain category"])
        return Problem(kind, A, category=cat, twisted=twisted_from_json(p, cat), functor=functor)
    if kind == "complex":
        return Problem(kind, A, complex=complex_from_json(p["complex"], "complex"))
    if kind == "snc":
        return Problem(kind, A, snc=snc_from_json(p))
    if kind == "blowup":
        D = BlowupData(snc_from_json(p["E"]), p["c_Z"], p["c_XZ"], tuple(p["to_Z"]), tuple(p["to_XZ"]))
        return Problem(kind, A, blowup=D)
    ck = complex_from_json(p["C_k"], "C_k")
    cb = complex_from_json(p["C_kbar"], "C_kbar")
    phi = ChainMap(cb.complex, cb.complex, graded_from_json(p["phi"], cb, "phi"))
    rho = ChainMap(ck.complex, cb.complex, graded_from_json(p["rho"], ck, "rho"))
    return Problem(kind, A, ks=KsInput(ck.complex, cb.complex, phi, rho, A), ks_indexing=(ck, cb))


def serialize(pr: Problem) -> dict:
    out = {"version": "1", "kind": pr.kind, "coefficient": coefficient_to_json(pr.coefficient)}
    if pr.kind == "category":
        out["payload"] = {"category": category_to_json(pr.category)}
    elif pr.kind == "twisted_complex":
        out["payload"] = {"category": category_to_json(pr.category), **twisted_to_json(pr.twisted),
                          "functor": pr.functor}
    elif pr.kind == "complex":
        out["payload"] = {"complex": complex_to_json(pr.complex)}
    elif pr.kind == "snc":
        out["payload"] = snc_to_json(pr.snc)
    elif pr.kind == "blowup":
        D = pr.blowup
        out["payload"] = {"E": snc_to_json(D.E), "c_Z": D.c_Z, "c_XZ": D.c_XZ,
                          "to_Z": list(D.to_Z), "to_XZ": list(D.to_XZ)}
    else:
        ck, cb = pr.ks_indexing
        out["payload"] = {"C_k": complex_to_json(ck), "C_kbar": complex_to_json(cb),
                          "phi": graded_to_json(pr.ks.phi.maps, cb),
                          "rho": graded_to_json(pr.ks.rho.maps, ck)}
    return out
