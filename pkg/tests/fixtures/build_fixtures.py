"""Regenerates the fixture corpus: ``python tests/fixtures/build_fixtures.py``."""

import random
from pathlib import Path

from dgweight.complexes import ChainMap, CochainComplex
from dgweight.dgcore import build_dgchain_instance
from dgweight.exactlinalg import ZZ, Coefficient, IntMatrix
from dgweight.kshom import KsInput
from dgweight.problemio import (CategoryData, IndexedComplex, Problem, canonical_dumps, matrix_to_json,
                                serialize)
from dgweight.randgen import matrix_category, random_twisted_complex
from dgweight.sncweight import BlowupData, SncConfiguration, point_category
from dgweight.twisted import BlockMap, TwistedComplex
from dgweight.weighthom import forgetful_functor

HERE = Path(__file__).parent
Z5 = Coefficient.mod(5)


def M(rows):
    return IntMatrix(rows, len(rows), len(rows[0]) if rows else 0)


def write(name, doc):
    (HERE / name).write_text(canonical_dumps(doc) if not isinstance(doc, str) else doc)


def dgchain(complexes):
    indexed = {k: IndexedComplex(C) for k, C in complexes.items()}
    return CategoryData(build_dgchain_instance(complexes), indexed)


def ordinary(cat, slots, maps):
    J = cat.J
    q = {}
    for (i, j), coords in maps.items():
        src, tgt = slots[i], slots[j]
        q[i, j] = BlockMap(src, tgt, i - j + 1, tuple(
            tuple(J.element(s, t, i - j + 1, coords[r][c]) for c, s in enumerate(src))
            for r, t in enumerate(tgt)))
    return TwistedComplex(J, slots, q)


Zpt = CochainComplex({0: 1})
Z2res = CochainComplex({-1: 1, 0: 1}, {-1: M([[2]])})      # resolves Z/2

# categories
pt = point_category()
write("category_point.json", serialize(Problem("category", ZZ, category=CategoryData(pt))))
write("category_dgchain.json", serialize(Problem("category", ZZ, category=dgchain({"X": Zpt, "Y": Z2res}))))

# twisted complexes
cat = dgchain({"X": Zpt})
write("one_slot.json", serialize(Problem("twisted_complex", ZZ, category=cat,
                                         twisted=ordinary(cat, {0: ("X",)}, {}), functor="H0")))
cat2 = dgchain({"X": Z2res, "Y": Zpt})
P2 = ordinary(cat2, {-1: ("Y",), 0: ("Y", "X")}, {(-1, 0): [[[1]], [[0]]]})
write("twisted_two_slot.json", serialize(Problem("twisted_complex", ZZ, category=cat2, twisted=P2,
                                                 functor="H0")))
write("twisted_two_slot_z5.json", serialize(Problem("twisted_complex", Z5, category=cat2, twisted=P2,
                                                    functor="H0")))
ranks = {"A": 1, "B": 2}
Jm = matrix_category(ranks)
Pm = random_twisted_complex(random.Random(7), Jm, max_slots=3, max_rank=4)
G = forgetful_functor(Jm, ranks)
functor = {"values": {X: matrix_to_json(m) for X, m in G.on_objects.items()},
           "images": [{"source": P, "target": Q, "matrices": [matrix_to_json(m) for m in ms]}
                      for (P, Q), ms in sorted(G.on_generators.items())]}
write("twisted_presented.json", serialize(Problem("twisted_complex", ZZ, category=CategoryData(Jm),
                                                  twisted=Pm, functor=functor)))

# plain complexes: cellular chains of RP^2
rp2 = CochainComplex.from_homological({0: 1, 1: 1, 2: 1}, {1: M([[0]]), 2: M([[2]])})
write("complex_rp2.json", serialize(Problem("complex", ZZ, complex=IndexedComplex(rp2, "homological"))))
write("complex_rp2_z2.json", serialize(Problem("complex", Coefficient.mod(2),
                                               complex=IndexedComplex(rp2, "homological"))))

# snc
triangle = SncConfiguration(3, {(1,): 1, (2,): 1, (3,): 1, (1, 2): 1, (1, 3): 1, (2, 3): 1})
write("triangle.json", serialize(Problem("snc", ZZ, snc=triangle)))
write("triangle_z5.json", serialize(Problem("snc", Z5, snc=triangle)))
write("snc_single.json", serialize(Problem("snc", ZZ, snc=SncConfiguration(1, {(1,): 1}))))
two_points = SncConfiguration(2, {(1,): 1, (2,): 1, (1, 2): 2}, {(1, 2): [[0, 0], [0, 0]]})
write("snc_two_points.json", serialize(Problem("snc", ZZ, snc=two_points)))

# blow-ups: Z meets every component of E^[0]; X_Z connected
blow = BlowupData(triangle, 1, 1, (0, 0, 0), (0, 0, 0))
write("blowup_triangle.json", serialize(Problem("blowup", ZZ, blowup=blow)))
write("blowup_triangle_z5.json", serialize(Problem("blowup", Z5, blowup=blow)))

# Kato-Suslin inputs
Z0 = CochainComplex({})
I1 = IntMatrix.identity(1)


def ks(name, inp):
    h = (IndexedComplex(inp.C_k, "homological"), IndexedComplex(inp.C_kbar, "homological"))
    write(name, serialize(Problem("ks", inp.coefficient, ks=inp, ks_indexing=h)))


ks("ks_point.json", KsInput(Zpt, Zpt, ChainMap(Zpt, Zpt, {0: I1}), ChainMap(Zpt, Zpt, {0: I1})))
ks("ks_z5_times6.json", KsInput(Z0, Zpt, ChainMap(Zpt, Zpt, {0: M([[6]])}), ChainMap(Z0, Zpt, {}), Z5))
C2 = CochainComplex({0: 2})
ks("ks_swap.json", KsInput(Z0, C2, ChainMap(C2, C2, {0: M([[0, 1], [1, 0]])}), ChainMap(Z0, C2, {})))

# malformed
bad_cat = dgchain({"X": Zpt})
bad = ordinary(bad_cat, {0: ("X",), 1: ("X",), 2: ("X",)}, {(0, 1): [[[1]]], (1, 2): [[[1]]]})
write("invalid/bad_mc.json", serialize(Problem("twisted_complex", ZZ, category=bad_cat, twisted=bad,
                                               functor="H0")))
write("invalid/not_json.json", '{"version": "1", "kind": "snc",\n')
write("invalid/missing_kind.json", {"version": "1", "coefficient": {"type": "Z"}, "payload": {}})
write("invalid/bad_modulus.json", {"version": "1", "kind": "snc", "coefficient": {"type": "Zmod", "n": 1},
                                   "payload": {"N": 1, "strata": [{"indices": [1], "components": 1}]}})
write("invalid/snc_missing_face.json", serialize(Problem("snc", ZZ, snc=SncConfiguration(
    3, {(1,): 1, (2,): 1, (1, 2): 1, (1, 3): 1}))))
write("invalid/snc_needs_incidence.json", serialize(Problem("snc", ZZ, snc=SncConfiguration(
    2, {(1,): 1, (2,): 1, (1, 2): 2}))))
bad_ks = KsInput(Zpt, Zpt, ChainMap(Zpt, Zpt, {0: M([[2]])}), ChainMap(Zpt, Zpt, {0: I1}))
ks("invalid/ks_rho_not_fixed.json", bad_ks)
doc = serialize(Problem("complex", ZZ, complex=IndexedComplex(rp2, "homological")))
doc["payload"]["complex"]["diffs"]["2"]["entries"] = [[2, 0]]
write("invalid/matrix_shape.json", doc)
not_cx = CochainComplex({0: 1, 1: 1, 2: 1}, {0: M([[1]]), 1: M([[1]])})
write("invalid/not_a_complex.json", serialize(Problem("complex", ZZ, complex=IndexedComplex(not_cx))))
doc = serialize(Problem("twisted_complex", ZZ, category=cat, twisted=ordinary(cat, {0: ("X",)}, {}),
                        functor="H0"))
doc["payload"]["slots"]["0"] = ["W"]
write("invalid/unknown_object.json", doc)
