import random

from dgweight.complexes import CochainComplex
from dgweight.dgcore import (HomComplex, NegDgCategory, build_dgchain_instance, chain_map_lattice,
                             validate_category)
from dgweight.exactlinalg import IntMatrix
from dgweight.randgen import random_dgchain_category

# one object A with hom^0 = Z^2 on (1, e); columns of the table run over pairs (g, f)
IDEMPOTENT = [(1, 0), (0, 1), (0, 1), (0, 1)]


def one_object(table, ident=(1, 0), homs=None, extra=None):
    comp = {("A", "A", "A", 0, 0): IntMatrix.from_columns(table, 2), **(extra or {})}
    return NegDgCategory(["A"], homs or {("A", "A"): HomComplex({0: 2})}, comp, {"A": ident})


def test_valid_ring():
    assert validate_category(one_object(IDEMPOTENT)).ok


def test_wrong_identity():
    assert "unitality" in validate_category(one_object(IDEMPOTENT, ident=(0, 1))).kinds()


def test_not_associative():
    # basis 1, a, b with aa = b, ab = 0, ba = 1: unital, but (aa)a = 1 and a(aa) = 0
    table = [(1, 0, 0), (0, 1, 0), (0, 0, 1),
             (0, 1, 0), (0, 0, 1), (0, 0, 0),
             (0, 0, 1), (1, 0, 0), (0, 0, 0)]
    J = NegDgCategory(["A"], {("A", "A"): HomComplex({0: 3})},
                      {("A", "A", "A", 0, 0): IntMatrix.from_columns(table, 3)}, {"A": (1, 0, 0)})
    assert validate_category(J).kinds() == {"associativity"}


def test_leibniz_failure():
    homs = {("A", "A"): HomComplex({-1: 1, 0: 2}, {-1: IntMatrix([[0], [1]])})}
    extra = {("A", "A", "A", 0, -1): IntMatrix([[0, 1]]), ("A", "A", "A", -1, 0): IntMatrix([[0, 0]])}
    assert "leibniz" in validate_category(one_object(IDEMPOTENT, homs=homs, extra=extra)).kinds()


def test_positive_degree_rejected():
    J = NegDgCategory(["A"], {("A", "A"): HomComplex({1: 1, 0: 1})}, {}, {"A": (1,)})
    assert "negativity" in validate_category(J).kinds()


def test_dgchain_instances_are_valid():
    rng = random.Random(0)
    for _ in range(3):
        assert validate_category(random_dgchain_category(rng, degree_zero=False)).ok


def test_chain_map_lattice():
    X = CochainComplex({-1: 1, 0: 1}, {-1: IntMatrix([[2]])})
    maps = chain_map_lattice(X, X)
    assert len(maps) == 1
    for f in maps:
        for n in (-2, -1):
            assert (X.d(n).__matmul__(f.get(n, IntMatrix.zeros(X.rank(n), X.rank(n))))
                    == f.get(n + 1, IntMatrix.zeros(X.rank(n + 1), X.rank(n + 1))) @ X.d(n))


def test_dgchain_hom_ranks():
    X = CochainComplex({-1: 1, 0: 2}, {-1: IntMatrix([[1], [0]])})
    Y = CochainComplex({0: 1})
    J = build_dgchain_instance({"X": X, "Y": Y})
    # degree -1 maps X -> Y: X^0 -> Y^-1 = 0 and X^1 -> Y^0 = 0
    assert J.rank("X", "Y", -1) == 0
    # degree -1 maps Y -> X: Y^0 -> X^-1
    assert J.rank("Y", "X", -1) == 1
    # chain maps X -> Y: f^0 with f^0 d = 0, a rank one lattice
    assert J.rank("X", "Y", 0) == 1
