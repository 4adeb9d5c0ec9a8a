import random

import pytest

from dgweight.exactlinalg import Coefficient, FgAbGroup, IntMatrix
from dgweight.randgen import (matrix_category, random_dgchain_category, random_twisted_complex,
                              random_twisted_morphism)
from dgweight.twisted import compose_morphisms, concentrated, shift, totalize
from dgweight.weighthom import (AdditiveFunctor, compose_induced, evaluate, forgetful_functor, h0_functor,
                                induced_map, validate_functor, weight_homology)


@pytest.fixture(scope="module")
def dg():
    J = random_dgchain_category(random.Random(31))
    return J, h0_functor(J)


def test_h0_values(dg):
    J, G = dg
    for X in J.objects:
        C = J.realization.complexes[X]
        assert G.value(X) == C.cohomology(0)


def test_evaluate_matches_totalization_mod_p(dg):
    J, _ = dg
    rng = random.Random(32)
    A = Coefficient.mod(3)
    G3 = h0_functor(J, A)
    for _ in range(10):
        P = random_twisted_complex(rng, J, gauge_density=0.9)
        for n in P.window():
            assert evaluate(G3, P, n) == totalize(shift(P, n)).cohomology(0, A)


def test_shift_property(dg):
    J, G = dg
    rng = random.Random(33)
    for _ in range(10):
        P = random_twisted_complex(rng, J)
        for k in (-1, 2):
            for n in P.window():
                assert evaluate(G, shift(P, k), n - k) == evaluate(G, P, n)


def test_concentrated_object(dg):
    J, G = dg
    res = weight_homology(G, concentrated(J, J.objects[0], 0), range(-2, 3))
    assert set(res.nonzero()) <= {0}
    assert res.groups[0] == G.value(J.objects[0])


def test_induced_maps_are_functorial(dg):
    J, G = dg
    rng = random.Random(34)
    for _ in range(8):
        P = random_twisted_complex(rng, J)
        f = random_twisted_morphism(rng, P, P)
        g = random_twisted_morphism(rng, P, P)
        for n in P.window():
            lhs = induced_map(G, compose_morphisms(g, f), n)
            assert lhs.equals(compose_induced(induced_map(G, g, n), induced_map(G, f, n)))


def test_forgetful_functor_valid():
    ranks = {"A": 1, "B": 2}
    assert validate_functor(forgetful_functor(matrix_category(ranks), ranks)).ok


def test_functor_violations():
    ranks = {"A": 1, "B": 2}
    J = matrix_category(ranks)
    G = forgetful_functor(J, ranks)
    # send every endomorphism generator of B to the identity: breaks multiplicativity
    broken = dict(G.on_generators)
    broken["B", "B"] = tuple(IntMatrix.identity(2) for _ in broken["B", "B"])
    rep = validate_functor(AdditiveFunctor(J, G.on_objects, broken))
    assert not rep.ok and "composition" in rep.kinds()
    missing = AdditiveFunctor(J, {"A": G.on_objects["A"]}, G.on_generators)
    assert "shape" in validate_functor(missing).kinds()


def test_torsion_coefficients_change_answer():
    ranks = {"A": 1, "B": 2}
    J = matrix_category(ranks)
    G5 = forgetful_functor(J, ranks, Coefficient.mod(5))
    assert G5.value("B") == FgAbGroup((5, 5))
