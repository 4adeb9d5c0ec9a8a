import random

from dgweight.complexes import ChainMap, CochainComplex
from dgweight.exactlinalg import Coefficient, FgAbGroup, IntMatrix
from dgweight.kshom import (KsInput, as_cochain, as_twisted, coinvariants, invariants, ks_homology,
                            ks_long_exact_check, ks_total, validate_ks)
from dgweight.randgen import random_complex, random_ks_input
from dgweight.sncweight import point_category

Z1, Z0 = CochainComplex({0: 1}), CochainComplex({})
I1 = IntMatrix.identity(1)


def test_point():
    res = ks_homology(KsInput(Z1, Z1, ChainMap(Z1, Z1, {0: I1}), ChainMap(Z1, Z1, {0: I1})))
    assert {n: str(g) for n, g in res.ks.items()} == {0: "Z", 1: "0", 2: "0"}
    assert {n: str(g) for n, g in res.ar.items()} == {0: "Z", 1: "Z"}


def test_z5_times_six():
    inp = KsInput(Z0, Z1, ChainMap(Z1, Z1, {0: IntMatrix([[6]])}), ChainMap(Z0, Z1, {}), Coefficient.mod(5))
    assert invariants(inp, 0) == coinvariants(inp, 0) == FgAbGroup((5,))
    res = ks_homology(inp)
    assert res.ar == {0: FgAbGroup((5,)), 1: FgAbGroup((5,))}
    assert not any(res.sequence_report.values())


def test_swap():
    C2 = CochainComplex({0: 2})
    inp = KsInput(Z0, C2, ChainMap(C2, C2, {0: IntMatrix([[0, 1], [1, 0]])}), ChainMap(Z0, C2, {}))
    assert invariants(inp, 0) == FgAbGroup((0,))
    assert coinvariants(inp, 0) == FgAbGroup((0,))


def test_invalid_inputs():
    assert validate_ks(KsInput(Z1, Z1, ChainMap(Z1, Z1, {0: IntMatrix([[2]])}), ChainMap(Z1, Z1, {0: I1})))
    # phi = (1, 0) does not commute with d = 1
    C2 = CochainComplex({0: 1, 1: 1}, {0: I1})
    assert validate_ks(KsInput(Z0, C2, ChainMap(C2, C2, {0: I1, 1: IntMatrix([[0]])}), ChainMap(Z0, C2, {})))


def test_random_inputs():
    rng = random.Random(51)
    for _ in range(20):
        inp = random_ks_input(rng, modulus=rng.choice([None, 3]))
        assert not validate_ks(inp)
        assert ks_total(inp).is_complex()
        assert ks_long_exact_check(inp).ok


def test_point_conversion_round_trip():
    rng = random.Random(52)
    J = point_category()
    for _ in range(10):
        C = random_complex(rng, 6)
        assert as_cochain(as_twisted(J, C)) == C
