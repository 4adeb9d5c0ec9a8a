"""Kato-Suslin and arithmetic homology of finite model complexes.

Indexing is homological here.  With ``Cbar`` the geometric complex and
``phi`` its Frobenius-like endomorphism::

    Ar_n = Cbar_{n-1} + Cbar_n,          d(x, y) = (-dx, (1 - phi)x + dy)
    KS_n = Ck_{n-2} + Cbar_{n-1} + Cbar_n

so ``Ar`` is the cone of ``1 - phi`` and ``KS`` the cone of
``rho'': Ck[1] -> Ar``, ``x -> (rho x, 0)``.  The latter is a chain map
exactly when ``(1 - phi) rho = 0``, which is required of the input.

Internally every column is a twisted complex over the one-object category
``pt``: homological degree ``n`` is slot ``-n`` and a free group of rank
``r`` is ``r`` copies of ``pt``.  Cones are then literally the cones of the
twisted calculus and the triangle can be fed to :func:`long_exact_check`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ChainMap, CochainComplex, NotAComplex, NotChainMap
from .dgcore import NegDgCategory
from .exactlinalg import ZZ, Coefficient, FgAbGroup, IntMatrix, Subquotient
from .sncweight import point_category
from .twisted import (BlockMap, Triangle, TwistedComplex, TwistedMorphism, cone, cone_triangle,
                      shift)
from .weighthom import LesReport, gamma_A, long_exact_check


class InvalidKsInput(ValueError):
    pass


@dataclass(frozen=True)
class KsInput:
    """``C_k``, ``C_kbar`` are cochain complexes (homological degree ``n`` at ``-n``)."""

    C_k: CochainComplex
    C_kbar: CochainComplex
    phi: ChainMap
    rho: ChainMap
    coefficient: Coefficient = ZZ


def validate_ks(inp: KsInput) -> list[str]:
    """All conditions are checked on the integral data, before tensoring with ``A``."""
    out = []
    for name, C in (("C_k", inp.C_k), ("C_kbar", inp.C_kbar)):
        try:
            C.check()
        except NotAComplex as e:
            out.append(f"{name} is not a complex: {e}")
    if inp.phi.source != inp.C_kbar or inp.phi.target != inp.C_kbar:
        out.append("phi must be an endomorphism of C_kbar")
    if inp.rho.source != inp.C_k or inp.rho.target != inp.C_kbar:
        out.append("rho must map C_k to C_kbar")
    if out:
        return out
    for name, f in (("phi", inp.phi), ("rho", inp.rho)):
        try:
            f.check()
        except (NotChainMap, ValueError) as e:
            out.append(f"{name} is not a chain map: {e}")
    for n in inp.C_k.degrees:
        one_minus_phi = IntMatrix.identity(inp.C_kbar.rank(n)) - inp.phi.at(n)
        if not (one_minus_phi @ inp.rho.at(n)).is_zero():
            out.append(f"(1 - phi) rho != 0 in homological degree {-n}")
    return out


def check_ks(inp: KsInput) -> KsInput:
    errs = validate_ks(inp)
    if errs:
        raise InvalidKsInput("; ".join(errs))
    return inp


# ---------------------------------------------------------------------------
# complexes <-> twisted complexes over pt


def _block(J: NegDgCategory, m: IntMatrix) -> BlockMap:
    return BlockMap(("pt",) * m.cols, ("pt",) * m.rows, 0,
                    tuple(tuple(J.element("pt", "pt", 0, (m[r, c],)) for c in range(m.cols))
                          for r in range(m.rows)))


def _matrix(b: BlockMap) -> IntMatrix:
    return IntMatrix([[e.coords[0] if e.coords else 0 for e in row] for row in b.blocks],
                     len(b.target), len(b.source))


def as_twisted(J: NegDgCategory, C: CochainComplex) -> TwistedComplex:
    objects = {n: ("pt",) * r for n, r in C.ranks.items()}
    return TwistedComplex(J, objects, {(n, n + 1): _block(J, m) for n, m in C.diffs.items()})


def as_cochain(P: TwistedComplex) -> CochainComplex:
    for (i, j) in P.q:
        if j != i + 1:
            raise ValueError("only ordinary complexes convert back to cochain complexes")
    return CochainComplex({i: len(o) for i, o in P.objects.items()},
                          {i: _matrix(m) for (i, j), m in P.q.items()})


def as_twisted_map(J: NegDgCategory, P: TwistedComplex, Q: TwistedComplex, f: ChainMap) -> TwistedMorphism:
    comps = {}
    for n in set(P.support) & set(Q.support):
        comps[n, n] = _block(J, f.at(n))
    return TwistedMorphism(P, Q, 0, comps)


@dataclass(frozen=True)
class KsTotals:
    Ck1: TwistedComplex            # C_k[1]
    ar: TwistedComplex
    ks: TwistedComplex
    triangle: Triangle             # C_k[1] -> Ar -> KS -> C_k[2]


def ks_totals(inp: KsInput) -> KsTotals:
    check_ks(inp)
    J = point_category()
    Cb = as_twisted(J, inp.C_kbar)
    phi = as_twisted_map(J, Cb, Cb, ChainMap(inp.C_kbar, inp.C_kbar, {
        n: IntMatrix.identity(inp.C_kbar.rank(n)) - inp.phi.at(n) for n in inp.C_kbar.degrees}))
    ar = cone(phi, check=False).cone
    Ck1 = shift(as_twisted(J, inp.C_k), 1)
    # rho'' at slot i: C_k^{i+1} -> Ar^i = Cbar^{i+1} + Cbar^i, into the first summand
    comps = {}
    for i in Ck1.support:
        r = inp.rho.at(i + 1)
        m = IntMatrix.vstack([r, IntMatrix.zeros(inp.C_kbar.rank(i), r.cols)])
        comps[i, i] = _block(J, m)
    rho2 = TwistedMorphism(Ck1, ar, 0, comps)
    tri = cone_triangle(rho2)
    return KsTotals(Ck1, ar, tri.C, Triangle(tri.u, tri.v, tri.w, "ks-cone"))


def _checked(C: CochainComplex, A: Coefficient) -> CochainComplex:
    C.check(A)
    return C


def ks_total(inp: KsInput) -> CochainComplex:
    return _checked(as_cochain(ks_totals(inp).ks), inp.coefficient)


def ar_total(inp: KsInput) -> CochainComplex:
    return _checked(as_cochain(ks_totals(inp).ar), inp.coefficient)


@dataclass(frozen=True)
class KsResult:
    ks: dict[int, FgAbGroup]
    ar: dict[int, FgAbGroup]
    sequence_report: dict[int, list[str]] = field(default_factory=dict)


def _homological_range(*Cs: CochainComplex) -> range:
    degs = [-n for C in Cs for n in C.degrees]
    if not degs:
        return range(0)
    return range(min(degs), max(degs) + 1)


def ks_homology(inp: KsInput, with_sequence: bool = True) -> KsResult:
    A = inp.coefficient
    KS, AR = ks_total(inp), ar_total(inp)
    ks = {n: KS.homology(n, A) for n in _homological_range(KS)}
    ar = {n: AR.homology(n, A) for n in _homological_range(AR)}
    seq = check_invariants_coinvariants(inp) if with_sequence else {}
    return KsResult(ks, ar, seq)


def ks_long_exact_check(inp: KsInput) -> LesReport:
    """The cone triangle ``C_k[1] -> Ar -> KS`` under ``Gamma_A`` on ``pt``."""
    T = ks_totals(inp)
    G = gamma_A(T.ar.J, {"pt": 1}, {("pt", "pt"): (IntMatrix([[1]]),)}, inp.coefficient)
    return long_exact_check(G, T.triangle)


# ---------------------------------------------------------------------------
# invariants and coinvariants


def _is_zero(S: Subquotient) -> bool:
    return S.group().is_zero


def check_invariants_coinvariants(inp: KsInput) -> dict[int, list[str]]:
    """Exactness of ``0 -> H_{i+1}(Cbar)_phi -> H^ar_{i+1} -> H_i(Cbar)^phi -> 0`` per degree ``i``.

    The maps are ``y -> (0, y)`` and ``(x, y) -> x`` on representatives.
    Returns the failures per degree; an empty list means exact.
    """
    A = inp.coefficient
    Cb = inp.C_kbar
    AR = ar_total(inp)
    out: dict[int, list[str]] = {}
    rng = _homological_range(Cb)
    for i in range(rng.start - 1, rng.stop):
        errs = []
        up, lo = -(i + 1), -i                   # cohomological positions of H_{i+1}, H_i
        H1 = Cb.cohomology_subquotient(up, A)
        H0 = Cb.cohomology_subquotient(lo, A)
        T = AR.cohomology_subquotient(up, A)     # Ar_{i+1} = Cbar_i + Cbar_{i+1}
        g1 = IntMatrix.identity(Cb.rank(up)) - inp.phi.at(up)
        g0 = IntMatrix.identity(Cb.rank(lo)) - inp.phi.at(lo)
        coinv = Subquotient(H1.numerator, IntMatrix.hstack([H1.denominator, g1 @ H1.numerator]))
        inv = H0.kernel(g0, H0)
        alpha = IntMatrix.vstack([IntMatrix.zeros(Cb.rank(lo), Cb.rank(up)), IntMatrix.identity(Cb.rank(up))])
        beta = IntMatrix.hstack([IntMatrix.identity(Cb.rank(lo)), IntMatrix.zeros(Cb.rank(lo), Cb.rank(up))])
        if alpha.rows != T.ambient or beta.cols != T.ambient:
            raise AssertionError("arithmetic column has an unexpected layout")
        if not coinv.respects(alpha, T):
            errs.append("coinvariants -> ar is not well defined")
        if not T.respects(beta, inv):
            errs.append("ar -> invariants is not well defined")
        if not errs:
            if not _is_zero(coinv.kernel(alpha, T)):
                errs.append(f"coinvariants -> ar is not injective (kernel {coinv.kernel(alpha, T).group()})")
            if not coinv.image(alpha, T).same_subgroup(T.kernel(beta, inv)):
                errs.append("not exact at ar")
            if not T.image(beta, inv).same_subgroup(inv):
                errs.append("ar -> invariants is not surjective")
        out[i] = errs
    return out


def invariants(inp: KsInput, i: int) -> FgAbGroup:
    H = inp.C_kbar.cohomology_subquotient(-i, inp.coefficient)
    g = IntMatrix.identity(inp.C_kbar.rank(-i)) - inp.phi.at(-i)
    return H.kernel(g, H).group()


def coinvariants(inp: KsInput, i: int) -> FgAbGroup:
    H = inp.C_kbar.cohomology_subquotient(-i, inp.coefficient)
    g = IntMatrix.identity(inp.C_kbar.rank(-i)) - inp.phi.at(-i)
    return Subquotient(H.numerator, IntMatrix.hstack([H.denominator, g @ H.numerator])).group()
