"""Finitely presented negative dg-categories.

Every hom complex ``hom(P, Q)`` is a free abelian group ``Z^{r_d}`` in each
degree ``d <= 0`` together with differential matrices ``hom^d -> hom^{d+1}``.
Composition ``hom^b(Q, R) x hom^a(P, Q) -> hom^{a+b}(P, R)`` is stored as a
structure matrix ``M`` so that ``coords(g f) = M @ (coords(g) kron coords(f))``.

Sign convention (Koszul): ``d(g f) = d(g) f + (-1)^{deg g} g d(f)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .complexes import CochainComplex, NotAComplex
from .exactlinalg import IntMatrix, ShapeMismatch, kernel_basis, solve


class ObjectMismatch(ValueError):
    pass


class InvalidCategory(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(str(v) for v in report.violations[:5]))
        self.report = report


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: object = None

    def __str__(self):
        return f"{self.kind}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, witness=None) -> None:
        self.violations.append(Violation(kind, message, witness))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self):
        return self.ok

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)


@dataclass(frozen=True)
class HomComplex:
    ranks: Mapping[int, int]
    diffs: Mapping[int, IntMatrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ranks", {int(k): int(v) for k, v in sorted(self.ranks.items()) if v})
        object.__setattr__(self, "diffs", {int(k): m for k, m in sorted(self.diffs.items())})

    def rank(self, d: int) -> int:
        return self.ranks.get(d, 0)

    def d(self, k: int) -> IntMatrix:
        m = self.diffs.get(k)
        return m if m is not None else IntMatrix.zeros(self.rank(k + 1), self.rank(k))

    @property
    def min_degree(self) -> int:
        return min(self.ranks, default=0)


@dataclass(frozen=True)
class HomElement:
    """An element of ``hom^degree(source, target)`` in generator coordinates."""

    source: str
    target: str
    degree: int
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    def __add__(self, other: "HomElement") -> "HomElement":
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ObjectMismatch("cannot add elements of different hom groups")
        return HomElement(self.source, self.target, self.degree,
                          tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "HomElement":
        return self.scale(-1)

    def __sub__(self, other: "HomElement") -> "HomElement":
        return self + (-other)

    def scale(self, c: int) -> "HomElement":
        return HomElement(self.source, self.target, self.degree, tuple(c * x for x in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


class NegDgCategory:
    """A finitely presented dg-category whose homs live in degrees ``<= 0``.

    The constructor stores data as given so that invalid input can be
    reported on; use :meth:`build` for an eagerly validated instance.
    """

    def __init__(self, objects: Sequence[str], homs: Mapping[tuple[str, str], HomComplex],
                 composition: Mapping[tuple, IntMatrix], identities: Mapping[str, Sequence[int]],
                 realization: "DgChainRealization | None" = None):
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object ids")
        self.homs = dict(homs)
        self.composition = dict(composition)
        self.identities = {k: tuple(v) for k, v in identities.items()}
        self.realization = realization

    @classmethod
    def build(cls, *args, **kwargs) -> "NegDgCategory":
        cat = cls(*args, **kwargs)
        report = validate_category(cat)
        if not report.ok:
            raise InvalidCategory(report)
        return cat

    def hom(self, P: str, Q: str) -> HomComplex:
        self._check(P)
        self._check(Q)
        return self.homs.get((P, Q)) or HomComplex({})

    def rank(self, P: str, Q: str, d: int) -> int:
        return self.hom(P, Q).rank(d)

    def _check(self, P: str) -> None:
        if P not in self.objects:
            raise ObjectMismatch(f"unknown object {P!r}")

    def structure(self, P: str, Q: str, R: str, b: int, a: int) -> IntMatrix:
        m = self.composition.get((P, Q, R, b, a))
        shape = (self.rank(P, R, a + b), self.rank(Q, R, b) * self.rank(P, Q, a))
        if m is None:
            return IntMatrix.zeros(*shape)
        if m.shape != shape:
            raise ShapeMismatch(f"composition table {(P, Q, R, b, a)} has shape {m.shape}, "
                                f"expected {shape}")
        return m

    # elements -----------------------------------------------------------

    def zero(self, P: str, Q: str, degree: int) -> HomElement:
        return HomElement(P, Q, degree, (0,) * self.rank(P, Q, degree))

    def generator(self, P: str, Q: str, degree: int, index: int) -> HomElement:
        r = self.rank(P, Q, degree)
        return HomElement(P, Q, degree, tuple(1 if i == index else 0 for i in range(r)))

    def generators(self, P: str, Q: str, degree: int) -> list[HomElement]:
        return [self.generator(P, Q, degree, i) for i in range(self.rank(P, Q, degree))]

    def identity(self, P: str) -> HomElement:
        self._check(P)
        return HomElement(P, P, 0, self.identities.get(P, (0,) * self.rank(P, P, 0)))

    def element(self, P: str, Q: str, degree: int, coords: Sequence[int]) -> HomElement:
        if len(coords) != self.rank(P, Q, degree):
            raise ShapeMismatch(f"hom^{degree}({P},{Q}) has rank {self.rank(P, Q, degree)}, "
                                f"got {len(coords)} coordinates")
        return HomElement(P, Q, degree, tuple(coords))

    def __repr__(self):
        return f"NegDgCategory(objects={list(self.objects)!r})"


def compose(J: NegDgCategory, g: HomElement, f: HomElement) -> HomElement:
    """The composite ``g f`` (first ``f``, then ``g``).

    A composite whose degree is positive is the zero element, since such hom
    groups vanish in a negative dg-category.
    """
    if f.target != g.source:
        raise ObjectMismatch(f"cannot compose {f.source}->{f.target} with {g.source}->{g.target}")
    deg = f.degree + g.degree
    r = J.rank(f.source, g.target, deg)
    if r == 0 or not any(f.coords) or not any(g.coords):
        return HomElement(f.source, g.target, deg, (0,) * r)
    M = J.structure(f.source, f.target, g.target, g.degree, f.degree)
    kron = [x * y for x in g.coords for y in f.coords]
    return HomElement(f.source, g.target, deg, M.apply(kron))


def differential(J: NegDgCategory, f: HomElement) -> HomElement:
    """``d f``, one degree up.  Elements of degree ``>= 0`` map to zero."""
    h = J.hom(f.source, f.target)
    if f.degree >= 0:
        return J.zero(f.source, f.target, f.degree + 1)
    return HomElement(f.source, f.target, f.degree + 1, h.d(f.degree).apply(f.coords))


def validate_category(J: NegDgCategory) -> ValidationReport:
    """Check every axiom on generators; an empty report means ``J`` is valid."""
    rep = ValidationReport()
    objs = J.objects
    for (P, Q), h in J.homs.items():
        if P not in objs or Q not in objs:
            rep.add("shape", f"hom({P},{Q}) refers to an unknown object", (P, Q))
            continue
        for d, r in h.ranks.items():
            if d > 0 and r:
                rep.add("negativity", f"hom^{d}({P},{Q}) has rank {r} > 0", (P, Q, d))
        for k, m in h.diffs.items():
            if m.shape != (h.rank(k + 1), h.rank(k)):
                rep.add("shape", f"differential hom^{k}({P},{Q}) has shape {m.shape}", (P, Q, k))
    for key, m in J.composition.items():
        P, Q, R, b, a = key
        if any(x not in objs for x in (P, Q, R)):
            rep.add("shape", f"composition table {key} refers to an unknown object", key)
        elif m.shape != (J.rank(P, R, a + b), J.rank(Q, R, b) * J.rank(P, Q, a)):
            rep.add("shape", f"composition table {key} has shape {m.shape}", key)
    if not rep.ok:
        return rep

    for (P, Q), h in J.homs.items():
        for k in h.ranks:
            dd = h.d(k + 1) @ h.d(k)
            if not dd.is_zero():
                rep.add("d_squared", f"d∘d != 0 on hom^{k}({P},{Q})", (P, Q, k))

    for P in objs:
        ident = J.identity(P)
        if len(ident.coords) != J.rank(P, P, 0):
            rep.add("unitality", f"identity of {P} has the wrong length", P)
            continue
        if not differential(J, ident).is_zero():
            rep.add("d_identity", f"d(id_{P}) != 0", P)
    if not rep.ok:
        return rep

    degrees = {}
    for P, Q in itertools.product(objs, repeat=2):
        degrees[P, Q] = [d for d in J.hom(P, Q).ranks if d <= 0]
    # Each axiom is a matrix identity on Kronecker products of generators; a
    # failing column names the offending generator tuple.
    for P, Q in itertools.product(objs, repeat=2):
        idP = IntMatrix.from_columns([J.identity(P).coords], J.rank(P, P, 0))
        idQ = IntMatrix.from_columns([J.identity(Q).coords], J.rank(Q, Q, 0))
        for a in degrees[P, Q]:
            I = IntMatrix.identity(J.rank(P, Q, a))
            left = J.structure(P, Q, Q, 0, a) @ idQ.kron(I)
            right = J.structure(P, P, Q, a, 0) @ I.kron(idP)
            for name, m in ((f"id_{Q} f != f", left), (f"f id_{P} != f", right)):
                k = _bad_column(m, I)
                if k is not None:
                    rep.add("unitality", f"{name} for generator {k} of hom^{a}({P},{Q})", (P, Q, a, k))

    def dmat(P, Q, k):
        return J.hom(P, Q).d(k) if k < 0 else IntMatrix.zeros(J.rank(P, Q, k + 1), J.rank(P, Q, k))

    for P, Q, R in itertools.product(objs, repeat=3):
        for a in degrees[P, Q]:
            for b in degrees[Q, R]:
                if a + b + 1 > 0:
                    continue
                lhs = dmat(P, R, a + b) @ J.structure(P, Q, R, b, a)
                rhs = IntMatrix.zeros(*lhs.shape)
                if b < 0:
                    rhs = rhs + J.structure(P, Q, R, b + 1, a) @ dmat(Q, R, b).kron(
                        IntMatrix.identity(J.rank(P, Q, a)))
                if a < 0:
                    t = J.structure(P, Q, R, b, a + 1) @ IntMatrix.identity(J.rank(Q, R, b)).kron(
                        dmat(P, Q, a))
                    rhs = rhs + (t if b % 2 == 0 else -t)
                k = _bad_column(lhs, rhs)
                if k is not None:
                    rb, ra = divmod(k, J.rank(P, Q, a))
                    rep.add("leibniz", f"d(gf) != d(g)f + (-1)^{b} g d(f) for generators "
                            f"{rb} of hom^{b}({Q},{R}) and {ra} of hom^{a}({P},{Q})",
                            (J.generator(Q, R, b, rb), J.generator(P, Q, a, ra)))

    for P, Q, R, S in itertools.product(objs, repeat=4):
        for a in degrees[P, Q]:
            for b in degrees[Q, R]:
                for c in degrees[R, S]:
                    if J.rank(P, S, a + b + c) == 0:
                        continue
                    Ia = IntMatrix.identity(J.rank(P, Q, a))
                    Ic = IntMatrix.identity(J.rank(R, S, c))
                    hg_f = J.structure(P, Q, S, b + c, a) @ J.structure(Q, R, S, c, b).kron(Ia)
                    h_gf = J.structure(P, R, S, c, a + b) @ Ic.kron(J.structure(P, Q, R, b, a))
                    k = _bad_column(hg_f, h_gf)
                    if k is not None:
                        rep.add("associativity", f"(hg)f != h(gf) on {P}->{Q}->{R}->{S} "
                                f"in degrees {c},{b},{a}", (P, Q, R, S, c, b, a, k))
    return rep


def _bad_column(x: IntMatrix, y: IntMatrix) -> int | None:
    if x == y:
        return None
    cols = list(zip(*x.entries)) if x.rows else []
    ycols = list(zip(*y.entries)) if y.rows else []
    return next((k for k, (p, q) in enumerate(zip(cols, ycols)) if p != q), 0)


# ---------------------------------------------------------------------------
# concrete instances


def additive_category(objects: Sequence[str], hom_ranks: Mapping[tuple[str, str], int],
                      composition: Mapping[tuple[str, str, str], IntMatrix],
                      identities: Mapping[str, Sequence[int]]) -> NegDgCategory:
    """An additive category viewed as a dg-category with all morphisms in degree 0."""
    homs = {k: HomComplex({0: r}) for k, r in hom_ranks.items()}
    comp = {(P, Q, R, 0, 0): m for (P, Q, R), m in composition.items()}
    return NegDgCategory.build(objects, homs, comp, identities)


@dataclass(frozen=True)
class GradedBasis:
    """Elementary basis of graded maps ``X -> Y`` of a fixed degree."""

    degree: int
    index: tuple[tuple[int, int, int], ...]   # (p, row, col): X^p col -> Y^{p+degree} row

    @property
    def size(self) -> int:
        return len(self.index)


def _graded_basis(X: CochainComplex, Y: CochainComplex, k: int) -> GradedBasis:
    idx = []
    for p in X.degrees:
        for r in range(Y.rank(p + k)):
            for c in range(X.rank(p)):
                idx.append((p, r, c))
    return GradedBasis(k, tuple(idx))


def _vec_to_graded(basis: GradedBasis, X: CochainComplex, Y: CochainComplex,
                   v: Sequence[int]) -> dict[int, IntMatrix]:
    out = {p: [[0] * X.rank(p) for _ in range(Y.rank(p + basis.degree))] for p in X.degrees
           if Y.rank(p + basis.degree)}
    for (p, r, c), x in zip(basis.index, v):
        if x:
            out[p][r][c] += x
    return {p: IntMatrix(m, Y.rank(p + basis.degree), X.rank(p)) for p, m in out.items()}


def _graded_to_vec(basis: GradedBasis, maps: Mapping[int, IntMatrix]) -> tuple[int, ...]:
    return tuple(maps[p][r, c] if p in maps else 0 for p, r, c in basis.index)


def graded_differential(X: CochainComplex, Y: CochainComplex, k: int,
                        maps: Mapping[int, IntMatrix]) -> dict[int, IntMatrix]:
    """``d f = d_Y f - (-1)^k f d_X`` for a degree-``k`` graded map ``f``."""
    s = -1 if k % 2 else 1
    out = {}
    for p in set(X.degrees) | {p + 1 for p in X.degrees}:
        m = IntMatrix.zeros(Y.rank(p + k + 1), X.rank(p))
        if p in maps:
            m = m + Y.d(p + k) @ maps[p]
        if p + 1 in maps:
            m = m - (maps[p + 1] @ X.d(p)).scale(s)
        if m.rows and m.cols:
            out[p] = m
    return out


def compose_graded(g: Mapping[int, IntMatrix], f: Mapping[int, IntMatrix], a: int,
                   X: CochainComplex, Z: CochainComplex, b: int) -> dict[int, IntMatrix]:
    out = {}
    for p, fm in f.items():
        if p + a in g:
            out[p] = g[p + a] @ fm
    return out


@dataclass
class DgChainRealization:
    """How the generators of a dgChain instance act as graded maps of complexes."""

    complexes: dict[str, CochainComplex]
    bases: dict[tuple[str, str, int], GradedBasis]
    chain_map_basis: dict[tuple[str, str], IntMatrix]   # columns: hom^0 generators, elementary coords

    def as_graded(self, f: HomElement) -> dict[int, IntMatrix]:
        X, Y = self.complexes[f.source], self.complexes[f.target]
        basis = self.bases.get((f.source, f.target, f.degree))
        if basis is None or not any(f.coords):
            return {}
        if f.degree == 0:
            v = self.chain_map_basis[f.source, f.target].apply(f.coords)
        else:
            v = f.coords
        return _vec_to_graded(basis, X, Y, v)

    def from_graded(self, P: str, Q: str, k: int, maps: Mapping[int, IntMatrix]) -> HomElement:
        basis = self.bases.get((P, Q, k))
        if basis is None:
            return HomElement(P, Q, k, ())
        v = _graded_to_vec(basis, maps)
        if k == 0:
            Zb = self.chain_map_basis[P, Q]
            x = solve(Zb, v)
            if x is None:
                raise ValueError(f"graded map {P}->{Q} of degree 0 is not a chain map")
            return HomElement(P, Q, 0, x)
        return HomElement(P, Q, k, v)


def build_dgchain_instance(complexes: Mapping[str, CochainComplex]) -> NegDgCategory:
    """The negative dg-category of the given complexes.

    ``hom^k(X, Y)`` for ``k < 0`` is all degree-``k`` graded maps; ``hom^0``
    is the lattice of chain maps (the good truncation of the Hom complex).
    Generators of ``hom^k`` for ``k < 0`` are elementary matrices; generators
    of ``hom^0`` are a basis of the chain-map lattice.
    """
    complexes = dict(complexes)
    for name, C in complexes.items():
        try:
            C.check()
        except NotAComplex as e:
            raise NotAComplex(f"object {name!r}: {e}") from None

    names = list(complexes)
    bases: dict[tuple[str, str, int], GradedBasis] = {}
    zbasis: dict[tuple[str, str], IntMatrix] = {}
    homs: dict[tuple[str, str], HomComplex] = {}
    for P, Q in itertools.product(names, repeat=2):
        X, Y = complexes[P], complexes[Q]
        if not X.ranks or not Y.ranks:
            continue
        kmin = min(Y.degrees) - max(X.degrees)
        ranks, diffs = {}, {}
        for k in range(kmin, 1):
            b = _graded_basis(X, Y, k)
            if b.size:
                bases[P, Q, k] = b
        # chain maps = kernel of the degree-0 Hom differential
        b0 = bases.get((P, Q, 0))
        b1 = _graded_basis(X, Y, 1)
        if b0 is not None:
            D0 = _hom_diff_matrix(X, Y, 0, b0, b1)
            Zb = kernel_basis(D0)
            zbasis[P, Q] = Zb
            ranks[0] = Zb.cols
        for k in range(kmin, 0):
            bk = bases.get((P, Q, k))
            if bk is None:
                continue
            ranks[k] = bk.size
            if k + 1 < 0:
                nxt = bases.get((P, Q, k + 1))
                if nxt is not None:
                    diffs[k] = _hom_diff_matrix(X, Y, k, bk, nxt)
            elif (P, Q) in zbasis and zbasis[P, Q].cols:
                D = _hom_diff_matrix(X, Y, -1, bk, bases[P, Q, 0])
                cols = []
                for c in D.columns():
                    x = solve(zbasis[P, Q], c)
                    assert x is not None, "boundary of a degree -1 map is always a chain map"
                    cols.append(x)
                diffs[k] = IntMatrix.from_columns(cols, zbasis[P, Q].cols)
        if any(ranks.values()):
            homs[P, Q] = HomComplex(ranks, diffs)

    real = DgChainRealization(complexes, bases, zbasis)
    stub = NegDgCategory(names, homs, {}, {})

    identities = {}
    for P in names:
        if (P, P, 0) in bases:
            C = complexes[P]
            ident = {p: IntMatrix.identity(C.rank(p)) for p in C.degrees}
            identities[P] = real.from_graded(P, P, 0, ident).coords

    composition: dict[tuple, IntMatrix] = {}
    for P, Q, R in itertools.product(names, repeat=3):
        for (s, t, a) in [k for k in bases if k[0] == P and k[1] == Q]:
            for (s2, t2, b) in [k for k in bases if k[0] == Q and k[1] == R]:
                r = stub.rank(P, R, a + b)
                if r == 0:
                    continue
                ra, rb = stub.rank(P, Q, a), stub.rank(Q, R, b)
                if ra == 0 or rb == 0:
                    continue
                fs = [real.as_graded(stub.generator(P, Q, a, i)) for i in range(ra)]
                gs = [real.as_graded(stub.generator(Q, R, b, i)) for i in range(rb)]
                cols = []
                for gm in gs:
                    for fm in fs:
                        comp = compose_graded(gm, fm, a, complexes[P], complexes[R], b)
                        cols.append(real.from_graded(P, R, a + b, comp).coords)
                composition[P, Q, R, b, a] = IntMatrix.from_columns(cols, r)
    return NegDgCategory.build(names, homs, composition, identities, realization=real)


def _hom_diff_matrix(X: CochainComplex, Y: CochainComplex, k: int, src: GradedBasis,
                     dst: GradedBasis) -> IntMatrix:
    cols = []
    for i in range(src.size):
        e = [0] * src.size
        e[i] = 1
        img = graded_differential(X, Y, k, _vec_to_graded(src, X, Y, e))
        cols.append(_graded_to_vec(dst, img))
    return IntMatrix.from_columns(cols, dst.size)


def chain_map_lattice(X: CochainComplex, Y: CochainComplex) -> list[dict[int, IntMatrix]]:
    """A basis of the lattice of chain maps ``X -> Y``, each as matrices per degree."""
    b0, b1 = _graded_basis(X, Y, 0), _graded_basis(X, Y, 1)
    if not b0.size:
        return []
    Zb = kernel_basis(_hom_diff_matrix(X, Y, 0, b0, b1))
    return [_vec_to_graded(b0, X, Y, c) for c in Zb.columns()]
