"""Weight homology of simple normal crossing configurations and blow-ups.

A configuration records, for every nonempty intersection ``E_T`` of
components (``T`` a strictly increasing tuple of indices ``1..N``), its
number of connected components, plus for each face ``T - {t_v}`` the map
sending a component of ``E_T`` to the component of the face containing it.
When both counts are 1 that map is forced and may be omitted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .complexes import CochainComplex
from .dgcore import NegDgCategory, ValidationReport, additive_category
from .exactlinalg import ZZ, Coefficient, FgAbGroup, IntMatrix, homology_subquotient
from .twisted import BlockMap, TwistedComplex
from .weighthom import WeightHomologyResult, evaluate_subquotient, gamma_A

Stratum = tuple[int, ...]


class InconsistentIncidence(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(str(v) for v in report.violations[:5]))
        self.report = report


@dataclass(frozen=True)
class SncConfiguration:
    N: int
    strata: Mapping[Stratum, int]
    incidence: Mapping[Stratum, Sequence[Sequence[int]]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "strata", {tuple(k): int(v) for k, v in sorted(self.strata.items(),
                                                                              key=lambda kv: (len(kv[0]), kv[0]))})
        object.__setattr__(self, "incidence", {tuple(k): tuple(tuple(m) for m in v)
                                               for k, v in self.incidence.items()})

    @property
    def dimension(self) -> int:
        """Largest ``a`` with ``E^{[a]}`` nonempty."""
        return max((len(T) - 1 for T in self.strata), default=-1)

    def level(self, a: int) -> list[Stratum]:
        return [T for T in self.strata if len(T) == a + 1]

    def count(self, a: int) -> int:
        """``c(E^{[a]})``."""
        return sum(self.strata[T] for T in self.level(a))

    def face_map(self, T: Stratum, v: int) -> tuple[int, ...]:
        """Component of ``E_{T - t_v}`` containing each component of ``E_T``."""
        given = self.incidence.get(T)
        if given is not None:
            return given[v]
        return (0,) * self.strata[T]


def validate_snc(E: SncConfiguration) -> ValidationReport:
    rep = ValidationReport()
    if E.N < 1:
        rep.add("shape", f"N must be positive, got {E.N}")
    for T, c in E.strata.items():
        if not T or list(T) != sorted(set(T)) or T[0] < 1 or T[-1] > E.N:
            rep.add("shape", f"stratum {T} is not a strictly increasing tuple in 1..{E.N}", T)
            continue
        if c < 1:
            rep.add("count", f"stratum {T} has component count {c} < 1", T)
        for v in range(len(T)):
            F = T[:v] + T[v + 1:]
            if F and F not in E.strata:
                rep.add("monotone", f"stratum {T} is present but its face {F} is not", T)
    if not rep.ok:
        return rep
    for T, c in E.strata.items():
        if len(T) < 2:
            continue
        given = E.incidence.get(T)
        if given is None:
            if c != 1 or any(E.strata[T[:v] + T[v + 1:]] != 1 for v in range(len(T))):
                rep.add("incidence", f"stratum {T} needs component incidence data", T)
            continue
        if len(given) != len(T):
            rep.add("incidence", f"stratum {T} needs {len(T)} face maps, got {len(given)}", T)
            continue
        for v, m in enumerate(given):
            F = T[:v] + T[v + 1:]
            if len(m) != c or any(not 0 <= x < E.strata[F] for x in m):
                rep.add("incidence", f"face map {v} of stratum {T} is not a map of components "
                        f"{c} -> {E.strata[F]}", (T, v))
    if not rep.ok:
        return rep
    # simplicial identity: deleting t_mu then t_v agrees with deleting t_v then t_{mu-1}
    for T in E.strata:
        if len(T) < 3:
            continue
        for v, mu in itertools.combinations(range(len(T)), 2):
            Fv = T[:v] + T[v + 1:]
            Fmu = T[:mu] + T[mu + 1:]
            one = [E.face_map(Fmu, v)[x] for x in E.face_map(T, mu)]
            two = [E.face_map(Fv, mu - 1)[x] for x in E.face_map(T, v)]
            if one != two:
                rep.add("incidence", f"face maps of {T} do not commute at ({v},{mu})", (T, v, mu))
    return rep


def check_snc(E: SncConfiguration) -> SncConfiguration:
    rep = validate_snc(E)
    if not rep.ok:
        raise InconsistentIncidence(rep)
    return E


def _offsets(E: SncConfiguration, a: int) -> dict[Stratum, int]:
    off, pos = {}, 0
    for T in E.level(a):
        off[T] = pos
        pos += E.strata[T]
    return off


def boundary(E: SncConfiguration, a: int) -> IntMatrix:
    """``d_a: Z^{c(E^[a])} -> Z^{c(E^[a-1])}``, the alternating sum of face maps."""
    rows, cols = E.count(a - 1), E.count(a)
    out = [[0] * cols for _ in range(rows)]
    src, dst = _offsets(E, a), _offsets(E, a - 1)
    for T in E.level(a):
        for v in range(len(T)):
            F = T[:v] + T[v + 1:]
            for x, y in enumerate(E.face_map(T, v)):
                out[dst[F] + y][src[T] + x] += -1 if v % 2 else 1
    return IntMatrix(out, rows, cols)


@dataclass(frozen=True)
class GammaComplex:
    """``Gamma(E)``: degree ``a`` holds ``A^{c(E^[a])}``; stored cohomologically at ``-a``."""

    complex: CochainComplex
    coefficient: Coefficient

    def homology(self, a: int) -> FgAbGroup:
        return self.complex.homology(a, self.coefficient)


def build_gamma_complex(E: SncConfiguration, A: Coefficient = ZZ) -> GammaComplex:
    check_snc(E)
    top = E.dimension
    ranks = {a: E.count(a) for a in range(top + 1)}
    bounds = {a: boundary(E, a) for a in range(1, top + 1)}
    C = CochainComplex.from_homological(ranks, bounds)
    C.check(A)
    return GammaComplex(C, A)


# ---------------------------------------------------------------------------
# the same computation through twisted complexes


def point_category() -> NegDgCategory:
    """One object ``pt`` with ``hom(pt, pt) = Z`` in degree 0."""
    return additive_category(["pt"], {("pt", "pt"): 1},
                             {("pt", "pt", "pt"): IntMatrix([[1]])}, {"pt": (1,)})


def gamma_twisted_complex(E: SncConfiguration, J: NegDgCategory | None = None) -> TwistedComplex:
    """``Gamma(E)`` as a twisted complex: slot ``-a`` holds ``c(E^[a])`` copies of ``pt``."""
    check_snc(E)
    J = J or point_category()
    objects = {-a: ("pt",) * E.count(a) for a in range(E.dimension + 1)}
    q = {}
    for a in range(1, E.dimension + 1):
        d = boundary(E, a)
        blocks = tuple(tuple(J.element("pt", "pt", 0, (d[r, c],)) for c in range(d.cols))
                       for r in range(d.rows))
        q[-a, -a + 1] = BlockMap(objects[-a], objects[-a + 1], 0, blocks)
    return TwistedComplex(J, objects, q)


def snc_weight_homology(E: SncConfiguration, A: Coefficient = ZZ) -> WeightHomologyResult:
    """``H_a`` of ``Gamma(E)``, read through ``Gamma_A`` on the point category."""
    P = gamma_twisted_complex(E)
    G = gamma_A(P.J, {"pt": 1}, {("pt", "pt"): (IntMatrix([[1]]),)}, A)
    groups, wit = {}, {}
    for a in range(E.dimension + 1):
        sq = evaluate_subquotient(G, P, -a)
        groups[a], wit[a] = sq.group(), sq
    return WeightHomologyResult(groups, wit)


# ---------------------------------------------------------------------------
# blow-ups


@dataclass(frozen=True)
class BlowupData:
    E: SncConfiguration
    c_Z: int
    c_XZ: int
    to_Z: Sequence[int]     # component of E^[0] -> component of Z
    to_XZ: Sequence[int]    # component of E^[0] -> component of X_Z


def validate_blowup(D: BlowupData) -> ValidationReport:
    rep = validate_snc(D.E)
    n = D.E.count(0)
    for name, m, c in (("to_Z", D.to_Z, D.c_Z), ("to_XZ", D.to_XZ, D.c_XZ)):
        if c < 1:
            rep.add("count", f"component count for {name} must be positive")
        if len(m) != n or any(not 0 <= x < c for x in m):
            rep.add("incidence", f"{name} must send each of the {n} components of E^[0] into 0..{c - 1}")
    return rep


def blowup_map(D: BlowupData) -> IntMatrix:
    """``Z^{c(E^[0])} -> Z^{c(Z)} + Z^{c(X_Z)}``: each component to the ones containing its image."""
    n = D.E.count(0)
    out = [[0] * n for _ in range(D.c_Z + D.c_XZ)]
    for x in range(n):
        out[D.to_Z[x]][x] = 1
        out[D.c_Z + D.to_XZ[x]][x] = 1
    return IntMatrix(out, D.c_Z + D.c_XZ, n)


OUT_OF_RANGE = "out of formula range"


def blowup_weight_homology(D: BlowupData, L: Coefficient = ZZ,
                           degrees: Sequence[int] | None = None) -> WeightHomologyResult:
    """``WH_1 = ker(L^{c(E^[0])} -> L^{c(Z)} + L^{c(X_Z)})`` and ``WH_{a+1} = H_a(Gamma_E(L))`` for ``a >= 1``."""
    rep = validate_blowup(D)
    if not rep.ok:
        raise InconsistentIncidence(rep)
    if degrees is None:
        degrees = range(0, D.E.dimension + 2)
    Gam = build_gamma_complex(D.E, L)
    M = blowup_map(D)
    groups, notes, wit = {}, {}, {}
    for k in degrees:
        if k <= 0:
            groups[k] = FgAbGroup()
            notes[k] = OUT_OF_RANGE
        elif k == 1:
            sq = homology_subquotient(IntMatrix.zeros(M.cols, 0), M, L)
            groups[k], wit[k] = sq.group(), sq
        else:
            groups[k] = Gam.homology(k - 1)
    return WeightHomologyResult(groups, wit, notes)
