"""Homological functors on twisted complexes, computed by the ker/im formula.

An additive functor ``G`` on ``H^0(J)`` is given by a presentation
``G(X) = Z^g / span(R_X)`` per object and an integer matrix per degree-0
hom generator.  Its extension to twisted complexes is::

    H(P, n) = ker G(q[n, n+1]) / im G(q[n-1, n])

read at slot 0 of ``P[n]``.  Shifting only flips the sign of ``q``, which
changes neither kernel nor image, so the quotient is formed directly at
slot ``n`` of ``P``.  Every value is a :class:`Subquotient` of the
free group on the generators of ``G(P^n)``, so induced maps are just ambient
matrices and exactness can be checked lattice by lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .dgcore import HomElement, NegDgCategory, ValidationReport, compose, differential
from .exactlinalg import (ZZ, Coefficient, FgAbGroup, IntMatrix, Subquotient,
                          kernel_basis, presented_homology, solve, span_contains)
from .twisted import (BlockMap, NotATwistedMorphism, Triangle, TwistedComplex, TwistedMorphism,
                      require_twisted, shift_morphism)


class FunctorInvalid(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(str(v) for v in report.violations[:5]))
        self.report = report


@dataclass(frozen=True)
class AdditiveFunctor:
    """``on_objects[X]`` is a relation matrix (rows = generators of ``G(X)``);
    ``on_generators[P, Q]`` lists one matrix per generator of ``hom^0(P, Q)``."""

    J: NegDgCategory
    on_objects: Mapping[str, IntMatrix]
    on_generators: Mapping[tuple[str, str], Sequence[IntMatrix]]
    name: str = "G"

    def ngens(self, X: str) -> int:
        return self.on_objects[X].rows

    def relations(self, X: str) -> IntMatrix:
        return self.on_objects[X]

    def value(self, X: str) -> FgAbGroup:
        return FgAbGroup.from_relations(self.on_objects[X])

    def apply(self, f: HomElement) -> IntMatrix:
        if f.degree != 0:
            return IntMatrix.zeros(self.ngens(f.target), self.ngens(f.source))
        out = IntMatrix.zeros(self.ngens(f.target), self.ngens(f.source))
        for c, m in zip(f.coords, self.on_generators.get((f.source, f.target), ())):
            if c:
                out = out + m.scale(c)
        return out

    def apply_block(self, m: BlockMap) -> IntMatrix:
        rows = [self.ngens(t) for t in m.target]
        cols = [self.ngens(s) for s in m.source]
        grid = [[self.apply(m.blocks[r][c]) for c in range(len(cols))] for r in range(len(rows))]
        return IntMatrix.from_blocks(grid, rows, cols)

    def sum_relations(self, objs: Sequence[str]) -> IntMatrix:
        return IntMatrix.block_diag([self.on_objects[o] for o in objs]) if objs else IntMatrix.zeros(0, 0)

    def with_coefficient(self, A: Coefficient) -> "AdditiveFunctor":
        """``G`` tensored with ``A``: adds ``n`` times every generator to the relations."""
        if A.is_integers:
            return self
        objs = {X: IntMatrix.hstack([R, A.free_relations(R.rows)]) for X, R in self.on_objects.items()}
        return AdditiveFunctor(self.J, objs, self.on_generators, f"{self.name}(x){A}")


def validate_functor(G: AdditiveFunctor) -> ValidationReport:
    """Well-definedness, identities, composition and vanishing on ``d(hom^-1)``, on generators."""
    rep = ValidationReport()
    J = G.J
    for X in J.objects:
        if X not in G.on_objects:
            rep.add("shape", f"no value given for object {X}", X)
    if not rep.ok:
        return rep
    for P, Q in itertools.product(J.objects, repeat=2):
        imgs = G.on_generators.get((P, Q), ())
        if len(imgs) != J.rank(P, Q, 0):
            rep.add("shape", f"hom^0({P},{Q}) has {J.rank(P, Q, 0)} generators, "
                    f"{len(imgs)} images given", (P, Q))
            continue
        for k, m in enumerate(imgs):
            if m.shape != (G.ngens(Q), G.ngens(P)):
                rep.add("shape", f"image of generator {k} of hom^0({P},{Q}) has shape {m.shape}", (P, Q, k))
            elif not span_contains(G.relations(Q), m @ G.relations(P)):
                rep.add("well_defined", f"image of generator {k} of hom^0({P},{Q}) does not "
                        "respect relations", (P, Q, k))
    if not rep.ok:
        return rep

    def equal_mod(Q, a: IntMatrix, b: IntMatrix) -> bool:
        return span_contains(G.relations(Q), a - b)

    for X in J.objects:
        if not equal_mod(X, G.apply(J.identity(X)), IntMatrix.identity(G.ngens(X))):
            rep.add("identity", f"G(id_{X}) != id", X)
    for P, Q, R in itertools.product(J.objects, repeat=3):
        for f in J.generators(P, Q, 0):
            Gf = G.apply(f)
            for g in J.generators(Q, R, 0):
                if not equal_mod(R, G.apply(compose(J, g, f)), G.apply(g) @ Gf):
                    rep.add("composition", f"G(gf) != G(g)G(f) on {P}->{Q}->{R}", (g, f))
    for P, Q in itertools.product(J.objects, repeat=2):
        for h in J.generators(P, Q, -1):
            if not equal_mod(Q, G.apply(differential(J, h)), IntMatrix.zeros(G.ngens(Q), G.ngens(P))):
                rep.add("homotopy", f"G does not kill d of a generator of hom^-1({P},{Q})", h)
    return rep


def check_functor(G: AdditiveFunctor) -> AdditiveFunctor:
    rep = validate_functor(G)
    if not rep.ok:
        raise FunctorInvalid(rep)
    return G


# ---------------------------------------------------------------------------
# concrete functors


def gamma_A(J: NegDgCategory, component_counts: Mapping[str, int],
            generator_images: Mapping[tuple[str, str], Sequence[IntMatrix]],
            A: Coefficient = ZZ) -> AdditiveFunctor:
    """``X -> A^{c(X)}``; generator images are integer matrices between component sets."""
    for X, c in component_counts.items():
        if c < 1:
            raise ValueError(f"component count of {X} must be positive, got {c}")
    objs = {X: A.free_relations(c) for X, c in component_counts.items()}
    G = AdditiveFunctor(J, objs, {k: tuple(v) for k, v in generator_images.items()}, f"Gamma_{A}")
    return check_functor(G)


def forgetful_functor(J: NegDgCategory, ranks: Mapping[str, int], A: Coefficient = ZZ) -> AdditiveFunctor:
    """The underlying group of a matrix category (see :func:`randgen.matrix_category`)."""
    images = {}
    for P, Q in itertools.product(J.objects, repeat=2):
        p, q = ranks[P], ranks[Q]
        mats = []
        for r, c in itertools.product(range(q), range(p)):
            mats.append(IntMatrix([[1 if (i, j) == (r, c) else 0 for j in range(p)] for i in range(q)], q, p))
        images[P, Q] = tuple(mats)
    return gamma_A(J, ranks, images, A)


def h0_functor(J: NegDgCategory, A: Coefficient = ZZ) -> AdditiveFunctor:
    """Degree-zero cohomology on a dgChain instance."""
    real = J.realization
    if real is None:
        raise ValueError("h0_functor needs a dgChain instance")
    kers, objs = {}, {}
    for X in J.objects:
        C = real.complexes[X]
        K = kernel_basis(C.d(0))
        kers[X] = K
        rel = [solve(K, c) for c in C.d(-1).columns()]
        objs[X] = IntMatrix.from_columns(rel, K.cols)
    images = {}
    for P, Q in itertools.product(J.objects, repeat=2):
        mats = []
        for f in J.generators(P, Q, 0):
            f0 = real.as_graded(f).get(0, IntMatrix.zeros(real.complexes[Q].rank(0),
                                                          real.complexes[P].rank(0)))
            cols = [solve(kers[Q], c) for c in (f0 @ kers[P]).columns()]
            mats.append(IntMatrix.from_columns(cols, kers[Q].cols))
        if mats:
            images[P, Q] = tuple(mats)
    return check_functor(AdditiveFunctor(J, objs, images, "H0").with_coefficient(A))


# ---------------------------------------------------------------------------
# evaluation


def _slot_value(G: AdditiveFunctor, P: TwistedComplex, n: int) -> Subquotient:
    d_in = G.apply_block(P.qq(n - 1, n))
    d_out = G.apply_block(P.qq(n, n + 1))
    return presented_homology(d_in, d_out, G.sum_relations(P.obj(n - 1)),
                              G.sum_relations(P.obj(n)), G.sum_relations(P.obj(n + 1)))


def evaluate_subquotient(G: AdditiveFunctor, P: TwistedComplex, n: int,
                         cache: dict | None = None) -> Subquotient:
    """``H(P, n)`` as a subquotient of the generators of ``G(P^n)``."""
    if cache is None:
        return _slot_value(G, P, n)
    key = (id(P), n)
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = (P, _slot_value(G, P, n))
    return hit[1]


def evaluate(G: AdditiveFunctor, P: TwistedComplex, n: int) -> FgAbGroup:
    return evaluate_subquotient(G, P, n).group()


@dataclass(frozen=True)
class WeightHomologyResult:
    groups: dict[int, FgAbGroup]
    witnesses: dict[int, Subquotient] = field(default_factory=dict)
    notes: dict[int, str] = field(default_factory=dict)

    def nonzero(self) -> dict[int, FgAbGroup]:
        return {n: g for n, g in self.groups.items() if not g.is_zero}


def weight_homology(G: AdditiveFunctor, P: TwistedComplex, degrees: Sequence[int] | None = None
                    ) -> WeightHomologyResult:
    if degrees is None:
        degrees = list(P.window())
    sq = {n: evaluate_subquotient(G, P, n) for n in degrees}
    return WeightHomologyResult({n: s.group() for n, s in sq.items()}, sq)


@dataclass(frozen=True)
class InducedMap:
    source: Subquotient
    target: Subquotient
    matrix: IntMatrix

    def equals(self, other: "InducedMap") -> bool:
        return self.source.maps_equal(self.matrix, other.matrix, self.target)


def induced_map(G: AdditiveFunctor, f: TwistedMorphism, n: int, check: bool = True,
                cache: dict | None = None) -> InducedMap:
    """``H(f, n)``: the map induced by ``G(f[n, n])`` on the ker/im quotients."""
    if check:
        require_twisted(f)
    src = evaluate_subquotient(G, f.source, n, cache)
    tgt = evaluate_subquotient(G, f.target, n, cache)
    m = G.apply_block(f.ff(n, n))
    if not src.respects(m, tgt):
        raise NotATwistedMorphism(f"G(f[{n},{n}]) does not descend to the quotients")
    return InducedMap(src, tgt, m)


def compose_induced(g: InducedMap, f: InducedMap) -> InducedMap:
    return InducedMap(f.source, g.target, g.matrix @ f.matrix)


# ---------------------------------------------------------------------------
# long exact sequences


@dataclass(frozen=True)
class ExactnessFailure:
    position: str
    degree: int
    message: str
    witness: object = None

    def __str__(self):
        return f"{self.position}@{self.degree}: {self.message}"


@dataclass
class LesReport:
    name: str
    degrees: list[int]
    failures: list[ExactnessFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _exact_at(alpha: InducedMap, beta: InducedMap) -> str | None:
    """``None`` when ``im(alpha) = ker(beta)`` inside ``alpha.target``."""
    Y = alpha.target
    ba = beta.matrix @ alpha.matrix
    if not alpha.source.maps_equal(ba, IntMatrix.zeros(ba.rows, ba.cols), beta.target):
        return "composite is not zero"
    im = alpha.source.image(alpha.matrix, Y)
    ker = Y.kernel(beta.matrix, beta.target)
    if not im.same_subgroup(ker):
        return f"image {im.group()} differs from kernel {ker.group()}"
    return None


def long_exact_check(G: AdditiveFunctor, t: Triangle, degrees: Sequence[int] | None = None) -> LesReport:
    """Exactness of ``H(A,k) -> H(B,k) -> H(C,k) -> H(A,k+1) -> H(B,k+1)``.

    The connecting map is induced by ``w: C -> A[1]``, whose slot-``k``
    component lands in ``A^{k+1}``.
    """
    for m in (t.u, t.v, t.w):
        require_twisted(m)
    if degrees is None:
        slots = set(t.A.support) | set(t.B.support) | set(t.C.support)
        degrees = list(range(min(slots, default=0) - 1, max(slots, default=0) + 2))
    rep = LesReport(t.name, list(degrees))
    cache: dict = {}
    u_next = shift_morphism(t.u, 1)
    for k in degrees:
        u = induced_map(G, t.u, k, False, cache)
        v = induced_map(G, t.v, k, False, cache)
        w = induced_map(G, t.w, k, False, cache)
        u1 = induced_map(G, u_next, k, False, cache)
        # H(A[1], k) and H(A, k+1) are the same subquotient, so u1 plays the role of u at k+1
        for pos, a, b in (("B", u, v), ("C", v, w), ("A[1]", w, u1)):
            msg = _exact_at(a, b)
            if msg:
                rep.failures.append(ExactnessFailure(pos, k, msg, (a.matrix, b.matrix)))
    return rep


def vanishing_failures(G: AdditiveFunctor, P: TwistedComplex, n: int,
                       degrees: Sequence[int]) -> list[str]:
    """Degrees where ``H(P_{<=n}, k) != 0`` for ``k > n`` or ``H(P_{>=n}, k) != 0`` for ``k < n``."""
    from .twisted import truncate_geq, truncate_leq
    out = []
    lo, hi = truncate_leq(P, n), truncate_geq(P, n)
    for k in degrees:
        if k > n and not evaluate(G, lo, k).is_zero:
            out.append(f"H(P<={n}, {k}) != 0")
        if k < n and not evaluate(G, hi, k).is_zero:
            out.append(f"H(P>={n}, {k}) != 0")
    return out
