"""Twisted complexes over a negative dg-category.

A twisted complex places a formal direct sum of objects (a tuple of object
ids, possibly empty) in each integer slot ``i`` and carries components
``q[i, j]: P^i -> P^j`` of degree ``i - j + 1``.  Negativity forces
``q[i, j] = 0`` unless ``j > i``.

Sign conventions.  The identity imposed on ``q`` is::

    (-1)^j d(q[i, j]) + sum_m q[m, j] q[i, m] = 0

and a morphism ``f`` of degree ``l`` has differential::

    (df)[a, b] = (-1)^b d(f[a, b]) + sum_c ( q'[c, b] f[a, c] - (-1)^l f[c, b] q[a, c] )

These are exactly the conventions under which :func:`totalize` (internal
differential of slot ``i`` twisted by ``(-1)^i``, all ``q`` components
unsigned) is a dg-functor into complexes, shifts ``q -> (-1)^n q`` preserve
the identity, and cones and truncations need no further signs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .complexes import ChainMap, CochainComplex
from .dgcore import (HomElement, NegDgCategory, ObjectMismatch, ValidationReport, compose,
                     differential)
from .exactlinalg import IntMatrix, ShapeMismatch

Objects = tuple[str, ...]


class NotATwistedMorphism(ValueError):
    pass


class SignInconsistency(RuntimeError):
    pass


class InvalidTwistedComplex(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(str(v) for v in report.violations[:5]))
        self.report = report


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# matrices of hom elements between formal direct sums


@dataclass(frozen=True)
class BlockMap:
    """A degree-``degree`` map between direct sums; ``blocks[r][c]: source[c] -> target[r]``."""

    source: Objects
    target: Objects
    degree: int
    blocks: tuple[tuple[HomElement, ...], ...]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.blocks for e in row)

    def entry(self, r: int, c: int) -> HomElement:
        return self.blocks[r][c]


def block_zero(J: NegDgCategory, source: Objects, target: Objects, degree: int) -> BlockMap:
    return BlockMap(source, target, degree,
                    tuple(tuple(J.zero(s, t, degree) for s in source) for t in target))


def block_identity(J: NegDgCategory, objs: Objects) -> BlockMap:
    return BlockMap(objs, objs, 0, tuple(tuple(J.identity(s) if r == c else J.zero(s, t, 0)
                                               for c, s in enumerate(objs))
                                         for r, t in enumerate(objs)))


def block_add(f: BlockMap, g: BlockMap) -> BlockMap:
    if (f.source, f.target, f.degree) != (g.source, g.target, g.degree):
        raise ShapeMismatch("cannot add block maps of different shapes")
    return BlockMap(f.source, f.target, f.degree,
                    tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(f.blocks, g.blocks)))


def block_scale(f: BlockMap, c: int) -> BlockMap:
    if c == 1:
        return f
    return BlockMap(f.source, f.target, f.degree, tuple(tuple(e.scale(c) for e in r) for r in f.blocks))


def block_compose(J: NegDgCategory, g: BlockMap, f: BlockMap) -> BlockMap:
    if f.target != g.source:
        raise ObjectMismatch(f"cannot compose block maps {f.source}->{f.target} and {g.source}->{g.target}")
    deg = f.degree + g.degree
    rows = []
    for r, t in enumerate(g.target):
        row = []
        for c, s in enumerate(f.source):
            acc = J.zero(s, t, deg)
            for k in range(len(f.target)):
                acc = acc + compose(J, g.blocks[r][k], f.blocks[k][c])
            row.append(acc)
        rows.append(tuple(row))
    return BlockMap(f.source, g.target, deg, tuple(rows))


def block_d(J: NegDgCategory, f: BlockMap) -> BlockMap:
    return BlockMap(f.source, f.target, f.degree + 1,
                    tuple(tuple(differential(J, e) for e in r) for r in f.blocks))


def block_from_diagonal(J: NegDgCategory, top: BlockMap, bottom: BlockMap,
                        lower_left: BlockMap | None = None) -> BlockMap:
    """``[[top, 0], [lower_left, bottom]]`` between concatenated sums."""
    src = top.source + bottom.source
    tgt = top.target + bottom.target
    deg = top.degree
    ll = lower_left or block_zero(J, top.source, bottom.target, deg)
    rows = []
    for r in range(len(top.target)):
        rows.append(top.blocks[r] + tuple(J.zero(s, top.target[r], deg) for s in bottom.source))
    for r in range(len(bottom.target)):
        rows.append(ll.blocks[r] + bottom.blocks[r])
    return BlockMap(src, tgt, deg, tuple(rows))


# ---------------------------------------------------------------------------
# twisted complexes and their morphisms


class TwistedComplex:
    """Slots ``i -> P^i`` and components ``q[i, j]``; absent entries are zero."""

    def __init__(self, J: NegDgCategory, objects: Mapping[int, Sequence[str]],
                 q: Mapping[tuple[int, int], BlockMap] | None = None):
        self.J = J
        self.objects: dict[int, Objects] = {int(i): tuple(o) for i, o in sorted(objects.items()) if o}
        self.q: dict[tuple[int, int], BlockMap] = {}
        for (i, j), m in sorted((q or {}).items()):
            if m.is_zero():
                continue
            if m.source != self.obj(i) or m.target != self.obj(j):
                raise ObjectMismatch(f"q[{i},{j}] does not map P^{i} -> P^{j}")
            self.q[i, j] = m

    def obj(self, i: int) -> Objects:
        return self.objects.get(i, ())

    def qq(self, i: int, j: int) -> BlockMap:
        m = self.q.get((i, j))
        return m if m is not None else block_zero(self.J, self.obj(i), self.obj(j), i - j + 1)

    @property
    def support(self) -> list[int]:
        return list(self.objects)

    def window(self) -> range:
        if not self.objects:
            return range(0)
        return range(min(self.objects), max(self.objects) + 1)

    def __eq__(self, other):
        return (isinstance(other, TwistedComplex) and self.J is other.J
                and self.objects == other.objects and self.q == other.q)

    def __hash__(self):
        return hash((tuple(self.objects.items()), tuple(self.q)))

    def __repr__(self):
        return f"TwistedComplex(objects={self.objects!r}, q={sorted(self.q)!r})"


class TwistedMorphism:
    """A morphism of pure degree ``degree``; ``f[a, b]: P^a -> P'^b`` has degree ``degree + a - b``."""

    def __init__(self, source: TwistedComplex, target: TwistedComplex, degree: int,
                 f: Mapping[tuple[int, int], BlockMap] | None = None):
        if source.J is not target.J:
            raise ObjectMismatch("twisted complexes over different categories")
        self.source = source
        self.target = target
        self.degree = degree
        self.f: dict[tuple[int, int], BlockMap] = {}
        for (a, b), m in sorted((f or {}).items()):
            if m.is_zero():
                continue
            if m.source != source.obj(a) or m.target != target.obj(b):
                raise ObjectMismatch(f"f[{a},{b}] does not map P^{a} -> P'^{b}")
            if m.degree != degree + a - b:
                raise ShapeMismatch(f"f[{a},{b}] has degree {m.degree}, expected {degree + a - b}")
            self.f[a, b] = m

    @property
    def J(self) -> NegDgCategory:
        return self.source.J

    def ff(self, a: int, b: int) -> BlockMap:
        m = self.f.get((a, b))
        return m if m is not None else block_zero(self.J, self.source.obj(a), self.target.obj(b),
                                                  self.degree + a - b)

    def is_zero(self) -> bool:
        return not self.f

    def __eq__(self, other):
        return (isinstance(other, TwistedMorphism) and self.source == other.source
                and self.target == other.target and self.degree == other.degree and self.f == other.f)

    def __hash__(self):
        return hash((self.degree, tuple(self.f)))

    def __add__(self, other: "TwistedMorphism") -> "TwistedMorphism":
        if self.source != other.source or self.target != other.target or self.degree != other.degree:
            raise ShapeMismatch("cannot add morphisms with different source, target or degree")
        keys = set(self.f) | set(other.f)
        return TwistedMorphism(self.source, self.target, self.degree,
                               {k: block_add(self.ff(*k), other.ff(*k)) for k in keys})

    def scale(self, c: int) -> "TwistedMorphism":
        return TwistedMorphism(self.source, self.target, self.degree,
                               {k: block_scale(m, c) for k, m in self.f.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return f"TwistedMorphism(degree={self.degree}, f={sorted(self.f)!r})"


def concentrated(J: NegDgCategory, objs: Sequence[str] | str, slot: int = 0) -> TwistedComplex:
    """A single object (or direct sum) placed in one slot."""
    if isinstance(objs, str):
        objs = (objs,)
    return TwistedComplex(J, {slot: tuple(objs)})


def ordinary_complex(J: NegDgCategory, objects: Mapping[int, Sequence[str]],
                     maps: Mapping[int, BlockMap]) -> TwistedComplex:
    """A complex with only ``q[i, i+1] = maps[i]`` (degree-zero components)."""
    return TwistedComplex(J, objects, {(i, i + 1): m for i, m in maps.items()})


def _mc_residual(P: TwistedComplex, i: int, j: int) -> BlockMap:
    J = P.J
    res = block_scale(block_d(J, P.qq(i, j)), _sign(j))
    for m in range(i + 1, j):
        if (i, m) in P.q and (m, j) in P.q:
            res = block_add(res, block_compose(J, P.q[m, j], P.q[i, m]))
    return res


def validate_twisted(P: TwistedComplex) -> ValidationReport:
    """Report every slot pair where the degree rule or the Maurer-Cartan identity fails."""
    rep = ValidationReport()
    for (i, j), m in P.q.items():
        if m.degree != i - j + 1:
            rep.add("degree", f"q[{i},{j}] has degree {m.degree}, expected {i - j + 1}", (i, j))
        if j <= i:
            rep.add("degree", f"q[{i},{j}] is nonzero but has positive degree {i - j + 1}", (i, j))
    if not rep.ok:
        return rep
    for i, j in itertools.combinations(P.support, 2):
        if j - i < 2:
            continue
        res = _mc_residual(P, i, j)
        if not res.is_zero():
            rep.add("maurer_cartan", f"Maurer-Cartan identity fails at ({i},{j})", ((i, j), res))
    return rep


def check_twisted(P: TwistedComplex) -> TwistedComplex:
    rep = validate_twisted(P)
    if not rep.ok:
        raise InvalidTwistedComplex(rep)
    return P


# ---------------------------------------------------------------------------
# morphism calculus


def identity_morphism(P: TwistedComplex) -> TwistedMorphism:
    return TwistedMorphism(P, P, 0, {(i, i): block_identity(P.J, o) for i, o in P.objects.items()})


def zero_morphism(P: TwistedComplex, Q: TwistedComplex, degree: int = 0) -> TwistedMorphism:
    return TwistedMorphism(P, Q, degree, {})


def compose_morphisms(g: TwistedMorphism, f: TwistedMorphism) -> TwistedMorphism:
    if f.target != g.source:
        raise ObjectMismatch("morphisms are not composable")
    J = f.J
    out: dict[tuple[int, int], BlockMap] = {}
    for (a, b), fm in f.f.items():
        for (b2, c), gm in g.f.items():
            if b2 != b:
                continue
            t = block_compose(J, gm, fm)
            out[a, c] = block_add(out[a, c], t) if (a, c) in out else t
    return TwistedMorphism(f.source, g.target, f.degree + g.degree, out)


def morphism_differential(f: TwistedMorphism) -> TwistedMorphism:
    """The differential of ``f`` in the dg-category of twisted complexes (degree goes up by one)."""
    J = f.J
    P, Q, l = f.source, f.target, f.degree
    out: dict[tuple[int, int], BlockMap] = {}

    def acc(key, m):
        if m.is_zero():
            return
        out[key] = block_add(out[key], m) if key in out else m

    for (a, b), m in f.f.items():
        acc((a, b), block_scale(block_d(J, m), _sign(b)))
    for (a, c), m in f.f.items():
        for (c2, b), qm in Q.q.items():
            if c2 == c:
                acc((a, b), block_compose(J, qm, m))
    for (a, c), qm in P.q.items():
        for (c2, b), m in f.f.items():
            if c2 == c:
                acc((a, b), block_scale(block_compose(J, m, qm), -_sign(l)))
    return TwistedMorphism(P, Q, l + 1, out)


def is_twisted_morphism(f: TwistedMorphism) -> bool:
    return f.degree == 0 and morphism_differential(f).is_zero()


def require_twisted(f: TwistedMorphism) -> None:
    if f.degree != 0:
        raise NotATwistedMorphism(f"morphism has degree {f.degree}, expected 0")
    d = morphism_differential(f)
    if not d.is_zero():
        raise NotATwistedMorphism(f"d(f) != 0 at components {sorted(d.f)}")


# ---------------------------------------------------------------------------
# shifts, cones, truncations


def shift(P: TwistedComplex, n: int) -> TwistedComplex:
    """``P[n]``: slot ``i`` holds ``P^{i+n}`` and ``q[i, j] = (-1)^n q[i+n, j+n]``."""
    s = _sign(n)
    return TwistedComplex(P.J, {i - n: o for i, o in P.objects.items()},
                          {(i - n, j - n): block_scale(m, s) for (i, j), m in P.q.items()})


def shift_morphism(f: TwistedMorphism, n: int) -> TwistedMorphism:
    """``f[n]: P[n] -> P'[n]`` with components ``(-1)^{n l} f[a+n, b+n]``."""
    s = _sign(n * f.degree)
    return TwistedMorphism(shift(f.source, n), shift(f.target, n), f.degree,
                           {(a - n, b - n): block_scale(m, s) for (a, b), m in f.f.items()})


@dataclass(frozen=True)
class Cone:
    cone: TwistedComplex
    inclusion: TwistedMorphism     # target of f -> cone
    projection: TwistedMorphism    # cone -> source of f, shifted by one


def cone(f: TwistedMorphism, check: bool = True) -> Cone:
    """``Cone(f)^i = P^{i+1} + P'^i`` with ``q'' = [[-q[i+1, j+1], 0], [f[i+1, j], q'[i, j]]]``."""
    if check:
        require_twisted(f)
    J = f.J
    P, Q = f.source, f.target
    slots = sorted({i - 1 for i in P.objects} | set(Q.objects))
    objects = {i: P.obj(i + 1) + Q.obj(i) for i in slots}
    q = {}
    for i, j in itertools.product(slots, repeat=2):
        if j <= i:
            continue
        top = block_scale(P.qq(i + 1, j + 1), -1)
        m = block_from_diagonal(J, top, Q.qq(i, j), f.ff(i + 1, j))
        if not m.is_zero():
            q[i, j] = m
    C = TwistedComplex(J, objects, q)
    P1 = shift(P, 1)
    inc, proj = {}, {}
    for i in slots:
        top, bot = P.obj(i + 1), Q.obj(i)
        if bot:
            inc[i, i] = BlockMap(bot, top + bot, 0, tuple(
                tuple(J.zero(s, t, 0) for s in bot) for t in top) + block_identity(J, bot).blocks)
        if top:
            proj[i, i] = BlockMap(top + bot, top, 0, tuple(
                block_identity(J, top).blocks[r] + tuple(J.zero(s, top[r], 0) for s in bot)
                for r in range(len(top))))
    return Cone(C, TwistedMorphism(Q, C, 0, inc), TwistedMorphism(C, P1, 0, proj))


def truncate_geq(P: TwistedComplex, n: int) -> TwistedComplex:
    return TwistedComplex(P.J, {i: o for i, o in P.objects.items() if i >= n},
                          {(i, j): m for (i, j), m in P.q.items() if i >= n and j >= n})


def truncate_leq(P: TwistedComplex, n: int) -> TwistedComplex:
    return TwistedComplex(P.J, {i: o for i, o in P.objects.items() if i <= n},
                          {(i, j): m for (i, j), m in P.q.items() if i <= n and j <= n})


def truncate_morphism_geq(f: TwistedMorphism, n: int) -> TwistedMorphism:
    return TwistedMorphism(truncate_geq(f.source, n), truncate_geq(f.target, n), f.degree,
                           {(a, b): m for (a, b), m in f.f.items() if a >= n and b >= n})


def truncate_morphism_leq(f: TwistedMorphism, n: int) -> TwistedMorphism:
    return TwistedMorphism(truncate_leq(f.source, n), truncate_leq(f.target, n), f.degree,
                           {(a, b): m for (a, b), m in f.f.items() if a <= n and b <= n})


def iota(P: TwistedComplex, n: int) -> TwistedMorphism:
    """Canonical inclusion ``P_{>=n} -> P``."""
    S = truncate_geq(P, n)
    return TwistedMorphism(S, P, 0, {(i, i): block_identity(P.J, o) for i, o in S.objects.items()})


def pi(P: TwistedComplex, n: int) -> TwistedMorphism:
    """Canonical projection ``P -> P_{<=n}``."""
    T = truncate_leq(P, n)
    return TwistedMorphism(P, T, 0, {(i, i): block_identity(P.J, o) for i, o in T.objects.items()})


def delta(P: TwistedComplex, n: int) -> TwistedMorphism:
    """``P_{<=n-1} -> P_{>=n}[1]``: the components of ``q`` crossing from below ``n`` to ``>= n``."""
    src = truncate_leq(P, n - 1)
    tgt = shift(truncate_geq(P, n), 1)
    return TwistedMorphism(src, tgt, 0, {(i, j - 1): m for (i, j), m in P.q.items() if i < n <= j})


@dataclass(frozen=True)
class Triangle:
    """``A -u-> B -v-> C -w-> A[1]`` made of twisted morphisms."""

    u: TwistedMorphism
    v: TwistedMorphism
    w: TwistedMorphism
    name: str = ""

    @property
    def A(self) -> TwistedComplex:
        return self.u.source

    @property
    def B(self) -> TwistedComplex:
        return self.u.target

    @property
    def C(self) -> TwistedComplex:
        return self.v.target


def rotate(t: Triangle) -> Triangle:
    """``B -v-> C -w-> A[1] -(-u[1])-> B[1]``."""
    return Triangle(t.v, t.w, -shift_morphism(t.u, 1), t.name + "'")


def truncation_triangle(P: TwistedComplex, n: int) -> Triangle:
    """``P_{>=n} -> P -> P_{<=n-1} -> P_{>=n}[1]``."""
    return Triangle(iota(P, n), pi(P, n - 1), delta(P, n), f"truncate@{n}")


def geq_triangle(P: TwistedComplex, m: int) -> Triangle:
    """``P_{>=m} -> P^m[-m] -> P_{>=m+1}[1] -> P_{>=m}[1]``."""
    t = rotate(truncation_triangle(truncate_geq(P, m), m + 1))
    return Triangle(t.u, t.v, t.w, f"geq@{m}")


def leq_triangle(P: TwistedComplex, m: int) -> Triangle:
    """``P_{<=m} -> P^{m+1}[-m] -> P_{<=m+1}[1] -> P_{<=m}[1]``."""
    t = rotate(rotate(truncation_triangle(truncate_leq(P, m + 1), m + 1)))
    return Triangle(t.u, t.v, t.w, f"leq@{m}")


def cone_triangle(f: TwistedMorphism) -> Triangle:
    c = cone(f)
    return Triangle(f, c.inclusion, c.projection, "cone")


def direct_sum(P: TwistedComplex, Q: TwistedComplex) -> TwistedComplex:
    J = P.J
    slots = sorted(set(P.objects) | set(Q.objects))
    q = {}
    for i, j in itertools.product(slots, repeat=2):
        if j > i:
            m = block_from_diagonal(J, P.qq(i, j), Q.qq(i, j))
            if not m.is_zero():
                q[i, j] = m
    return TwistedComplex(J, {i: P.obj(i) + Q.obj(i) for i in slots}, q)


# ---------------------------------------------------------------------------
# totalization over a dgChain instance


def _slot_layout(P: TwistedComplex) -> dict[int, list[tuple[int, int, str, int]]]:
    """Total degree -> list of (slot, summand index, object, internal degree)."""
    real = P.J.realization
    layout: dict[int, list] = {}
    for i, objs in P.objects.items():
        for k, o in enumerate(objs):
            for p in real.complexes[o].degrees:
                layout.setdefault(i + p, []).append((i, k, o, p))
    return dict(sorted(layout.items()))


def _offsets(layout, real):
    off = {}
    for t, parts in layout.items():
        pos = 0
        for (i, k, o, p) in parts:
            off[i, k, p] = (t, pos)
            pos += real.complexes[o].rank(p)
    return off


def totalize(P: TwistedComplex, check: bool = True) -> CochainComplex:
    """The total complex of a twisted complex over a dgChain instance.

    ``Tot(P)^t`` is the sum of ``(P^i)^{t-i}``; the internal differential of
    slot ``i`` carries the sign ``(-1)^i`` and every ``q`` component enters
    unsigned.  ``d^2 = 0`` is verified unless ``check`` is false.
    """
    real = P.J.realization
    if real is None:
        raise ValueError("totalize needs a dgChain instance")
    layout = _slot_layout(P)
    off = _offsets(layout, real)
    ranks = {t: sum(real.complexes[o].rank(p) for (_, _, o, p) in parts) for t, parts in layout.items()}
    entries = {t: [[0] * ranks[t] for _ in range(ranks.get(t + 1, 0))] for t in ranks}

    def put(t, r0, c0, m: IntMatrix, s: int):
        rows = entries[t]
        for a in range(m.rows):
            for b in range(m.cols):
                if m[a, b]:
                    rows[r0 + a][c0 + b] += s * m[a, b]

    for i, objs in P.objects.items():
        for k, o in enumerate(objs):
            X = real.complexes[o]
            for p in X.degrees:
                if X.rank(p + 1):
                    t, c0 = off[i, k, p]
                    _, r0 = off[i, k, p + 1]
                    put(t, r0, c0, X.d(p), _sign(i))
    for (i, j), m in P.q.items():
        for c, src in enumerate(m.source):
            for r, tgt in enumerate(m.target):
                g = real.as_graded(m.blocks[r][c])
                for p, mat in g.items():
                    if not (mat.rows and mat.cols):
                        continue
                    t, c0 = off[i, c, p]
                    tt, r0 = off[j, r, p + m.degree]
                    assert tt == t + 1
                    put(t, r0, c0, mat, 1)
    diffs = {t: IntMatrix(entries[t], ranks.get(t + 1, 0), ranks[t]) for t in ranks}
    T = CochainComplex(ranks, diffs)
    if check:
        for t in T.ranks:
            if not (T.d(t + 1) @ T.d(t)).is_zero():
                raise SignInconsistency(f"Tot(P) has d^2 != 0 in degree {t}")
    return T


def totalize_morphism(f: TwistedMorphism) -> ChainMap:
    """The chain map ``Tot(P) -> Tot(P')`` of a degree-zero morphism (components unsigned)."""
    if f.degree != 0:
        raise NotATwistedMorphism("only degree-zero morphisms totalize to chain maps")
    real = f.J.realization
    S, T = totalize(f.source), totalize(f.target)
    ls, lt = _slot_layout(f.source), _slot_layout(f.target)
    os_, ot = _offsets(ls, real), _offsets(lt, real)
    entries = {t: [[0] * S.rank(t) for _ in range(T.rank(t))] for t in set(S.ranks) | set(T.ranks)}
    for (a, b), m in f.f.items():
        for c in range(len(m.source)):
            for r in range(len(m.target)):
                for p, mat in real.as_graded(m.blocks[r][c]).items():
                    t, c0 = os_[a, c, p]
                    t2, r0 = ot[b, r, p + m.degree]
                    for x in range(mat.rows):
                        for y in range(mat.cols):
                            if mat[x, y]:
                                entries[t][r0 + x][c0 + y] += mat[x, y]
    return ChainMap(S, T, {t: IntMatrix(e, T.rank(t), S.rank(t)) for t, e in entries.items()})
