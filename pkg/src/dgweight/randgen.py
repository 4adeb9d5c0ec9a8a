"""Random instances for property tests and benchmarks.

All generators take a :class:`random.Random` so runs are reproducible from
a seed.  Twisted complexes with nontrivial higher components are produced
from strict complexes by a gauge transformation ``Phi = id + N``; the
resulting ``Phi`` is returned as a twisted isomorphism, which doubles as a
source of closed morphisms that are not null-homotopic.
"""

from __future__ import annotations

import itertools
import random
from typing import Mapping

from .complexes import CochainComplex
from .dgcore import HomElement, NegDgCategory, additive_category, build_dgchain_instance
from .exactlinalg import IntMatrix, kernel_basis
from .twisted import (BlockMap, TwistedComplex, TwistedMorphism, block_add, block_compose,
                      block_d, block_identity, block_scale, block_zero, identity_morphism,
                      morphism_differential)

Slots = Mapping[int, tuple[str, ...]]


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 2) -> IntMatrix:
    return IntMatrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], rows, cols)


def _injective(rng: random.Random, rows: int, cols: int) -> IntMatrix:
    while True:
        m = random_matrix(rng, rows, cols)
        if kernel_basis(m).cols == 0:
            return m


def random_degree_zero_object(rng: random.Random, max_rank: int = 3) -> CochainComplex:
    """A complex whose cohomology sits in degree 0: ``Z^b`` or ``Z^a -> Z^b`` injective."""
    b = rng.randint(1, max_rank)
    if b < 2 or rng.random() < 0.2:
        return CochainComplex({0: b})
    a = rng.randint(1, b - 1)
    return CochainComplex({-1: a, 0: b}, {-1: _injective(rng, b, a)})


def random_small_complex(rng: random.Random, max_rank: int = 3) -> CochainComplex:
    """A two-term complex in degrees ``-1, 0`` with an arbitrary differential."""
    a, b = rng.randint(0, max_rank - 1), rng.randint(1, max_rank)
    a = min(a, max_rank - b)
    if a == 0:
        return CochainComplex({0: b})
    return CochainComplex({-1: a, 0: b}, {-1: random_matrix(rng, b, a)})


def random_dgchain_category(rng: random.Random, n_objects: int = 3, max_rank: int = 3,
                            degree_zero: bool = True) -> NegDgCategory:
    make = random_degree_zero_object if degree_zero else random_small_complex
    return build_dgchain_instance({f"X{k}": make(rng, max_rank) for k in range(n_objects)})


def matrix_category(ranks: Mapping[str, int]) -> NegDgCategory:
    """Free abelian groups of the given ranks with all integer matrices as morphisms.

    Generators of ``hom(P, Q)`` are elementary matrices ``E_{rc}``, listed
    row-major; composition is matrix multiplication.
    """
    names = list(ranks)
    hom_ranks = {(P, Q): ranks[P] * ranks[Q] for P in names for Q in names}
    comp = {}
    for P, Q, R in itertools.product(names, repeat=3):
        p, q, r = ranks[P], ranks[Q], ranks[R]
        cols = []
        for gi, gj in itertools.product(range(r), range(q)):        # g = E_{gi,gj}: Q -> R
            for fi, fj in itertools.product(range(q), range(p)):    # f = E_{fi,fj}: P -> Q
                v = [0] * (r * p)
                if gj == fi:
                    v[gi * p + fj] = 1
                cols.append(v)
        comp[P, Q, R] = IntMatrix.from_columns(cols, r * p)
    idents = {P: [1 if i == j else 0 for i in range(ranks[P]) for j in range(ranks[P])] for P in names}
    return additive_category(names, hom_ranks, comp, idents)


# ---------------------------------------------------------------------------
# block maps


def random_element(rng: random.Random, J: NegDgCategory, P: str, Q: str, degree: int,
                   density: float = 0.6, bound: int = 2) -> HomElement:
    r = J.rank(P, Q, degree)
    return J.element(P, Q, degree, [rng.randint(-bound, bound) if rng.random() < density else 0
                                    for _ in range(r)])


def random_block(rng: random.Random, J: NegDgCategory, source, target, degree: int,
                 density: float = 0.6) -> BlockMap:
    return BlockMap(tuple(source), tuple(target), degree,
                    tuple(tuple(random_element(rng, J, s, t, degree, density) for s in source)
                          for t in target))


def _block_basis(J: NegDgCategory, source, target, degree: int) -> list[BlockMap]:
    out = []
    zero = block_zero(J, source, target, degree)
    for r, t in enumerate(target):
        for c, s in enumerate(source):
            for g in J.generators(s, t, degree):
                rows = [list(row) for row in zero.blocks]
                rows[r][c] = g
                out.append(BlockMap(zero.source, zero.target, degree, tuple(tuple(x) for x in rows)))
    return out


def _coords(m: BlockMap) -> list[int]:
    return [x for row in m.blocks for e in row for x in e.coords]


def _combine(J, basis: list[BlockMap], coeffs, source, target, degree) -> BlockMap:
    acc = block_zero(J, source, target, degree)
    for b, c in zip(basis, coeffs):
        if c:
            acc = block_add(acc, block_scale(b, c))
    return acc


def random_killed_block(rng: random.Random, J: NegDgCategory, prev: BlockMap, target) -> BlockMap:
    """A random degree-0 block map ``g`` out of ``prev.target`` with ``g prev = 0`` exactly."""
    basis = _block_basis(J, prev.target, tuple(target), 0)
    if not basis:
        return block_zero(J, prev.target, tuple(target), 0)
    images = [_coords(block_compose(J, b, prev)) for b in basis]
    rows = len(images[0])
    K = kernel_basis(IntMatrix.from_columns(images, rows)) if rows else IntMatrix.identity(len(basis))
    if K.cols == 0:
        return block_zero(J, prev.target, tuple(target), 0)
    w = [rng.randint(-1, 1) for _ in range(K.cols)]
    return _combine(J, basis, K.apply(w), prev.target, tuple(target), 0)


# ---------------------------------------------------------------------------
# twisted complexes


def random_slots(rng: random.Random, J: NegDgCategory, max_slots: int = 5, max_rank: int = 6,
                 weight=None) -> dict[int, tuple[str, ...]]:
    """Random objects per slot; each slot's summed ``weight`` stays within ``max_rank``."""
    weight = weight or (lambda o: 1)
    n = rng.randint(2, max_slots)
    start = rng.randint(-2, 1)
    slots = {}
    for i in range(start, start + n):
        objs = []
        budget = max_rank
        for _ in range(1 if rng.random() < 0.75 else 2):
            o = rng.choice(J.objects)
            if weight(o) <= budget:
                objs.append(o)
                budget -= weight(o)
        if objs:
            slots[i] = tuple(objs)
    if not slots:
        o = min(J.objects, key=weight)
        slots[start] = (o,)
    return slots


def random_strict_complex(rng: random.Random, J: NegDgCategory, slots: Slots) -> TwistedComplex:
    """An ordinary complex: only ``q[i, i+1]`` is nonzero and consecutive composites vanish."""
    keys = sorted(slots)
    q = {}
    prev = None
    for i in keys:
        if i + 1 not in slots:
            prev = None
            continue
        if prev is None:
            m = random_block(rng, J, slots[i], slots[i + 1], 0)
        else:
            m = random_killed_block(rng, J, prev, slots[i + 1])
        q[i, i + 1] = m
        prev = m
    return TwistedComplex(J, slots, q)


SlotMatrix = dict[tuple[int, int], BlockMap]


def _smul(J, X: SlotMatrix, Y: SlotMatrix) -> SlotMatrix:
    """``(X Y)[a, b] = sum_c X[c, b] Y[a, c]``."""
    out: SlotMatrix = {}
    for (a, c), y in Y.items():
        for (c2, b), x in X.items():
            if c2 == c:
                t = block_compose(J, x, y)
                out[a, b] = block_add(out[a, b], t) if (a, b) in out else t
    return out


def _sadd(X: SlotMatrix, Y: SlotMatrix) -> SlotMatrix:
    out = dict(X)
    for k, y in Y.items():
        out[k] = block_add(out[k], y) if k in out else y
    return out


def gauge(rng: random.Random, P: TwistedComplex, density: float = 0.5
          ) -> tuple[TwistedComplex, TwistedMorphism]:
    """A twisted complex ``P'`` and a twisted isomorphism ``Phi: P' -> P``.

    ``Phi = id + N`` with ``N`` strictly slot-increasing.  Closedness of
    ``Phi`` reads ``Phi q' = E + q Phi`` with ``E[a, b] = (-1)^b d N[a, b]``,
    which is solved for ``q'`` using the unipotent inverse of ``Phi``.
    """
    J = P.J
    N: SlotMatrix = {}
    for a, b in itertools.combinations(P.support, 2):
        if rng.random() < density:
            m = random_block(rng, J, P.obj(a), P.obj(b), a - b)
            if not m.is_zero():
                N[a, b] = m
    ident = {(i, i): block_identity(J, o) for i, o in P.objects.items()}
    Phi = _sadd(ident, N)
    # (id + N)^{-1} = sum_k (-N)^k
    negN = {k: block_scale(m, -1) for k, m in N.items()}
    inv, power = dict(ident), dict(ident)
    for _ in range(len(P.support)):
        power = _smul(J, negN, power)
        if not power:
            break
        inv = _sadd(inv, power)
    E = {(a, b): block_scale(block_d(J, m), -1 if b % 2 else 1) for (a, b), m in N.items()}
    rhs = _sadd(E, _smul(J, P.q, Phi))
    qnew = {k: m for k, m in _smul(J, inv, rhs).items() if k[1] > k[0]}
    Pn = TwistedComplex(J, P.objects, qnew)
    return Pn, TwistedMorphism(Pn, P, 0, Phi)


def random_twisted_complex(rng: random.Random, J: NegDgCategory, max_slots: int = 5,
                           max_rank: int = 6, weight=None, gauge_density: float = 0.5) -> TwistedComplex:
    P = random_strict_complex(rng, J, random_slots(rng, J, max_slots, max_rank, weight))
    if rng.random() < 0.8:
        P, _ = gauge(rng, P, gauge_density)
    return P


def random_morphism(rng: random.Random, P: TwistedComplex, Q: TwistedComplex, degree: int,
                    density: float = 0.5) -> TwistedMorphism:
    """An arbitrary (not necessarily closed) morphism of the given degree."""
    J = P.J
    f = {}
    for a in P.support:
        for b in Q.support:
            deg = degree + a - b
            if deg > 0 or rng.random() > density:
                continue
            m = random_block(rng, J, P.obj(a), Q.obj(b), deg)
            if not m.is_zero():
                f[a, b] = m
    return TwistedMorphism(P, Q, degree, f)


def random_twisted_morphism(rng: random.Random, P: TwistedComplex, Q: TwistedComplex,
                            base: TwistedMorphism | None = None) -> TwistedMorphism:
    """``base + d(h)`` for a random degree ``-1`` morphism ``h``; closed when ``base`` is."""
    f = morphism_differential(random_morphism(rng, P, Q, -1))
    if base is not None:
        f = f + base
    elif P == Q and rng.random() < 0.7:
        f = f + identity_morphism(P).scale(rng.choice([-2, -1, 1, 2, 3]))
    return f


# ---------------------------------------------------------------------------
# Kato-Suslin inputs


def random_complex(rng: random.Random, total_rank: int, length: int = 3) -> CochainComplex:
    """A random complex in degrees ``-length+1 .. 0`` built from a random chain of maps."""
    ranks = {}
    left = total_rank
    for n in range(-length + 1, 1):
        r = rng.randint(0, max(left, 0))
        ranks[n] = r
        left -= r
    diffs = {}
    prev = None
    for n in range(-length + 1, 0):
        a, b = ranks[n], ranks[n + 1]
        if prev is None or prev.cols == 0 or prev.rows == 0:
            m = random_matrix(rng, b, a, 1)
        else:
            K = kernel_basis(_precompose(prev, b))
            w = [rng.randint(-1, 1) for _ in range(K.cols)]
            m = IntMatrix([list(K.apply(w))[r * a:(r + 1) * a] for r in range(b)], b, a) if K.cols else \
                IntMatrix.zeros(b, a)
        diffs[n] = m
        prev = m
    return CochainComplex(ranks, diffs)


def _precompose(prev: IntMatrix, b: int) -> IntMatrix:
    """Matrix of ``m -> m @ prev`` on row-major coordinates of ``b x prev.rows`` matrices."""
    a, c = prev.rows, prev.cols
    cols = []
    for r in range(b):
        for k in range(a):
            v = [0] * (b * c)
            for j in range(c):
                v[r * c + j] = prev[k, j]
            cols.append(v)
    return IntMatrix.from_columns(cols, b * c)


def random_chain_map(rng: random.Random, X: CochainComplex, Y: CochainComplex,
                     constraint=None) -> dict[int, IntMatrix]:
    """A random chain map; ``constraint(f)`` returns matrices that must vanish (linear in ``f``)."""
    from .dgcore import chain_map_lattice
    basis = chain_map_lattice(X, Y)
    if constraint is not None and basis:
        images = []
        for f in basis:
            vals = constraint(f)
            images.append([x for m in vals for row in m.entries for x in row])
        rows = len(images[0])
        K = kernel_basis(IntMatrix.from_columns(images, rows)) if rows else IntMatrix.identity(len(basis))
        basis = [{n: sum((f[n].scale(c) for f, c in zip(basis, col) if n in f),
                         IntMatrix.zeros(Y.rank(n), X.rank(n))) for n in X.degrees}
                 for col in K.columns()]
    out = {n: IntMatrix.zeros(Y.rank(n), X.rank(n)) for n in X.degrees}
    for f in basis:
        c = rng.randint(-1, 1)
        if c:
            for n in X.degrees:
                if n in f:
                    out[n] = out[n] + f[n].scale(c)
    return out


def random_ks_input(rng: random.Random, max_total_rank: int = 8, modulus: int | None = None):
    from .complexes import ChainMap
    from .exactlinalg import Coefficient
    from .kshom import KsInput
    rb = rng.randint(1, max_total_rank - 1)
    rk = rng.randint(0, max_total_rank - rb)
    Cb = random_complex(rng, rb)
    Ck = random_complex(rng, rk)
    rho = random_chain_map(rng, Ck, Cb) if rng.random() < 0.8 else {}
    if rng.random() < 0.25:
        phi = {n: IntMatrix.identity(Cb.rank(n)) for n in Cb.degrees}
    else:
        # phi = 1 + psi with psi rho = 0, so that (1 - phi) rho = 0
        psi = random_chain_map(rng, Cb, Cb, lambda f: [f[n] @ rho[n] for n in Ck.degrees
                                                       if n in f and n in rho])
        phi = {n: IntMatrix.identity(Cb.rank(n)) + psi[n] for n in Cb.degrees}
    A = Coefficient(modulus)
    return KsInput(Ck, Cb, ChainMap(Cb, Cb, phi), ChainMap(Ck, Cb, rho), A)
