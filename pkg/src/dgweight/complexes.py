"""Bounded complexes of finitely generated free abelian groups.

Complexes are stored cohomologically: ``d[n]`` maps ``C^n -> C^{n+1}``.
Homological data (``d_a: C_a -> C_{a-1}``) is read in through
:meth:`CochainComplex.from_homological`, which places ``C_a`` at ``C^{-a}``;
the same matrix then serves as ``d[-a]``.  This is the only reindexing
used anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .exactlinalg import (ZZ, Coefficient, FgAbGroup, IntMatrix, ShapeMismatch, Subquotient,
                          homology_subquotient)


class NotAComplex(ValueError):
    pass


class NotChainMap(ValueError):
    pass


@dataclass(frozen=True)
class CochainComplex:
    ranks: Mapping[int, int]
    diffs: Mapping[int, IntMatrix] = field(default_factory=dict)

    def __post_init__(self):
        ranks = {int(k): int(v) for k, v in self.ranks.items() if v}
        diffs = {}
        for k, m in self.diffs.items():
            k = int(k)
            if m.shape != (ranks.get(k + 1, 0), ranks.get(k, 0)):
                raise ShapeMismatch(f"differential in degree {k} has shape {m.shape}, expected "
                                    f"{(ranks.get(k + 1, 0), ranks.get(k, 0))}")
            if m.rows and m.cols and not m.is_zero():
                diffs[k] = m
        object.__setattr__(self, "ranks", dict(sorted(ranks.items())))
        object.__setattr__(self, "diffs", dict(sorted(diffs.items())))

    @classmethod
    def from_homological(cls, ranks: Mapping[int, int],
                         boundaries: Mapping[int, IntMatrix]) -> "CochainComplex":
        """``ranks[a]`` is the rank of ``C_a``; ``boundaries[a]`` maps ``C_a -> C_{a-1}``."""
        return cls({-a: r for a, r in ranks.items()}, {-a: m for a, m in boundaries.items()})

    @classmethod
    def concentrated(cls, rank: int, degree: int = 0) -> "CochainComplex":
        return cls({degree: rank})

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> IntMatrix:
        m = self.diffs.get(n)
        return m if m is not None else IntMatrix.zeros(self.rank(n + 1), self.rank(n))

    @property
    def degrees(self) -> list[int]:
        return list(self.ranks)

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def window(self) -> range:
        if not self.ranks:
            return range(0)
        return range(min(self.ranks), max(self.ranks) + 1)

    def check(self, coefficient: Coefficient = ZZ) -> None:
        for n in self.diffs:
            if not (self.d(n + 1) @ self.d(n)).reduce(coefficient).is_zero():
                raise NotAComplex(f"d^{n + 1} d^{n} != 0")

    def is_complex(self) -> bool:
        try:
            self.check()
        except NotAComplex:
            return False
        return True

    def cohomology_subquotient(self, n: int, coefficient: Coefficient = ZZ) -> Subquotient:
        return homology_subquotient(self.d(n - 1), self.d(n), coefficient)

    def cohomology(self, n: int, coefficient: Coefficient = ZZ) -> FgAbGroup:
        return self.cohomology_subquotient(n, coefficient).group()

    def homology(self, a: int, coefficient: Coefficient = ZZ) -> FgAbGroup:
        """Homological degree ``a``, i.e. cohomological degree ``-a``."""
        return self.cohomology(-a, coefficient)

    def shift(self, k: int) -> "CochainComplex":
        """``C[k]``: ``C[k]^n = C^{n+k}`` with differential ``(-1)^k d``."""
        s = -1 if k % 2 else 1
        return CochainComplex({n - k: r for n, r in self.ranks.items()},
                              {n - k: m.scale(s) for n, m in self.diffs.items()})

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * r for n, r in self.ranks.items())


@dataclass(frozen=True)
class ChainMap:
    """A degree-zero map of cochain complexes, one matrix per degree."""

    source: CochainComplex
    target: CochainComplex
    maps: Mapping[int, IntMatrix]

    def at(self, n: int) -> IntMatrix:
        m = self.maps.get(n)
        return m if m is not None else IntMatrix.zeros(self.target.rank(n), self.source.rank(n))

    def check(self, coefficient: Coefficient = ZZ) -> None:
        degs = set(self.source.ranks) | set(self.target.ranks)
        for n in degs:
            f = self.at(n)
            if f.shape != (self.target.rank(n), self.source.rank(n)):
                raise ShapeMismatch(f"chain map component {n} has shape {f.shape}")
        for n in degs | {n - 1 for n in degs}:
            lhs = self.target.d(n) @ self.at(n)
            rhs = self.at(n + 1) @ self.source.d(n)
            if not (lhs - rhs).reduce(coefficient).is_zero():
                raise NotChainMap(f"square at degree {n} does not commute")


def mapping_cone(f: ChainMap) -> CochainComplex:
    """``Cone(f)^n = X^{n+1} + Y^n`` with ``d = [[-d_X, 0], [f, d_Y]]``."""
    X, Y = f.source, f.target
    degs = sorted({n - 1 for n in X.ranks} | set(Y.ranks))
    ranks = {n: X.rank(n + 1) + Y.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        block = IntMatrix.from_blocks(
            [[-X.d(n + 1), IntMatrix.zeros(X.rank(n + 2), Y.rank(n))],
             [f.at(n + 1), Y.d(n)]],
            [X.rank(n + 2), Y.rank(n + 1)], [X.rank(n + 1), Y.rank(n)])
        diffs[n] = block
    return CochainComplex(ranks, diffs)
