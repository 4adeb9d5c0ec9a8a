"""Exact integer linear algebra.

Everything here works with Python integers, so entries never overflow.
Maps act on column vectors: an ``r x c`` matrix sends ``Z^c`` to ``Z^r``,
and two maps compose as ``d_out @ d_in`` when ``d_out.cols == d_in.rows``.

Finite coefficients ``Z/n`` are never handled by ring-specific pivoting.
A free ``Z/n``-module of rank ``k`` is the presented group ``Z^k / nZ^k``
and every computation runs through the integer Smith normal form of a
suitably augmented relation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from operator import mul
from typing import Iterable, Sequence


class ShapeMismatch(ValueError):
    pass


class CompositionNotZero(ValueError):
    pass


@dataclass(frozen=True)
class Coefficient:
    """Coefficient ring: the integers (``modulus=None``) or ``Z/modulus``."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    @classmethod
    def integers(cls) -> "Coefficient":
        return cls(None)

    @classmethod
    def mod(cls, n: int) -> "Coefficient":
        return cls(n)

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    def reduce(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def free_relations(self, rank: int) -> "IntMatrix":
        """Relation matrix presenting the free module of ``rank`` as a Z-module."""
        if self.modulus is None:
            return IntMatrix.zeros(rank, 0)
        return IntMatrix.identity(rank).scale(self.modulus)

    def __str__(self):
        return "Z" if self.modulus is None else f"Z/{self.modulus}"


ZZ = Coefficient()


class IntMatrix:
    """Immutable integer matrix, stored row-major as a tuple of tuples."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]] = (), rows: int | None = None,
                 cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in entries)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ShapeMismatch(f"entries do not form a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def _raw(cls, data: tuple, rows: int, cols: int) -> "IntMatrix":
        """Wrap an already validated tuple of int tuples without copying."""
        self = object.__new__(cls)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)
        return self

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls._raw(((0,) * cols,) * rows, rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls._raw(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls(((c[i] for c in columns) for i in range(rows)), rows, len(columns))

    @classmethod
    def hstack(cls, blocks: Sequence["IntMatrix"], rows: int | None = None) -> "IntMatrix":
        if not blocks:
            return cls.zeros(rows or 0, 0)
        r = blocks[0].rows
        if any(b.rows != r for b in blocks):
            raise ShapeMismatch("hstack needs equal row counts")
        return cls._raw(tuple(sum((b.entries[i] for b in blocks), ()) for i in range(r)), r,
                        sum(b.cols for b in blocks))

    @classmethod
    def vstack(cls, blocks: Sequence["IntMatrix"], cols: int | None = None) -> "IntMatrix":
        if not blocks:
            return cls.zeros(0, cols or 0)
        c = blocks[0].cols
        if any(b.cols != c for b in blocks):
            raise ShapeMismatch("vstack needs equal column counts")
        return cls._raw(tuple(row for b in blocks for row in b.entries), sum(b.rows for b in blocks), c)

    @classmethod
    def block_diag(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.entries):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls(out, rows, cols)

    @classmethod
    def from_blocks(cls, grid: Sequence[Sequence["IntMatrix"]], row_sizes: Sequence[int],
                    col_sizes: Sequence[int]) -> "IntMatrix":
        out = [[0] * sum(col_sizes) for _ in range(sum(row_sizes))]
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                b = grid[bi][bj]
                if b.rows != rs or b.cols != cs:
                    raise ShapeMismatch("block has the wrong shape")
                for i, row in enumerate(b.entries):
                    out[r0 + i][c0:c0 + cs] = row
                c0 += cs
            r0 += rs
        return cls._raw(tuple(map(tuple, out)), sum(row_sizes), sum(col_sizes))

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, rows: Sequence[int] | range, cols: Sequence[int] | range) -> "IntMatrix":
        return IntMatrix._raw(tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
                              len(rows), len(cols))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    # arithmetic -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)), self.rows, self.cols)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c: int) -> "IntMatrix":
        if c == 1:
            return self
        return IntMatrix._raw(tuple(tuple(c * x for x in r) for r in self.entries), self.rows, self.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot compose {self.shape} after {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix._raw(tuple(tuple(sum(map(mul, r, c)) for c in cols) for r in self.entries),
                              self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ShapeMismatch("vector length does not match column count")
        return tuple(sum(map(mul, r, v)) for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix._raw(tuple(zip(*self.entries)), self.cols, self.rows) if self.rows else \
            IntMatrix.zeros(self.cols, 0)

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def reduce(self, coefficient: Coefficient) -> "IntMatrix":
        if coefficient.modulus is None:
            return self
        n = coefficient.modulus
        return IntMatrix._raw(tuple(tuple(x % n for x in r) for r in self.entries), self.rows, self.cols)

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix._raw(tuple(tuple(a * b for a in r for b in s)
                                    for r in self.entries for s in other.entries),
                              self.rows * other.rows, self.cols * other.cols)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class _SNF:
    diag: tuple[int, ...]      # nonzero diagonal entries, positive, divisibility chain
    U: list
    Uinv: list
    V: list
    Vinv: list
    rows: int
    cols: int


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf(entries: Sequence[Sequence[int]], m: int, n: int) -> _SNF:
    A = [list(r) for r in entries]
    U, Uinv, V, Vinv = _identity(m), _identity(m), _identity(n), _identity(n)

    def row_add(i, j, c):        # row_i += c * row_j
        if c == 0:
            return
        Ai, Aj = A[i], A[j]
        for k in range(n):
            Ai[k] += c * Aj[k]
        Ui, Uj = U[i], U[j]
        for k in range(m):
            Ui[k] += c * Uj[k]
        for row in Uinv:          # col_j -= c * col_i
            row[j] -= c * row[i]

    def row_swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    def col_add(j, i, c):        # col_j += c * col_i
        if c == 0:
            return
        for row in A:
            row[j] += c * row[i]
        for row in V:
            row[j] += c * row[i]
        Vi, Vj = Vinv[i], Vinv[j]
        for k in range(n):
            Vi[k] -= c * Vj[k]

    def col_swap(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cand)
                row_swap(t, i)
                col_swap(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            row_neg(t)
        diag.append(A[t][t])
        t += 1
    return _SNF(tuple(diag), U, Uinv, V, Vinv, m, n)


def _unit_cofactor(d: int, n: int) -> int:
    """Return a unit ``u`` mod ``n`` with ``d == gcd(d, n) * u (mod n)``."""
    g = gcd(d, n)
    r = (d // g) % (n // g) if n // g > 1 else 0
    u = r
    while gcd(u, n) != 1:
        u += n // g
    return u % n


def smith_normal_form(m: IntMatrix, coefficient: Coefficient = ZZ):
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` over the coefficient ring.

    ``U`` and ``V`` are invertible over the ring and ``D`` is diagonal with
    each nonzero diagonal entry dividing the next.  Over ``Z/n`` the diagonal
    entries are divisors of ``n`` (entries that would equal ``n`` are zero)
    and the identity holds after reduction mod ``n``.
    """
    s = _snf(m.entries, m.rows, m.cols)
    U = [row[:] for row in s.U]
    diag = list(s.diag)
    if coefficient.modulus is not None:
        n = coefficient.modulus
        for i, d in enumerate(diag):
            u = _unit_cofactor(d, n)
            inv = pow(u, -1, n)
            U[i] = [(inv * x) % n for x in U[i]]
            diag[i] = gcd(d, n) % n
        U = [[x % n for x in row] for row in U]
    D = [[0] * m.cols for _ in range(m.rows)]
    for i, d in enumerate(diag):
        D[i][i] = d
    Vm = IntMatrix(s.V, m.cols, m.cols).reduce(coefficient)
    return IntMatrix(U, m.rows, m.rows), IntMatrix(D, m.rows, m.cols), Vm


def invariant_factors_of(relations: IntMatrix) -> tuple[int, ...]:
    """Invariant factors of ``Z^rows / column-span(relations)``; ``0`` encodes ``Z``."""
    s = _snf(relations.entries, relations.rows, relations.cols)
    torsion = [d for d in s.diag if d != 1]
    return tuple(torsion) + (0,) * (relations.rows - len(s.diag))


def rank(m: IntMatrix) -> int:
    return len(_snf(m.entries, m.rows, m.cols).diag)


def kernel_basis(m: IntMatrix, coefficient: Coefficient = ZZ) -> IntMatrix:
    """Columns generating ``ker(m)``.

    Over the integers the columns are a basis of the kernel lattice.  Over
    ``Z/n`` they generate the kernel of ``m mod n`` and are reduced mod ``n``.
    """
    if coefficient.modulus is None:
        s = _snf(m.entries, m.rows, m.cols)
        r = len(s.diag)
        return IntMatrix(((row[j] for j in range(r, m.cols)) for row in s.V), m.cols, m.cols - r)
    n = coefficient.modulus
    lat = preimage(m, coefficient.free_relations(m.rows))
    cols = []
    for c in lat.columns():
        c = tuple(x % n for x in c)
        if any(c) and c not in cols:
            cols.append(c)
    return IntMatrix.from_columns(cols, m.cols)


def column_basis(m: IntMatrix) -> IntMatrix:
    """A basis (full column rank) of the lattice spanned by the columns of ``m``."""
    s = _snf(m.entries, m.rows, m.cols)
    return IntMatrix(((row[j] * s.diag[j] for j in range(len(s.diag))) for row in s.Uinv),
                     m.rows, len(s.diag))


def solve(m: IntMatrix, v: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution ``x`` of ``m @ x == v``, or ``None`` when none exists."""
    if len(v) != m.rows:
        raise ShapeMismatch("right-hand side has the wrong length")
    s = _snf(m.entries, m.rows, m.cols)
    w = [sum(a * b for a, b in zip(row, v)) for row in s.U]
    y = [0] * m.cols
    for i, d in enumerate(s.diag):
        if w[i] % d:
            return None
        y[i] = w[i] // d
    if any(w[len(s.diag):]):
        return None
    return tuple(sum(a * b for a, b in zip(row, y)) for row in s.V)


def in_span(m: IntMatrix, v: Sequence[int]) -> bool:
    return solve(m, v) is not None


def span_contains(big: IntMatrix, small: IntMatrix) -> bool:
    """Whether every column of ``small`` lies in the column lattice of ``big``."""
    if small.cols == 0:
        return True
    s = _snf(big.entries, big.rows, big.cols)
    r = len(s.diag)
    for c in small.columns():
        w = [sum(a * b for a, b in zip(row, c)) for row in s.U]
        if any(w[r:]) or any(w[i] % d for i, d in enumerate(s.diag)):
            return False
    return True


def same_span(a: IntMatrix, b: IntMatrix) -> bool:
    return span_contains(a, b) and span_contains(b, a)


def preimage(m: IntMatrix, target: IntMatrix) -> IntMatrix:
    """Basis of the lattice ``{x : m @ x in column-span(target)}``."""
    if target.rows != m.rows:
        raise ShapeMismatch("target lattice lives in the wrong ambient space")
    k = kernel_basis(IntMatrix.hstack([m, -target]) if m.rows else IntMatrix.zeros(0, m.cols + target.cols))
    return column_basis(k.submatrix(range(m.cols), range(k.cols)))


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FgAbGroup:
    """A finitely generated abelian group by invariant factors.

    ``invariant_factors`` is a divisibility chain of torsion orders followed by
    zeros, one per free summand.  The trivial group has no factors.
    """

    invariant_factors: tuple[int, ...] = ()
    presentation: tuple[int, IntMatrix] | None = None

    def __post_init__(self):
        f = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if any(x == 1 or x < 0 for x in f):
            raise ValueError(f"invalid invariant factors {f}")
        torsion = [x for x in f if x]
        if f != tuple(torsion) + (0,) * (len(f) - len(torsion)):
            raise ValueError(f"free summands must come last: {f}")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise ValueError(f"not a divisibility chain: {f}")

    def __eq__(self, other):
        return isinstance(other, FgAbGroup) and self.invariant_factors == other.invariant_factors

    def __hash__(self):
        return hash(self.invariant_factors)

    @classmethod
    def from_relations(cls, relations: IntMatrix) -> "FgAbGroup":
        return cls(invariant_factors_of(relations), (relations.rows, relations))

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls((0,) * rank)

    @property
    def free_rank(self) -> int:
        return sum(1 for x in self.invariant_factors if x == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(x for x in self.invariant_factors if x)

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        parts = []
        for x in self.invariant_factors:
            parts.append("Z" if x == 0 else f"Z/{x}")
        return " + ".join(parts)

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        r = IntMatrix.block_diag([_diag_relations(self), _diag_relations(other)])
        return FgAbGroup.from_relations(r)


def _diag_relations(g: FgAbGroup) -> IntMatrix:
    n = len(g.invariant_factors)
    return IntMatrix([[g.invariant_factors[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)


class Subquotient:
    """The group ``numerator / denominator`` of two nested lattices in ``Z^ambient``.

    Both lattices are given by generating columns; ``denominator`` must lie
    inside ``numerator``.  Homomorphisms between subquotients are ambient
    integer matrices mapping numerator into numerator and denominator into
    denominator.
    """

    def __init__(self, numerator: IntMatrix, denominator: IntMatrix):
        if numerator.rows != denominator.rows:
            raise ShapeMismatch("lattices live in different ambient spaces")
        self.ambient = numerator.rows
        self.numerator = column_basis(numerator)
        self.denominator = denominator
        self._group = None

    @classmethod
    def zero(cls, ambient: int = 0) -> "Subquotient":
        z = IntMatrix.zeros(ambient, 0)
        return cls(z, z)

    def group(self) -> FgAbGroup:
        if self._group is None:
            K = self.numerator
            coords = []
            for c in self.denominator.columns():
                x = solve(K, c)
                if x is None:
                    raise ValueError("denominator is not contained in numerator")
                coords.append(x)
            rel = IntMatrix.from_columns(coords, K.cols)
            self._group = FgAbGroup.from_relations(rel)
        return self._group

    def contains(self, v: Sequence[int]) -> bool:
        return in_span(self.numerator, v)

    def is_trivial_class(self, v: Sequence[int]) -> bool:
        return in_span(self.denominator, v)

    def kernel(self, hom: IntMatrix, target: "Subquotient") -> "Subquotient":
        """Kernel of ``hom: self -> target`` as a subquotient with this denominator."""
        pre = preimage(hom, target.denominator)
        # intersect the preimage with the numerator
        k = kernel_basis(IntMatrix.hstack([self.numerator, -pre]))
        inter = self.numerator @ k.submatrix(range(self.numerator.cols), range(k.cols))
        return Subquotient(inter, self.denominator)

    def image(self, hom: IntMatrix, target: "Subquotient") -> "Subquotient":
        """Image of ``hom: self -> target`` as a subquotient of the target."""
        gens = IntMatrix.hstack([hom @ self.numerator, target.denominator])
        return Subquotient(gens, target.denominator)

    def respects(self, hom: IntMatrix, target: "Subquotient") -> bool:
        """Whether ``hom`` induces a well-defined map ``self -> target``."""
        return (span_contains(target.numerator, hom @ self.numerator)
                and span_contains(target.denominator, hom @ self.denominator))

    def same_subgroup(self, other: "Subquotient") -> bool:
        """Equality of numerators, both read inside a common denominator."""
        return same_span(IntMatrix.hstack([self.numerator, self.denominator]),
                         IntMatrix.hstack([other.numerator, other.denominator]))

    def maps_equal(self, f: IntMatrix, g: IntMatrix, target: "Subquotient") -> bool:
        return span_contains(target.denominator, (f - g) @ self.numerator)

    def __repr__(self):
        return f"Subquotient(ambient={self.ambient}, group={self.group()})"


def presented_homology(d_in: IntMatrix, d_out: IntMatrix, rel_in: IntMatrix,
                       rel_mid: IntMatrix, rel_out: IntMatrix) -> Subquotient:
    """Homology ``ker(d_out) / im(d_in)`` of presented groups ``Z^k / span(rel)``."""
    num = preimage(d_out, rel_out)
    den = IntMatrix.hstack([d_in, rel_mid])
    return Subquotient(num, den)


def homology_at(d_in: IntMatrix, d_out: IntMatrix, coefficient: Coefficient = ZZ) -> FgAbGroup:
    """``ker(d_out) / im(d_in)`` as invariant factors, over the coefficient ring."""
    if d_out.cols != d_in.rows:
        raise ShapeMismatch(f"d_out {d_out.shape} does not compose with d_in {d_in.shape}")
    comp = (d_out @ d_in).reduce(coefficient)
    if not comp.is_zero():
        raise CompositionNotZero("d_out @ d_in is nonzero")
    return homology_subquotient(d_in, d_out, coefficient).group()


def homology_subquotient(d_in: IntMatrix, d_out: IntMatrix, coefficient: Coefficient = ZZ) -> Subquotient:
    return presented_homology(d_in, d_out, coefficient.free_relations(d_in.cols),
                              coefficient.free_relations(d_in.rows),
                              coefficient.free_relations(d_out.rows))
