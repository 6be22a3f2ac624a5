"""Dense exact linear algebra over the rationals.

Matrices are stored as tuples of rows of :class:`fractions.Fraction`.  Rank
uses fraction-free (Bareiss) elimination on integer rows; kernels and
row spaces are returned in reduced row echelon form so that every basis this
module hands out is canonical for the subspace it spans.

Vectors are plain tuples of Fractions.  A "subspace basis" is a list of such
vectors; the empty list is the zero subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and rational strings ("p/q") to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'p/q' strings")
    return Fraction(value)


def format_fraction(value: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable dense rational matrix.

    ``cols`` is stored explicitly so that 0-row matrices keep their width
    (the kernel of a 0 x n matrix is all of Q^n).
    """

    rows: int
    cols: int
    entries: tuple[Vector, ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        entries = tuple(vector(r) for r in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(entries[0])
        for r in entries:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(len(entries), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "ExactMatrix":
        cols = [vector(c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise ValueError("column length does not match row count")
        entries = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(rows, len(cols), entries)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.entries[i][j]

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                           tuple(() for _ in range(self.cols)))

    def columns(self) -> list[Vector]:
        return [tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)]

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            other_cols = other.columns()
            return ExactMatrix(self.rows, other.cols, tuple(
                tuple(dot(r, c) for c in other_cols) for r in self.entries))
        v = vector(other)
        if len(v) != self.cols:
            raise ValueError("vector length does not match matrix width")
        return tuple(dot(r, v) for r in self.entries)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def rank(self) -> int:
        return exact_rank(self)

    def kernel(self) -> list[Vector]:
        return exact_kernel(self)

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(x) for x in r] for r in self.entries]


def as_matrix(m, cols: int | None = None) -> ExactMatrix:
    if isinstance(m, ExactMatrix):
        return m
    return ExactMatrix.from_rows(m, cols)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def _integer_rows(m: ExactMatrix) -> list[list[int]]:
    # Scaling a row by a nonzero constant preserves rank.
    out = []
    for row in m.entries:
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def exact_rank(m) -> int:
    """Rank over Q by fraction-free Bareiss elimination."""
    m = as_matrix(m)
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            arc = a[r][col]
            row_r, row_p = a[r], a[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (p * row_r[c] - arc * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
    return rank


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = as_matrix(m)
    a = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        if r == len(a):
            break
        pivot = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][col]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        row = a[r]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], row)]
        pivots.append(col)
        r += 1
    return a[:r], pivots


def exact_kernel(m) -> list[Vector]:
    """Basis of the right kernel, itself in reduced row echelon form."""
    m = as_matrix(m)
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        basis.append(v)
    if not basis:
        return []
    echelon, _ = rref(ExactMatrix.from_rows(basis, m.cols))
    return [tuple(r) for r in echelon]


def span_basis(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Canonical (RREF) basis of the span of ``vectors`` in Q^dim."""
    if not vectors:
        return []
    echelon, _ = rref(ExactMatrix.from_rows(vectors, dim))
    return [tuple(r) for r in echelon]


def span_dim(vectors: Sequence[Sequence], dim: int) -> int:
    if not vectors:
        return 0
    return exact_rank(ExactMatrix.from_rows(vectors, dim))


def in_span(v: Sequence, vectors: Sequence[Sequence], dim: int) -> bool:
    return span_dim(list(vectors) + [v], dim) == span_dim(vectors, dim)


def intersect(u: Sequence[Sequence], w: Sequence[Sequence], dim: int) -> list[Vector]:
    """Canonical basis of span(u) ∩ span(w)."""
    u = span_basis(u, dim)
    w = span_basis(w, dim)
    if not u or not w:
        return []
    # Solve sum a_i u_i = sum b_j w_j: kernel of the dim x (|u|+|w|) matrix [U | -W].
    cols = list(u) + [tuple(-x for x in c) for c in w]
    system = ExactMatrix.from_columns(cols, dim)
    out = []
    for coeffs in exact_kernel(system):
        out.append(tuple(sum((c * ui[i] for c, ui in zip(coeffs[:len(u)], u)), Fraction(0))
                         for i in range(dim)))
    return span_basis(out, dim)


def extend_to_basis(vectors: Sequence[Sequence], candidates: Sequence[Sequence], dim: int) -> list[Vector]:
    """Greedily append candidates that enlarge the span; returns only the added ones."""
    current = [vector(v) for v in vectors]
    rank = span_dim(current, dim)
    added = []
    for c in candidates:
        c = vector(c)
        if span_dim(current + [c], dim) > rank:
            current.append(c)
            added.append(c)
            rank += 1
        if rank == dim:
            break
    return added


def standard_basis(dim: int) -> list[Vector]:
    return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]


def solve(a, b: Sequence) -> Vector | None:
    """One solution x of a @ x = b (free variables set to 0), or None."""
    a = as_matrix(a)
    b = vector(b)
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match row count")
    aug = ExactMatrix.from_rows([list(r) + [bi] for r, bi in zip(a.entries, b)], a.cols + 1)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [Fraction(0)] * a.cols
    for row, pc in zip(rows, pivots):
        x[pc] = row[a.cols]
    return tuple(x)


def inverse(a) -> ExactMatrix:
    a = as_matrix(a)
    if a.rows != a.cols:
        raise ValueError("matrix is not square")
    n = a.rows
    aug = ExactMatrix.from_rows([list(r) + list(e) for r, e in
                                 zip(a.entries, ExactMatrix.identity(n).entries)], 2 * n)
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return ExactMatrix.from_rows([r[n:] for r in rows], n)


def stack(mats: Sequence[ExactMatrix], cols: int) -> ExactMatrix:
    rows = [r for m in mats for r in m.entries]
    return ExactMatrix(len(rows), cols, tuple(rows))
