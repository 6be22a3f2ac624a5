"""Sparse multivariate polynomials over Q.

A monomial is an exponent tuple (one non-negative int per variable); this
tuple *is* the multi-index, and its degree is ``sum(exps)``.  Canonical
storage order is graded lexicographic: ``(degree, exps)`` ascending.

Variables are 0-based internally and printed 1-based (``x1`` is index 0).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch
from .linalg import ExactMatrix, as_matrix, format_fraction, to_fraction, vector

MultiIndex = tuple[int, ...]


def grlex_key(exps: MultiIndex) -> tuple[int, MultiIndex]:
    return (sum(exps), exps)


def monomials(num_vars: int, degree: int) -> list[MultiIndex]:
    """All multi-indices of the given degree, in canonical order."""
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        e = [0] * num_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


def index_from_vars(var_indices: Iterable[int], num_vars: int) -> MultiIndex:
    """Multi-index of the monomial x_{i1} x_{i2} ... (0-based, repeats allowed)."""
    e = [0] * num_vars
    for i in var_indices:
        e[i] += 1
    return tuple(e)


def vars_of_index(exps: MultiIndex) -> tuple[int, ...]:
    """Inverse of :func:`index_from_vars`: sorted tuple of variable indices."""
    return tuple(i for i, k in enumerate(exps) for _ in range(k))


class MultiPoly:
    """Immutable sparse polynomial in ``num_vars`` variables with Fraction coefficients."""

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], object] | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        clean: dict[MultiIndex, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise DimensionMismatch(f"exponent {exps} has length {len(exps)}, expected {num_vars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = to_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.num_vars = num_vars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[MultiIndex, Fraction]) -> "MultiPoly":
        # Trusted constructor: terms are already clean.
        p = cls.__new__(cls)
        p.num_vars = num_vars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, num_vars: int) -> "MultiPoly":
        return cls._raw(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value) -> "MultiPoly":
        value = to_fraction(value)
        return cls._raw(num_vars, {(0,) * num_vars: value} if value else {})

    @classmethod
    def var(cls, num_vars: int, index: int) -> "MultiPoly":
        if not 0 <= index < num_vars:
            raise ValueError(f"variable index {index} out of range for {num_vars} variables")
        return cls._raw(num_vars, {index_from_vars([index], num_vars): Fraction(1)})

    @classmethod
    def linear_form(cls, coeffs: Sequence, constant=0) -> "MultiPoly":
        n = len(coeffs)
        terms = {index_from_vars([i], n): c for i, c in enumerate(coeffs)}
        terms[(0,) * n] = constant
        return cls(n, terms)

    @classmethod
    def from_quadric_matrix(cls, q) -> "MultiPoly":
        """The quadratic form v -> v^T Q v of a symmetric matrix."""
        q = as_matrix(q)
        n = q.rows
        terms: dict[MultiIndex, Fraction] = {}
        for i in range(n):
            for j in range(i, n):
                c = q[i, j] if i == j else 2 * q[i, j]
                if c:
                    terms[index_from_vars([i, j], n)] = c
        return cls._raw(n, terms)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[MultiIndex, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    @property
    def min_degree(self) -> int:
        return min((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def uses_var(self, index: int) -> bool:
        return any(e[index] for e in self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.num_vars == other.num_vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.num_vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.num_vars != self.num_vars:
                raise DimensionMismatch(f"variable count mismatch: {self.num_vars} vs {other.num_vars}")
            return other
        return MultiPoly.constant(self.num_vars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = to_fraction(c)
        if not c:
            return MultiPoly.zero(self.num_vars)
        return MultiPoly._raw(self.num_vars, {e: c * v for e, v in self._terms.items()})

    def mul(self, other, max_degree: int | None = None) -> "MultiPoly":
        """Product, optionally dropping every term of degree > max_degree."""
        other = self._coerce(other)
        out: dict[MultiIndex, Fraction] = {}
        b_items = list(other._terms.items())
        if max_degree is not None:
            b_items = [(e, c, sum(e)) for e, c in b_items]
        for ea, ca in self._terms.items():
            if max_degree is None:
                for eb, cb in b_items:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = out.get(e, 0) + ca * cb
            else:
                da = sum(ea)
                for eb, cb, db in b_items:
                    if da + db > max_degree:
                        continue
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = out.get(e, 0) + ca * cb
        return MultiPoly._raw(self.num_vars, {e: c for e, c in out.items() if c})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "MultiPoly":
        return self.scale(1 / to_fraction(c))

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.constant(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, max_degree: int) -> "MultiPoly":
        return MultiPoly._raw(self.num_vars, {e: c for e, c in self._terms.items()
                                              if sum(e) <= max_degree})

    def diff(self, index: int) -> "MultiPoly":
        out = {}
        for e, c in self._terms.items():
            k = e[index]
            if k:
                e2 = e[:index] + (k - 1,) + e[index + 1:]
                out[e2] = c * k
        return MultiPoly._raw(self.num_vars, out)

    def directional_derivative(self, v: Sequence) -> "MultiPoly":
        v = vector(v)
        out = MultiPoly.zero(self.num_vars)
        for i, vi in enumerate(v):
            if vi:
                out = out + self.diff(i).scale(vi)
        return out

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return homogeneous_part(self, d)

    def quadric_matrix(self) -> ExactMatrix:
        """Symmetric Q with v^T Q v equal to the degree-2 part at v."""
        n = self.num_vars
        q = [[Fraction(0)] * n for _ in range(n)]
        for e, c in self._terms.items():
            if sum(e) != 2:
                continue
            i, j = vars_of_index(e)
            if i == j:
                q[i][i] = c
            else:
                q[i][j] = q[j][i] = c / 2
        return ExactMatrix.from_rows(q, n)

    def __call__(self, point: Sequence) -> Fraction:
        return mpoly_eval(self, point)

    def compose_affine(self, a, b: Sequence | None = None) -> "MultiPoly":
        return mpoly_compose_affine(self, a, b)

    # -- presentation --------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({self.num_vars}, {format_poly(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"coeff": format_fraction(c), "exps": list(e)} for e, c in self.items()]

    @classmethod
    def from_json(cls, data: Sequence[Mapping], num_vars: int) -> "MultiPoly":
        terms: dict[MultiIndex, Fraction] = {}
        for t in data:
            e = tuple(int(x) for x in t["exps"])
            terms[e] = terms.get(e, Fraction(0)) + to_fraction(t["coeff"])
        return cls(num_vars, terms)


def format_monomial(exps: MultiIndex, var_offset: int = 1) -> str:
    parts = []
    for i, k in enumerate(exps):
        if k == 1:
            parts.append(f"x{i + var_offset}")
        elif k > 1:
            parts.append(f"x{i + var_offset}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly, var_offset: int = 1) -> str:
    """Human-readable form that :func:`linosc.parser.parse_poly` reads back.

    Terms are printed in descending graded-lex order.
    """
    if p.is_zero():
        return "0"
    chunks = []
    for exps, c in reversed(p.items()):
        mono = format_monomial(exps, var_offset)
        mag = abs(c)
        if not mono:
            body = format_fraction(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_fraction(mag)}*{mono}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


def mpoly_eval(p: MultiPoly, point: Sequence) -> Fraction:
    point = vector(point)
    if len(point) != p.num_vars:
        raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {p.num_vars} variables")
    total = Fraction(0)
    for exps, c in p._terms.items():
        term = c
        for x, k in zip(point, exps):
            if k:
                term *= x ** k
        total += term
    return total


def homogeneous_part(p: MultiPoly, d: int) -> MultiPoly:
    return MultiPoly._raw(p.num_vars, {e: c for e, c in p._terms.items() if sum(e) == d})


def mpoly_compose_affine(p: MultiPoly, a, b: Sequence | None = None) -> MultiPoly:
    """Return q with q(t) = p(a @ t + b).

    ``a`` has one row per variable of ``p`` and one column per new variable.
    """
    a = as_matrix(a)
    if a.rows != p.num_vars:
        raise DimensionMismatch(f"map has {a.rows} rows, polynomial has {p.num_vars} variables")
    b = vector(b) if b is not None else (Fraction(0),) * a.rows
    if len(b) != a.rows:
        raise DimensionMismatch("offset length does not match map rows")
    m = a.cols
    images = [MultiPoly.linear_form(a.entries[i], b[i]) for i in range(a.rows)]
    powers: list[list[MultiPoly]] = [[MultiPoly.constant(m, 1)] for _ in range(a.rows)]

    def power(i: int, k: int) -> MultiPoly:
        cache = powers[i]
        while len(cache) <= k:
            cache.append(cache[-1] * images[i])
        return cache[k]

    acc: dict[MultiIndex, Fraction] = {}
    for exps, c in p._terms.items():
        term = MultiPoly.constant(m, c)
        for i, k in enumerate(exps):
            if k:
                term = term * power(i, k)
                if term.is_zero():
                    break
        for e, v in term._terms.items():
            acc[e] = acc.get(e, 0) + v
    return MultiPoly._raw(m, {e: c for e, c in acc.items() if c})


def substitute(p: MultiPoly, images: Sequence[MultiPoly], max_degree: int | None = None) -> MultiPoly:
    """Substitute polynomial ``images[i]`` for variable i, optionally truncating.

    With ``max_degree`` set, every intermediate product is truncated, so the
    result agrees with the exact substitution in all degrees <= max_degree.
    """
    if len(images) != p.num_vars:
        raise DimensionMismatch("need one image per variable")
    if not images:
        return p
    m = images[0].num_vars
    low = [img.min_degree for img in images]
    powers: list[list[MultiPoly]] = [[MultiPoly.constant(m, 1)] for _ in images]

    def power(i: int, k: int) -> MultiPoly:
        cache = powers[i]
        while len(cache) <= k:
            cache.append(cache[-1].mul(images[i], max_degree))
        return cache[k]

    acc: dict[MultiIndex, Fraction] = {}
    for exps, c in p._terms.items():
        if max_degree is not None:
            lowest = sum(k * low[i] for i, k in enumerate(exps) if k)
            if any(k and low[i] < 0 for i, k in enumerate(exps)) or lowest > max_degree:
                continue
        term = MultiPoly.constant(m, c)
        for i, k in enumerate(exps):
            if k:
                term = term.mul(power(i, k), max_degree)
                if term.is_zero():
                    break
        for e, v in term._terms.items():
            acc[e] = acc.get(e, 0) + v
    return MultiPoly._raw(m, {e: c for e, c in acc.items() if c})


def variables(num_vars: int) -> list[MultiPoly]:
    return [MultiPoly.var(num_vars, i) for i in range(num_vars)]
