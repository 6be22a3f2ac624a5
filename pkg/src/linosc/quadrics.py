"""Fundamental forms, systems of quadrics and the linear algebra around them.

Quadrics are symmetric matrices ``Q`` standing for ``v -> v^T Q v``.  A
system is a list of them on the same n-dimensional space; its span is the
linear system, and redundant generators are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .errors import DimensionMismatch, NotAPencilOnHyperplane, PreconditionFailed
from .linalg import (ExactMatrix, Vector, as_matrix, dot, exact_kernel, exact_rank,
                     format_fraction, in_span, intersect, solve, span_basis, span_dim,
                     standard_basis, stack, vector)
from .polynomial import MultiPoly, homogeneous_part, index_from_vars, monomials
from .variety import GraphJet


@dataclass(frozen=True)
class SymMultiForm:
    """Degree-d part of the graph functions: one homogeneous polynomial per normal direction.

    Coefficients are the raw monomial coefficients, so ``evaluate(v)`` is the
    degree-d part of each graph function at ``v``.
    """

    degree: int
    n: int
    a: int
    forms: tuple[MultiPoly, ...]

    @property
    def coeffs(self) -> list[dict]:
        return [f.terms for f in self.forms]

    def evaluate(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(f(v) for f in self.forms)

    def polar(self, vectors: Sequence[Sequence]) -> tuple[Fraction, ...]:
        """Symmetric multilinear form F(v1, ..., vd) with F(v, ..., v) = evaluate(v)."""
        if len(vectors) != self.degree:
            raise ValueError(f"need {self.degree} vectors")
        return tuple(polarize(f, vectors) for f in self.forms)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.forms)


def polarize(form: MultiPoly, vectors: Sequence[Sequence]) -> Fraction:
    """Full polarization of a homogeneous form of degree len(vectors)."""
    p = form
    for v in vectors:
        p = p.directional_derivative(v)
    if p.is_zero():
        return Fraction(0)
    return p.coeff((0,) * form.num_vars) / factorial(len(vectors))


@dataclass(frozen=True)
class QuadricSystem:
    n: int
    quadrics: tuple[ExactMatrix, ...]

    def __post_init__(self):
        qs = tuple(as_matrix(q, self.n) for q in self.quadrics)
        object.__setattr__(self, "quadrics", qs)
        for q in qs:
            if q.rows != self.n or q.cols != self.n:
                raise DimensionMismatch(f"quadric is {q.rows}x{q.cols}, expected {self.n}x{self.n}")
            if not q.is_symmetric():
                raise ValueError("quadric matrix is not symmetric")

    @classmethod
    def from_polys(cls, polys: Sequence[MultiPoly], n: int | None = None) -> "QuadricSystem":
        if n is None:
            n = polys[0].num_vars
        for p in polys:
            if p.num_vars != n or any(sum(e) != 2 for e in p.terms):
                raise ValueError(f"{p} is not a quadratic form in {n} variables")
        return cls(n, tuple(p.quadric_matrix() for p in polys))

    def polys(self) -> list[MultiPoly]:
        return [MultiPoly.from_quadric_matrix(q) for q in self.quadrics]

    def coefficient_vectors(self) -> list[Vector]:
        basis = monomials(self.n, 2)
        return [tuple(p.coeff(m) for m in basis) for p in self.polys()]

    @property
    def span_dim(self) -> int:
        if not self.quadrics:
            return 0
        return span_dim(self.coefficient_vectors(), len(monomials(self.n, 2)))

    @property
    def redundant(self) -> int:
        return len(self.quadrics) - self.span_dim

    def to_json(self) -> dict:
        return {"n": self.n, "quadrics": [q.to_json() for q in self.quadrics]}

    @classmethod
    def from_json(cls, data: Mapping) -> "QuadricSystem":
        n = int(data["n"])
        return cls(n, tuple(ExactMatrix.from_rows(q, n) for q in data["quadrics"]))


def fundamental_form(jet: GraphJet, d: int) -> SymMultiForm:
    if not 2 <= d <= jet.order:
        raise ValueError(f"degree {d} outside 2..{jet.order}")
    return SymMultiForm(d, jet.n, jet.a, tuple(homogeneous_part(f, d) for f in jet.funcs))


def second_fundamental_system(jet: GraphJet) -> QuadricSystem:
    if jet.order < 2:
        raise ValueError("jet order must be at least 2")
    return QuadricSystem(jet.n, tuple(f.quadric_matrix() for f in jet.funcs))


def singular_locus(system: QuadricSystem) -> list[Vector]:
    """Common kernel of all quadrics, as a canonical basis."""
    if not system.quadrics:
        return standard_basis(system.n)
    return exact_kernel(stack(system.quadrics, system.n))


def base_locus_contains(system: QuadricSystem, w: Sequence[Sequence]) -> bool:
    """True iff the polar form of every quadric vanishes identically on span(w)."""
    w = [vector(x) for x in w]
    for x in w:
        if len(x) != system.n:
            raise DimensionMismatch("subspace vector has wrong length")
    for q in system.quadrics:
        qw = [q @ x for x in w]
        for i, x in enumerate(w):
            for y in qw[i:]:
                if dot(x, y) != 0:
                    return False
    return True


def singular_locus_in(q: ExactMatrix, w: Sequence[Sequence]) -> list[Vector]:
    """Vectors of span(w) in the kernel of q."""
    n = q.rows
    return intersect(w, exact_kernel(q), n)


def prolongation(system: QuadricSystem) -> list[MultiPoly]:
    """Cubics all of whose first partials lie in the span of the system.

    Solved as one kernel problem on the coefficients of cubics; the basis is
    in reduced echelon form over cubic monomials in canonical order.
    """
    n = system.n
    quad_basis = monomials(n, 2)
    quad_pos = {m: i for i, m in enumerate(quad_basis)}
    cubic_basis = monomials(n, 3)
    if system.quadrics:
        annihilator = exact_kernel(ExactMatrix.from_rows(system.coefficient_vectors(), len(quad_basis)))
    else:
        annihilator = standard_basis(len(quad_basis))
    if not annihilator:
        return [MultiPoly(n, {m: 1}) for m in cubic_basis]
    rows = []
    for i in range(n):
        for z in annihilator:
            row = []
            for beta in cubic_basis:
                k = beta[i]
                if k == 0:
                    row.append(Fraction(0))
                    continue
                lower = beta[:i] + (k - 1,) + beta[i + 1:]
                row.append(k * z[quad_pos[lower]])
            rows.append(row)
    kernel = exact_kernel(ExactMatrix.from_rows(rows, len(cubic_basis)))
    return [MultiPoly(n, dict(zip(cubic_basis, v))) for v in kernel]


@dataclass(frozen=True)
class PencilClassification:
    case: int | str
    hyperplane_form: Vector
    factors: tuple[Vector, ...]
    factor_span_dim: int
    form_in_span: bool

    def to_json(self) -> dict:
        return {"case": self.case,
                "hyperplane_form": [format_fraction(x) for x in self.hyperplane_form],
                "factors": [[format_fraction(x) for x in f] for f in self.factors],
                "factor_span_dim": self.factor_span_dim,
                "form_in_span": self.form_in_span}


def divide_by_linear_form(q: ExactMatrix, ell: Sequence) -> Vector | None:
    """Linear form lam with q = ell * lam as quadratic forms, or None."""
    n = q.rows
    ell = vector(ell)
    # Unknown lam: (ell lam^T + lam ell^T) / 2 = q, one equation per entry (i <= j).
    rows, rhs = [], []
    for i in range(n):
        for j in range(i, n):
            row = [Fraction(0)] * n
            row[j] += ell[i] / 2
            row[i] += ell[j] / 2
            rows.append(row)
            rhs.append(q[i, j])
    return solve(ExactMatrix.from_rows(rows, n), rhs)


def classify_pencil_with_hyperplane_base(system: QuadricSystem, hyperplane: Sequence[Sequence]) -> PencilClassification:
    """Normal-form case of a pencil of quadrics whose base locus contains a hyperplane.

    Each quadric factors as ell * lam_i with ell cutting the hyperplane.  With
    Lam = span(lam_1, lam_2): case 1 is dim 2 with ell in Lam, case 2 dim 1
    with ell not in Lam, case 3 dim 2 with ell not in Lam, case 4 dim 1 with
    ell in Lam; both quadrics zero is "degenerate".
    """
    n = system.n
    if len(system.quadrics) != 2:
        raise NotAPencilOnHyperplane(f"expected 2 quadrics, got {len(system.quadrics)}")
    h = [vector(x) for x in hyperplane]
    if span_dim(h, n) != n - 1 or len(h) != n - 1:
        raise NotAPencilOnHyperplane("hyperplane basis must have n-1 independent vectors")
    if not base_locus_contains(system, h):
        raise NotAPencilOnHyperplane("hyperplane is not in the base locus")
    (ell,) = exact_kernel(ExactMatrix.from_rows(h, n))
    factors = []
    for q in system.quadrics:
        lam = divide_by_linear_form(q, ell)
        if lam is None:
            raise NotAPencilOnHyperplane("quadric is not divisible by the hyperplane's linear form")
        factors.append(lam)
    dim = span_dim(factors, n)
    inside = dim > 0 and in_span(ell, factors, n)
    if dim == 0:
        case: int | str = "degenerate"
    elif dim == 2:
        case = 1 if inside else 3
    else:
        case = 4 if inside else 2
    return PencilClassification(case, ell, tuple(factors), dim, inside)


@dataclass(frozen=True)
class LemmaReport:
    n: int
    k: int
    a: int
    per_quadric_dims: tuple[int, ...]
    per_quadric_bound: int
    common_dim: int
    common_in_w_dim: int
    hypothesis: bool
    conclusion: bool | None

    @property
    def holds(self) -> bool:
        """Per-quadric bound satisfied and, under the hypothesis, a nonzero common singular locus."""
        ok = all(d >= self.per_quadric_bound for d in self.per_quadric_dims)
        return ok and self.conclusion is not False

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "a": self.a,
                "per_quadric_singloc_in_w_dims": list(self.per_quadric_dims),
                "per_quadric_bound": self.per_quadric_bound,
                "common_singloc_dim": self.common_dim,
                "common_singloc_in_w_dim": self.common_in_w_dim,
                "hypothesis_a_lt_k_over_n_minus_k": self.hypothesis,
                "common_singloc_nonzero": self.conclusion,
                "holds": self.holds}


def lemma_singloc_check(system: QuadricSystem, w: Sequence[Sequence]) -> LemmaReport:
    n = system.n
    w = span_basis(w, n)
    if not base_locus_contains(system, w):
        raise PreconditionFailed("subspace is not in the base locus of the system")
    k = len(w)
    a = system.span_dim
    per = tuple(len(singular_locus_in(q, w)) for q in system.quadrics)
    common = singular_locus(system)
    common_w = intersect(common, w, n) if w else []
    hypothesis = a * (n - k) < k
    conclusion = (len(common) > 0) if hypothesis else None
    return LemmaReport(n, k, a, per, max(0, 2 * k - n), len(common), len(common_w), hypothesis, conclusion)


def quadric_rank(q: ExactMatrix) -> int:
    return exact_rank(q)


def quadric_from_vars(n: int, i: int, j: int) -> ExactMatrix:
    """Matrix of the monomial x_i x_j (0-based)."""
    return MultiPoly(n, {index_from_vars([i, j], n): 1}).quadric_matrix()
