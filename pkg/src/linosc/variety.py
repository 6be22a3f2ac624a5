"""Varieties as implicit equations and as local graph jets.

An :class:`ImplicitVariety` is cut out by polynomial generators in affine
space.  At a smooth rational point it is locally the graph of ``a`` power
series over its tangent space; :func:`implicit_to_graph` computes that graph
to a finite order and records the affine chart it lives in.

Chart convention: ambient coordinates are split into *normal* coordinates
(the highest-index set whose Jacobian block is invertible) and *tangent*
coordinates (the rest, in increasing order).  A chart point ``(u, y)``
maps to the ambient point ``p + T u + E_N y`` where the columns of ``T``
span the Jacobian kernel and restrict to the identity on the tangent
coordinates.  The graph functions ``y = f(u)`` then have no constant or
linear terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (DimensionMismatch, NotOnVariety, NotOsculatingOrder1,
                     SingularOrExcessCodim)
from .linalg import (ExactMatrix, Vector, exact_kernel, exact_rank, extend_to_basis,
                     format_fraction, intersect, inverse, span_basis, span_dim,
                     standard_basis, stack, vector)
from .polynomial import MultiPoly, homogeneous_part, mpoly_compose_affine, substitute, variables


@dataclass(frozen=True)
class ImplicitVariety:
    ambient_dim: int
    expected_dim: int
    generators: tuple[MultiPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.ambient_dim < 1:
            raise DimensionMismatch("ambient_dim must be positive")
        if not 0 <= self.expected_dim < self.ambient_dim:
            raise DimensionMismatch("expected codimension must be at least 1")
        for g in self.generators:
            if g.num_vars != self.ambient_dim:
                raise DimensionMismatch(
                    f"generator {g} has {g.num_vars} variables, ambient dimension is {self.ambient_dim}")

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.expected_dim

    def contains_point(self, point: Sequence) -> bool:
        return all(g(point) == 0 for g in self.generators)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "expected_dim": self.expected_dim,
                "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ImplicitVariety":
        n = int(data["ambient_dim"])
        gens = tuple(MultiPoly.from_json(g, n) for g in data["generators"])
        return cls(n, int(data["expected_dim"]), gens)


@dataclass(frozen=True)
class LinearSpace:
    """Affine-linear space ``base_point + span(directions)``."""

    base_point: Vector
    directions: tuple[Vector, ...]

    def __post_init__(self):
        object.__setattr__(self, "base_point", vector(self.base_point))
        object.__setattr__(self, "directions", tuple(vector(d) for d in self.directions))
        n = len(self.base_point)
        for d in self.directions:
            if len(d) != n:
                raise DimensionMismatch("direction length does not match base point")
        if span_dim(self.directions, n) != len(self.directions):
            raise DimensionMismatch("directions are not linearly independent")

    @classmethod
    def through_origin(cls, directions: Sequence[Sequence], ambient_dim: int) -> "LinearSpace":
        return cls((0,) * ambient_dim, tuple(directions))

    @property
    def ambient_dim(self) -> int:
        return len(self.base_point)

    @property
    def dim(self) -> int:
        return len(self.directions)

    @property
    def matrix(self) -> ExactMatrix:
        """ambient_dim x k matrix whose columns are the directions."""
        return ExactMatrix.from_columns(self.directions, self.ambient_dim)

    def to_json(self) -> dict:
        return {"point": [format_fraction(x) for x in self.base_point],
                "directions": [[format_fraction(x) for x in d] for d in self.directions]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LinearSpace":
        return cls(vector(data["point"]), tuple(vector(d) for d in data["directions"]))


@dataclass(frozen=True)
class NormalFrame:
    """Result of a successful smoothness check."""

    normal_coords: tuple[int, ...]
    tangent_coords: tuple[int, ...]
    jacobian: ExactMatrix
    solve_rows: tuple[int, ...]


@dataclass(frozen=True)
class Chart:
    base_point: Vector
    tangent_basis: tuple[Vector, ...]
    normal_coords: tuple[int, ...]
    tangent_coords: tuple[int, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.base_point)

    def affine_matrix(self) -> ExactMatrix:
        """Map (u, y) -> ambient offset, as an ambient x (n + a) matrix."""
        cols = list(self.tangent_basis)
        cols += [tuple(Fraction(int(i == c)) for i in range(self.ambient_dim)) for c in self.normal_coords]
        return ExactMatrix.from_columns(cols, self.ambient_dim)

    def tangent_to_ambient(self, u: Sequence) -> Vector:
        u = vector(u)
        return tuple(sum((ui * t[i] for ui, t in zip(u, self.tangent_basis)), Fraction(0))
                     for i in range(self.ambient_dim))

    def space_to_chart(self, space: LinearSpace) -> LinearSpace:
        """Express an ambient linear space through the base point in tangent coordinates."""
        if space.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("linear space lives in a different ambient space")
        offset = tuple(a - b for a, b in zip(self.base_point, space.base_point))
        if any(offset) and span_dim(list(space.directions) + [offset], self.ambient_dim) > space.dim:
            raise NotOsculatingOrder1("linear space does not pass through the chart base point")
        dirs = []
        for d in space.directions:
            u = tuple(d[c] for c in self.tangent_coords)
            if self.tangent_to_ambient(u) != d:
                raise NotOsculatingOrder1("linear space is not tangent to the variety at the base point")
            dirs.append(u)
        return LinearSpace.through_origin(dirs, len(self.tangent_coords))

    def space_to_ambient(self, directions: Sequence[Sequence]) -> LinearSpace:
        return LinearSpace(self.base_point, tuple(self.tangent_to_ambient(u) for u in directions))

    def to_json(self) -> dict:
        return {"base_point": [format_fraction(x) for x in self.base_point],
                "tangent_basis": [[format_fraction(x) for x in t] for t in self.tangent_basis],
                "normal_coords": [c + 1 for c in self.normal_coords],
                "tangent_coords": [c + 1 for c in self.tangent_coords]}


@dataclass(frozen=True)
class GraphJet:
    """Truncated graph ``y_mu = f_mu(u)`` of a patch in an adapted chart.

    ``funcs[mu]`` is a polynomial in ``n`` variables holding only terms of
    degree 2..order.  ``chart`` is ``None`` for jets entered directly.
    """

    n: int
    a: int
    order: int
    funcs: tuple[MultiPoly, ...]
    chart: Chart | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "funcs", tuple(self.funcs))
        if len(self.funcs) != self.a:
            raise DimensionMismatch(f"expected {self.a} graph functions, got {len(self.funcs)}")
        for f in self.funcs:
            if f.num_vars != self.n:
                raise DimensionMismatch("graph function has wrong number of variables")
            for e in f.terms:
                if not 2 <= sum(e) <= self.order:
                    raise ValueError(f"graph term of degree {sum(e)} outside 2..{self.order}")

    @classmethod
    def from_polys(cls, funcs: Sequence[MultiPoly], order: int, chart: Chart | None = None) -> "GraphJet":
        """Truncate arbitrary polynomials (no constant/linear terms allowed) to a jet."""
        funcs = list(funcs)
        n = funcs[0].num_vars
        for f in funcs:
            if f.min_degree in (0, 1):
                raise ValueError("graph functions must vanish to order 2 at the origin")
        return cls(n, len(funcs), order, tuple(f.truncate(order) for f in funcs), chart)

    @property
    def coeffs(self) -> list[dict]:
        return [f.terms for f in self.funcs]

    def to_json(self) -> dict:
        out = {"n": self.n, "a": self.a, "order": self.order,
               "funcs": [f.to_json() for f in self.funcs]}
        if self.chart is not None:
            out["chart"] = self.chart.to_json()
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "GraphJet":
        n = int(data["n"])
        funcs = tuple(MultiPoly.from_json(f, n) for f in data["funcs"])
        return cls(n, int(data["a"]), int(data["order"]), funcs)


@dataclass(frozen=True)
class AdaptedSplit:
    """A jet rewritten in tangent coordinates adapted to a k-plane.

    New coordinate order is ``(xi, psi, rho)``: the first ``k`` coordinates
    span the tangent space of the plane, ``psi`` is the part of it inside
    the singular locus of the second fundamental form, ``xi`` a complement
    of ``psi`` in the plane, and ``rho`` a complement of the plane.
    ``basis`` has the new basis vectors (in the old tangent coordinates) as
    columns.
    """

    jet: GraphJet
    k: int
    xi: tuple[int, ...]
    psi: tuple[int, ...]
    rho: tuple[int, ...]
    basis: ExactMatrix

    @property
    def w_dim(self) -> int:
        return len(self.xi)

    @property
    def labels(self) -> dict[str, tuple[int, ...]]:
        return {"xi": self.xi, "psi": self.psi, "rho": self.rho}


def jacobian(v: ImplicitVariety, point: Sequence) -> ExactMatrix:
    point = vector(point)
    return ExactMatrix.from_rows([[g.diff(i)(point) for i in range(v.ambient_dim)]
                                  for g in v.generators], v.ambient_dim)


def validate_smooth_point(v: ImplicitVariety, point: Sequence) -> NormalFrame:
    point = vector(point)
    if len(point) != v.ambient_dim:
        raise DimensionMismatch(f"point has {len(point)} coordinates, ambient dimension is {v.ambient_dim}")
    for g in v.generators:
        if g(point) != 0:
            raise NotOnVariety(f"generator {g} does not vanish at the point")
    jac = jacobian(v, point)
    rank = exact_rank(jac)
    if rank != v.codim:
        raise SingularOrExcessCodim(
            f"Jacobian rank {rank} at the point, expected codimension {v.codim}")
    columns = jac.columns()
    normal: list[int] = []
    for c in reversed(range(v.ambient_dim)):
        if span_dim([columns[i] for i in normal + [c]], jac.rows) > len(normal):
            normal.append(c)
        if len(normal) == rank:
            break
    normal.sort()
    rows: list[int] = []
    for r in range(jac.rows):
        cand = rows + [r]
        if span_dim([jac.entries[i] for i in cand], jac.cols) == len(cand):
            rows = cand
        if len(rows) == rank:
            break
    tangent = tuple(i for i in range(v.ambient_dim) if i not in normal)
    return NormalFrame(tuple(normal), tangent, jac, tuple(rows))


def implicit_to_graph(v: ImplicitVariety, point: Sequence, order: int) -> GraphJet:
    """Solve the generators for the normal coordinates as power series, through ``order``."""
    if order < 1:
        raise ValueError("jet order must be at least 1")
    point = vector(point)
    frame = validate_smooth_point(v, point)
    n, a = v.expected_dim, v.codim
    jac = frame.jacobian
    block = ExactMatrix.from_rows([[jac[r, c] for c in frame.normal_coords] for r in frame.solve_rows], a)
    block_inv = inverse(block)

    tangent_basis = []
    for t in frame.tangent_coords:
        rhs = [jac[r, t] for r in frame.solve_rows]
        corr = block_inv @ rhs
        vec = [Fraction(0)] * v.ambient_dim
        vec[t] = Fraction(1)
        for c, x in zip(frame.normal_coords, corr):
            vec[c] = -x
        tangent_basis.append(tuple(vec))
    chart = Chart(point, tuple(tangent_basis), frame.normal_coords, frame.tangent_coords)

    local = [mpoly_compose_affine(g, chart.affine_matrix(), point) for g in v.generators]
    normal_jac = ExactMatrix.from_rows([[jac[r, c] for c in frame.normal_coords]
                                        for r in range(jac.rows)], a)
    u = variables(n)
    series = [MultiPoly.zero(n) for _ in range(a)]
    for d in range(2, order + 1):
        images = u + series
        residual = [homogeneous_part(substitute(h, images, d), d) for h in local]
        sel = [residual[r] for r in frame.solve_rows]
        step = []
        for row in block_inv.entries:
            acc = MultiPoly.zero(n)
            for coef, r in zip(row, sel):
                if coef:
                    acc = acc - r.scale(coef)
            step.append(acc)
        for r in range(len(local)):
            if r in frame.solve_rows:
                continue
            check = residual[r]
            for coef, s in zip(normal_jac.entries[r], step):
                if coef:
                    check = check + s.scale(coef)
            if not check.is_zero():
                raise SingularOrExcessCodim(
                    f"generator {r + 1} is inconsistent with the others at order {d}; "
                    "the generators cut out something of dimension below expected_dim")
        series = [s + t for s, t in zip(series, step)]
    return GraphJet(n, a, order, tuple(series), chart)


def back_substitution_residual(v: ImplicitVariety, jet: GraphJet) -> list[MultiPoly]:
    """Generators pulled back along the truncated graph, truncated at the jet order."""
    chart = jet.chart
    if chart is None:
        raise ValueError("jet has no chart")
    local = [mpoly_compose_affine(g, chart.affine_matrix(), chart.base_point) for g in v.generators]
    images = variables(jet.n) + list(jet.funcs)
    return [substitute(h, images, jet.order) for h in local]


def _as_chart_space(jet: GraphJet, space) -> LinearSpace:
    if isinstance(space, LinearSpace):
        if space.ambient_dim != jet.n:
            if jet.chart is not None and space.ambient_dim == jet.chart.ambient_dim:
                return jet.chart.space_to_chart(space)
            raise DimensionMismatch("linear space dimension does not match the jet's tangent space")
        if any(space.base_point):
            raise NotOsculatingOrder1("linear space does not pass through the chart origin")
        return space
    return LinearSpace.through_origin(space, jet.n)


def chart_space(jet: GraphJet, space) -> LinearSpace:
    """Normalize ``space`` (ambient LinearSpace, chart LinearSpace or direction list) to chart coordinates."""
    return _as_chart_space(jet, space)


def quadric_matrices(jet: GraphJet) -> list[ExactMatrix]:
    return [f.quadric_matrix() for f in jet.funcs]


def adapt_to_linear_space(jet: GraphJet, space) -> AdaptedSplit:
    space = _as_chart_space(jet, space)
    n = jet.n
    tl = span_basis(space.directions, n)
    k = len(tl)
    quads = quadric_matrices(jet)
    singloc = exact_kernel(stack(quads, n)) if quads else standard_basis(n)
    psi = intersect(tl, singloc, n)
    xi = extend_to_basis(psi, tl, n)
    rho = extend_to_basis(tl, standard_basis(n), n)
    cols = list(xi) + list(psi) + list(rho)
    basis = ExactMatrix.from_columns(cols, n)
    funcs = tuple(mpoly_compose_affine(f, basis) for f in jet.funcs)
    new_jet = GraphJet(n, jet.a, jet.order, funcs)
    nx, np_ = len(xi), len(psi)
    return AdaptedSplit(new_jet, k, tuple(range(nx)), tuple(range(nx, nx + np_)),
                        tuple(range(k, n)), basis)


def project_to_hypersurface(jet: GraphJet, mu: int) -> GraphJet:
    """Keep only the ``mu``-th (1-based) graph function."""
    if not 1 <= mu <= jet.a:
        raise IndexError(f"normal index {mu} outside 1..{jet.a}")
    return GraphJet(jet.n, 1, jet.order, (jet.funcs[mu - 1],))


def contains_linear_space(v: ImplicitVariety, space: LinearSpace) -> bool:
    """Exact test: every generator restricts to the zero polynomial on the space."""
    if space.ambient_dim != v.ambient_dim:
        raise DimensionMismatch("linear space lives in a different ambient space")
    a = space.matrix if space.dim else ExactMatrix.zeros(space.ambient_dim, 0)
    return all(mpoly_compose_affine(g, a, space.base_point).is_zero() for g in v.generators)


def graph_variety(funcs: Sequence[MultiPoly], point: Sequence | None = None) -> ImplicitVariety:
    """The variety ``x_{n+mu} = p_{n+mu} + f_mu(x_1 - p_1, ..., x_n - p_n)``.

    ``funcs`` are polynomials in n variables; with ``point`` of length n + a
    the graph is translated so that it passes through that point.
    """
    n = funcs[0].num_vars
    a = len(funcs)
    dim = n + a
    point = vector(point) if point is not None else (Fraction(0),) * dim
    shift = ExactMatrix.from_rows([[Fraction(int(i == j)) for j in range(dim)] for i in range(n)], dim)
    offset = tuple(-x for x in point[:n])
    gens = []
    for mu, f in enumerate(funcs):
        moved = mpoly_compose_affine(f, shift, offset)
        g = MultiPoly.var(dim, n + mu) - point[n + mu] - moved
        gens.append(g)
    return ImplicitVariety(dim, n, tuple(gens))
