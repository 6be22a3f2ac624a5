"""Named classical varieties and seeded random families.

Every random draw goes through a :class:`numpy.random.Generator` built from
the caller's seed, so a (seed, parameters) pair always reproduces the same
variety, point and linear space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import ExactMatrix, exact_rank, format_fraction, inverse, vector
from .polynomial import MultiPoly, monomials, mpoly_compose_affine, variables
from .variety import ImplicitVariety, LinearSpace, graph_variety

PROFILES = ("free", "vanish_on_L", "base_locus_W", "ruled_L")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    variety: ImplicitVariety
    points: tuple[tuple[Fraction, ...], ...]
    spaces: tuple[tuple[str, LinearSpace], ...]
    notes: str = ""

    def space(self, label: str) -> LinearSpace:
        for name, s in self.spaces:
            if name == label:
                return s
        raise KeyError(label)

    def to_json(self) -> dict:
        return {"name": self.name, "variety": self.variety.to_json(),
                "points": [[format_fraction(x) for x in p] for p in self.points],
                "spaces": {label: s.to_json() for label, s in self.spaces},
                "notes": self.notes}


def _e(i: int, n: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def _line(point, direction) -> LinearSpace:
    return LinearSpace(vector(point), (vector(direction),))


def corpus_variety(name: str, **params) -> CorpusEntry:
    """Look up a named family.  Coordinates are x1..xN (index 0..N-1)."""
    try:
        builder = _CORPUS[name]
    except KeyError:
        raise KeyError(f"unknown corpus variety {name!r}; known: {', '.join(sorted(_CORPUS))}") from None
    return builder(**params)


def _segre_quadric() -> CorpusEntry:
    x = variables(4)
    v = ImplicitVariety(4, 3, (x[0] * x[3] - x[1] * x[2],))
    o = (0, 0, 0, 0)
    p = (1, 0, 0, 0)
    return CorpusEntry(
        "segre_quadric", v, (vector(o), vector(p)),
        (("ruling_e1_origin", _line(o, _e(0, 4))), ("ruling_e2_origin", _line(o, _e(1, 4))),
         ("ruling_e2", _line(p, _e(1, 4))), ("ruling_e3", _line(p, _e(2, 4))),
         ("tangent_e2_plus_e3", _line(p, (0, 1, 1, 0)))),
        "cone over P1 x P1; the origin is singular, (1,0,0,0) is smooth")


def _round_quadric() -> CorpusEntry:
    x = variables(3)
    v = ImplicitVariety(3, 2, (x[0] ** 2 + x[1] ** 2 + x[2] ** 2 - 1,))
    p = (0, 0, 1)
    return CorpusEntry("round_quadric", v, (vector(p),),
                       (("tangent_e1", _line(p, _e(0, 3))),),
                       "unit sphere; its rulings are not defined over Q")


def _cone() -> CorpusEntry:
    x = variables(3)
    v = ImplicitVariety(3, 2, (x[0] ** 2 + x[1] ** 2 - x[2] ** 2,))
    p = (1, 0, 1)
    return CorpusEntry("cone", v, (vector(p), vector((0, 0, 0))),
                       (("ruling", _line(p, (1, 0, 1))), ("ruling_origin", _line((0, 0, 0), (1, 0, 1))),
                        ("tangent_e2", _line(p, _e(1, 3)))),
                       "quadric cone; smooth away from the vertex")


def _graph_cubic() -> CorpusEntry:
    x = variables(3)
    v = ImplicitVariety(3, 2, (x[2] - x[0] ** 3,))
    o = (0, 0, 0)
    return CorpusEntry("graph_cubic", v, (vector(o),),
                       (("x1_axis", _line(o, _e(0, 3))), ("x2_axis", _line(o, _e(1, 3)))),
                       "z = x1^3; the x1-axis osculates to order exactly 2")


def _ruled_graph() -> CorpusEntry:
    x = variables(3)
    v = ImplicitVariety(3, 2, (x[2] - x[0] * x[1],))
    o = (0, 0, 0)
    return CorpusEntry("ruled_graph", v, (vector(o),),
                       (("x1_axis", _line(o, _e(0, 3))), ("x2_axis", _line(o, _e(1, 3)))),
                       "z = x1*x2, doubly ruled")


def _scroll_codim2() -> CorpusEntry:
    x = variables(5)
    v = ImplicitVariety(5, 3, (x[3] - x[0] * x[2], x[4] - x[1] * x[2]))
    o = (0,) * 5
    plane = LinearSpace(vector(o), (vector(_e(0, 5)), vector(_e(1, 5))))
    return CorpusEntry("scroll_codim2", v, (vector(o),), (("x3_zero", plane),),
                       "{x4 = x1*x3, x5 = x2*x3}; the plane {x3 = 0} is a fibre")


def _veronese() -> CorpusEntry:
    x = variables(5)
    v = ImplicitVariety(5, 2, (x[2] - x[0] ** 2, x[3] - x[0] * x[1], x[4] - x[1] ** 2))
    o = (0,) * 5
    return CorpusEntry("veronese", v, (vector(o),),
                       (("tangent_e1", _line(o, _e(0, 5))),),
                       "affine chart of the Veronese surface; contains no lines")


def _perturbed_ruled(d: int = 3) -> CorpusEntry:
    if d < 3:
        raise ValueError("perturbation degree must be at least 3")
    x = variables(3)
    v = ImplicitVariety(3, 2, (x[2] - x[0] * x[1] - x[0] ** d,))
    o = (0, 0, 0)
    return CorpusEntry("perturbed_ruled", v, (vector(o),),
                       (("x1_axis", _line(o, _e(0, 3))), ("x2_axis", _line(o, _e(1, 3)))),
                       f"z = x1*x2 + x1^{d}; the x1-axis osculates to order {d - 1} only")


def pencil_normal_form(case: int, n: int) -> list[MultiPoly]:
    """The two quadrics of a pencil case in n tangent variables (x_n cuts the hyperplane)."""
    x = variables(n)
    zero = MultiPoly.zero(n)
    forms = {1: (x[0] * x[n - 1], x[n - 1] ** 2),
             2: (x[0] * x[n - 1], zero),
             3: (x[0] * x[n - 1], x[1] * x[n - 1] if n > 2 else zero),
             4: (x[n - 1] ** 2, zero)}
    if case == 3 and n < 3:
        raise ValueError("case 3 needs n >= 3")
    return list(forms[case])


def _pencil(case: int = 1, n: int = 3) -> CorpusEntry:
    funcs = pencil_normal_form(case, n)
    v = graph_variety(funcs)
    o = (0,) * (n + 2)
    plane = LinearSpace(vector(o), tuple(vector(_e(i, n + 2)) for i in range(n - 1)))
    return CorpusEntry(f"pencil_case{case}", v, (vector(o),), (("hyperplane", plane),),
                       f"graph of the case-{case} normal-form pencil on {n} variables")


_CORPUS = {
    "segre_quadric": _segre_quadric,
    "round_quadric": _round_quadric,
    "cone": _cone,
    "graph_cubic": _graph_cubic,
    "ruled_graph": _ruled_graph,
    "scroll_codim2": _scroll_codim2,
    "veronese": _veronese,
    "perturbed_ruled": _perturbed_ruled,
    "pencil": _pencil,
}

CORPUS_NAMES = tuple(sorted(_CORPUS))


# -- random families ----------------------------------------------------------

def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def rand_int(rng: np.random.Generator, pool: int) -> int:
    return int(rng.integers(-pool, pool + 1))


def rand_nonzero(rng: np.random.Generator, pool: int) -> int:
    while True:
        c = rand_int(rng, pool)
        if c:
            return c


def random_poly(rng: np.random.Generator, num_vars: int, degrees: Sequence[int], pool: int = 9,
                keep=None) -> MultiPoly:
    """Random polynomial using every monomial of the given degrees accepted by ``keep``."""
    terms = {}
    for d in degrees:
        for m in monomials(num_vars, d):
            if keep is not None and not keep(m):
                continue
            c = rand_int(rng, pool)
            if c:
                terms[m] = c
    return MultiPoly(num_vars, terms)


def random_symmetric(rng: np.random.Generator, n: int, pool: int = 9) -> ExactMatrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rand_int(rng, pool)
    return ExactMatrix.from_rows(rows, n)


def random_invertible(rng: np.random.Generator, n: int, pool: int = 3) -> ExactMatrix:
    while True:
        m = ExactMatrix.from_rows([[rand_int(rng, pool) for _ in range(n)] for _ in range(n)], n)
        if exact_rank(m) == n:
            return m


def random_unimodular(rng: np.random.Generator, n: int, steps: int | None = None) -> ExactMatrix:
    """Integer matrix of determinant +-1 from random elementary operations."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 2 * n):
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False)) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rand_nonzero(rng, 2)
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    perm = [int(v) for v in rng.permutation(n)]
    return ExactMatrix.from_rows([rows[p] for p in perm], n)


@dataclass(frozen=True)
class SeededVariety:
    """A random variety with its designated smooth point and linear space."""

    variety: ImplicitVariety
    point: tuple[Fraction, ...]
    space: LinearSpace
    funcs: tuple[MultiPoly, ...]
    profile: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"variety": self.variety.to_json(),
                "point": [format_fraction(x) for x in self.point],
                "space": self.space.to_json(), "profile": self.profile, "params": dict(self.params)}


def random_variety(seed, n: int, a: int, degree: int, profile: str = "free", *, k: int = 1,
                   order: int | None = None, pool: int = 9, point_pool: int = 3) -> SeededVariety:
    """Graph variety ``x_{n+mu} = p_{n+mu} + f_mu(x - p)`` through a seeded rational point.

    The designated space is the k-plane through the point spanned by the
    first k tangent coordinates.  Profiles:

    * ``free`` - every monomial of degree 2..degree gets a random coefficient;
    * ``vanish_on_L`` - monomials in the first k variables of degree <= order are zeroed;
    * ``base_locus_W`` - the quadratic part vanishes on the plane;
    * ``ruled_L`` - each f_mu is affine-linear in the plane's coordinates,
      so every point of the patch carries a parallel k-plane inside the variety.
    """
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    rng = make_rng(seed)
    degrees = range(2, degree + 1)
    in_plane = lambda m: all(e == 0 for e in m[k:])
    funcs = []
    for _ in range(a):
        if profile == "free":
            f = random_poly(rng, n, degrees, pool)
        elif profile == "vanish_on_L":
            if order is None:
                raise ValueError("vanish_on_L needs an order")
            f = random_poly(rng, n, degrees, pool, keep=lambda m: not (in_plane(m) and sum(m) <= order))
        elif profile == "base_locus_W":
            f = random_poly(rng, n, degrees, pool, keep=lambda m: not (sum(m) == 2 and in_plane(m)))
        else:
            # Degree in the plane variables is at most 1.
            f = random_poly(rng, n, degrees, pool, keep=lambda m: sum(m[:k]) <= 1)
        funcs.append(f)
    point = tuple(Fraction(rand_int(rng, point_pool)) for _ in range(n + a))
    variety = graph_variety(funcs, point)
    dirs = tuple(vector(_e(i, n + a)) for i in range(k))
    params = {"seed": seed if isinstance(seed, int) else list(seed), "n": n, "a": a, "degree": degree,
              "k": k, "order": order, "pool": pool}
    return SeededVariety(variety, point, LinearSpace(point, dirs), tuple(funcs), profile, params)


def twist_variety(rng: np.random.Generator, sv: SeededVariety) -> SeededVariety:
    """Hide the graph structure: unimodular change of coordinates and generator mixing.

    The variety, point and space are transformed together, so smoothness and
    containment are preserved while the implicit solve becomes nontrivial.
    """
    v = sv.variety
    dim = v.ambient_dim
    u = random_unimodular(rng, dim)
    u_inv = inverse(u)
    # New coordinates x' with x = U x'.
    gens = [mpoly_compose_affine(g, u) for g in v.generators]
    point = u_inv @ sv.point
    dirs = tuple(u_inv @ d for d in sv.space.directions)
    mixed = []
    for i, g in enumerate(gens):
        j = int(rng.integers(dim))
        unit = MultiPoly.constant(dim, 1) + (MultiPoly.var(dim, j) - point[j]).scale(rand_int(rng, 2))
        h = g * unit
        for other in gens[:i]:
            h = h + other.scale(rand_int(rng, 2))
        mixed.append(h)
    twisted = ImplicitVariety(dim, v.expected_dim, tuple(mixed))
    return SeededVariety(twisted, point, LinearSpace(point, dirs), sv.funcs, sv.profile + "+twist",
                         dict(sv.params))


def quadric_with_base_plane(rng: np.random.Generator, n: int, k: int, pool: int = 5,
                            pairing_rank: int | None = None) -> tuple[ExactMatrix, list[tuple[Fraction, ...]]]:
    """Random quadric whose base locus contains a k-plane; returns (Q, basis of the plane).

    Built as [[0, B], [B^T, C]] on (plane, complement) and moved by a random
    invertible change of coordinates.
    """
    c_dim = n - k
    r = min(k, c_dim) if pairing_rank is None else pairing_rank
    left = [[rand_int(rng, pool) for _ in range(r)] for _ in range(k)]
    right = [[rand_int(rng, pool) for _ in range(c_dim)] for _ in range(r)]
    b = [[sum(left[i][t] * right[t][j] for t in range(r)) for j in range(c_dim)] for i in range(k)]
    c = random_symmetric(rng, c_dim, pool) if c_dim else None
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(k):
        for j in range(c_dim):
            rows[i][k + j] = rows[k + j][i] = Fraction(b[i][j])
    for i in range(c_dim):
        for j in range(c_dim):
            rows[k + i][k + j] = c[i, j]
    q = ExactMatrix.from_rows(rows, n)
    p = random_invertible(rng, n)
    moved = p.T @ q @ p
    p_inv = inverse(p)
    plane = [tuple(p_inv[i, j] for i in range(n)) for j in range(k)]
    return moved, plane


def system_with_base_plane(rng: np.random.Generator, n: int, k: int, a: int,
                           pool: int = 5) -> tuple[list[ExactMatrix], list[tuple[Fraction, ...]]]:
    """``a`` quadrics sharing a k-plane in their base locus (common coordinate change)."""
    c_dim = n - k
    p = random_invertible(rng, n)
    quads = []
    for _ in range(a):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(k):
            for j in range(c_dim):
                rows[i][k + j] = rows[k + j][i] = Fraction(rand_int(rng, pool))
        for i in range(c_dim):
            for j in range(i, c_dim):
                rows[k + i][k + j] = rows[k + j][k + i] = Fraction(rand_int(rng, pool))
        quads.append(p.T @ ExactMatrix.from_rows(rows, n) @ p)
    p_inv = inverse(p)
    plane = [tuple(p_inv[i, j] for i in range(n)) for j in range(k)]
    return quads, plane
