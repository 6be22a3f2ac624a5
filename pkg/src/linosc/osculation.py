"""Osculation orders, generic thresholds and the rank conditions behind them.

All functions take linear spaces either in ambient coordinates (when the jet
carries a chart) or directly in the jet's tangent coordinates; see
:func:`linosc.variety.chart_space`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import NotOsculatingOrder2, PairingDegenerate, PreconditionFailed
from .linalg import (ExactMatrix, Vector, exact_rank, format_fraction, intersect, solve,
                     span_basis, stack)
from .polynomial import (MultiIndex, MultiPoly, homogeneous_part, monomials,
                         mpoly_compose_affine, vars_of_index)
from .quadrics import (base_locus_contains, polarize, second_fundamental_system,
                       singular_locus)
from .variety import (AdaptedSplit, GraphJet, ImplicitVariety, LinearSpace,
                      adapt_to_linear_space, chart_space, contains_linear_space,
                      implicit_to_graph)

AT_LEAST_MAX = "at_least_max"

CONTAINED = "contained"
NOT_CONTAINED = "not_contained"
UNDETERMINED = "undetermined_to_jet_order"


@dataclass(frozen=True)
class Obstruction:
    degree: int
    normal_index: int
    multi_index: MultiIndex
    coeff: Fraction

    def to_json(self) -> dict:
        return {"degree": self.degree, "normal_index": self.normal_index,
                "multi_index": list(self.multi_index), "coeff": format_fraction(self.coeff)}


@dataclass(frozen=True)
class OsculationReport:
    order_found: int | str
    first_obstruction: Obstruction | None
    max_order_checked: int

    @property
    def at_least(self) -> int:
        """Lower bound on the order: order_found, or max_order_checked when unbounded."""
        return self.max_order_checked if self.order_found == AT_LEAST_MAX else self.order_found

    def to_json(self) -> dict:
        return {"order_found": self.order_found,
                "first_obstruction": self.first_obstruction.to_json() if self.first_obstruction else None,
                "max_order_checked": self.max_order_checked}


def restrict_to_space(jet: GraphJet, space) -> list[MultiPoly]:
    """Graph functions pulled back to the parameters of a plane through the origin."""
    space = chart_space(jet, space)
    if space.dim == 0:
        return [MultiPoly.zero(0) for _ in jet.funcs]
    return [mpoly_compose_affine(f, space.matrix) for f in jet.funcs]


def osculation_order(jet: GraphJet, space, max_order: int | None = None) -> OsculationReport:
    if max_order is None:
        max_order = jet.order
    if max_order > jet.order:
        raise ValueError(f"max_order {max_order} exceeds jet order {jet.order}")
    restricted = restrict_to_space(jet, space)
    for d in range(2, max_order + 1):
        for mu, r in enumerate(restricted):
            part = homogeneous_part(r, d)
            if part:
                exps, c = part.items()[0]
                return OsculationReport(d - 1, Obstruction(d, mu + 1, exps, c), max_order)
    return OsculationReport(AT_LEAST_MAX, None, max_order)


# -- thresholds --------------------------------------------------------------

def threshold_inequality(n: int, k: int, a: int, m: int, branch: int) -> bool:
    """The strict inequality of either branch of the generic threshold."""
    if branch == 1:
        return a * (comb(k + m, m) - (k + 1)) > k * (n - k)
    if branch == 2:
        s = 2 * k - n
        return a * (comb(s + m, m) - (s + 1)) > s * (n - k)
    raise ValueError("branch must be 1 or 2")


def branch_threshold(n: int, k: int, a: int, branch: int) -> int | None:
    """Smallest m >= 2 satisfying one branch's inequality; None if no m does.

    Branch 2 with 2k = n reads ``0 > 0`` for every m and has no solution.
    """
    _check_nka(n, k, a)
    if branch == 2 and 2 * k - n <= 0:
        return None
    # Left side grows at least linearly in m once the binomial exceeds its offset.
    limit = n * n + 4
    for m in range(2, limit + 1):
        if threshold_inequality(n, k, a, m, branch):
            return m
    return None


def generic_threshold(n: int, k: int, a: int) -> int:
    """Smallest m >= 2 for which the generic-containment inequality holds.

    Branch 1 applies when 2k <= n and branch 2 when 2k >= n; at 2k = n the
    result is the smaller of the applicable branch values.
    """
    _check_nka(n, k, a)
    found = []
    if 2 * k <= n:
        found.append(branch_threshold(n, k, a, 1))
    if 2 * k >= n:
        found.append(branch_threshold(n, k, a, 2))
    found = [m for m in found if m is not None]
    if not found:
        raise PreconditionFailed(f"no threshold for n={n}, k={k}, a={a}")
    return min(found)


def _check_nka(n: int, k: int, a: int) -> None:
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    if a < 1:
        raise ValueError("codimension a must be positive")


def w_dim_formula(n: int, k: int) -> int:
    """The quotient dimension used in the threshold inequalities (k, or 2k-n when 2k >= n)."""
    return k if 2 * k <= n else 2 * k - n


# -- R maps and genericity ---------------------------------------------------

def _xi_osculation(split: AdaptedSplit, upto: int) -> int | str:
    """Osculation order of the xi-block alone, checked through degree ``upto``."""
    xi = set(split.xi)
    for d in range(2, upto + 1):
        for f in split.jet.funcs:
            for e in f.terms:
                if sum(e) == d and all(i in xi for i in vars_of_index(e)):
                    return d - 1
    return AT_LEAST_MAX


def _require_xi_osculation(split: AdaptedSplit, order: int) -> None:
    if order > split.jet.order:
        raise PreconditionFailed(f"order {order} exceeds jet order {split.jet.order}")
    found = _xi_osculation(split, order)
    if found != AT_LEAST_MAX:
        raise PreconditionFailed(f"the plane osculates only to order {found} along the xi-block")


def r_map_rows(split: AdaptedSplit, j: int) -> list[tuple[int, MultiIndex]]:
    """Row labels (normal index, multi-index over the xi-block) of the order-j map."""
    return [(mu + 1, alpha) for mu in range(split.jet.a) for alpha in monomials(len(split.xi), j)]


def r_map_columns(split: AdaptedSplit) -> list[tuple[int, int]]:
    return [(x, r) for x in split.xi for r in split.rho]


def build_R_map(split: AdaptedSplit, j: int) -> ExactMatrix:
    """Order-j linear map from S^j W (x) N to W (x) M as a matrix.

    Entry ((mu, alpha), (xi, rho)) is the multiplicity of xi in alpha times
    the coefficient of x^(alpha - xi) * x_rho in the mu-th graph function.
    """
    if j < 2:
        raise PreconditionFailed("maps are defined for j >= 2")
    _require_xi_osculation(split, j)
    n = split.jet.n
    xi = split.xi
    cols = r_map_columns(split)
    rows = []
    for mu, alpha in r_map_rows(split, j):
        f = split.jet.funcs[mu - 1]
        row = []
        for x_pos, r in ((xi.index(x), r) for x, r in cols):
            mult = alpha[x_pos]
            if not mult:
                row.append(Fraction(0))
                continue
            lower = list(alpha)
            lower[x_pos] -= 1
            full = [0] * n
            for pos, power in zip(xi, lower):
                full[pos] += power
            full[r] += 1
            row.append(mult * f.coeff(full))
        rows.append(row)
    return ExactMatrix.from_rows(rows, len(cols)) if rows else ExactMatrix.zeros(0, len(cols))


@dataclass(frozen=True)
class GenericityReport:
    orders: tuple[int, ...]
    ranks: tuple[int, ...]
    new_ranks: tuple[int, ...]
    cumulative_ranks: tuple[int, ...]
    target_dim: int
    w_dim: int
    m_dim: int
    w_dim_formula: int
    full: bool
    threshold_m: int | None

    @property
    def cumulative_rank(self) -> int:
        return self.cumulative_ranks[-1] if self.cumulative_ranks else 0

    @property
    def vacuous(self) -> bool:
        """W vanishes once the singular directions are removed; nothing to test."""
        return self.target_dim == 0

    @property
    def note(self) -> str:
        if self.full:
            return "maps have maximal image: containment expected; confirm with oracle"
        if self.vacuous:
            return "every tangent direction of the plane is singular for II: no rank condition to test"
        return "maps do not reach maximal image: genericity condition fails"

    def to_json(self) -> dict:
        return {"orders": list(self.orders), "ranks": list(self.ranks),
                "new_ranks": list(self.new_ranks),
                "cumulative_ranks": list(self.cumulative_ranks),
                "cumulative_rank": self.cumulative_rank, "target_dim": self.target_dim,
                "w_dim": self.w_dim, "m_dim": self.m_dim, "w_dim_formula": self.w_dim_formula,
                "full": self.full, "vacuous": self.vacuous, "threshold_m": self.threshold_m,
                "note": self.note}


def genericity_check(split: AdaptedSplit, m: int) -> GenericityReport:
    if m < 2:
        raise PreconditionFailed("genericity is checked from order 2 upwards")
    _require_xi_osculation(split, m)
    n, k, a = split.jet.n, split.k, split.jet.a
    ncols = split.w_dim * len(split.rho)
    orders, ranks, new, cumulative = [], [], [], []
    blocks: list[ExactMatrix] = []
    prev = 0
    for j in range(2, m + 1):
        r = build_R_map(split, j)
        blocks.append(r)
        total = exact_rank(stack(blocks, ncols))
        orders.append(j)
        ranks.append(exact_rank(r))
        new.append(total - prev)
        cumulative.append(total)
        prev = total
    threshold = generic_threshold(n, k, a) if 1 <= k <= n - 1 else None
    return GenericityReport(tuple(orders), tuple(ranks), tuple(new), tuple(cumulative), ncols,
                            split.w_dim, len(split.rho), w_dim_formula(n, k) if 1 <= k <= n - 1 else 0,
                            ncols > 0 and prev == ncols, threshold)


# -- Gauss fibre inside the plane -------------------------------------------

@dataclass(frozen=True)
class GaussFiberReport:
    basis: tuple[Vector, ...]
    k: int
    n: int
    lower_bound: int
    ambient_space: LinearSpace | None
    contained: bool | None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def bound_holds(self) -> bool:
        return self.dim >= self.lower_bound

    def to_json(self) -> dict:
        return {"dim": self.dim, "k": self.k, "n": self.n, "lower_bound": self.lower_bound,
                "bound_holds": self.bound_holds,
                "basis": [[format_fraction(x) for x in v] for v in self.basis],
                "ambient_space": self.ambient_space.to_json() if self.ambient_space else None,
                "contained": self.contained}


def gauss_fiber_in_L(jet: GraphJet, space, variety: ImplicitVariety | None = None) -> GaussFiberReport:
    """Singular locus of the second fundamental form inside the plane's tangent space."""
    chart_l = chart_space(jet, space)
    n = jet.n
    tl = span_basis(chart_l.directions, n)
    system = second_fundamental_system(jet)
    if not base_locus_contains(system, tl):
        raise NotOsculatingOrder2("the second fundamental form does not vanish on the plane")
    fiber = intersect(singular_locus(system), tl, n) if tl else []
    ambient = None
    contained = None
    if variety is not None:
        if jet.chart is None:
            raise PreconditionFailed("jet has no chart; cannot map the fibre back to ambient space")
        ambient = jet.chart.space_to_ambient(fiber)
        contained = contains_linear_space(variety, ambient)
    return GaussFiberReport(tuple(fiber), len(tl), n, max(0, 2 * len(tl) - n), ambient, contained)


# -- the map S^3 W -> Lambda^2 W ---------------------------------------------

def wedge_columns(w: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(w) for q in range(p + 1, w)]


def tilde_R_matrix(system: Sequence[Sequence[Sequence]]) -> ExactMatrix:
    """Matrix of S^3 W -> Lambda^2 W built from quadrics R^eta on W (eta = 0..w-1).

    v_a v_b v_c maps to the sum over the three slots, with the remaining two
    indices (i, j) and the chosen one k, of R^eta_{ij} v^eta ^ v^k.
    """
    system = [ExactMatrix.from_rows(q, len(q)) if not isinstance(q, ExactMatrix) else q for q in system]
    w = len(system)
    for q in system:
        if q.rows != w:
            raise ValueError("need one w x w quadric per basis vector of W")
    cols = wedge_columns(w)
    col_pos = {c: i for i, c in enumerate(cols)}
    rows = []
    for beta in monomials(w, 3):
        idx = vars_of_index(beta)
        row = [Fraction(0)] * len(cols)
        for slot in range(3):
            kk = idx[slot]
            i, j = (idx[s] for s in range(3) if s != slot)
            for eta, q in enumerate(system):
                c = q[i, j]
                if not c or eta == kk:
                    continue
                if eta < kk:
                    row[col_pos[(eta, kk)]] += c
                else:
                    row[col_pos[(kk, eta)]] -= c
        rows.append(row)
    return ExactMatrix.from_rows(rows, len(cols)) if rows else ExactMatrix.zeros(0, len(cols))


@dataclass(frozen=True)
class TildeRReport:
    matrix: ExactMatrix
    w_dim: int
    rank: int
    target_dim: int
    w_dim_formula: int | None = None
    flags: tuple[str, ...] = field(default=())

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim

    @property
    def vacuous(self) -> bool:
        return self.target_dim == 0

    @property
    def zero_map(self) -> bool:
        return self.matrix.is_zero()

    @property
    def conclusion(self) -> str:
        if self.vacuous:
            return "target is zero: surjective vacuously; containment follows"
        if self.surjective:
            return "surjective: containment follows"
        if self.zero_map:
            return "zero map: containment still follows by the alternative branch"
        return "neither surjective nor zero: no conclusion"

    @property
    def containment_follows(self) -> bool:
        return self.surjective or self.zero_map

    def to_json(self) -> dict:
        return {"w_dim": self.w_dim, "rank": self.rank, "target_dim": self.target_dim,
                "surjective": self.surjective, "zero_map": self.zero_map,
                "vacuous": self.vacuous, "w_dim_formula": self.w_dim_formula,
                "flags": list(self.flags), "conclusion": self.conclusion,
                "matrix": self.matrix.to_json()}


def tilde_R_report(system: Sequence) -> TildeRReport:
    mat = tilde_R_matrix(system)
    w = len(system)
    return TildeRReport(mat, w, exact_rank(mat), comb(w, 2))


def paired_quadrics(split: AdaptedSplit, mu: int = 1) -> list[ExactMatrix]:
    """Cubic coefficients r_{xi xi' (paired eta)} as quadrics on W, after the delta normalization.

    The second fundamental form (normal index ``mu``) must pair the xi-block
    nondegenerately with the rho-block; the paired vectors u_eta in span(rho)
    satisfy II(v_xi, u_eta) = delta.
    """
    jet = split.jet
    n, w = jet.n, split.w_dim
    q = jet.funcs[mu - 1].quadric_matrix()
    rho = split.rho
    block = ExactMatrix.from_rows([[q[x, r] for r in rho] for x in split.xi], len(rho)) \
        if w else ExactMatrix.zeros(0, len(rho))
    if exact_rank(block) < w:
        raise PairingDegenerate("second fundamental form does not pair W nondegenerately with its complement")
    paired = []
    for eta in range(w):
        rhs = [Fraction(int(i == eta)) for i in range(w)]
        c = solve(block, rhs)
        u = [Fraction(0)] * n
        for r, cr in zip(rho, c):
            u[r] = cr
        paired.append(tuple(u))
    cubic = homogeneous_part(jet.funcs[mu - 1], 3)
    basis = [tuple(Fraction(int(i == x)) for i in range(n)) for x in split.xi]
    system = []
    for eta in range(w):
        system.append(ExactMatrix.from_rows(
            [[polarize(cubic, [basis[i], basis[j], paired[eta]]) for j in range(w)] for i in range(w)], w))
    return system


def thm5_tilde_R(split: AdaptedSplit, mu: int = 1) -> TildeRReport:
    """Assemble S^3 W -> Lambda^2 W from an adapted jet and report surjectivity."""
    system = paired_quadrics(split, mu)
    n, k = split.jet.n, split.k
    formula = min(k, 2 * k - n)
    flags = []
    if formula <= 0 < split.w_dim:
        flags.append(f"min(k, 2k-n) = {formula}: quotient dimension {split.w_dim} used instead")
    base = tilde_R_report(system)
    return TildeRReport(base.matrix, base.w_dim, base.rank, base.target_dim, formula, tuple(flags))


# -- top-level decision -------------------------------------------------------

@dataclass(frozen=True)
class Decision:
    verdict: str
    osculation: OsculationReport
    n: int
    k: int
    a: int
    threshold_m: int | None
    genericity: GenericityReport | None
    oracle: bool | None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "n": self.n, "k": self.k, "a": self.a,
                "osculation": self.osculation.to_json(), "threshold_m": self.threshold_m,
                "genericity": self.genericity.to_json() if self.genericity else None,
                "oracle": self.oracle, "notes": list(self.notes)}


def decide(space, *, variety: ImplicitVariety | None = None, jet: GraphJet | None = None,
           max_order: int | None = None) -> Decision:
    """Decide containment of a linear space.

    With a variety the exact substitution oracle is authoritative.  With a
    jet alone, a nonzero restricted coefficient proves non-containment and
    otherwise the answer is undetermined to the jet order.
    """
    if jet is None:
        if variety is None:
            raise ValueError("need a variety or a jet")
        if not isinstance(space, LinearSpace):
            raise ValueError("a LinearSpace in ambient coordinates is required with a variety")
        jet = implicit_to_graph(variety, space.base_point, max_order or 6)
    if max_order is None:
        max_order = jet.order
    chart_l = chart_space(jet, space)
    n, k, a = jet.n, chart_l.dim, jet.a
    osc = osculation_order(jet, chart_l, max_order)
    threshold = generic_threshold(n, k, a) if 1 <= k <= n - 1 else None
    notes = []
    genericity = None
    if osc.at_least >= 2:
        m = osc.at_least if threshold is None else min(osc.at_least, threshold)
        try:
            genericity = genericity_check(adapt_to_linear_space(jet, chart_l), m)
        except PreconditionFailed as exc:
            notes.append(f"genericity not evaluated: {exc}")
    oracle = None
    if variety is not None:
        ambient = space if space.ambient_dim == variety.ambient_dim else jet.chart.space_to_ambient(chart_l.directions)
        oracle = contains_linear_space(variety, ambient)
        verdict = CONTAINED if oracle else NOT_CONTAINED
        if not oracle and osc.order_found == AT_LEAST_MAX:
            notes.append(f"jets agree through order {max_order}; the oracle finds a higher-order obstruction")
    elif osc.order_found == AT_LEAST_MAX:
        verdict = UNDETERMINED
        notes.append(f"contained to jet order {max_order}")
    else:
        verdict = NOT_CONTAINED
    return Decision(verdict, osc, n, k, a, threshold, genericity, oracle, tuple(notes))
