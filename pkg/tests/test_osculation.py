from math import comb

import pytest
import sympy

from linosc.corpus import corpus_variety, random_symmetric, random_variety, twist_variety
from linosc.errors import NotOsculatingOrder2, PairingDegenerate, PreconditionFailed
from linosc.linalg import ExactMatrix, intersect
from linosc.osculation import (AT_LEAST_MAX, CONTAINED, NOT_CONTAINED, UNDETERMINED, branch_threshold,
                               build_R_map, decide, gauss_fiber_in_L, generic_threshold, genericity_check,
                               osculation_order, paired_quadrics, thm5_tilde_R, tilde_R_report)
from linosc.parser import parse_poly
from linosc.polynomial import variables
from linosc.quadrics import second_fundamental_system, singular_locus
from linosc.variety import (GraphJet, ImplicitVariety, LinearSpace, adapt_to_linear_space, chart_space,
                            contains_linear_space, implicit_to_graph)


def jet(exprs, n, order):
    return GraphJet.from_polys([parse_poly(e, n) for e in exprs], order)


def brute_threshold(n, k, a, branch):
    """Smallest m >= 2 with the strict inequality, by direct search."""
    s = k if branch == 1 else 2 * k - n
    for m in range(2, 200):
        if a * (comb(s + m, m) - (s + 1)) > s * (n - k):
            return m
    return None


def restrict_with_sympy(poly, point, direction):
    """Univariate sympy polynomial g(p + t d), built by Poly arithmetic."""
    t = sympy.symbols("t")
    lines = [sympy.Poly(sympy.Rational(p) + sympy.Rational(d) * t, t) for p, d in zip(point, direction)]
    total = sympy.Poly(0, t)
    for exps, c in poly.terms.items():
        term = sympy.Poly(sympy.Rational(c.numerator, c.denominator), t)
        for lin, e in zip(lines, exps):
            term = term * lin ** e
        total = total + term
    return total


# -- osculation order ---------------------------------------------------------------

def test_osculation_examples():
    rep = osculation_order(jet(["x1^2 + x2^2"], 2, 4), [(1, 0)])
    assert rep.order_found == 1 and rep.first_obstruction.degree == 2
    rep = osculation_order(jet(["x1^3"], 2, 4), [(1, 0)])
    assert rep.order_found == 2 and rep.first_obstruction.degree == 3
    for m in range(2, 8):
        assert osculation_order(jet(["x1*x2"], 2, m), [(1, 0)]).order_found == AT_LEAST_MAX


def test_osculation_order_is_intersection_multiplicity_minus_one(rng):
    # Oracle: order of vanishing in t of the implicit generator restricted to the line.
    checked = 0
    for _ in range(100):
        order = int(rng.integers(1, 6))
        sv = random_variety(int(rng.integers(2**31)), 2, 1, 6, "vanish_on_L", order=order, pool=4)
        sv = twist_variety(rng, sv)
        jt = implicit_to_graph(sv.variety, sv.point, 6)
        rep = osculation_order(jt, sv.space, 6)
        restricted = restrict_with_sympy(sv.variety.generators[0], sv.point, sv.space.directions[0])
        if restricted.is_zero:
            assert rep.order_found == AT_LEAST_MAX
            continue
        multiplicity = min(m[0] for m in restricted.monoms())
        expected = multiplicity - 1 if multiplicity - 1 <= 6 else AT_LEAST_MAX
        assert rep.order_found == expected
        checked += 1
    assert checked > 50


def test_contained_spaces_osculate_to_every_order(rng):
    for _ in range(100):
        n = int(rng.integers(2, 4))
        k = int(rng.integers(1, n))
        sv = random_variety(int(rng.integers(2**31)), n, 1, 4, "ruled_L", k=k, pool=4)
        assert contains_linear_space(sv.variety, sv.space)
        jt = implicit_to_graph(sv.variety, sv.point, 5)
        for m in range(2, 6):
            assert osculation_order(jt, sv.space, m).order_found == AT_LEAST_MAX


# -- thresholds ----------------------------------------------------------------------

def test_threshold_examples():
    assert [generic_threshold(n, 1, 1) for n in range(2, 9)] == [n + 1 for n in range(2, 9)]
    assert generic_threshold(4, 2, 1) == 3
    assert all(generic_threshold(n, n - 1, 2) == 2 for n in range(3, 9))


def test_threshold_branches_match_direct_search():
    for n in range(2, 10):
        for k in range(1, n):
            for a in range(1, 4):
                assert branch_threshold(n, k, a, 1) == brute_threshold(n, k, a, 1)
                if 2 * k > n:
                    assert branch_threshold(n, k, a, 2) == brute_threshold(n, k, a, 2)
                else:
                    assert branch_threshold(n, k, a, 2) is None


def test_threshold_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        generic_threshold(3, 3, 1)
    with pytest.raises(ValueError):
        generic_threshold(3, 1, 0)


# -- R maps and genericity -------------------------------------------------------------

def test_R_map_shape_and_vanishing_orders():
    # Nothing beyond the quadric: R_3 has the right shape and is zero.
    split = adapt_to_linear_space(jet(["x1*x2"], 2, 3), [(1, 0)])
    assert build_R_map(split, 2) == ExactMatrix.from_rows([[2]])
    r3 = build_R_map(split, 3)
    assert (r3.rows, r3.cols) == (1, 1) and r3.is_zero()


def test_R_map_entry_follows_multiplicity_rule():
    # z = x1*x2 + 5*x1^2*x2: R_2 entry 2 * coeff(x1*x2), R_3 entry 3 * coeff(x1^2*x2).
    split = adapt_to_linear_space(jet(["x1*x2 + 5*x1^2*x2"], 2, 3), [(1, 0)])
    assert build_R_map(split, 2) == ExactMatrix.from_rows([[2]])
    assert build_R_map(split, 3) == ExactMatrix.from_rows([[15]])


def test_R_map_reads_only_mixed_coefficients():
    split = adapt_to_linear_space(jet(["x1*x3 + x2^2 + x1^2*x2"], 3, 3), [(1, 0, 0)])
    assert (split.xi, split.rho) == ((0,), (1, 2))
    assert build_R_map(split, 2) == ExactMatrix.from_rows([[0, 2]])
    assert build_R_map(split, 3) == ExactMatrix.from_rows([[3, 0]])


def test_genericity_examples():
    rep = genericity_check(adapt_to_linear_space(jet(["x1*x2 + x2^3"], 2, 3), [(1, 0)]), 2)
    assert rep.full and rep.target_dim == 1 and rep.ranks == (1,)
    rep = genericity_check(adapt_to_linear_space(jet(["x1^3"], 2, 3), [(1, 0)]), 2)
    assert not rep.full and rep.vacuous and rep.cumulative_rank == 0


def test_genericity_at_order_two_is_rank_of_mixed_block(rng):
    # Oracle: sympy rank of the matrix of coefficients of x1*x_r, r > 1, one row per normal direction.
    for n in (2, 3, 4):
        x = variables(n)
        for _ in range(10):
            funcs = []
            for _mu in range(n):
                f = sum((int(rng.integers(-2, 3)) * x[0] * x[r] for r in range(1, n)), x[1] * x[1])
                funcs.append(f + int(rng.integers(-3, 4)) * x[n - 1] * x[n - 1])
            split = adapt_to_linear_space(GraphJet.from_polys(funcs, 2), [tuple(int(i == 0) for i in range(n))])
            if not split.xi:
                continue
            rep = genericity_check(split, 2)
            mixed = sympy.Matrix([[f.coeff(tuple(int(i in (0, r)) for i in range(n))) for r in range(1, n)]
                                  for f in funcs])
            assert rep.full == (mixed.rank() == len(split.rho))


def test_cumulative_rank_is_monotone(rng):
    for _ in range(30):
        sv = random_variety(int(rng.integers(2**31)), 3, 1, 5, "vanish_on_L", k=1, order=4, pool=3)
        jt = implicit_to_graph(sv.variety, sv.point, 4)
        rep = genericity_check(adapt_to_linear_space(jt, sv.space), 4)
        assert list(rep.cumulative_ranks) == sorted(rep.cumulative_ranks)
        assert rep.cumulative_rank <= rep.target_dim


def test_genericity_requires_osculation():
    with pytest.raises(PreconditionFailed):
        genericity_check(adapt_to_linear_space(jet(["x1^2"], 2, 3), [(1, 0)]), 2)


# -- Gauss fibre -----------------------------------------------------------------------

def test_gauss_fiber_examples():
    v = ImplicitVariety(4, 3, (parse_poly("x4 - x1*x3", 4),))
    plane = LinearSpace((0, 0, 0, 0), ((1, 0, 0, 0), (0, 1, 0, 0)))
    rep = gauss_fiber_in_L(implicit_to_graph(v, plane.base_point, 2), plane, v)
    assert rep.basis == ((0, 1, 0),) and rep.dim == 1 == rep.lower_bound and rep.contained
    cyl = ImplicitVariety(3, 2, (parse_poly("x3 - x1^2", 3),))
    axis = LinearSpace((0, 0, 0), ((0, 1, 0),))
    rep = gauss_fiber_in_L(implicit_to_graph(cyl, axis.base_point, 2), axis, cyl)
    assert rep.dim == 1 and rep.contained
    with pytest.raises(NotOsculatingOrder2):
        gauss_fiber_in_L(jet(["x1^2 + x2^2 + x3^2"], 3, 2), [(1, 0, 0), (0, 1, 0)])


def test_singular_directions_bound_on_random_jets(rng):
    for _ in range(100):
        n = int(rng.integers(2, 6))
        k = int(rng.integers((n + 1) // 2, n))
        sv = random_variety(int(rng.integers(2**31)), n, 1, 3, "base_locus_W", k=k, pool=4)
        jt = implicit_to_graph(sv.variety, sv.point, 2)
        tl = chart_space(jt, sv.space).directions
        fiber = intersect(singular_locus(second_fundamental_system(jt)), tl, n)
        assert len(fiber) >= 2 * k - n
        assert gauss_fiber_in_L(jt, sv.space).bound_holds


# -- the map S^3 W -> Lambda^2 W --------------------------------------------------------

def test_tilde_R_examples(rng):
    rep = tilde_R_report([ExactMatrix.from_rows([[1]])])
    assert rep.target_dim == 0 and rep.surjective and rep.vacuous
    hits = 0
    for _ in range(20):
        rep = tilde_R_report([random_symmetric(rng, 2, 5) for _ in range(2)])
        assert (rep.matrix.rows, rep.matrix.cols) == (4, 1)
        hits += rep.surjective
    assert hits == 20
    rep = tilde_R_report([ExactMatrix.zeros(2, 2)] * 2)
    assert rep.zero_map and not rep.surjective and rep.containment_follows
    assert "alternative" in rep.conclusion


def test_tilde_R_claim_on_small_systems(rng):
    for w in (2, 3, 4):
        for dim in (w, w - 1):
            for _ in range(10):
                while True:
                    gens = [random_symmetric(rng, w, 5) for _ in range(dim)]
                    mats = gens + [gens[0]] * (w - dim)
                    from linosc.quadrics import QuadricSystem
                    if QuadricSystem(w, tuple(mats)).span_dim == dim:
                        break
                assert tilde_R_report(mats).surjective


def test_tilde_R_from_adapted_jet():
    # n = 4, plane spanned by x1, x2 paired by II with x3, x4.
    jt = jet(["x1*x3 + x2*x4 + x1^2*x3 + 2*x1*x2*x4 - x2^2*x3"], 4, 3)
    split = adapt_to_linear_space(jt, [(1, 0, 0, 0), (0, 1, 0, 0)])
    rep = thm5_tilde_R(split)
    direct = tilde_R_report(paired_quadrics(split))
    assert rep.rank == direct.rank and rep.target_dim == 1
    assert rep.flags  # min(k, 2k - n) = 0 here, while W is 2-dimensional
    with pytest.raises(PairingDegenerate):
        # Codimension two: each normal direction alone pairs only one tangent direction.
        paired_quadrics(adapt_to_linear_space(jet(["x1*x3", "x2*x4"], 4, 3), [(1, 0, 0, 0), (0, 1, 0, 0)]))


# -- decide ------------------------------------------------------------------------------

def test_decide_examples():
    x1_axis = LinearSpace((0, 0, 0), ((1, 0, 0),))
    ruled = ImplicitVariety(3, 2, (parse_poly("x3 - x1*x2", 3),))
    assert decide(x1_axis, variety=ruled).verdict == CONTAINED
    cubic = ImplicitVariety(3, 2, (parse_poly("x3 - x1^3", 3),))
    dec = decide(x1_axis, variety=cubic)
    assert dec.verdict == NOT_CONTAINED and dec.osculation.order_found == 2 and dec.threshold_m == 3
    dec = decide([(1, 0)], jet=jet(["x1*x2"], 2, 5))
    assert dec.verdict == UNDETERMINED


def test_decide_oracle_is_authoritative_on_corpus():
    entry = corpus_variety("perturbed_ruled", d=5)
    dec = decide(entry.space("x1_axis"), variety=entry.variety, max_order=3)
    assert dec.osculation.order_found == AT_LEAST_MAX and dec.verdict == NOT_CONTAINED
    assert any("higher-order" in n for n in dec.notes)
