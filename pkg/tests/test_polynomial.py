from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import invariants
from conftest import from_sympy, rand_poly, sym_vars, to_sympy
from linosc.errors import DimensionMismatch, ParseError
from linosc.linalg import ExactMatrix
from linosc.parser import parse_poly
from linosc.polynomial import (MultiPoly, format_poly, grlex_key, homogeneous_part, monomials,
                               mpoly_compose_affine, mpoly_eval, substitute, variables)

x1, x2, x3 = variables(3)


def test_eval_examples():
    assert mpoly_eval(x1 * x2 - x3, [1, 2, 2]) == 0
    y1, y2 = variables(2)
    assert mpoly_eval(y1 ** 2 + y2 ** 2, [3, 4]) == 25
    assert mpoly_eval(variables(1)[0] ** 3, [Fraction(1, 2)]) == Fraction(1, 8)
    with pytest.raises(DimensionMismatch):
        mpoly_eval(x1, [1, 2])


def test_compose_examples():
    y1, y2 = variables(2)
    t = variables(1)[0]
    diag = ExactMatrix.from_rows([[1], [1]])
    assert mpoly_compose_affine(y1 * y2, ExactMatrix.identity(2)) == y1 * y2
    assert mpoly_compose_affine(y1 ** 2, diag) == t ** 2
    assert mpoly_compose_affine(y1 * y2, diag, [0, 1]) == t ** 2 + t


def test_homogeneous_part_examples():
    y1, y2 = variables(2)
    p = y1 ** 2 + y1 * y2 ** 3
    assert homogeneous_part(p, 2) == y1 ** 2
    assert homogeneous_part(p, 3).is_zero()
    assert homogeneous_part((y1 + y2) ** 2, 2) == y1 ** 2 + 2 * y1 * y2 + y2 ** 2


def test_canonical_form_drops_zeros():
    p = MultiPoly(2, {(1, 0): 1, (0, 1): 0})
    assert p.terms == {(1, 0): 1}
    assert (x1 - x1).is_zero() and (x1 - x1) == MultiPoly.zero(3)
    assert MultiPoly(2, {(1, 1): Fraction(2, 4)}).coeff((1, 1)) == Fraction(1, 2)


def test_grlex_order_is_strict_and_total():
    mons = [m for d in range(4) for m in monomials(3, d)]
    keys = [grlex_key(m) for m in mons]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_arithmetic_agrees_with_sympy(rng):
    for _ in range(60):
        n = int(rng.integers(1, 4))
        p, q = rand_poly(rng, n, 3), rand_poly(rng, n, 2)
        assert from_sympy(to_sympy(p) * to_sympy(q), n) == p * q
        assert from_sympy(to_sympy(p) - to_sympy(q), n) == p - q
        assert from_sympy(to_sympy(p) ** 2, n) == p ** 2


def test_truncated_substitution_agrees_with_sympy(rng):
    for _ in range(30):
        p = rand_poly(rng, 2, 3)
        images = [rand_poly(rng, 2, 2) for _ in range(2)]
        xs = sym_vars(2)
        full = to_sympy(p).subs({xs[0]: to_sympy(images[0]), xs[1]: to_sympy(images[1])}, simultaneous=True)
        assert substitute(p, images) == from_sympy(full, 2)
        assert substitute(p, images, 3) == from_sympy(full, 2).truncate(3)


def test_eval_multiplicative():
    assert invariants.eval_is_multiplicative() == []


def test_compose_matches_eval():
    assert invariants.compose_matches_eval() == []


def test_homogeneous_parts_reconstruct():
    assert invariants.homogeneous_parts_sum() == []


def test_directional_derivative_and_quadric_matrix():
    q = x1 ** 2 + 4 * x1 * x2 - x3 ** 2
    m = q.quadric_matrix()
    assert m == ExactMatrix.from_rows([[1, 2, 0], [2, 0, 0], [0, 0, -1]])
    assert MultiPoly.from_quadric_matrix(m) == q
    assert q.directional_derivative([0, 1, 0]) == 4 * x1


def test_json_round_trip(rng):
    for _ in range(20):
        p = rand_poly(rng, 3, 3)
        data = p.to_json()
        assert MultiPoly.from_json(data, 3) == p
        assert [tuple(t["exps"]) for t in data] == sorted((tuple(t["exps"]) for t in data), key=grlex_key)


# -- parser ---------------------------------------------------------------------

def test_parse_examples():
    assert parse_poly("x1*x4 - x2*x3", 4) == MultiPoly(4, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})
    y1, y2 = variables(2)
    assert parse_poly("(x1+x2)^2", 2) == y1 ** 2 + 2 * y1 * y2 + y2 ** 2
    assert parse_poly(" 3/4 * x1 -  x1^0", 1) == MultiPoly(1, {(1,): Fraction(3, 4), (0,): -1})


@pytest.mark.parametrize("text, message", [
    ("x1^-1", "negative exponent"),
    ("x9", "unknown variable"),
    ("x1 +", "unexpected end"),
    ("2.5*x1", "unexpected character"),
    ("x1/x2", "non-constant"),
    ("(x1", r"expected '\)'"),
    ("", "empty"),
])
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_poly(text, 2)


def test_parse_error_position_on_second_line():
    with pytest.raises(ParseError) as info:
        parse_poly("x1 +\n  x2 $", 2)
    assert (info.value.line, info.value.column) == (2, 6)


def test_x0_only_when_allowed():
    with pytest.raises(ParseError):
        parse_poly("x0*x1", 2)
    assert parse_poly("x0*x1", 2, allow_x0=True) == MultiPoly(2, {(1, 1): 1})


@settings(max_examples=80, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                       st.fractions(min_value=-20, max_value=20, max_denominator=7), max_size=6))
def test_print_parse_round_trip(terms):
    p = MultiPoly(2, terms)
    text = format_poly(p)
    assert parse_poly(text, 2) == p
    assert format_poly(parse_poly(text, 2)) == text


def test_parser_agrees_with_sympy_on_nested_expressions():
    text = "(x1 - 2*x2)^3 - (x2 + 1/3)*(x1 - x2)^2 + 7"
    expected = sympy.sympify(text.replace("^", "**"), locals={"x1": sym_vars(2)[0], "x2": sym_vars(2)[1]})
    assert parse_poly(text, 2) == from_sympy(expected, 2)
