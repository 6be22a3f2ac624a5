"""Shared helpers: sympy is used as an independent oracle for exact algebra."""

import zlib
from fractions import Fraction

import numpy as np
import pytest
import sympy

from linosc.polynomial import MultiPoly, monomials


def sym_vars(n):
    return sympy.symbols(f"x1:{n + 1}")


def to_sympy(p: MultiPoly):
    xs = sym_vars(p.num_vars)
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for x, e in zip(xs, exps):
            term *= x ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, n) -> MultiPoly:
    poly = sympy.Poly(sympy.expand(expr), *sym_vars(n))
    return MultiPoly(n, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def sym_matrix(m):
    return sympy.Matrix([[sympy.Rational(m[i, j].numerator, m[i, j].denominator)
                          for j in range(m.cols)] for i in range(m.rows)])


def rand_poly(rng, n, max_degree, pool=5, density=0.6):
    terms = {}
    for d in range(max_degree + 1):
        for m in monomials(n, d):
            if rng.random() < density:
                terms[m] = Fraction(int(rng.integers(-pool, pool + 1)), int(rng.integers(1, 4)))
    return MultiPoly(n, terms)


@pytest.fixture
def rng(request):
    # Seeded from the test name so each test replays on its own.
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[label])
