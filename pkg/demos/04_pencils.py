"""
Pencils of quadrics vanishing on a hyperplane
=============================================

Two quadrics that both vanish on the hyperplane x_n = 0 are, up to change of
basis, one of four normal forms.  The second needs an empty prolongation, so
it cannot occur for a nondegenerate variety.
"""

from linosc import (QuadricSystem, classify_pencil_with_hyperplane_base, contains_linear_space,
                    corpus_variety, pencil_normal_form, prolongation)
from linosc.linalg import ExactMatrix

n = 4
hyperplane = [tuple(int(i == j) for i in range(n)) for j in range(n - 1)]
for case in (1, 2, 3, 4):
    quads = pencil_normal_form(case, n)
    mats = tuple(q.quadric_matrix() if not q.is_zero() else ExactMatrix.zeros(n, n) for q in quads)
    label = classify_pencil_with_hyperplane_base(QuadricSystem(n, mats), hyperplane).case
    print(f"normal form {case}: {', '.join(str(q) for q in quads)} -> case {label}")

x1xn = QuadricSystem.from_polys([pencil_normal_form(2, n)[0]], n)
print("prolongation of {x1*xn}:", prolongation(x1xn))

# The scroll {x4 = x1*x3, x5 = x2*x3} carries the plane x3 = 0.
scroll = corpus_variety("scroll_codim2")
print("scroll contains x3 = 0:", contains_linear_space(scroll.variety, scroll.space("x3_zero")))
