"""
From cubics on W to the wedge square
====================================

Given a system of quadrics on a w-dimensional space, the induced map
S^3 W -> Lambda^2 W is surjective for generic systems of dimension w and
w - 1.  The zero system gives the zero map, where containment follows by
the other branch of the argument.
"""

import numpy as np

from linosc import tilde_R_report
from linosc.corpus import random_symmetric
from linosc.linalg import ExactMatrix

rng = np.random.default_rng(5)
for w in (2, 3, 4):
    system = [random_symmetric(rng, w, 5) for _ in range(w)]
    rep = tilde_R_report(system)
    print(f"w = {w}: matrix {rep.matrix.rows}x{rep.matrix.cols}, rank {rep.rank} of {rep.target_dim}: "
          f"{rep.conclusion}")

zero = tilde_R_report([ExactMatrix.zeros(3, 3)] * 3)
print("zero system:", zero.conclusion)
