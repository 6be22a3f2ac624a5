"""
One point is not enough
=======================

Zeroing coefficients so that a line osculates to order n + 1 at a single
point does not make that point general.  The oracle then finds lines that
agree to order three and still leave the surface.  When every point carries
such a line (a ruled family) containment holds, as expected.
"""

from linosc import verify_theorem
from linosc.variety import ImplicitVariety, LinearSpace

single = verify_theorem("thm3", {"n": 2, "degree": 6, "profile": "vanish_on_L"}, trials=10, seed=3)
print(single.summary())
record = single.failures[0]
print("first failure generator:", ImplicitVariety.from_json(record["variety"]).generators[0])
print("line:", LinearSpace.from_json(record["space"]).to_json())
print("osculation:", record["osculation"]["order_found"], "contained:", record["contained"])

ruled = verify_theorem("thm3", {"n": 2, "degree": 6, "profile": "ruled_L"}, trials=10, seed=3)
print(ruled.summary())
