"""
Second fundamental form along a plane
=====================================

For the 3-fold x4 = x1*x3 the plane spanned by e1, e2 lies in the base locus
of the second fundamental form.  Its singular directions inside the plane
(the Gauss fibre) span a line, and that line lies in the variety.
"""

from linosc import (ImplicitVariety, LinearSpace, gauss_fiber_in_L, implicit_to_graph, parse_poly,
                    second_fundamental_system, singular_locus)

v = ImplicitVariety(4, 3, (parse_poly("x4 - x1*x3", 4),))
plane = LinearSpace((0, 0, 0, 0), ((1, 0, 0, 0), (0, 1, 0, 0)))
jet = implicit_to_graph(v, plane.base_point, 3)

system = second_fundamental_system(jet)
print("II =", system.quadrics[0].to_json())
print("singular directions:", [[str(x) for x in w] for w in singular_locus(system)])

fiber = gauss_fiber_in_L(jet, plane, v)
print(f"fibre in the plane: dim {fiber.dim}, at least {fiber.lower_bound}")
print("fibre line contained:", fiber.contained)
