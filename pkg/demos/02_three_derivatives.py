"""
Three derivatives for a ruled surface
=====================================

On z = x1^3 the x1-axis agrees with the surface to second order and then
leaves it.  On z = x1*x2 the axis lies in the surface, and every jet says so.
"""

from linosc import LinearSpace, decide, graph_variety, implicit_to_graph, osculation_order, parse_poly

axis = LinearSpace((0, 0, 0), ((1, 0, 0),))

for text in ("x1^3", "x1*x2", "x1*x2 + x1^5"):
    surface = graph_variety([parse_poly(text, 2)])
    jet = implicit_to_graph(surface, axis.base_point, 6)
    rep = osculation_order(jet, axis)
    verdict = decide(axis, variety=surface, max_order=4)
    print(f"z = {text:14s} osculation {rep.order_found!s:13s} verdict {verdict.verdict}")
    for note in verdict.notes:
        print("   ", note)

# The last surface fools every jet up to order 4; the substitution oracle does not.
