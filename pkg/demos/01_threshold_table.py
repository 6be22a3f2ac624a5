"""
How far must a plane osculate?
==============================

The smallest order m at which osculation forces containment, for a k-plane
in an n-fold of codimension a.  A line in a hypersurface needs order n + 1;
a hyperplane in a codimension-two variety needs only order two.
"""

from linosc import branch_threshold, generic_threshold

print(" n  k  a   m   (line count, 2k-n count)")
for n in range(2, 7):
    for k in range(1, n):
        for a in (1, 2):
            m = generic_threshold(n, k, a)
            b1, b2 = branch_threshold(n, k, a, 1), branch_threshold(n, k, a, 2)
            print(f"{n:2d} {k:2d} {a:2d} {m:3d}   ({b1}, {b2})")

# The second count only exists when 2k > n.  At k = n/2 it never fires.
print("k = n/2, second count:", [branch_threshold(n, n // 2, 1, 2) for n in (2, 4, 6)])
