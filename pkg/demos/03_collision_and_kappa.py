"""Colliding critical orbits and the kappa invariants.

A quadratic rational map has two critical points.  When their forward
orbits first meet at the ell-th iterate, the Galois groups of the
iterated preimages of a base point x0 are constrained to the parity
group M_ell -- and a finite list of field elements kappa_1, ..., kappa_N
decides whether that bound is attained.  This script computes the data
for the running example f(z) = (2z^2 - 2)/(z^2 + 1).
"""

from __future__ import annotations

from fractions import Fraction

from arbocert.dynamics import (
    build_map,
    detect_collision,
    forward_orbit,
    format_point,
    kappa_list,
    normal_form,
)
from arbocert.exact_field import ProjPoint, format_elem

qmap = build_map((2, 0, -2), (1, 0, 1))
print("critical points:", format_point(qmap.xi1), "and", format_point(qmap.xi2))
print("delta (square class of the critical discriminant):", qmap.delta)

col = detect_collision(qmap)
print(f"orbits collide at iterate ell = {col.ell}")
for name, xi in (("xi1", col.xi1), ("xi2", col.xi2)):
    orbit = forward_orbit(qmap, xi, 3)
    print(f"  orbit of {name}:", " -> ".join(format_point(p) for p in orbit))

# With rational critical points the map conjugates to the normal form
# (A z^2 + B)/(z^2 + C) sending them to infinity and 0.
nf = normal_form(qmap, col)
print(f"normal form: ({format_elem(nf.A)} z^2 + {format_elem(nf.B)}) / "
      f"(z^2 + {format_elem(nf.C)})")

# The kappa list at x0 = 3.  kappa_n is the discriminant of the iterated
# form H_n below the collision level; at and above it, cross-ratio
# expressions along the critical orbits take over.  Only the square
# classes matter.
x0 = ProjPoint(Fraction(3), Fraction(1))
lst = kappa_list(qmap, x0, 6, col)
print()
print("kappa invariants at x0 = 3:")
for e in lst.entries:
    print(f"  kappa_{e.n} = {format_elem(e.value)}   [{e.case}]")

# A base point on a critical orbit degenerates the construction: some
# kappa becomes 0 and no certificate is possible there.
bad = kappa_list(qmap, ProjPoint(Fraction(6), Fraction(5)), 3, col)
print()
print("at x0 = 6/5 = f^2(critical point):",
      [f"kappa_{e.n}=0 ({e.zero_reason})" for e in bad.entries if e.zero_reason])
