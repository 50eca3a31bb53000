"""Maximality certificates.

The decision: with rational critical points (delta a square), the
level-N preimage Galois group is all of M_(ell,N) exactly when no
nonempty subset of {kappa_1, ..., kappa_N} has a rational-square
product.  With conjugate critical points (delta not a square) the
search runs in L = Q(sqrt(delta)) after removing kappa_ell, which is
always a square there, and the attainable bound is the constant-sign
group Mtilde.  A failed search yields an explicit witness subset.
"""

from __future__ import annotations

from fractions import Fraction

from arbocert.certify import certify_max, subset_square_search
from arbocert.dynamics import build_map
from arbocert.exact_field import ProjPoint

# The running example turns out NOT to attain the full parity group at
# x0 = 3: kappa_1 * kappa_2 = (-20) * (-20/9) = 400/9 is a square.
qmap = build_map((2, 0, -2), (1, 0, 1))
cert = certify_max(qmap, ProjPoint(Fraction(3), Fraction(1)), 6)
print(cert.to_text())
values = cert.kappas.values()
prod = Fraction(1)
for i in cert.witness:
    prod *= values[i - 1]
print(f"witness product: {prod}\n")

# A map with conjugate critical points over Q(sqrt(2)):
# f(z) = (z^2 + 4z + 2)/(2z^2 + 6z + 4).  Here the certificate decides
# maximality of the constant-sign group, searching in L.
qmap2 = build_map((1, 4, 2), (2, 6, 4))
cert2 = certify_max(qmap2, ProjPoint(Fraction(3), Fraction(1)), 5)
print(cert2.to_text())

# The subset search itself: square classes over Q are F2 vectors, so a
# square-product subset is a linear dependency and the lexicographically
# smallest one is found by greedy elimination -- no 2^N scan needed.
vals = [Fraction(v) for v in (10, 15, 21, 14)]
print("values:", vals)
print("smallest square-product subset (0-based):",
      subset_square_search(vals))  # 10 * 15 * 21 * 14 = 44100 = 210^2
