"""Exact resultant and discriminant identities for binary forms.

A quadratic rational map f = P/Q lifts to a pair of degree-2 binary
forms.  The algebra of the package rests on a handful of exact
identities relating resultants and discriminants of composed and
iterated forms; this script walks through them on one concrete pair.
"""

from __future__ import annotations

from fractions import Fraction

from arbocert.binary_forms import (
    BForm,
    FormPair,
    critical_lifts,
    discriminant,
    homog_differential,
    iterated_H,
    lift_product_H,
    resultant,
)

# f(z) = (2z^2 - 2)/(z^2 + 1), written as forms in (X, Y).
P = BForm((Fraction(2), Fraction(0), Fraction(-2)))
Q = BForm((Fraction(1), Fraction(0), Fraction(1)))
pair = FormPair(P, Q)
print("P =", P.to_text(), " Q =", Q.to_text())
print("Res(P, Q) =", pair.res())

# The homogeneous differential D = (P_X Q - P Q_X)/Y vanishes exactly at
# the critical points of f; for degree 2 its discriminant is 4 Res(P,Q).
D = homog_differential(pair)
print("D =", D.to_text())
print("Delta(D) =", discriminant(D), "= 4 Res(P, Q):",
      discriminant(D) == 4 * pair.res())

# Critical lifts: D factors as c (th1 X - e1 Y)(th2 X - e2 Y).  Here the
# critical points are 0 and infinity, so the factorization is rational.
lifts = critical_lifts(D)
print("critical lifts:", (lifts.eta1, lifts.theta1), (lifts.eta2, lifts.theta2),
      " c =", lifts.c, " disc class =", lifts.disc_class)

# Iterated forms: H_n = t0 P_n - s0 Q_n vanishes at the n-th preimages
# of x0 = s0/t0.  Its discriminant satisfies an exact recursion whose
# correction term is the product of H_n over the critical lifts --
# the quantity whose square class drives the whole certificate.
s0, t0 = Fraction(3), Fraction(1)
for n in (1, 2, 3):
    Hn = iterated_H(pair, s0, t0, n)
    prod = lift_product_H(pair, s0, t0, n, lifts)
    print(f"n={n}: deg H_n = {Hn.degree}, Delta(H_n) = {discriminant(Hn)}, "
          f"critical product = {prod}")

# The resultant convention used throughout: Res follows the root
# product, so Res(X, Y) = +1 while Res(Y, X) = -1.
X = BForm((Fraction(1), Fraction(0)))
Y = BForm((Fraction(0), Fraction(1)))
print("Res(X, Y) =", resultant(X, Y), " Res(Y, X) =", resultant(Y, X))
