"""Homogeneous binary forms over Q or Q(sqrt(d)): exact resultants,
discriminants, the homogeneous differential, composition, and iteration.

A form of degree m is stored as the coefficient tuple (c0, ..., cm) of
sum_i c_i X^{m-i} Y^i.  The resultant follows the root-product convention
Res(P, Q) = prod_i Q(a_i, b_i) over the projective roots [a_i : b_i] of P
written so that P = prod (b_i X - a_i Y); it is computed as the Sylvester
determinant of the formal degrees, which agrees with that product.  The
discriminant is Delta(P) = prod_{i<j} (a_i b_j - b_i a_j)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact_field import QuadElem, Rat, format_elem, parse_rat, squarefree_part, sqrt_Q, is_square_Q

ITERATE_MAX = 12


def _is_zero(x) -> bool:
    return not x


@dataclass(frozen=True)
class BForm:
    """Homogeneous binary form sum c_i X^{m-i} Y^i, degree m = len-1."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("a form needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def __call__(self, x, y):
        m = self.degree
        acc = 0
        ypows = [1]
        for _ in range(m):
            ypows.append(ypows[-1] * y)
        for i, c in enumerate(self.coeffs):
            acc = acc + c * ypows[i] * x ** (m - i)
        return acc

    def dX(self) -> "BForm":
        """Partial derivative with respect to X, formal degree m-1."""
        m = self.degree
        if m == 0:
            return BForm((self.coeffs[0] * 0,))
        return BForm(tuple((m - i) * c for i, c in enumerate(self.coeffs[:-1])))

    def dY(self) -> "BForm":
        m = self.degree
        if m == 0:
            return BForm((self.coeffs[0] * 0,))
        return BForm(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def scale(self, k) -> "BForm":
        return BForm(tuple(c * k for c in self.coeffs))

    def __add__(self, other: "BForm") -> "BForm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return BForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "BForm") -> "BForm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return BForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "BForm") -> "BForm":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return BForm(tuple(out))

    def to_text(self) -> str:
        return " ".join([str(self.degree)] + [format_elem(c) for c in self.coeffs])

    @classmethod
    def from_text(cls, text: str) -> "BForm":
        parts = text.split()
        deg = int(parts[0])
        coeffs = tuple(parse_rat(tok) for tok in parts[1:])
        if len(coeffs) != deg + 1:
            raise ValueError("coefficient count does not match the degree")
        return cls(coeffs)

    def __repr__(self):
        return f"BForm[{self.to_text()}]"


def form_from_roots(roots: Sequence[tuple]) -> BForm:
    """prod (b X - a Y) over the given (a, b) lifts."""
    acc = BForm((Fraction(1),))
    for a, b in roots:
        acc = acc * BForm((b, -a))
    return acc


def linear_form(t0, s0) -> BForm:
    """t0 X - s0 Y, the degree-1 seed of the iterated-forms sequence."""
    return BForm((t0, -s0))


# -- exact determinants -------------------------------------------------

def _det_bareiss_int(rows: list) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    a = [row[:] for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_gauss(rows: list):
    """Exact Gaussian elimination over a field (used for QuadElem entries)."""
    a = [row[:] for row in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        if _is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    det = -det
                    break
            else:
                return Fraction(0)
        det = det * a[k][k]
        inv = a[k][k]
        for i in range(k + 1, n):
            if _is_zero(a[i][k]):
                continue
            factor = a[i][k] / inv
            for j in range(k, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return det


def exact_det(rows: list):
    """Determinant of a square matrix of Fractions/ints/QuadElems."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(isinstance(x, QuadElem) for row in rows for x in row):
        return _det_gauss(rows)
    # scale each row to integers; Bareiss keeps intermediates integral
    scaled = []
    denom = 1
    for row in rows:
        frac = [Fraction(x) for x in row]
        d = math.lcm(*(f.denominator for f in frac)) if frac else 1
        scaled.append([int(f * d) for f in frac])
        denom *= d
    return Fraction(_det_bareiss_int(scaled), denom)


def resultant(P: BForm, Q: BForm):
    """Sylvester resultant at the formal degrees of P and Q."""
    m, n = P.degree, Q.degree
    if m == 0:
        return P.coeffs[0] ** n
    if n == 0:
        return Q.coeffs[0] ** m
    size = m + n
    rows = []
    zero = Fraction(0)
    for i in range(n):
        rows.append([zero] * i + list(P.coeffs) + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(Q.coeffs) + [zero] * (m - 1 - i))
    assert all(len(r) == size for r in rows)
    return exact_det(rows)


def discriminant(P: BForm):
    """Delta(P) = prod_{i<j} (a_i b_j - b_i a_j)^2 over the roots of P."""
    m = P.degree
    if m <= 1:
        return Fraction(1)
    if not _is_zero(P.coeffs[0]):
        r = resultant(P, P.dX())
        sign = -1 if (m * (m - 1) // 2) % 2 else 1
        return sign * r / P.coeffs[0]
    # root at [1:0]: shear (X, Y) -> (X, kX + Y), determinant 1, until the
    # leading coefficient P(1, k) is nonzero; Delta is unimodular-invariant
    if P.is_zero():
        raise ValueError("discriminant of the zero form")
    for k in range(1, m + 2):
        if not _is_zero(P(1, k)):
            return discriminant(shear(P, k))
    raise AssertionError("nonzero form vanishing at m+1 points")


def shear(P: BForm, k: int) -> BForm:
    """P(X, kX + Y): the unimodular substitution Y -> kX + Y."""
    return compose_raw(P, BForm((Fraction(1), Fraction(0))), BForm((Fraction(k), Fraction(1))))


def transform(P: BForm, a, b, c, d) -> BForm:
    """P(aX + bY, cX + dY)."""
    return compose_raw(P, BForm((a, b)), BForm((c, d)))


def compose_raw(J: BForm, P: BForm, Q: BForm) -> BForm:
    """J(P, Q) by Horner in P against ascending powers of Q."""
    if P.degree != Q.degree:
        raise ValueError("degree mismatch")
    n = J.degree
    qpows = [BForm((Fraction(1),))]
    for _ in range(n):
        qpows.append(qpows[-1] * Q)
    result = None
    for i, cJ in enumerate(J.coeffs):
        term = (_form_pow(P, n - i) * qpows[i]).scale(cJ)
        result = term if result is None else result + term
    return result


def _form_pow(P: BForm, e: int) -> BForm:
    acc = BForm((Fraction(1),))
    for _ in range(e):
        acc = acc * P
    return acc


@dataclass(frozen=True)
class FormPair:
    """A pair (P, Q) of coprime equal-degree forms: a lift of f = P/Q."""

    P: BForm
    Q: BForm

    def __post_init__(self):
        if self.P.degree != self.Q.degree:
            raise ValueError("P and Q must have equal degree")
        if self.P.degree < 1:
            raise ValueError("degree must be >= 1")
        if _is_zero(resultant(self.P, self.Q)):
            raise ValueError("P and Q share a root (Res = 0)")

    @property
    def degree(self) -> int:
        return self.P.degree

    def res(self):
        return resultant(self.P, self.Q)


def homog_differential(pair: FormPair) -> BForm:
    """(P_X Q - P Q_X)/Y of degree 2m-2; cross-checked against the
    equal formula (P Q_Y - P_Y Q)/X."""
    P, Q = pair.P, pair.Q
    d_from_y = _divide_Y(P.dX() * Q - P * Q.dX())
    d_from_x = _divide_X(P * Q.dY() - P.dY() * Q)
    if d_from_y.coeffs != d_from_x.coeffs:
        raise AssertionError("the two differential formulas disagree")
    return d_from_y


def _divide_Y(P: BForm) -> BForm:
    """P / Y: drop the pure-X coefficient, which must vanish."""
    if not _is_zero(P.coeffs[0]):
        raise AssertionError("form not divisible by Y")
    return BForm(P.coeffs[1:])


def _divide_X(P: BForm) -> BForm:
    if not _is_zero(P.coeffs[-1]):
        raise AssertionError("form not divisible by X")
    return BForm(P.coeffs[:-1])


def compose_form(J: BForm, pair: FormPair) -> BForm:
    if J.degree < 1:
        raise ValueError("J must have degree >= 1")
    return compose_raw(J, pair.P, pair.Q)


def _pair_unchecked(P: BForm, Q: BForm) -> FormPair:
    """FormPair without the coprimality resultant check, for iterates
    whose resultant is a known power of Res(P, Q)."""
    out = FormPair.__new__(FormPair)
    object.__setattr__(out, "P", P)
    object.__setattr__(out, "Q", Q)
    return out


@lru_cache(maxsize=256)
def _iterate_pair_cached(pair: FormPair, n: int) -> FormPair:
    if n == 0:
        return _pair_unchecked(BForm((Fraction(1), Fraction(0))),
                               BForm((Fraction(0), Fraction(1))))
    prev = _iterate_pair_cached(pair, n - 1)
    return _pair_unchecked(compose_raw(prev.P, pair.P, pair.Q),
                           compose_raw(prev.Q, pair.P, pair.Q))


def iterate_pair(pair: FormPair, n: int) -> FormPair:
    """(P_n, Q_n) with (P_0, Q_0) = (X, Y) and F^n = F^{n-1} o F."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > ITERATE_MAX:
        raise ValueError(f"iteration capped at n <= {ITERATE_MAX}")
    return _iterate_pair_cached(pair, n)


def iterated_H(pair: FormPair, s0, t0, n: int) -> BForm:
    """H_n = t0 P_n - s0 Q_n."""
    it = iterate_pair(pair, n)
    return it.P.scale(t0) - it.Q.scale(s0)


# -- critical lifts of a degree-2 differential --------------------------

@dataclass(frozen=True)
class CriticalLifts:
    """Factorization data D = c * (th1 X - e1 Y)(th2 X - e2 Y).

    Lift coordinates are Fractions when the root discriminant is a
    rational square, else conjugate QuadElems over the squarefree d.
    """

    eta1: object
    theta1: object
    eta2: object
    theta2: object
    c: Fraction
    disc_class: int  # squarefree kernel of the root discriminant (1 if square)


def critical_lifts(D: BForm) -> CriticalLifts:
    """Factor a degree-2 form with distinct roots into root lifts."""
    if D.degree != 2:
        raise ValueError("expected a degree-2 form")
    c0, c1, c2 = (Fraction(x) for x in D.coeffs)
    if _is_zero(c0) and _is_zero(c1):
        raise ValueError("repeated root at [1:0]")
    if _is_zero(c0):
        lifts = [(Fraction(1), Fraction(0)), (-c2, c1)]
        dclass = 1
    else:
        disc = c1 * c1 - 4 * c0 * c2
        if _is_zero(disc):
            raise ValueError("repeated root (zero discriminant)")
        dclass = squarefree_part(disc)
        if dclass == 1:
            e = sqrt_Q(disc)
            lifts = [(-c1 + e, 2 * c0), (-c1 - e, 2 * c0)]
        else:
            e = sqrt_Q(disc / dclass)
            r1 = QuadElem(-c1, e, dclass)
            r2 = r1.conjugate()
            lifts = [(r1, QuadElem(2 * c0, Fraction(0), dclass)),
                     (r2, QuadElem(2 * c0, Fraction(0), dclass))]
    prod = form_from_roots(lifts)
    c = None
    for dc, pc in zip(D.coeffs, prod.coeffs):
        if not _is_zero(pc):
            cand = Fraction(dc) / pc if not isinstance(pc, QuadElem) else dc / pc
            c = cand
            break
    for dc, pc in zip(D.coeffs, prod.coeffs):
        if pc * c != dc:
            raise AssertionError("lift factorization mismatch")
    if isinstance(c, QuadElem):
        assert c.b == 0
        c = c.a
    return CriticalLifts(lifts[0][0], lifts[0][1], lifts[1][0], lifts[1][1],
                         Fraction(c), dclass)


def lift_product_H(pair: FormPair, s0, t0, n: int, lifts: CriticalLifts):
    """prod_i H_n(eta_i, theta_i), computed as a norm when the lifts are
    conjugate over Q(sqrt(d)) so the value provably lands in Q."""
    H = iterated_H(pair, s0, t0, n)
    v1 = H(lifts.eta1, lifts.theta1)
    if lifts.disc_class != 1:
        assert isinstance(v1, QuadElem)
        v2 = v1.conjugate()
        out = v1 * v2
        assert out.b == 0
        return out.a
    return v1 * H(lifts.eta2, lifts.theta2)


# -- identity checkers --------------------------------------------------

def check_compres(pair: FormPair, alpha, beta, alpha_t, beta_t) -> bool:
    """Both resultant identities for R = beta P - alpha Q:
    Res(R, D) = (-1)^{m(m-1)/2} Res(P,Q) Delta(R) and
    Res(R, R~) = (alpha beta~ - beta alpha~)^m Res(P,Q)."""
    if _is_zero(alpha) and _is_zero(beta):
        raise ValueError("(alpha, beta) must be nonzero")
    if _is_zero(alpha_t) and _is_zero(beta_t):
        raise ValueError("(alpha~, beta~) must be nonzero")
    m = pair.degree
    D = homog_differential(pair)
    R = pair.P.scale(beta) - pair.Q.scale(alpha)
    Rt = pair.P.scale(beta_t) - pair.Q.scale(alpha_t)
    rpq = pair.res()
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    ok1 = resultant(R, D) == sign * rpq * discriminant(R)
    ok2 = resultant(R, Rt) == (alpha * beta_t - beta * alpha_t) ** m * rpq
    return ok1 and ok2


def check_compdisc(pair: FormPair, J: BForm) -> bool:
    """Delta(H) = (-1)^{mn(m-1)/2} Delta(J)^m Res(P,Q)^{n(n-2)} Res(H,D)
    for H = J(P,Q)."""
    m, n = pair.degree, J.degree
    H = compose_form(J, pair)
    D = homog_differential(pair)
    sign = -1 if (m * n * (m - 1) // 2) % 2 else 1
    rhs = sign * discriminant(J) ** m * pair.res() ** (n * (n - 2)) * resultant(H, D)
    return discriminant(H) == rhs


def check_iterdisc(pair: FormPair, s0, t0, n: int) -> bool:
    """Delta(H_n) against the iterated formula with the critical-lift
    product; degree-2 pairs."""
    if pair.degree != 2:
        raise ValueError("degree-2 pairs only")
    if n < 1 or n > 5:
        raise ValueError("n out of range")
    d = 2
    D = homog_differential(pair)
    lifts = critical_lifts(D)
    dn = d ** n
    sign = -1 if (dn * (d - 1) // 2) % 2 else 1
    lhs = discriminant(iterated_H(pair, s0, t0, n))
    rhs = (sign * lifts.c ** dn
           * discriminant(iterated_H(pair, s0, t0, n - 1)) ** d
           * pair.res() ** (d ** (n - 1) * (d ** (n - 1) - 2))
           * lift_product_H(pair, s0, t0, n, lifts))
    return lhs == rhs


def check_polyiter(f_coeffs: Sequence[Rat], x0: Rat, n: int) -> bool:
    """Discriminant recursion for iterated polynomials:
    Delta(f^n - x0) = (-1)^{d^n(d-1)/2} d^{d^n} A^{d^{2n-1}-1}
    Delta(f^{n-1} - x0)^d prod_{f'(c)=0} (f^n(c) - x0),
    with the critical product taken as Res(f', f^n - x0)/(dA)^{d^n}."""
    coeffs = [Fraction(c) for c in f_coeffs]
    d = len(coeffs) - 1
    if d < 2:
        raise ValueError("degree must be >= 2")
    A = coeffs[0]
    if _is_zero(A):
        raise ValueError("leading coefficient vanishes")
    P = BForm(tuple(coeffs))
    Q = BForm((Fraction(0),) * d + (Fraction(1),))  # Y^d
    pair = FormPair(P, Q)
    Hn = iterated_H(pair, x0, Fraction(1), n)        # f^n - x0, homogenized
    Hn1 = iterated_H(pair, x0, Fraction(1), n - 1)
    fprime = BForm(tuple((d - i) * c for i, c in enumerate(coeffs[:-1])))
    crit_prod = resultant(fprime, Hn) / (d * A) ** (d ** n)
    dn = d ** n
    sign = -1 if (dn * (d - 1) // 2) % 2 else 1
    rhs = (sign * Fraction(d) ** dn * A ** (d ** (2 * n - 1) - 1)
           * discriminant(Hn1) ** d * crit_prod)
    return discriminant(Hn) == rhs
