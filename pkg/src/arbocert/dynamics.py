"""Quadratic rational maps over Q: critical data, collision of critical
orbits, the (Az^2+B)/(z^2+C) normal form, forward orbits, and the kappa,
q and r invariants attached to a colliding map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact_field import (
    Infinity,
    IndeterminateCrossRatio,
    ProjPoint,
    QuadElem,
    Rat,
    cross_ratio,
    format_elem,
    is_square_Q,
    parse_rat,
    pdet,
)
from .binary_forms import (
    BForm,
    CriticalLifts,
    FormPair,
    critical_lifts,
    discriminant,
    homog_differential,
    iterated_H,
)

KAPPA_N_MAX = 20
KAPPA_DISC_CAP = 8
ORBIT_MAX = 64
COLLISION_MAX_ITER = 20

INFTY = ProjPoint(Fraction(1), Fraction(0))
ZERO = ProjPoint(Fraction(0), Fraction(1))


class DegenerateMapError(ValueError):
    """The input does not define a quadratic morphism with two distinct
    critical points."""


@dataclass(frozen=True)
class QuadMap:
    """A degree-2 rational map f = P/Q over Q with its critical data.

    ``delta`` is the squarefree discriminant class of the critical
    points' minimal polynomial (1 when they are rational); ``xi1``,
    ``xi2`` are the critical points over Q or Q(sqrt(delta)); ``c`` is
    the constant in D = c (theta1 X - eta1 Y)(theta2 X - eta2 Y).
    """

    pair: FormPair
    differential: BForm
    lifts: CriticalLifts
    xi1: ProjPoint
    xi2: ProjPoint
    delta: int
    c: Fraction

    def apply(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(self.pair.P(p.s, p.t), self.pair.Q(p.s, p.t))

    def iterate(self, p: ProjPoint, n: int) -> ProjPoint:
        for _ in range(n):
            p = self.apply(p)
        return p


def build_map(p_coeffs: Sequence[Rat], q_coeffs: Sequence[Rat]) -> QuadMap:
    """Construct a QuadMap from the degree-2 coefficients of P and Q."""
    P = BForm(tuple(Fraction(c) for c in p_coeffs))
    Q = BForm(tuple(Fraction(c) for c in q_coeffs))
    if P.degree != 2 or Q.degree != 2:
        raise DegenerateMapError("P and Q must be degree-2 forms")
    try:
        pair = FormPair(P, Q)
    except ValueError as exc:
        raise DegenerateMapError(str(exc)) from exc
    D = homog_differential(pair)
    try:
        lifts = critical_lifts(D)
    except ValueError as exc:
        raise DegenerateMapError(f"repeated critical point: {exc}") from exc
    xi_a = ProjPoint(lifts.eta1, lifts.theta1)
    xi_b = ProjPoint(lifts.eta2, lifts.theta2)
    xi1, xi2 = _order_critical_points(xi_a, xi_b, lifts.disc_class)
    return QuadMap(pair, D, lifts, xi1, xi2, lifts.disc_class, lifts.c)


def _point_key(p: ProjPoint):
    if p.is_infinity:
        return (1, Fraction(0), Fraction(0))
    v = p.affine()
    if isinstance(v, QuadElem):
        return (0, v.a, v.b)
    return (0, Fraction(v), Fraction(0))


def _order_critical_points(xi_a, xi_b, delta):
    """Deterministic ordering: lexicographically smaller (a, b) under the
    positive-sqrt ordering first (rational points: smaller affine value,
    with infinity last)."""
    if _point_key(xi_a) <= _point_key(xi_b):
        return xi_a, xi_b
    return xi_b, xi_a


@dataclass(frozen=True)
class CollisionData:
    """Smallest ell with f^ell(xi1) = f^ell(xi2), critical points ordered
    so that xi2 is not in the forward orbit of xi1."""

    ell: int
    xi1: ProjPoint
    xi2: ProjPoint
    swapped: bool


def _coord_bits(p: ProjPoint) -> int:
    out = 0
    for c in (p.s, p.t):
        for f in ((c.a, c.b) if isinstance(c, QuadElem) else (Fraction(c),)):
            out = max(out, f.numerator.bit_length(), f.denominator.bit_length())
    return out


# A point whose canonical coordinates pass this size can no longer return
# to one of the small critical points: heights grow quadratically along
# the orbit once they dominate the height of the map.
_ORBIT_ESCAPE_BITS = 512


def _orbit_hits(qmap: QuadMap, start: ProjPoint, target: ProjPoint,
                max_iter: int) -> bool:
    """Whether target lies in {f(start), ..., f^max_iter(start)},
    stopping early on a cycle or on coordinate escape."""
    seen = {start}
    cur = start
    for _ in range(max_iter):
        cur = qmap.apply(cur)
        if cur == target:
            return True
        if cur in seen or _coord_bits(cur) > _ORBIT_ESCAPE_BITS:
            return False
        seen.add(cur)
    return False


def detect_collision(qmap: QuadMap, max_iter: int = COLLISION_MAX_ITER) -> Optional[CollisionData]:
    if max_iter > COLLISION_MAX_ITER:
        raise ValueError(f"max_iter capped at {COLLISION_MAX_ITER}")
    a, b = qmap.xi1, qmap.xi2
    ell = None
    for k in range(1, max_iter + 1):
        a, b = qmap.apply(a), qmap.apply(b)
        if a == b:
            ell = k
            break
        if _coord_bits(a) > _ORBIT_ESCAPE_BITS and _coord_bits(b) > _ORBIT_ESCAPE_BITS:
            return None
    if ell is None:
        return None
    if ell < 2:
        raise AssertionError("collision at the first iterate is impossible "
                             "for a degree-2 morphism")
    xi1, xi2 = qmap.xi1, qmap.xi2
    swapped = False
    in1 = _orbit_hits(qmap, xi1, xi2, max_iter)
    in2 = _orbit_hits(qmap, xi2, xi1, max_iter)
    if in1 and in2:
        raise AssertionError("both critical points periodic: impossible "
                             "for colliding critical orbits")
    if in1:
        xi1, xi2 = xi2, xi1
        swapped = True
    return CollisionData(ell, xi1, xi2, swapped)


def forward_orbit(qmap: QuadMap, p: ProjPoint, n: int) -> list:
    """[p, f(p), ..., f^n(p)] with canonical projective normalization."""
    if n > ORBIT_MAX:
        raise ValueError(f"orbit length capped at {ORBIT_MAX}")
    out = [p]
    for _ in range(n):
        out.append(qmap.apply(out[-1]))
    return out


# -- normal form --------------------------------------------------------

def _mobius_through(p0: ProjPoint, pinf: ProjPoint, p1: ProjPoint):
    """Matrix (a, b; c, d) of the Mobius map sending 0, infinity, 1 to the
    three given points."""
    # columns: b,d from image of 0; a,c from image of infinity; scale so
    # that the image of 1 is the third point
    a, c = pinf.s, pinf.t
    b, d = p0.s, p0.t
    # (a + b lam, c + d lam) ~ p1 for the right relative scaling lam
    # solve pdet((a + lam b, c + lam d), p1) = 0
    num = -(a * p1.t - c * p1.s)
    den = b * p1.t - d * p1.s
    if not den:
        raise ValueError("degenerate point triple")
    lam = num / den
    if not lam:
        raise ValueError("degenerate point triple")
    return a, b * lam, c, d * lam


def conjugate_map(qmap: QuadMap, a: Rat, b: Rat, c: Rat, d: Rat) -> QuadMap:
    """nu^{-1} o f o nu for the Mobius map nu(z) = (az+b)/(cz+d)."""
    a, b, c, d = (Fraction(x) for x in (a, b, c, d))
    det = a * d - b * c
    if not det:
        raise ValueError("singular coordinate change")
    P, Q = qmap.pair.P, qmap.pair.Q
    # F o N: substitute (aX+bY, cX+dY)
    PN = _subst(P, a, b, c, d)
    QN = _subst(Q, a, b, c, d)
    # N^{-1} = (d, -b; -c, a) up to the determinant scalar
    newP = PN.scale(d) - QN.scale(b)
    newQ = QN.scale(a) - PN.scale(c)
    return build_map(newP.coeffs, newQ.coeffs)


def _subst(P: BForm, a, b, c, d) -> BForm:
    from .binary_forms import transform
    return transform(P, a, b, c, d)


@dataclass(frozen=True)
class NormalForm:
    A: Fraction
    B: Fraction
    C: Fraction
    nu: tuple  # (a, b, c, d) with nu(z) = (az+b)/(cz+d), nu(0)=xi1, nu(inf)=xi2

    def as_map(self) -> QuadMap:
        return build_map((self.A, Fraction(0), self.B),
                         (Fraction(1), Fraction(0), self.C))

    def f_of_zero(self) -> ProjPoint:
        return ProjPoint(self.B, self.C)

    def f_of_infinity(self) -> ProjPoint:
        return ProjPoint(self.A, Fraction(1))


def normal_form(qmap: QuadMap, collision: Optional[CollisionData] = None) -> NormalForm:
    """Conjugate to (Az^2+B)/(z^2+C) with critical points 0 and infinity.

    Uses the collision ordering when given, so 0 maps to xi1 and
    infinity to xi2 with xi2 outside the forward orbit of xi1.
    """
    if qmap.delta != 1:
        raise ValueError("irrational critical points have no Q-rational "
                         "normal form")
    xi1 = collision.xi1 if collision else qmap.xi1
    xi2 = collision.xi2 if collision else qmap.xi2
    # third point: the smallest-height rational point distinct from the
    # critical points
    for cand in _height_ordered_points():
        if cand != xi1 and cand != xi2:
            p1 = cand
            break
    a, b, c, d = _mobius_through(xi1, xi2, p1)
    conj = conjugate_map(qmap, a, b, c, d)
    p, q = conj.pair.P.coeffs, conj.pair.Q.coeffs
    if p[1] != 0 or q[1] != 0:
        raise AssertionError("conjugated map is not even in z")
    if not q[0]:
        raise DegenerateMapError("f cannot be a polynomial when its "
                                 "critical points collide")
    A, B, C = p[0] / q[0], p[2] / q[0], q[2] / q[0]
    if A * C - B == 0:
        raise AssertionError("normal form degenerates: AC - B = 0")
    return NormalForm(A, B, C, (a, b, c, d))


def _height_ordered_points():
    yield ProjPoint(Fraction(1), Fraction(1))
    yield ProjPoint(Fraction(0), Fraction(1))
    yield ProjPoint(Fraction(1), Fraction(0))
    yield ProjPoint(Fraction(-1), Fraction(1))
    k = 2
    while True:
        for v in (Fraction(k), Fraction(-k), Fraction(1, k), Fraction(-1, k)):
            yield ProjPoint(v, Fraction(1))
        k += 1


# -- kappa --------------------------------------------------------------

KAPPA_CASE_DISC = "disc"                 # Delta(H_n), n <= ell-1
KAPPA_CASE_ELL_DISC = "ell-disc"         # kappa_ell with sqrt(delta) outside K
KAPPA_CASE_ELL_RATIO = "ell-ratio"       # kappa_ell, delta square, ell >= 3
KAPPA_CASE_ELL_FORM = "ell-form"         # kappa_ell, delta square, ell = 2
KAPPA_CASE_CROSS = "cross"               # cross ratio, n >= ell+1


@dataclass(frozen=True)
class KappaEntry:
    n: int
    value: object          # Fraction or QuadElem
    case: str
    zero_reason: Optional[str]  # None, "infinity" (CR blew up), or "zero"


@dataclass(frozen=True)
class KappaList:
    x0: ProjPoint
    ell: int
    N: int
    delta: int
    entries: tuple

    def values(self) -> list:
        return [e.value for e in self.entries]

    def has_zero(self) -> bool:
        return any(e.zero_reason is not None for e in self.entries)


def _cr(a, b, c, e):
    try:
        return cross_ratio(a, b, c, e)
    except IndeterminateCrossRatio:
        raise AssertionError("indeterminate cross ratio: points of the "
                             "kappa construction coincide unexpectedly")


def _as_entry(n, value, case) -> KappaEntry:
    if value is Infinity:
        return KappaEntry(n, Fraction(0), case, "infinity")
    if not value:
        return KappaEntry(n, Fraction(0), case, "zero")
    return KappaEntry(n, value, case, None)


def kappa_list(qmap: QuadMap, x0: ProjPoint, N: int,
               collision: Optional[CollisionData] = None,
               disc_cap: int = KAPPA_DISC_CAP) -> KappaList:
    """kappa_1..kappa_N for a colliding map and base point x0."""
    if N < 1 or N > KAPPA_N_MAX:
        raise ValueError(f"N must be between 1 and {KAPPA_N_MAX}")
    if collision is None:
        collision = detect_collision(qmap)
        if collision is None:
            raise ValueError("critical orbits do not collide")
    ell = collision.ell
    # discriminants are expanded up to level ell-1 (level ell when delta
    # is not a square); cap the expansion degree 2^n
    disc_top = min(N, ell if qmap.delta != 1 else ell - 1)
    if disc_top > disc_cap:
        raise ValueError("discriminant expansion guard exceeded; raise the cap")
    xi1, xi2 = collision.xi1, collision.xi2
    # forward orbit points of the critical values, over Q or Q(sqrt(delta))
    depth = max(N + 1, ell + 1)
    orb1 = forward_orbit(qmap, xi1, depth)
    orb2 = forward_orbit(qmap, xi2, depth)
    s0, t0 = x0.s, x0.t
    entries = []
    for n in range(1, N + 1):
        if n <= ell - 1:
            val = discriminant(iterated_H(qmap.pair, s0, t0, n))
            entries.append(_as_entry(n, val, KAPPA_CASE_DISC))
        elif n == ell:
            entries.append(_kappa_ell(qmap, x0, collision, orb1, orb2, s0, t0))
        else:
            val = _cr(x0, orb1[n - ell + 1], orb2[n], orb2[1])
            entries.append(_as_entry(n, val, KAPPA_CASE_CROSS))
    lst = KappaList(x0, ell, N, qmap.delta, tuple(entries))
    _check_kappa_invariants(lst)
    return lst


def _kappa_ell(qmap, x0, collision, orb1, orb2, s0, t0) -> KappaEntry:
    ell = collision.ell
    if qmap.delta != 1:
        val = discriminant(iterated_H(qmap.pair, s0, t0, ell))
        return _as_entry(ell, val, KAPPA_CASE_ELL_DISC)
    if ell >= 3:
        # (f(xi2) - f^{ell-1}(xi2)) / (f(xi2) - f^{ell-1}(xi1)), taken
        # projectively as a cross ratio with infinity
        ratio = _cr(orb2[1], orb2[ell - 1], orb1[ell - 1], INFTY)
        cr = _cr(x0, orb1[1], orb2[ell], orb2[1])
        if ratio is Infinity or cr is Infinity:
            val = Infinity if cr is Infinity else ratio
        else:
            val = ratio * cr
        return _as_entry(ell, val, KAPPA_CASE_ELL_RATIO)
    # ell = 2 with rational critical points
    eta2, theta2 = collision.xi2.s, collision.xi2.t
    form = qmap.pair.P.scale(theta2) - qmap.pair.Q.scale(eta2)
    dform = discriminant(form)
    cr = _cr(x0, orb1[1], orb2[2], orb2[1])
    val = Infinity if cr is Infinity else dform * cr
    return _as_entry(2, val, KAPPA_CASE_ELL_FORM)


def _check_kappa_invariants(lst: KappaList) -> None:
    for e in lst.entries:
        if e.n <= lst.ell - 1 and isinstance(e.value, QuadElem):
            raise AssertionError("kappa below the collision level must be "
                                 "rational")
    if lst.delta != 1 and lst.N >= lst.ell:
        e = lst.entries[lst.ell - 1]
        if e.zero_reason is None:
            v = e.value
            if isinstance(v, QuadElem):
                raise AssertionError("kappa_ell must be rational")
            if not is_square_Q(v * lst.delta):
                raise AssertionError("kappa_ell * delta is not a rational "
                                     "square")


# -- the q and r quantities of the preimage-product identities ----------

def _nf_orbits(A: Rat, B: Rat, C: Rat, depth: int):
    qmap = build_map((A, 0, B), (1, 0, C))
    orb_inf = forward_orbit(qmap, INFTY, depth)
    orb_zero = forward_orbit(qmap, ZERO, depth)
    return orb_inf, orb_zero


def _finite_ratio(a: ProjPoint, b: ProjPoint, c: ProjPoint) -> Fraction:
    """(a - b)/(a - c) for finite distinct configurations."""
    val = cross_ratio(a, b, c, INFTY)
    if val is Infinity:
        raise ArithmeticError("orbit ratio denominator vanishes")
    return val


def q_value(A: Rat, B: Rat, C: Rat, ell: int) -> Fraction:
    """q_{ell-1} = (-C)^{2^{ell-2}} prod_{i=2}^{ell-1}
    ((f(inf) - f^i(inf))/(f(inf) - f^i(0)))^{2^{ell-i-1}}."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    return q_general(A, B, C, ell - 1)


def q_general(A: Rat, B: Rat, C: Rat, n: int) -> Fraction:
    """q_n = (-C)^{2^{n-1}} prod_{i=2}^{n}
    ((f(inf) - f^i(inf))/(f(inf) - f^i(0)))^{2^{n-i}}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    A, B, C = Fraction(A), Fraction(B), Fraction(C)
    orb_inf, orb_zero = _nf_orbits(A, B, C, n)
    out = (-C) ** (2 ** (n - 1))
    for i in range(2, n + 1):
        ratio = _finite_ratio(orb_inf[1], orb_inf[i], orb_zero[i])
        out *= ratio ** (2 ** (n - i))
    if not out:
        raise ArithmeticError("q vanishes: orbit degeneracy")
    return out


def r_value(A: Rat, B: Rat, C: Rat, n: int, ell: int) -> Fraction:
    """r_n = (4 q_{ell-1})^{2^{n-ell-1}} prod_{i=1}^{n-ell}
    ((f^{ell+i-1}(inf) - f(inf))/(f^i(0) - f(inf)))^{2^{n-ell-i}}."""
    if n < ell + 1:
        raise ValueError("n must be >= ell + 1")
    A, B, C = Fraction(A), Fraction(B), Fraction(C)
    orb_inf, orb_zero = _nf_orbits(A, B, C, n)
    q = q_value(A, B, C, ell)
    out = (4 * q) ** (2 ** (n - ell - 1))
    for i in range(1, n - ell + 1):
        ratio = _ratio_of_differences(orb_inf[ell + i - 1], orb_zero[i], orb_inf[1])
        out *= ratio ** (2 ** (n - ell - i))
    if not out:
        raise ArithmeticError("r vanishes: orbit degeneracy")
    return out


def _ratio_of_differences(p: ProjPoint, q: ProjPoint, w: ProjPoint) -> Fraction:
    """(p - w)/(q - w) for finite points."""
    return (p.affine() - w.affine()) / (q.affine() - w.affine())


# -- text formats -------------------------------------------------------

def parse_map_text(text: str):
    """Parse the two-line "P: c0 c1 c2" / "Q: c0 c1 c2" format, with an
    optional "x0: s t" line; returns (QuadMap, x0 or None)."""
    pc = qc = x0 = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        toks = rest.split()
        key = key.strip().lower()
        if key == "p":
            pc = [parse_rat(t) for t in toks]
        elif key == "q":
            qc = [parse_rat(t) for t in toks]
        elif key == "x0":
            if len(toks) != 2:
                raise ValueError("x0 line needs two coordinates")
            x0 = ProjPoint(parse_rat(toks[0]), parse_rat(toks[1]))
        else:
            raise ValueError(f"unknown line key: {key!r}")
    if pc is None or qc is None:
        raise ValueError("map text needs both a P: and a Q: line")
    return build_map(pc, qc), x0


def format_point(p: ProjPoint) -> str:
    return f"{format_elem(p.s)} {format_elem(p.t)}"
