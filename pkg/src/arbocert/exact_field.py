"""Exact arithmetic: rationals, quadratic extensions Q(sqrt(d)), projective
points, cross ratios, square testing, and F2 square-class linear algebra.

Rationals are plain ``fractions.Fraction``; elements of Q(sqrt(d)) are
``QuadElem``.  All values are immutable and hashable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from sympy import factorint

Rat = Fraction


class IndeterminateCrossRatio(ArithmeticError):
    """Raised when a cross ratio degenerates to 0/0."""


class _Infinity:
    """Sentinel for the value of a cross ratio whose denominator vanishes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinity"


Infinity = _Infinity()


def squarefree_part(n) -> int:
    """Squarefree kernel of a nonzero rational, keeping the sign.

    For p/q this is the squarefree kernel of p*q, the unique squarefree
    integer in the same rational square class.
    """
    n = Fraction(n)
    if n == 0:
        raise ValueError("squarefree part of 0 is undefined")
    n = n.numerator * n.denominator
    sign = -1 if n < 0 else 1
    out = sign
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


def _is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_square_Q(x: Rat) -> bool:
    """True iff x is the square of a rational (0 counts as a square)."""
    x = Fraction(x)
    return _is_square_int(x.numerator) and _is_square_int(x.denominator)


def sqrt_Q(x: Rat) -> Rat:
    """Exact rational square root; raises if x is not a rational square."""
    x = Fraction(x)
    if not is_square_Q(x):
        raise ValueError(f"{x} is not a rational square")
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


@dataclass(frozen=True)
class QuadElem:
    """An element a + b*sqrt(d) of Q(sqrt(d)), with d squarefree, d != 0, 1."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d in (0, 1) or squarefree_part(self.d) != self.d:
            raise ValueError(f"d = {self.d} must be squarefree and not 0 or 1")

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise ValueError(f"mixed fields sqrt({self.d}) vs sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d*b^2, a rational number."""
        return self.a * self.a - self.d * self.b * self.b

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        inv = QuadElem(o.a / n, -o.b / n, self.d)
        return self * inv

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            return QuadElem(Fraction(1), Fraction(0), self.d) / self ** (-e)
        out = QuadElem(Fraction(1), Fraction(0), self.d)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElem):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"({self.a}+{self.b}*sqrt({self.d}))"


FieldElem = Union[Fraction, QuadElem]


def conjugate(x: FieldElem) -> FieldElem:
    return x.conjugate() if isinstance(x, QuadElem) else x


def as_rational(x: FieldElem) -> Fraction:
    """Extract the rational value of x, which must lie in Q."""
    if isinstance(x, QuadElem):
        if x.b != 0:
            raise ValueError(f"{x} is not rational")
        return x.a
    return Fraction(x)


def is_square_quad(x: QuadElem) -> bool:
    """True iff x is a square in Q(sqrt(d)).

    For x = a + b*sqrt(d) with b != 0: x = y^2 is solvable iff the norm
    a^2 - d b^2 is a rational square n^2 and one of (a+n)/2, (a-n)/2 is a
    rational square u^2 (then y = u + (b/2u) sqrt(d)).
    """
    if x.b == 0:
        return is_square_Q(x.a) or is_square_Q(x.a / x.d)
    n2 = x.norm()
    if not is_square_Q(n2):
        return False
    n = sqrt_Q(n2)
    return is_square_Q((x.a + n) / 2) or is_square_Q((x.a - n) / 2)


def is_square_in(x: FieldElem, d: int | None) -> bool:
    """Square test in Q (d is None) or in Q(sqrt(d))."""
    if d is None:
        return is_square_Q(as_rational(x))
    if not isinstance(x, QuadElem):
        x = QuadElem(Fraction(x), Fraction(0), d)
    return is_square_quad(x)


# -- projective points --------------------------------------------------

def _canonical_pair(s: FieldElem, t: FieldElem):
    """Scale (s, t) to a canonical representative.

    Rational pairs become primitive integer pairs with t > 0, or (1, 0).
    Pairs over Q(sqrt(d)) become (x, 1) or (1, 0).
    """
    if isinstance(s, QuadElem) or isinstance(t, QuadElem):
        d = s.d if isinstance(s, QuadElem) else t.d
        if not isinstance(s, QuadElem):
            s = QuadElem(Fraction(s), Fraction(0), d)
        if not isinstance(t, QuadElem):
            t = QuadElem(Fraction(t), Fraction(0), d)
        if t:
            x = s / t
            if x.is_rational:
                return _canonical_pair(x.a, Fraction(1))
            return (x, QuadElem(Fraction(1), Fraction(0), d))
        return (QuadElem(Fraction(1), Fraction(0), d), QuadElem(Fraction(0), Fraction(0), d))
    s = Fraction(s)
    t = Fraction(t)
    if t == 0:
        return (Fraction(1), Fraction(0))
    x = s / t
    g = math.gcd(x.numerator, x.denominator)  # already reduced; g == 1
    return (Fraction(x.numerator), Fraction(x.denominator))


@dataclass(frozen=True)
class ProjPoint:
    """A point [s : t] of P^1 over Q or Q(sqrt(d)), stored canonically."""

    s: FieldElem
    t: FieldElem

    def __post_init__(self):
        if not self.s and not self.t:
            raise ValueError("(0, 0) is not a projective point")
        s, t = _canonical_pair(self.s, self.t)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def is_infinity(self) -> bool:
        return not self.t

    def affine(self) -> FieldElem:
        if self.is_infinity:
            raise ValueError("the point at infinity has no affine value")
        return self.s / self.t

    def conjugate(self) -> "ProjPoint":
        return ProjPoint(conjugate(self.s), conjugate(self.t))

    def __repr__(self):
        return f"[{self.s}:{self.t}]"


def pdet(p: ProjPoint, q: ProjPoint) -> FieldElem:
    """The determinant p.s*q.t - p.t*q.s; zero iff p == q in P^1."""
    return p.s * q.t - p.t * q.s


def cross_ratio(a: ProjPoint, b: ProjPoint, c: ProjPoint, e: ProjPoint):
    """Cross ratio (a-b)(c-e) / ((a-c)(b-e)), computed projectively.

    Returns the field value, or Infinity when only the denominator
    vanishes.  Raises IndeterminateCrossRatio on 0/0.
    """
    num = pdet(a, b) * pdet(c, e)
    den = pdet(a, c) * pdet(b, e)
    if not den:
        if not num:
            raise IndeterminateCrossRatio("0/0 cross ratio")
        return Infinity
    return num / den


# -- square classes over Q ---------------------------------------------

@dataclass(frozen=True)
class SquareClassVec:
    """Image of a nonzero rational in Q^x/(Q^x)^2 as an F2 vector.

    ``negative`` is the sign bit; ``primes`` is the set of primes with odd
    exponent.  The class is trivial iff the element is a nonzero square.
    """

    negative: bool
    primes: frozenset

    def __mul__(self, other: "SquareClassVec") -> "SquareClassVec":
        return SquareClassVec(
            self.negative ^ other.negative,
            self.primes ^ other.primes,
        )

    @property
    def is_trivial(self) -> bool:
        return not self.negative and not self.primes

    def bits(self, support: Sequence[int]) -> int:
        """Pack into an integer: sign bit then one bit per support prime."""
        missing = self.primes - set(support)
        if missing:
            raise ValueError(f"support misses primes {sorted(missing)}")
        out = 1 if self.negative else 0
        for i, p in enumerate(support):
            if p in self.primes:
                out |= 1 << (i + 1)
        return out


def square_class(x: Rat) -> SquareClassVec:
    """Square class of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no square class")
    k = squarefree_part(x.numerator * x.denominator)
    return SquareClassVec(k < 0, frozenset(factorint(abs(k)).keys()))


def _reduce(v: int, basis: dict) -> int:
    """Reduce v against a {leading_bit: vector} echelon basis."""
    while v:
        lead = v.bit_length() - 1
        if lead not in basis:
            break
        v ^= basis[lead]
    return v


def _span_contains(vectors: Iterable[int], target: int) -> bool:
    basis: dict = {}
    for v in vectors:
        v = _reduce(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return _reduce(target, basis) == 0


def _rank(vectors: Iterable[int]) -> int:
    basis: dict = {}
    for v in vectors:
        v = _reduce(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return len(basis)


def dependent_subset(vs: Sequence[SquareClassVec]) -> list | None:
    """Smallest-by-lex nonempty 0-based index subset whose product is trivial.

    Returns None when the classes are F2-linearly independent.  Subsets are
    compared as sorted index tuples (a proper prefix is smaller).
    """
    if not vs:
        raise ValueError("empty list")
    support = sorted(set().union(*(v.primes for v in vs)))
    masks = [v.bits(support) for v in vs]
    n = len(masks)
    if _rank(masks) == n:
        return None
    chosen: list = []
    acc = 0
    start = 0
    while True:
        for i in range(start, n):
            nxt = acc ^ masks[i]
            if nxt == 0:
                return chosen + [i]
            if _span_contains(masks[i + 1:], nxt):
                chosen.append(i)
                acc = nxt
                start = i + 1
                break
        else:
            raise AssertionError("dependency vanished during greedy search")


def kernel_basis(masks: Sequence[int]) -> list:
    """Basis of {indicator u : XOR of masks[i] over bits of u is 0}.

    Indicators are integers with bit i standing for index i.
    """
    rows: dict = {}  # leading_bit -> (vector, indicator)
    kernel = []
    for i, v in enumerate(masks):
        ind = 1 << i
        while v:
            lead = v.bit_length() - 1
            if lead not in rows:
                break
            bv, bind = rows[lead]
            v ^= bv
            ind ^= bind
        if v:
            rows[v.bit_length() - 1] = (v, ind)
        else:
            kernel.append(ind)
    return kernel


def format_rat(x: Rat) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_elem(x: FieldElem) -> str:
    if isinstance(x, QuadElem):
        if x.b == 0:
            return format_rat(x.a)
        return f"{format_rat(x.a)}+{format_rat(x.b)}*sqrt({x.d})"
    return format_rat(x)


def parse_rat(text: str) -> Rat:
    return Fraction(text.strip())
