"""Automorphisms of the rooted binary tree T_n as swap-bit portraits.

A depth-n automorphism stores one swap bit per internal node (2^n - 1 bits
total).  Node labels are bit tuples; the node s1..sk maps to the integer
(2^k - 1) + (s1..sk read as binary, s1 most significant), which indexes the
portrait in breadth-first order.  The action on a word s1..sn produces
t1..tn with t_{k+1} = s_{k+1} XOR bit(s1..sk), the bit being indexed by the
original (pre-image) prefix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

Label = tuple  # tuple of 0/1 ints; () is the root

FULL_ENUM_MAX_DEPTH = 15
CLOSURE_MAX_SIZE = 1 << 20
ENUM_MAX_COUNT = 1 << 20


class SizeGuardError(RuntimeError):
    """A desk-scale enumeration guard was exceeded."""


def label_index(w: Label) -> int:
    k = len(w)
    v = 0
    for b in w:
        v = (v << 1) | b
    return (1 << k) - 1 + v


def level_slice(level: int) -> tuple:
    """(start, count) of the portrait indices of the nodes at one level."""
    return (1 << level) - 1, 1 << level


@dataclass(frozen=True)
class TreeAut:
    """An automorphism of T_n; ``bits`` packs the 2^n - 1 swap bits.

    Bit i of ``bits`` is the swap bit of the node with label_index i.
    """

    depth: int
    bits: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.bits < 0 or self.bits >> ((1 << self.depth) - 1):
            raise ValueError("portrait has wrong bit length")

    # -- basic action ---------------------------------------------------
    def swap_bit(self, w: Label) -> int:
        if len(w) >= self.depth:
            raise ValueError("swap bits exist only below the top level")
        return (self.bits >> label_index(w)) & 1

    def apply(self, w: Label) -> Label:
        """Image of a node label of any length <= depth."""
        if len(w) > self.depth:
            raise ValueError("label deeper than the tree")
        out = []
        prefix = 0  # integer value of the original prefix s1..sk
        for k, s in enumerate(w):
            idx = (1 << k) - 1 + prefix
            out.append(s ^ ((self.bits >> idx) & 1))
            prefix = (prefix << 1) | s
        return tuple(out)

    def apply_inverse(self, w: Label) -> Label:
        """Preimage of a node label: solvable prefix by prefix."""
        if len(w) > self.depth:
            raise ValueError("label deeper than the tree")
        out = []
        prefix = 0
        for k, t in enumerate(w):
            idx = (1 << k) - 1 + prefix
            s = t ^ ((self.bits >> idx) & 1)
            out.append(s)
            prefix = (prefix << 1) | s
        return tuple(out)

    def is_identity(self) -> bool:
        return self.bits == 0

    # -- serialization --------------------------------------------------
    def to_hex(self) -> str:
        nbits = (1 << self.depth) - 1
        width = (nbits + 3) // 4
        return f"{self.depth}:{self.bits:0{width}x}"

    @classmethod
    def from_hex(cls, text: str) -> "TreeAut":
        depth_s, _, hex_s = text.partition(":")
        return cls(int(depth_s), int(hex_s, 16))

    def __repr__(self):
        return f"TreeAut({self.to_hex()})"


def identity(n: int) -> TreeAut:
    return TreeAut(n, 0)


def single_swap(n: int, w: Label) -> TreeAut:
    """The automorphism with the one swap bit at node w set."""
    return TreeAut(n, 1 << label_index(w))


def compose(sigma: TreeAut, tau: TreeAut) -> TreeAut:
    """sigma o tau (apply tau first): bit(w) = tau.bit(w) ^ sigma.bit(tau(w))."""
    if sigma.depth != tau.depth:
        raise ValueError("depth mismatch")
    n = sigma.depth
    bits = 0
    for k in range(n):
        for w in product((0, 1), repeat=k):
            b = tau.swap_bit(w) ^ sigma.swap_bit(tau.apply(w))
            if b:
                bits |= 1 << label_index(w)
    return TreeAut(n, bits)


def invert(sigma: TreeAut) -> TreeAut:
    """bit(w) = sigma.bit(sigma^{-1}(w))."""
    n = sigma.depth
    bits = 0
    for k in range(n):
        for w in product((0, 1), repeat=k):
            if sigma.swap_bit(sigma.apply_inverse(w)):
                bits |= 1 << label_index(w)
    return TreeAut(n, bits)


def random_aut(n: int, rng: random.Random) -> TreeAut:
    return TreeAut(n, rng.getrandbits((1 << n) - 1))


# -- signs --------------------------------------------------------------

def _block_mask(y: Label, rel_level: int) -> int:
    """Mask of the portrait bits of the nodes rel_level levels above y."""
    k = len(y) + rel_level
    v = 0
    for b in y:
        v = (v << 1) | b
    start = (1 << k) - 1 + (v << rel_level)
    return ((1 << (1 << rel_level)) - 1) << start


def sgn(sigma: TreeAut, y: Label, m: int) -> int:
    """Sign of the permutation sigma induces on the 2^m labels above y.

    A swap k levels above y permutes the words m levels above y by
    2^{m-k-1} transpositions, odd only at k = m-1; so the sign is the
    parity of the swap bits exactly m-1 levels above y.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if len(y) + m > sigma.depth:
        raise ValueError("m reaches above the tree")
    ones = (sigma.bits & _block_mask(y, m - 1)).bit_count()
    return -1 if ones % 2 else 1


def sgn_bruteforce(sigma: TreeAut, y: Label, m: int) -> int:
    """Permutation-parity oracle: list all 2^m images and count cycles."""
    words = list(product((0, 1), repeat=m))
    index = {w: i for i, w in enumerate(words)}
    perm = [index[sigma.apply(y + w)[len(y):]] for w in words]
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def mtilde_common_sign(sigma: TreeAut, ell: int) -> int | None:
    """The common value of sgn_ell(sigma, y), or None if sigma is not in
    the level-ell constant-sign group.

    For depth < ell every automorphism qualifies with sign +1 (the finite
    quotients at those depths are all of Aut(T_n)).
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    n = sigma.depth
    if n < ell:
        return 1
    common = sgn(sigma, (), ell)
    for k in range(n - ell + 1):
        for y in product((0, 1), repeat=k):
            if sgn(sigma, y, ell) != common:
                return None
    return common


def in_M(sigma: TreeAut, ell: int) -> bool:
    return mtilde_common_sign(sigma, ell) == 1


def in_Mtilde(sigma: TreeAut, ell: int) -> bool:
    return mtilde_common_sign(sigma, ell) is not None


def acts_sign_above(sigma: TreeAut, w: Label, ell: int) -> int:
    """+1 / -1 if sigma acts ell-positively / ell-negatively above w.

    The two child signs sgn_{ell-1}(sigma, w0) and sgn_{ell-1}(sigma, w1)
    agree for members of the constant-sign group; disagreement is reported
    as an error since it certifies non-membership.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if len(w) + ell > sigma.depth:
        raise ValueError("ell reaches above the tree")
    s0 = sgn(sigma, w + (0,), ell - 1)
    s1 = sgn(sigma, w + (1,), ell - 1)
    if s0 != s1:
        raise ValueError("child signs disagree: element is outside M")
    return s0


def cousins_parity(sigma: TreeAut, x: Label, ell: int, n: int) -> int:
    """+1 for an (ell,n)-even cousins map above x, -1 for odd."""
    if n < ell:
        raise ValueError("n must be >= ell")
    if len(x) + n > sigma.depth:
        raise ValueError("n reaches above the tree")
    negatives = 0
    for w in product((0, 1), repeat=n - ell):
        if acts_sign_above(sigma, x + w, ell) < 0:
            negatives += 1
    return -1 if negatives % 2 else 1


def abelianize(sigma: TreeAut, ell: int) -> tuple:
    """The parity vector (e_1, ..., e_n) of sigma in M_{ell,n}.

    e_i is sgn_i at the root for i < ell and the (ell,i)-cousins parity
    above the root for i >= ell.
    """
    if not in_M(sigma, ell):
        raise ValueError("element is not in M")
    n = sigma.depth
    out = []
    for i in range(1, n + 1):
        if i <= ell - 1:
            out.append(sgn(sigma, (), i))
        else:
            out.append(cousins_parity(sigma, (), ell, i))
    return tuple(out)


# -- enumeration --------------------------------------------------------

def _sign_constraint_masks(ell: int, n: int) -> list:
    """Portrait-bit masks whose parities must vanish for membership in M.

    One mask per node y at levels 0..n-ell: the bits ell-1 levels above y.
    """
    masks = []
    for k in range(n - ell + 1):
        for y in product((0, 1), repeat=k):
            masks.append(_block_mask(y, ell - 1))
    return masks


def _portrait_kernel(ell: int, n: int) -> list:
    """F2 basis of the portrait space satisfying all sign constraints.

    Membership in M is a linear condition on the packed portrait: each
    constraint says an XOR of bits is 0.  Free variables give the basis.
    """
    nbits = (1 << n) - 1
    constraints: dict = {}  # leading bit -> mask, echelon form
    for mask in _sign_constraint_masks(ell, n):
        while mask:
            lead = mask.bit_length() - 1
            if lead not in constraints:
                constraints[lead] = mask
                break
            mask ^= constraints[lead]
    pivots = set(constraints)
    basis = []
    for j in range(nbits):
        if j in pivots:
            continue
        v = 1 << j
        # back-substitute: set pivot bits so every constraint holds
        changed = True
        while changed:
            changed = False
            for lead, mask in constraints.items():
                if (v & mask).bit_count() % 2:
                    v ^= 1 << lead
                    changed = True
        basis.append(v)
    return basis


def M_order_log2(ell: int, n: int) -> int:
    """log2 |M_{ell,n}|: 2^n - 1 below level ell, else 2^n - 2^{n-ell+1}."""
    if n <= ell - 1:
        return (1 << n) - 1
    return (1 << n) - (1 << (n - ell + 1))


def enumerate_aut(n: int) -> Iterator[TreeAut]:
    if n > FULL_ENUM_MAX_DEPTH:
        raise SizeGuardError(f"full Aut(T_n) enumeration capped at n <= {FULL_ENUM_MAX_DEPTH}")
    for bits in range(1 << ((1 << n) - 1)):
        yield TreeAut(n, bits)


def _enumerate_span(n: int, basis: list, offset: int = 0) -> Iterator[TreeAut]:
    if len(basis) > 20:
        raise SizeGuardError("subgroup enumeration capped at 2^20 elements")
    k = len(basis)
    cur = offset
    yield TreeAut(n, cur)
    # Gray code walk over the 2^k combinations
    for i in range(1, 1 << k):
        cur ^= basis[(i & -i).bit_length() - 1]
        yield TreeAut(n, cur)


def enumerate_M(ell: int, n: int) -> Iterator[TreeAut]:
    """All elements of M_{ell,n}, each exactly once."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if n < ell:
        yield from enumerate_aut(n)
        return
    yield from _enumerate_span(n, _portrait_kernel(ell, n))


def enumerate_Mtilde(ell: int, n: int) -> Iterator[TreeAut]:
    """All of the constant-sign group: M plus its negative-sign coset."""
    if n < ell:
        yield from enumerate_aut(n)
        return
    basis = _portrait_kernel(ell, n)
    yield from _enumerate_span(n, basis)
    # particular solution with common sign -1: one swap at the top of
    # every block, i.e. flip each constraint parity to odd
    offset = 0
    for k in range(n - ell + 1):
        for y in product((0, 1), repeat=k):
            w = y + (0,) * (ell - 1)
            offset |= 1 << label_index(w)
    probe = TreeAut(n, offset)
    if mtilde_common_sign(probe, ell) != -1:
        raise AssertionError("coset representative construction failed")
    yield from _enumerate_span(n, basis, offset)


def random_M_element(ell: int, n: int, rng: random.Random) -> TreeAut:
    if n < ell:
        return random_aut(n, rng)
    basis = _portrait_kernel(ell, n)
    bits = 0
    for b in basis:
        if rng.getrandbits(1):
            bits ^= b
    return TreeAut(n, bits)


def closure(generators: Iterable[TreeAut]) -> set:
    """Subgroup generated by the given automorphisms (BFS saturation)."""
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    depth = gens[0].depth
    if any(g.depth != depth for g in gens):
        raise ValueError("depth mismatch among generators")
    seen = {identity(depth)}
    frontier = [identity(depth)]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = compose(g, h)
                if p not in seen:
                    if len(seen) >= CLOSURE_MAX_SIZE:
                        raise SizeGuardError("closure exceeded 2^20 elements")
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return seen


def lift_trivially(sigma: TreeAut, n: int) -> TreeAut:
    """Extend to depth n by acting trivially above the old top level."""
    if n < sigma.depth:
        raise ValueError("cannot lift downward")
    return TreeAut(n, sigma.bits)


def restrict(sigma: TreeAut, m: int) -> TreeAut:
    """Restriction to the depth-m subtree (drop levels m and above)."""
    if m > sigma.depth:
        raise ValueError("cannot restrict upward")
    return TreeAut(m, sigma.bits & ((1 << ((1 << m) - 1)) - 1))


def commutator(a: TreeAut, b: TreeAut) -> TreeAut:
    return compose(compose(a, b), compose(invert(a), invert(b)))
