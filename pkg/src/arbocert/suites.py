"""Seeded verification suites.

Every suite draws all randomness from one explicit ``random.Random`` so a
seed fully determines the run.  Suites return a SuiteResult with the
number of checks performed and serialized counterexamples for any
failures; they are shared by the command-line ``verify`` subcommand and
the test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import tree_group as tg
from .binary_forms import (
    BForm,
    FormPair,
    check_compdisc,
    check_compres,
    check_iterdisc,
    check_polyiter,
    critical_lifts,
    discriminant,
    homog_differential,
    lift_product_H,
    resultant,
)
from .certify import (
    certify_max,
    subset_square_bruteforce,
    subset_square_search,
    verify_lemma_Qn,
    verify_lemma_Rn,
    verify_preimage_square_product,
)
from .dynamics import (
    build_map,
    conjugate_map,
    detect_collision,
    normal_form,
)
from .exact_field import ProjPoint, QuadElem, is_square_Q

# Colliding quadratic maps (P coefficients, Q coefficients) with a
# default base point; derived so the critical orbits meet at iterate ell.
COLLIDING_INSTANCES = [
    # (name, P, Q, x0, ell, delta)
    ("golden-l2", (2, 0, -2), (1, 0, 1), (3, 1), 2, 1),
    ("l2-b", (3, 0, -6), (1, 0, 2), (5, 1), 2, 1),
    ("l2-c", (5, 0, -15), (1, 0, 3), (7, 1), 2, 1),
    ("l3", (0, 0, 4), (1, 0, -2), (5, 1), 3, 1),
    ("delta2", (1, 4, 2), (2, 6, 4), (3, 1), 2, 2),
    ("delta5", (1, 10, 5), (1, 6, 5), (7, 1), 2, 5),
]

GOLDEN = COLLIDING_INSTANCES[0]


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, passed: bool, detail: str) -> None:
        self.checks += 1
        if not passed:
            self.failures.append(detail)

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        out = f"suite {self.name}: {status} ({self.checks} checks)"
        for f in self.failures[:5]:
            out += f"\n  counterexample: {f}"
        return out


# -- random generators --------------------------------------------------

def _rat(rng: random.Random, span: int = 6) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def _nonzero_rat(rng: random.Random, span: int = 6) -> Fraction:
    while True:
        v = _rat(rng, span)
        if v:
            return v


def _random_form(rng: random.Random, m: int, span: int = 4) -> BForm:
    while True:
        coeffs = tuple(Fraction(rng.randint(-span, span)) for _ in range(m + 1))
        if any(coeffs):
            return BForm(coeffs)


def _random_pair(rng: random.Random, m: int, span: int = 4) -> FormPair:
    while True:
        P = _random_form(rng, m, span)
        Q = _random_form(rng, m, span)
        try:
            return FormPair(P, Q)
        except (ValueError, ZeroDivisionError):
            continue


# -- group suites -------------------------------------------------------

def suite_groups(rng: random.Random) -> SuiteResult:
    """Orders of the parity groups, sign oracle, membership closure."""
    res = SuiteResult("groups")
    for ell, n in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)]:
        count = sum(1 for _ in tg.enumerate_M(ell, n))
        expect = 1 << tg.M_order_log2(ell, n)
        res.check(count == expect, f"|M_{ell},{n}| = {count}, expected {expect}")
        if n <= 3:
            brute = sum(1 for s in tg.enumerate_aut(n) if tg.in_M(s, ell))
            res.check(count == brute, f"enumeration vs filter at ({ell},{n})")
    # sign oracle: closed form vs permutation parity
    for _ in range(60):
        n = rng.randint(1, 4)
        sigma = tg.random_aut(n, rng)
        k = rng.randint(0, n - 1)
        y = tuple(rng.randint(0, 1) for _ in range(k))
        m = rng.randint(1, n - k)
        ok = tg.sgn(sigma, y, m) == tg.sgn_bruteforce(sigma, y, m)
        res.check(ok, f"sgn mismatch: {sigma.to_hex()} y={y} m={m}")
    # membership is closed under composition and inverse
    for _ in range(40):
        ell, n = rng.choice([(2, 3), (2, 4), (3, 4)])
        a = tg.random_M_element(ell, n, rng)
        b = tg.random_M_element(ell, n, rng)
        ok = tg.in_M(a, ell) and tg.in_M(tg.compose(a, b), ell) \
            and tg.in_M(tg.invert(a), ell)
        res.check(ok, f"M not closed at ({ell},{n}): {a.to_hex()} {b.to_hex()}")
    # hex round trip
    for _ in range(20):
        sigma = tg.random_aut(rng.randint(1, 5), rng)
        res.check(tg.TreeAut.from_hex(sigma.to_hex()) == sigma,
                  f"hex round trip {sigma.to_hex()}")
    return res


def suite_abelian(rng: random.Random) -> SuiteResult:
    """Parity-vector map: surjective homomorphism onto {±1}^n with
    kernel equal to the commutator subgroup."""
    res = SuiteResult("abelian")
    for ell, n in [(2, 2), (2, 3), (3, 3)]:
        elements = list(tg.enumerate_M(ell, n))
        images = {tg.abelianize(s, ell) for s in elements}
        res.check(len(images) == 1 << n,
                  f"image size {len(images)} != 2^{n} at ({ell},{n})")
        # homomorphism on sampled pairs
        for _ in range(40):
            a, b = rng.choice(elements), rng.choice(elements)
            lhs = tg.abelianize(tg.compose(a, b), ell)
            rhs = tuple(x * y for x, y in
                        zip(tg.abelianize(a, ell), tg.abelianize(b, ell)))
            res.check(lhs == rhs, f"not a homomorphism at ({ell},{n})")
        kernel = {s for s in elements
                  if all(e == 1 for e in tg.abelianize(s, ell))}
        comms = {tg.commutator(a, b) for a in elements for b in elements}
        derived = tg.closure(comms)
        res.check(kernel == derived,
                  f"kernel ({len(kernel)}) != commutator subgroup "
                  f"({len(derived)}) at ({ell},{n})")
    return res


def _odd_level_mask(rng: random.Random, n: int) -> int:
    """Random odd-popcount mask over the 2^{n-1} top-level nodes."""
    bits = rng.getrandbits(1 << (n - 1))
    if bits.bit_count() % 2 == 0:
        bits ^= 1
    return bits << ((1 << (n - 1)) - 1)


def _odd_cousins_top(rng: random.Random, ell: int, n: int) -> tg.TreeAut:
    """An element trivial below the top level that is an (ell,n)-odd
    cousins map: above each level-(n-ell) node, both child sign blocks
    get a common parity, with an odd number of odd choices."""
    width = 1 << (ell - 2)  # top-level bits per child block
    negatives = [rng.getrandbits(1) for _ in range(1 << (n - ell))]
    if sum(negatives) % 2 == 0:
        negatives[0] ^= 1
    bits = 0
    base = (1 << (n - 1)) - 1
    block = 0
    for neg in negatives:
        for _child in range(2):
            pat = rng.getrandbits(width) if width > 1 else neg
            if width > 1:
                if pat.bit_count() % 2 != neg:
                    pat ^= 1
            bits |= pat << (base + block * width)
            block += 1
    return tg.TreeAut(n, bits)


def suite_generate(rng: random.Random, trials: int = 20) -> SuiteResult:
    """Generation criteria: a set restricting onto the full group one
    level down plus a top-level odd element generates the full group;
    likewise inside the parity group with an odd cousins element."""
    res = SuiteResult("generate")
    for _ in range(trials):
        n = rng.randint(2, 3)
        gens = []
        while True:
            gens.append(tg.random_aut(n, rng))
            below = tg.closure(tg.restrict(g, n - 1) for g in gens)
            if len(below) == 1 << ((1 << (n - 1)) - 1):
                break
        sigma_n = tg.TreeAut(n, _odd_level_mask(rng, n))
        full = tg.closure(gens + [sigma_n])
        res.check(len(full) == 1 << ((1 << n) - 1),
                  f"full-group generation failed at n={n}: "
                  + " ".join(g.to_hex() for g in gens + [sigma_n]))
    for _ in range(trials):
        ell = 2
        n = rng.randint(ell, 3)
        target_below = 1 << tg.M_order_log2(ell, n - 1)
        gens = []
        while True:
            gens.append(tg.random_M_element(ell, n, rng))
            below = tg.closure(tg.restrict(g, n - 1) for g in gens)
            if len(below) == target_below:
                break
        sigma_n = _odd_cousins_top(rng, ell, n)
        res.check(tg.in_M(sigma_n, ell) and
                  tg.cousins_parity(sigma_n, (), ell, n) == -1,
                  f"constructed element not odd cousins: {sigma_n.to_hex()}")
        full = tg.closure(gens + [sigma_n])
        res.check(len(full) == 1 << tg.M_order_log2(ell, n),
                  f"parity-group generation failed at (l={ell},n={n}): "
                  + " ".join(g.to_hex() for g in gens + [sigma_n]))
    return res


# -- form identity suites -----------------------------------------------

def suite_forms(rng: random.Random, count: int = 200, dpq_count: int = 500) -> SuiteResult:
    """Exact resultant/discriminant identities on random instances."""
    res = SuiteResult("forms")
    for _ in range(count):
        m = rng.randint(1, 3)
        pair = _random_pair(rng, m)
        ab = [_rat(rng) for _ in range(4)]
        if not any(ab[:2]):
            ab[0] = Fraction(1)
        if not any(ab[2:]):
            ab[3] = Fraction(1)
        res.check(check_compres(pair, *ab),
                  f"composed-resultant identity: {pair.P.to_text()} | "
                  f"{pair.Q.to_text()} | {ab}")
    for _ in range(count):
        m = rng.randint(2, 3)
        n = rng.randint(2, 3)
        pair = _random_pair(rng, m)
        J = _random_form(rng, n)
        res.check(check_compdisc(pair, J),
                  f"composed-discriminant identity: {pair.P.to_text()} | "
                  f"{pair.Q.to_text()} | {J.to_text()}")
    done = 0
    while done < count:
        n = rng.randint(1, 4) if done % 4 else 4
        pair = _random_pair(rng, 2, span=3)
        s0, t0 = _rat(rng), _nonzero_rat(rng)
        try:
            ok = check_iterdisc(pair, s0, t0, n)
        except (ValueError, ZeroDivisionError, AssertionError):
            continue  # degenerate critical data; redraw
        res.check(ok, f"iterated-discriminant identity: {pair.P.to_text()} | "
                      f"{pair.Q.to_text()} | x0=({s0},{t0}) n={n}")
        done += 1
    for _ in range(dpq_count):
        m = rng.randint(2, 3)
        pair = _random_pair(rng, m)
        D = homog_differential(pair)  # internally checks both quotients agree
        res.check(D.degree == 2 * m - 2, "differential degree")
        if m == 2:
            res.check(discriminant(D) == 4 * pair.res(),
                      f"differential discriminant: {pair.P.to_text()} | "
                      f"{pair.Q.to_text()}")
    done = 0
    while done < count:
        d = rng.choice([2, 3])
        n = rng.randint(1, 2)
        coeffs = [_nonzero_rat(rng, 3)] + [_rat(rng, 3) for _ in range(d)]
        x0 = _rat(rng)
        try:
            ok = check_polyiter(coeffs, x0, n)
        except (ValueError, ZeroDivisionError):
            continue
        res.check(ok, f"polynomial iterate discriminant: f={coeffs} x0={x0} n={n}")
        done += 1
    return res


def suite_discsquare(rng: random.Random) -> SuiteResult:
    """On colliding instances: Res(P,Q) * prod_i H_ell(eta_i, theta_i)
    and prod_i H_n(eta_i, theta_i) for n = ell+1, ell+2 are rational
    squares."""
    res = SuiteResult("discsquare")
    for name, P, Q, x0, ell, delta in COLLIDING_INSTANCES:
        qmap = build_map(P, Q)
        col = detect_collision(qmap)
        res.check(col is not None and col.ell == ell and qmap.delta == delta,
                  f"{name}: collision data changed")
        pair = qmap.pair
        lifts = qmap.lifts
        for trial in range(3):
            s0 = Fraction(x0[0] + trial, x0[1])
            t0 = Fraction(1)
            at_ell = pair.res() * lift_product_H(pair, s0, t0, ell, lifts)
            res.check(at_ell != 0 and is_square_Q(at_ell),
                      f"{name}: Res * critical product at level {ell} "
                      f"not a square for x0={s0}: {at_ell}")
            for n in (ell + 1, ell + 2):
                v = lift_product_H(pair, s0, t0, n, lifts)
                res.check(v != 0 and is_square_Q(v),
                          f"{name}: critical product at level {n} "
                          f"not a square for x0={s0}: {v}")
    return res


# -- numeric lemma suite -------------------------------------------------

def suite_lemmas(rng: random.Random, precision: int = 256) -> SuiteResult:
    """Preimage-product identities on the numeric tree, for every
    rational-critical-point instance, n up to ell + 3."""
    res = SuiteResult("lemmas")
    for name, P, Q, x0, ell, delta in COLLIDING_INSTANCES:
        if delta != 1:
            continue
        qmap = build_map(P, Q)
        nf = normal_form(qmap)
        done = 0
        while done < 3:
            x = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
            try:
                rep = verify_lemma_Qn(nf, x, ell, precision)
                reps = [verify_lemma_Rn(nf, x, ell, n, precision)
                        for n in range(ell + 1, ell + 4)]
                claim = verify_preimage_square_product(nf, x, 4, precision)
            except (ValueError, ArithmeticError):
                continue  # x hit an orbit degeneracy; redraw
            for r in [rep] + reps + [claim]:
                res.check(r.ok, f"{name}: {r.identity} n={r.n} x={x} "
                                f"rel_error={r.rel_error}")
            done += 1
    return res


# -- certificate suites --------------------------------------------------

def _mobius_inverse_point(p: ProjPoint, a, b, c, d) -> ProjPoint:
    """Image of p under the inverse of z -> (az+b)/(cz+d)."""
    return ProjPoint(d * p.s - b * p.t, -c * p.s + a * p.t)


def suite_certificates(rng: random.Random, trials: int = 50) -> SuiteResult:
    """Verdict invariance under rational coordinate changes and
    re-scalings of the defining forms."""
    res = SuiteResult("certificates")
    for name, P, Q, x0, ell, delta in [GOLDEN, COLLIDING_INSTANCES[4]]:
        qmap = build_map(P, Q)
        x0p = ProjPoint(Fraction(x0[0]), Fraction(x0[1]))
        base = certify_max(qmap, x0p, 5)
        for _ in range(trials):
            if rng.getrandbits(1):
                # coordinate change by a random invertible Mobius map
                while True:
                    a, b, c, d = (Fraction(rng.randint(-3, 3)) for _ in range(4))
                    if a * d - b * c:
                        break
                try:
                    qc = conjugate_map(qmap, a, b, c, d)
                except (ValueError, ZeroDivisionError):
                    continue
                xc = _mobius_inverse_point(x0p, a, b, c, d)
                try:
                    cert = certify_max(qc, xc, 5)
                except (ValueError, ZeroDivisionError):
                    continue
            else:
                # re-lift: rescale both defining forms by a common factor
                lam = _nonzero_rat(rng)
                qc = build_map([lam * Fraction(v) for v in P],
                               [lam * Fraction(v) for v in Q])
                cert = certify_max(qc, x0p, 5)
            res.check(cert.verdict == base.verdict,
                      f"{name}: verdict changed {base.verdict} -> "
                      f"{cert.verdict}")
    return res


def suite_subsets(rng: random.Random, lists: int = 200, nmax: int = 12) -> SuiteResult:
    """Filtered subset-square search vs exhaustive scan, both fields."""
    res = SuiteResult("subsets")
    primes = [2, 3, 5, 7, 11]
    for case in ("rational", "quadratic"):
        for _ in range(lists):
            n = rng.randint(1, nmax)
            if case == "rational":
                d = None
                vals = []
                for _ in range(n):
                    v = Fraction(1)
                    for p in primes:
                        v *= Fraction(p) ** rng.randint(0, 2)
                    if rng.getrandbits(1):
                        v = -v
                    vals.append(v / rng.randint(1, 4))
            else:
                d = rng.choice([2, 3, 5, -1, 6])
                vals = []
                for _ in range(n):
                    if rng.getrandbits(1):
                        while True:
                            a = Fraction(rng.randint(-8, 8), rng.randint(1, 3))
                            b = Fraction(rng.randint(-8, 8), rng.randint(1, 3))
                            if a or b:
                                break
                        vals.append(QuadElem(a, b, d))
                    else:
                        vals.append(_nonzero_rat(rng, 12))
            got = subset_square_search(vals, d)
            exp = subset_square_bruteforce(vals, d)
            res.check(got == exp,
                      f"search mismatch d={d} values={vals}: {got} vs {exp}")
    return res


ALL_SUITES = {
    "groups": suite_groups,
    "abelian": suite_abelian,
    "generate": suite_generate,
    "forms": suite_forms,
    "discsquare": suite_discsquare,
    "lemmas": suite_lemmas,
    "certificates": suite_certificates,
    "subsets": suite_subsets,
}


def run_suites(names=None, seed: int = 0, precision: int = 256) -> list:
    """Run the named suites (all by default) in fixed order, each with
    its own generator derived from the seed."""
    if names is None:
        names = list(ALL_SUITES)
    unknown = [n for n in names if n not in ALL_SUITES]
    if unknown:
        raise ValueError(f"unknown suites: {unknown}; "
                         f"available: {sorted(ALL_SUITES)}")
    out = []
    for name in ALL_SUITES:
        if name not in names:
            continue
        rng = random.Random(f"{seed}:{name}")
        if name == "lemmas":
            out.append(ALL_SUITES[name](rng, precision=precision))
        else:
            out.append(ALL_SUITES[name](rng))
    return out
