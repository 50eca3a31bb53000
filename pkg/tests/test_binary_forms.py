"""Homogeneous binary forms: resultants against root products,
discriminants, differentials, composition and iteration identities."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from arbocert.binary_forms import (
    BForm,
    FormPair,
    check_compdisc,
    check_compres,
    check_iterdisc,
    check_polyiter,
    critical_lifts,
    discriminant,
    form_from_roots,
    homog_differential,
    iterate_pair,
    iterated_H,
    lift_product_H,
    linear_form,
    resultant,
    transform,
)
from arbocert.exact_field import QuadElem


def _rand_roots(rng, m):
    out = []
    for _ in range(m):
        if rng.random() < 0.15:
            out.append((Fraction(1), Fraction(0)))  # root at infinity
        else:
            out.append((Fraction(rng.randint(-6, 6)), Fraction(rng.randint(1, 3))))
    return out


def test_resultant_is_root_product():
    rng = random.Random(1)
    for _ in range(60):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        roots_p = _rand_roots(rng, m)
        roots_q = _rand_roots(rng, n)
        P = form_from_roots(roots_p)
        Q = form_from_roots(roots_q)
        expect = Fraction(1)
        for a, b in roots_p:
            expect *= Q(a, b)
        assert resultant(P, Q) == expect
        sign = -1 if (m * n) % 2 else 1
        assert resultant(Q, P) == sign * resultant(P, Q)


def test_resultant_conventions():
    X = BForm((Fraction(1), Fraction(0)))
    Y = BForm((Fraction(0), Fraction(1)))
    # X = prod over the root [0:1], so Res(X, Y) = Y(0, 1) = 1
    assert resultant(X, Y) == 1
    assert resultant(Y, X) == -1
    const = BForm((Fraction(3),))
    Q = BForm((Fraction(1), Fraction(2), Fraction(5)))
    assert resultant(const, Q) == 9


def test_resultant_multiplicative():
    rng = random.Random(2)
    for _ in range(40):
        P1 = form_from_roots(_rand_roots(rng, rng.randint(1, 2)))
        P2 = form_from_roots(_rand_roots(rng, rng.randint(1, 2)))
        Q = form_from_roots(_rand_roots(rng, rng.randint(1, 2)))
        assert resultant(P1 * P2, Q) == resultant(P1, Q) * resultant(P2, Q)


def test_discriminant_from_roots():
    rng = random.Random(3)
    for _ in range(40):
        m = rng.randint(2, 4)
        roots = _rand_roots(rng, m)
        P = form_from_roots(roots)
        expect = Fraction(1)
        for i in range(m):
            for j in range(i + 1, m):
                ai, bi = roots[i]
                aj, bj = roots[j]
                expect *= (ai * bj - bi * aj) ** 2
        assert discriminant(P) == expect


def test_discriminant_degenerate_degrees():
    assert discriminant(BForm((Fraction(5),))) == 1
    assert discriminant(linear_form(Fraction(2), Fraction(3))) == 1
    # leading coefficient zero: root at infinity handled by shearing
    P = BForm((Fraction(0), Fraction(1), Fraction(0)))  # XY
    assert discriminant(P) == 1


def test_discriminant_transform_covariance():
    rng = random.Random(4)
    for _ in range(40):
        m = rng.randint(2, 3)
        P = form_from_roots(_rand_roots(rng, m))
        while True:
            a, b, c, d = (Fraction(rng.randint(-3, 3)) for _ in range(4))
            det = a * d - b * c
            if det:
                break
        assert discriminant(transform(P, a, b, c, d)) == \
            det ** (m * (m - 1)) * discriminant(P)


def test_homog_differential_degree_and_quadratic_disc():
    rng = random.Random(5)
    for _ in range(40):
        m = rng.randint(2, 3)
        while True:
            try:
                pair = FormPair(form_from_roots(_rand_roots(rng, m)),
                                form_from_roots(_rand_roots(rng, m)))
                break
            except ValueError:
                continue
        D = homog_differential(pair)
        assert D.degree == 2 * m - 2
        if m == 2:
            assert discriminant(D) == 4 * pair.res()


def test_iterate_pair_degrees_and_agreement():
    pair = FormPair(BForm((Fraction(2), Fraction(0), Fraction(-2))),
                    BForm((Fraction(1), Fraction(0), Fraction(1))))
    for n in range(4):
        it = iterate_pair(pair, n)
        assert it.P.degree == 2 ** n
        # pointwise agreement with function iteration
        x, y = Fraction(3), Fraction(2)
        px, py = x, y
        for _ in range(n):
            px, py = pair.P(px, py), pair.Q(px, py)
        assert (it.P(x, y), it.Q(x, y)) == (px, py)


def test_critical_lifts_reconstruct_differential():
    rng = random.Random(6)
    done = 0
    while done < 40:
        try:
            pair = FormPair(form_from_roots(_rand_roots(rng, 2)),
                            form_from_roots(_rand_roots(rng, 2)))
            D = homog_differential(pair)
            lifts = critical_lifts(D)
        except (ValueError, ZeroDivisionError):
            continue
        rebuilt = BForm((lifts.theta1, -lifts.eta1)) * BForm((lifts.theta2, -lifts.eta2))
        rebuilt = rebuilt.scale(lifts.c)
        if lifts.disc_class == 1:
            assert rebuilt.coeffs == D.coeffs
        else:
            assert all(isinstance(v, QuadElem) or v == w
                       for v, w in zip(rebuilt.coeffs, D.coeffs))
            assert all((v.a if isinstance(v, QuadElem) else Fraction(v)) == w
                       and (not isinstance(v, QuadElem) or v.b == 0)
                       for v, w in zip(rebuilt.coeffs, D.coeffs))
        done += 1


def test_identity_checkers_reject_wrong_values():
    # sanity: the checkers are not vacuously true
    pair = FormPair(BForm((Fraction(2), Fraction(0), Fraction(-2))),
                    BForm((Fraction(1), Fraction(0), Fraction(1))))
    bad = FormPair(pair.P, BForm((Fraction(1), Fraction(1), Fraction(1))))
    assert check_compres(pair, Fraction(1), Fraction(2), Fraction(3), Fraction(1))
    assert check_compdisc(pair, BForm((Fraction(1), Fraction(2), Fraction(1))))
    assert check_iterdisc(pair, Fraction(3), Fraction(1), 3)
    assert check_polyiter([Fraction(1), Fraction(0), Fraction(-2)], Fraction(1), 2)
    # a deliberately inconsistent comparison must fail
    D_good = homog_differential(pair)
    D_bad = homog_differential(bad)
    assert resultant(pair.P, D_good) != resultant(pair.P, D_bad)


def test_lift_product_rational_for_conjugate_lifts():
    # differential with conjugate critical lifts over Q(sqrt(2))
    pair = FormPair(BForm((Fraction(1), Fraction(4), Fraction(2))),
                    BForm((Fraction(2), Fraction(6), Fraction(4))))
    D = homog_differential(pair)
    lifts = critical_lifts(D)
    assert lifts.disc_class == 2
    v = lift_product_H(pair, Fraction(3), Fraction(1), 2, lifts)
    assert isinstance(v, Fraction)


def test_form_text_round_trip():
    rng = random.Random(7)
    for _ in range(20):
        P = form_from_roots(_rand_roots(rng, rng.randint(1, 3)))
        assert BForm.from_text(P.to_text()).coeffs == P.coeffs
    with pytest.raises(ValueError):
        BForm.from_text("2 1 0")  # wrong coefficient count


def test_iterated_H_seed():
    pair = FormPair(BForm((Fraction(2), Fraction(0), Fraction(-2))),
                    BForm((Fraction(1), Fraction(0), Fraction(1))))
    H0 = iterated_H(pair, Fraction(3), Fraction(1), 0)
    assert H0.coeffs == linear_form(Fraction(1), Fraction(3)).coeffs
