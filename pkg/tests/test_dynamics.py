"""Quadratic maps: critical data, collisions, normal form, and the
kappa/q/r invariants."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from arbocert.dynamics import (
    INFTY,
    ZERO,
    DegenerateMapError,
    build_map,
    conjugate_map,
    detect_collision,
    format_point,
    forward_orbit,
    kappa_list,
    normal_form,
    parse_map_text,
    q_general,
    q_value,
    r_value,
)
from arbocert.exact_field import ProjPoint, QuadElem, is_square_Q

GOLDEN_P = (2, 0, -2)
GOLDEN_Q = (1, 0, 1)
GOLDEN_X0 = ProjPoint(Fraction(3), Fraction(1))

# Frozen kappa values for the golden map f(z) = (2z^2-2)/(z^2+1), x0 = 3
GOLDEN_KAPPAS = [
    Fraction(-20),
    Fraction(-20, 9),
    Fraction(225, 161),
    Fraction(85583, 68175),
    Fraction(48218882175, 69275877503),
    Fraction(66120732465894901131743, 50788180760398645406175),
]


def test_build_map_critical_data():
    m = build_map(GOLDEN_P, GOLDEN_Q)
    assert {m.xi1, m.xi2} == {ZERO, INFTY}
    assert m.delta == 1


def test_degenerate_maps_rejected():
    with pytest.raises(DegenerateMapError):
        build_map((1, 0, 0), (2, 0, 0))  # P, Q share the root [0:1]
    with pytest.raises(DegenerateMapError):
        build_map((0, 1, 0), (0, 0, 1))  # degree-1 map in disguise


def test_collision_detection_golden():
    m = build_map(GOLDEN_P, GOLDEN_Q)
    col = detect_collision(m)
    assert col is not None and col.ell == 2
    # f(0) = -2, f(inf) = 2, f(-2) = 6/5 = f(2): the orbits first meet
    # at the second iterate
    orb1 = forward_orbit(m, col.xi1, 2)
    orb2 = forward_orbit(m, col.xi2, 2)
    assert orb1[1] != orb2[1]
    assert orb1[2] == orb2[2]


def test_no_collision_for_squaring_map():
    m = build_map((1, 0, 0), (0, 0, 1))  # z -> z^2
    assert detect_collision(m) is None


def test_collision_orders_critical_points():
    # xi2 must not lie in the forward orbit of xi1
    for P, Q in [(GOLDEN_P, GOLDEN_Q), ((0, 0, 4), (1, 0, -2)),
                 ((1, 4, 2), (2, 6, 4)), ((1, 10, 5), (1, 6, 5))]:
        m = build_map(P, Q)
        col = detect_collision(m)
        orbit = forward_orbit(m, col.xi1, 8)
        assert col.xi2 not in orbit[1:]


def test_normal_form_golden():
    m = build_map(GOLDEN_P, GOLDEN_Q)
    nf = normal_form(m)
    assert (nf.A, nf.B, nf.C) == (Fraction(2), Fraction(-2), Fraction(1))
    g = nf.as_map()
    assert {g.xi1, g.xi2} == {ZERO, INFTY}
    assert detect_collision(g).ell == 2


def test_normal_form_requires_square_delta():
    m = build_map((1, 4, 2), (2, 6, 4))
    assert m.delta == 2
    with pytest.raises(ValueError):
        normal_form(m)


def test_conjugate_map_is_conjugate():
    rng = random.Random(1)
    m = build_map(GOLDEN_P, GOLDEN_Q)
    for _ in range(20):
        while True:
            a, b, c, d = (Fraction(rng.randint(-3, 3)) for _ in range(4))
            if a * d - b * c:
                break
        try:
            g = conjugate_map(m, a, b, c, d)
        except (ValueError, ZeroDivisionError):
            continue
        # G = N^{-1} o F o N pointwise on random finite points
        for v in (Fraction(2), Fraction(-1, 3), Fraction(7, 2)):
            p = ProjPoint(v, Fraction(1))
            np_ = ProjPoint(a * p.s + b * p.t, c * p.s + d * p.t)
            lhs = g.apply(p)
            rhs_up = m.apply(np_)
            rhs = ProjPoint(d * rhs_up.s - b * rhs_up.t,
                            -c * rhs_up.s + a * rhs_up.t)
            assert lhs == rhs


def test_kappa_golden_frozen():
    m = build_map(GOLDEN_P, GOLDEN_Q)
    lst = kappa_list(m, GOLDEN_X0, 6, detect_collision(m))
    assert lst.values() == GOLDEN_KAPPAS
    assert [e.case for e in lst.entries] == \
        ["disc", "ell-form", "cross", "cross", "cross", "cross"]
    assert not lst.has_zero()


def test_kappa_below_ell_is_H_discriminant():
    from arbocert.binary_forms import discriminant, iterated_H
    m = build_map((0, 0, 4), (1, 0, -2))
    col = detect_collision(m)
    assert col.ell == 3
    lst = kappa_list(m, ProjPoint(Fraction(5), Fraction(1)), 4, col)
    for n in (1, 2):
        assert lst.values()[n - 1] == \
            discriminant(iterated_H(m.pair, Fraction(5), Fraction(1), n))


def test_kappa_nonsquare_delta_invariant():
    # kappa_ell * delta is a rational square; later kappas live in L
    m = build_map((1, 4, 2), (2, 6, 4))
    lst = kappa_list(m, ProjPoint(Fraction(3), Fraction(1)), 4,
                     detect_collision(m))
    assert lst.delta == 2
    k2 = lst.values()[1]
    assert isinstance(k2, Fraction) and is_square_Q(k2 * 2)
    assert isinstance(lst.values()[2], QuadElem)


def test_kappa_zero_flag_on_critical_hit():
    # x0 = f^2(0) = 6/5 lies on the critical orbit of the golden map
    m = build_map(GOLDEN_P, GOLDEN_Q)
    lst = kappa_list(m, ProjPoint(Fraction(6), Fraction(5)), 4,
                     detect_collision(m))
    assert lst.has_zero()
    assert any(e.zero_reason for e in lst.entries)


def test_q_and_r_recursions():
    A, B, C = Fraction(2), Fraction(-2), Fraction(1)
    ell = 2
    for n in range(2, 7):
        m = build_map((A, 0, B), (1, 0, C))
        orb_inf = forward_orbit(m, INFTY, n)
        orb_zero = forward_orbit(m, ZERO, n)
        ratio = (orb_inf[1].affine() - orb_inf[n].affine()) / \
                (orb_inf[1].affine() - orb_zero[n].affine())
        assert q_general(A, B, C, n) == q_general(A, B, C, n - 1) ** 2 * ratio
    assert q_value(A, B, C, ell) == q_general(A, B, C, ell - 1)
    m = build_map((A, 0, B), (1, 0, C))
    for n in range(ell + 2, ell + 5):
        orb_inf = forward_orbit(m, INFTY, n)
        orb_zero = forward_orbit(m, ZERO, n)
        ratio = (orb_inf[n - 1].affine() - orb_inf[1].affine()) / \
                (orb_zero[n - ell].affine() - orb_inf[1].affine())
        assert r_value(A, B, C, n, ell) == \
            r_value(A, B, C, n - 1, ell) ** 2 * ratio


def test_parse_map_text_round_trip():
    text = "P: 2 0 -2\nQ: 1 0 1\nx0: 3 1\n"
    qmap, x0 = parse_map_text(text)
    assert qmap.pair.P.coeffs == (Fraction(2), Fraction(0), Fraction(-2))
    assert x0 == GOLDEN_X0
    assert format_point(x0) == "3 1"
    with pytest.raises(ValueError):
        parse_map_text("P: 1 0 1\n")
