"""Maximality certificates, subset square searches, and numeric
verification of the preimage-product identities."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from arbocert.certify import (
    SearchGuardError,
    certify_max,
    subset_square_bruteforce,
    subset_square_search,
    verify_lemma_Qn,
    verify_lemma_Rn,
    verify_preimage_square_product,
)
from arbocert.dynamics import build_map, detect_collision, normal_form
from arbocert.exact_field import ProjPoint, QuadElem

GOLDEN = build_map((2, 0, -2), (1, 0, 1))
X0 = ProjPoint(Fraction(3), Fraction(1))


def test_certificate_golden_frozen():
    cert = certify_max(GOLDEN, X0, 6)
    assert cert.verdict == "NotFull"
    assert cert.witness == (1, 2)  # kappa_1 * kappa_2 = 400/9
    assert cert.exit_code == 1
    text = cert.to_text()
    assert text.startswith("arbocert-certificate v1\n")
    assert "kappa-1: -20 case=disc" in text
    assert "verdict: NotFull" in text
    # byte-identical on recomputation
    assert certify_max(GOLDEN, X0, 6).to_text() == text


def test_certificate_full_mtilde():
    m = build_map((1, 4, 2), (2, 6, 4))
    cert = certify_max(m, ProjPoint(Fraction(3), Fraction(1)), 5)
    assert cert.verdict == "FullMtilde"
    assert cert.witness is None
    assert cert.exit_code == 0


def test_certificate_degenerate_critical_hit():
    # x0 = 6/5 lies on the critical orbit of the golden map
    cert = certify_max(GOLDEN, ProjPoint(Fraction(6), Fraction(5)), 4)
    assert cert.verdict == "DegenerateCriticalHit"
    assert cert.exit_code == 4


def test_certificate_small_N_nonsquare_delta():
    # N below ell: the rational case of the decision applies
    m = build_map((1, 4, 2), (2, 6, 4))
    cert = certify_max(m, ProjPoint(Fraction(3), Fraction(1)), 1)
    assert cert.verdict in ("FullMtilde", "NotFull")


def test_subset_search_rational():
    assert subset_square_search([Fraction(4)]) == [0]
    assert subset_square_search([Fraction(2), Fraction(3)]) is None
    assert subset_square_search([Fraction(2), Fraction(3), Fraction(6)]) == [0, 1, 2]
    assert subset_square_search([Fraction(-2), Fraction(-2)]) == [0, 1]
    with pytest.raises(ValueError):
        subset_square_search([])
    with pytest.raises(ValueError):
        subset_square_search([Fraction(0)])


def test_subset_search_quadratic():
    d = 2
    r2 = QuadElem(Fraction(0), Fraction(1), d)
    # sqrt(2) * sqrt(2) = 2 = sqrt(2)^2: each factor is not a square but
    # 2 is a square in Q(sqrt(2))
    assert subset_square_search([QuadElem(Fraction(2), Fraction(0), d)], d) == [0]
    assert subset_square_search([r2, r2], d) == [0, 1]
    # 3 + 2*sqrt(2) = (1 + sqrt(2))^2
    assert subset_square_search([QuadElem(Fraction(3), Fraction(2), d)], d) == [0]
    assert subset_square_search([QuadElem(Fraction(1), Fraction(1), d)], d) is None


def test_subset_search_matches_bruteforce():
    rng = random.Random(42)
    for _ in range(120):
        n = rng.randint(1, 9)
        d = rng.choice([None, 2, 3, -1])
        vals = []
        for _ in range(n):
            if d is not None and rng.getrandbits(1):
                while True:
                    a = Fraction(rng.randint(-7, 7), rng.randint(1, 3))
                    b = Fraction(rng.randint(-7, 7), rng.randint(1, 3))
                    if a or b:
                        break
                vals.append(QuadElem(a, b, d))
            else:
                v = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
                vals.append(v if v else Fraction(9))
        assert subset_square_search(vals, d) == subset_square_bruteforce(vals, d)


def test_subset_search_guard():
    # 30 copies of sqrt(2): kernel dimension 29 exceeds the guard
    d = 2
    vals = [QuadElem(Fraction(0), Fraction(1), d)] * 30
    with pytest.raises(SearchGuardError):
        subset_square_search(vals, d)


def test_lemma_Qn_golden():
    nf = normal_form(GOLDEN)
    rep = verify_lemma_Qn(nf, Fraction(3), 2)
    assert rep.ok and rep.rel_error < 2.0 ** -128


def test_lemma_Rn_golden():
    nf = normal_form(GOLDEN)
    for n in (3, 4, 5):
        rep = verify_lemma_Rn(nf, Fraction(3), 2, n)
        assert rep.ok and rep.rel_error < 2.0 ** -128


def test_squared_preimage_product():
    nf = normal_form(GOLDEN)
    for n in (1, 2, 3):
        rep = verify_preimage_square_product(nf, Fraction(3), n)
        assert rep.ok


def test_numeric_rejects_orbit_of_f_infinity():
    nf = normal_form(GOLDEN)
    # x = f(inf) = A = 2 has a preimage at infinity
    with pytest.raises(ValueError):
        verify_lemma_Qn(nf, Fraction(2), 2)


def test_precision_parameter_tightens_tolerance():
    nf = normal_form(GOLDEN)
    rep = verify_lemma_Rn(nf, Fraction(3), 2, 4, precision=512)
    assert rep.precision == 512
    assert rep.ok and rep.rel_error < 2.0 ** -256


def test_certificate_consistent_under_x0_scaling():
    cert1 = certify_max(GOLDEN, ProjPoint(Fraction(3), Fraction(1)), 4)
    cert2 = certify_max(GOLDEN, ProjPoint(Fraction(6), Fraction(2)), 4)
    assert cert1.to_text() == cert2.to_text()
