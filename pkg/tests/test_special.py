import math

import numpy as np
import pytest
from scipy import special as sp
from scipy.optimize import brentq

from wedgebound.special import (
    RootFindingError,
    SpecialDomainError,
    bessel_j,
    bessel_y,
    cross_product_root,
    first_bessel_zero,
    gamma,
    literal_annular_root,
    mcmahon_estimate,
)

ORDERS = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.5, 7.0, 12.0]
ARGS = [1e-3, 0.1, 0.5, 1.0, 2.4, 5.0, 10.0, 25.0, 60.0, 100.0]


@pytest.mark.parametrize("x", [0.01, 0.3, 0.5, 1.0, 1.5, 2.75, 7.0, 33.3, 120.0])
def test_gamma_matches_stdlib(x):
    # exp/pow rounding scales with the size of the exponent
    tol = 1e-14 * max(1.0, abs(math.lgamma(x)))
    assert gamma(x) == pytest.approx(math.gamma(x), rel=tol)


def test_gamma_rejects_nonpositive():
    with pytest.raises(SpecialDomainError):
        gamma(0.0)
    with pytest.raises(SpecialDomainError):
        gamma(-1.5)


@pytest.mark.parametrize("nu", ORDERS)
def test_bessel_j_against_scipy(nu):
    for x in ARGS:
        ref = sp.jv(nu, x)
        assert bessel_j(nu, x) == pytest.approx(ref, rel=1e-11, abs=1e-14)


@pytest.mark.parametrize("nu", ORDERS)
def test_bessel_y_against_scipy(nu):
    for x in ARGS:
        if nu >= 4.5 and x < 0.01:
            continue  # overflows float
        ref = sp.yv(nu, x)
        assert bessel_y(nu, x) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_near_integer_order_y_is_continuous():
    for n in (0, 1, 3):
        for x in (0.7, 4.0, 30.0):
            assert bessel_y(n + 1e-9, x) == pytest.approx(bessel_y(n, x), rel=1e-7, abs=1e-12)


def test_half_integer_closed_forms():
    for x in (0.2, 1.0, 3.7, 50.0):
        c = math.sqrt(2.0 / (math.pi * x))
        assert bessel_j(0.5, x) == pytest.approx(c * math.sin(x), rel=1e-13, abs=1e-15)
        assert bessel_y(0.5, x) == pytest.approx(-c * math.cos(x), rel=1e-13, abs=1e-15)


def test_bessel_at_zero():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(2.5, 0.0) == 0.0
    with pytest.raises(SpecialDomainError):
        bessel_y(1.0, 0.0)


@pytest.mark.parametrize("bad", [(-0.5, 1.0), (12.5, 1.0), (1.0, -1.0), (1.0, 101.0)])
def test_bessel_domain_errors(bad):
    with pytest.raises(SpecialDomainError):
        bessel_j(*bad)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12])
def test_integer_order_zero_matches_scipy_table(n):
    assert first_bessel_zero(float(n)).k == pytest.approx(sp.jn_zeros(n, 1)[0], abs=1e-12)


@pytest.mark.parametrize("nu", [0.25, 0.5, 0.75, 1.25, 3.3, 9.9])
def test_real_order_zero_is_first_sign_change(nu):
    res = first_bessel_zero(nu)
    # oracle: bracket the first sign change of scipy's jv on a fine grid
    t = np.linspace(1e-6, res.k + 1.0, 20001)
    v = sp.jv(nu, t)
    i = int(np.argmax(np.sign(v[1:]) != np.sign(v[:-1])))
    ref = brentq(lambda s: sp.jv(nu, s), t[i], t[i + 1], xtol=1e-15)
    assert res.k == pytest.approx(ref, abs=1e-12)
    assert abs(res.residual) < 1e-13


def test_zero_estimate_is_close_for_large_order():
    assert mcmahon_estimate(6.0) == pytest.approx(first_bessel_zero(6.0).k, rel=0.05)


def test_zeros_increase_with_order():
    ks = [first_bessel_zero(nu).k for nu in np.linspace(0.0, 12.0, 25)]
    assert all(b > a for a, b in zip(ks, ks[1:]))


def test_cross_product_half_integer_reduction():
    # order 1/2: sin(k (rho2 - rho1)) = 0
    for r1, r2 in ((1.0, 2.0), (0.5, 3.0), (2.0, 2.5)):
        assert cross_product_root(0.5, r1, r2).k == pytest.approx(math.pi / (r2 - r1), rel=1e-12)


@pytest.mark.parametrize("nu,r1,r2", [(0.0, 1.0, 2.0), (1.0, 0.5, 1.0), (2.5, 1.0, 3.0)])
def test_cross_product_root_against_scipy(nu, r1, r2):
    f = lambda k: sp.jv(nu, k * r1) * sp.yv(nu, k * r2) - sp.jv(nu, k * r2) * sp.yv(nu, k * r1)
    k = cross_product_root(nu, r1, r2).k
    assert abs(f(k)) < 1e-12
    # no earlier root
    grid = np.linspace(1e-3, k * 0.999, 4000)
    vals = f(grid)
    assert np.all(np.sign(vals) == np.sign(vals[0]))


def test_literal_equation_differs_at_half_order():
    assert literal_annular_root(0.5, 1.0, 2.0).k == pytest.approx(math.pi / 2.0, rel=1e-12)


def test_annular_radii_validated():
    with pytest.raises(SpecialDomainError):
        cross_product_root(0.5, 2.0, 1.0)
    with pytest.raises(SpecialDomainError):
        cross_product_root(0.5, 0.0, 1.0)


def test_sign_scan_raises_without_bracket():
    from wedgebound.special import _scan_bracket

    with pytest.raises(RootFindingError):
        _scan_bracket(lambda t: 1.0 + t, 0.0, 0.1, 1.0)
