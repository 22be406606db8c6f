"""Real-order Bessel functions, first positive zeros and cross-product roots.

The series are summed in multiprecision arithmetic (mpmath) so the
alternating power series stays accurate over the whole argument range
0 <= x <= 100 without an asymptotic switchover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from scipy.optimize import brentq

NU_MAX = 12.0
X_MAX = 100.0

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class SpecialDomainError(ValueError):
    """Argument outside the supported domain of a special function."""


class RootFindingError(ArithmeticError):
    """A root could not be bracketed in the admissible search range."""


@dataclass(frozen=True)
class ZeroResult:
    nu: float
    k: float
    residual: float
    iterations: int


def gamma(x: float) -> float:
    """Gamma function for x > 0 (Lanczos).

    Relative error is a few ulp for moderate x and grows like |ln gamma(x)| * eps.
    """
    x = float(x)
    if not x > 0.0:
        raise SpecialDomainError(f"gamma requires x > 0, got {x}")
    if x < 0.5:
        return gamma(x + 1.0) / x
    z = x - 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power to postpone overflow
    half = t ** ((z + 0.5) / 2.0)
    return math.sqrt(2.0 * math.pi) * half * math.exp(-t) * half * acc


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not (0.0 <= nu <= NU_MAX):
        raise SpecialDomainError(f"Bessel order must lie in [0, {NU_MAX}], got {nu}")
    return nu


def _dps_for(x: float, extra: int = 0) -> int:
    # the largest series term is ~exp(x); keep 20 digits beyond it
    return 25 + int(0.45 * x) + extra


def _j_series(nu, x):
    """J_nu(x) by its power series; nu may be negative (non-integer)."""
    half = x / 2
    q = -(half * half)
    term = mpmath.power(half, nu) * mpmath.rgamma(nu + 1)
    if term == 0:
        # 1/Gamma(nu+1) vanished: negative integer order, start at the first
        # non-vanishing term instead.
        raise SpecialDomainError("negative integer order is not supported")
    total = term
    eps = mpmath.eps
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + nu))
        total += term
        if k > half and abs(term) <= eps * abs(total):
            return total
        if k > 5000:
            raise RootFindingError("J series failed to converge")


def _y_integer_series(n: int, x):
    """Y_n(x) for integer n >= 0 from the logarithmic series."""
    half = x / 2
    jn = _j_series(mpmath.mpf(n), x)
    out = 2 / mpmath.pi * jn * mpmath.log(half)
    if n > 0:
        finite = mpmath.mpf(0)
        for k in range(n):
            finite += mpmath.factorial(n - k - 1) / mpmath.factorial(k) * mpmath.power(half, 2 * k - n)
        out -= finite / mpmath.pi
    # psi(k+1) + psi(n+k+1), built from harmonic numbers
    euler = mpmath.euler
    h_k = mpmath.mpf(0)
    h_nk = mpmath.fsum(mpmath.mpf(1) / i for i in range(1, n + 1))
    q = -(half * half)
    term = mpmath.power(half, n) / mpmath.factorial(n)
    total = (h_k + h_nk - 2 * euler) * term
    eps = mpmath.eps
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + n))
        h_k += mpmath.mpf(1) / k
        h_nk += mpmath.mpf(1) / (k + n)
        piece = (h_k + h_nk - 2 * euler) * term
        total += piece
        if k > half and abs(piece) <= eps * abs(total):
            break
    return out - total / mpmath.pi


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind J_nu(x), 0 <= nu <= 12, 0 <= x <= 100."""
    nu = _check_order(nu)
    x = float(x)
    if x < 0.0 or x > X_MAX:
        raise SpecialDomainError(f"bessel_j requires 0 <= x <= {X_MAX}, got {x}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    with mpmath.workdps(_dps_for(x)):
        return float(_j_series(mpmath.mpf(nu), mpmath.mpf(x)))


def bessel_y(nu: float, x: float) -> float:
    """Bessel function of the second kind Y_nu(x), 0 <= nu <= 12, 0 < x <= 100."""
    nu = _check_order(nu)
    x = float(x)
    if not (0.0 < x <= X_MAX):
        raise SpecialDomainError(f"bessel_y requires 0 < x <= {X_MAX}, got {x}")
    if nu == round(nu):
        with mpmath.workdps(_dps_for(x)):
            return float(_y_integer_series(int(round(nu)), mpmath.mpf(x)))
    # near-integer orders cancel catastrophically; buy the lost digits back
    lost = max(0, int(-math.log10(abs(math.sin(math.pi * nu)))) + 1)
    small_x = max(0, int(nu * -math.log10(min(x, 1.0))) + 1)
    with mpmath.workdps(_dps_for(x, lost + small_x)):
        mnu = mpmath.mpf(nu)
        mx = mpmath.mpf(x)
        jp = _j_series(mnu, mx)
        jm = _j_series(-mnu, mx)
        return float((jp * mpmath.cospi(mnu) - jm) / mpmath.sinpi(mnu))


def _scan_bracket(f, start: float, step: float, stop: float):
    a, fa = start, f(start)
    n = 0
    while a < stop:
        b = min(a + step, stop)
        fb = f(b)
        n += 1
        if fa == 0.0:
            return a, a, n
        if fa * fb <= 0.0:
            return a, b, n
        a, fa = b, fb
    raise RootFindingError(f"no sign change found in [{start}, {stop}]")


def mcmahon_estimate(nu: float) -> float:
    """Asymptotic estimate of the first positive zero of J_nu."""
    b = (nu / 2.0 + 0.75) * math.pi
    mu = 4.0 * nu * nu
    return b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * b) ** 3)


@lru_cache(maxsize=256)
def first_bessel_zero(nu: float) -> ZeroResult:
    """Smallest k > 0 with J_nu(k) = 0.

    J_nu is positive on (0, sqrt(nu(nu+2))], so the 0.1-step sign scan starts
    there (never past the first zero), and brentq refines the bracket.
    """
    nu = _check_order(nu)
    start = max(math.sqrt(nu * (nu + 2.0)), 0.05)
    f = lambda t: bessel_j(nu, t)
    a, b, n_scan = _scan_bracket(f, start, 0.1, 60.0)
    if a == b:
        k, n_ref = a, 0
    else:
        k, info = brentq(f, a, b, xtol=1e-15, rtol=4 * 2.220446049250313e-16, full_output=True)
        n_ref = info.iterations
    return ZeroResult(nu=nu, k=k, residual=f(k), iterations=n_scan + n_ref)


def _radii(rho1: float, rho2: float) -> tuple[float, float]:
    rho1, rho2 = float(rho1), float(rho2)
    if not (0.0 < rho1 < rho2):
        raise SpecialDomainError(f"need 0 < rho1 < rho2, got rho1={rho1}, rho2={rho2}")
    return rho1, rho2


def _annular_root(nu, rho1, rho2, f, scale) -> ZeroResult:
    step = 0.05 * math.pi / (rho2 - rho1)
    stop = X_MAX / rho2
    a, b, n_scan = _scan_bracket(f, 0.5 * step, step, stop)
    if a == b:
        k, n_ref = a, 0
    else:
        k, info = brentq(f, a, b, xtol=1e-15, rtol=4 * 2.220446049250313e-16, full_output=True)
        n_ref = info.iterations
    s = scale(k)
    return ZeroResult(nu=nu, k=k, residual=f(k) / s if s > 0 else f(k), iterations=n_scan + n_ref)


def cross_product_root(nu: float, rho1: float, rho2: float) -> ZeroResult:
    """Smallest k > 0 with J_nu(k rho1) Y_nu(k rho2) - J_nu(k rho2) Y_nu(k rho1) = 0.

    The residual is the sine of the angle between (J, Y)(k rho1) and
    (J, Y)(k rho2), i.e. the cross product divided by both norms.
    """
    nu = _check_order(nu)
    rho1, rho2 = _radii(rho1, rho2)

    def f(k):
        return bessel_j(nu, k * rho1) * bessel_y(nu, k * rho2) - bessel_j(nu, k * rho2) * bessel_y(nu, k * rho1)

    def scale(k):
        return math.hypot(bessel_j(nu, k * rho1), bessel_y(nu, k * rho1)) * math.hypot(
            bessel_j(nu, k * rho2), bessel_y(nu, k * rho2)
        )

    return _annular_root(nu, rho1, rho2, f, scale)


def literal_annular_root(nu: float, rho1: float, rho2: float) -> ZeroResult:
    """Smallest k > 0 with J_nu(k rho1) Y_nu(k rho1) = J_nu(k rho2) Y_nu(k rho2).

    Same-radius products on each side; kept for auditing against the
    cross-product form, which is the separable annular characteristic equation.
    """
    nu = _check_order(nu)
    rho1, rho2 = _radii(rho1, rho2)

    def f(k):
        return bessel_j(nu, k * rho1) * bessel_y(nu, k * rho1) - bessel_j(nu, k * rho2) * bessel_y(nu, k * rho2)

    def scale(k):
        # |J Y| <= (J^2 + Y^2) / 2
        return 0.5 * (
            bessel_j(nu, k * rho1) ** 2 + bessel_y(nu, k * rho1) ** 2 + bessel_j(nu, k * rho2) ** 2 + bessel_y(nu, k * rho2) ** 2
        )

    return _annular_root(nu, rho1, rho2, f, scale)
