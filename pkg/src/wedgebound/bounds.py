"""Lower bounds for the first Dirichlet eigenvalue.

Faber-Krahn uses the area only.  The wedge (Payne-Weinberger) and reflex
bounds normalize a weighted moment of the domain seen from the wedge vertex;
both are exact for the circular sector that fills the wedge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .geometry import (
    Domain,
    GeometryError,
    Pose,
    WedgeFamily,
    area,
    contains_in_wedge,
    to_wedge_frame,
)
from .moments import ContainmentError, QuadratureResult, boundary_moment, moment
from .special import SpecialDomainError, ZeroResult, first_bessel_zero


class Formula(str, Enum):
    FK = "FK"
    PW = "PW"
    REFLEX = "Reflex"


@dataclass(frozen=True)
class BoundReport:
    formula: Formula
    value: float
    param: float | None
    zero: ZeroResult
    moment: QuadratureResult | None
    area: float | None
    containment_ok: bool
    pose_used: Pose | None
    forced: bool = False

    @property
    def valid(self) -> bool:
        """A bound counts only if the wedge hypothesis was machine-verified."""
        return self.containment_ok

    @property
    def rel_err(self) -> float:
        """Relative error of the value propagated from the moment estimate."""
        if self.moment is None or self.moment.value <= 0.0:
            return 0.0
        n = {Formula.PW: self.param + 1.0, Formula.REFLEX: 0.5 * (self.param + 2.0)}[self.formula]
        return self.moment.abs_err / self.moment.value / n


def _frame(domain, pose):
    if isinstance(domain, Domain):
        pose = domain.pose if pose is None else pose
        return to_wedge_frame(domain, pose).shape, pose
    return domain, pose


def faber_krahn_bound(domain) -> BoundReport:
    """pi * j_{0,1}^2 / |D|."""
    a = area(domain)
    if not a > 0.0:
        raise GeometryError("Faber-Krahn bound needs positive area")
    z = first_bessel_zero(0.0)
    return BoundReport(Formula.FK, math.pi * z.k**2 / a, None, z, None, a, True, None)


def _wedge_bound(domain, family: WedgeFamily, pose, force: bool, method) -> BoundReport:
    shape, pose = _frame(domain, pose)
    report = contains_in_wedge(shape, family)
    if not report.ok and not force:
        raise ContainmentError(report, family)
    m = moment(shape, family, method=method, check=False)
    if not m.value > 0.0:
        raise ArithmeticError(f"moment evaluated to {m.value}; cannot form a bound")
    p = family.param
    if family.kind.value == "pw":
        z = first_bessel_zero(p)
        scale = 4.0 / math.pi * p * (p + 1.0)
        expo = -1.0 / (p + 1.0)
        formula = Formula.PW
    else:
        z = first_bessel_zero(0.5 * p)
        scale = p * (p + 2.0) / math.pi
        expo = -2.0 / (p + 2.0)
        formula = Formula.REFLEX
    value = math.exp(expo * (math.log(scale) + math.log(m.value)) + 2.0 * math.log(z.k))
    return BoundReport(formula, value, p, z, m, None, report.ok, pose, forced=force and not report.ok)


def pw_bound(domain, alpha: float, pose: Pose | None = None, force: bool = False, method=None) -> BoundReport:
    """[4 alpha (alpha + 1) I_alpha / pi]^(-1/(alpha+1)) j_{alpha,1}^2 for D in S_alpha."""
    return _wedge_bound(domain, WedgeFamily.pw(alpha), pose, force, method)


def reflex_bound(domain, beta: float, pose: Pose | None = None, force: bool = False, method=None) -> BoundReport:
    """[beta (beta + 2) I_beta / pi]^(-2/(beta+2)) j_{beta/2,1}^2 for D in R_beta."""
    return _wedge_bound(domain, WedgeFamily.reflex(beta), pose, force, method)


def wedge_bound(domain, family: WedgeFamily, pose: Pose | None = None, force: bool = False, method=None) -> BoundReport:
    return _wedge_bound(domain, family, pose, force, method)


def _annular_delta(beta: float, rho1: float, rho2: float) -> float:
    if not 1.0 <= beta <= 2.0:
        raise SpecialDomainError(f"beta must lie in [1, 2], got {beta}")
    if not 0.0 < rho1 < rho2:
        raise SpecialDomainError(f"need 0 < rho1 < rho2, got {rho1}, {rho2}")
    n = beta + 2.0
    # rho2^n - rho1^n without cancellation when rho1 is close to rho2
    return rho2**n * -math.expm1(n * math.log(rho1 / rho2))


def annular_root_bound(beta: float, rho1: float, rho2: float) -> float:
    """Lower bound on the annular-sector root k implied by the reflex bound.

    k >= (rho2^(beta+2) - rho1^(beta+2))^(-1/(beta+2)) j_{beta/2,1}.
    """
    d = _annular_delta(beta, rho1, rho2)
    return math.exp(-math.log(d) / (beta + 2.0)) * first_bessel_zero(0.5 * beta).k


def annular_root_bound_printed(beta: float, rho1: float, rho2: float) -> float:
    """Same expression with the exponent -2/(beta+2) on the k-level bound."""
    d = _annular_delta(beta, rho1, rho2)
    return math.exp(-2.0 * math.log(d) / (beta + 2.0)) * first_bessel_zero(0.5 * beta).k


@dataclass(frozen=True)
class LemmaGap:
    lhs: float
    rhs: float
    gap: float
    tol: float
    boundary: QuadratureResult
    moment: QuadratureResult

    @property
    def holds(self) -> bool:
        return self.gap >= -self.tol


def lemma_gap(domain, beta: float, pose: Pose | None = None, method=None) -> LemmaGap:
    """Compare [(beta/pi) B]^((beta+2)/(beta+1)) with beta (beta+2) I_beta / pi.

    B is the boundary moment (both sides of every slit), I_beta the area moment.
    """
    family = WedgeFamily.reflex(beta)
    shape, _ = _frame(domain, pose)
    report = contains_in_wedge(shape, family)
    if not report.ok:
        raise ContainmentError(report, family)
    b = boundary_moment(shape, beta)
    m = moment(shape, family, method=method, check=False)
    q = (beta + 2.0) / (beta + 1.0)
    lhs = math.exp(q * math.log(beta / math.pi * b.value))
    rhs = beta * (beta + 2.0) / math.pi * m.value
    tol = lhs * q * b.abs_err / b.value + beta * (beta + 2.0) / math.pi * m.abs_err
    tol += 1e-12 * max(lhs, rhs)
    return LemmaGap(lhs, rhs, lhs - rhs, tol, b, m)
