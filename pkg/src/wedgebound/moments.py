"""Weighted moment integrals of a domain seen from the wedge vertex.

All moments are written in polar form as int w(theta) R(theta)^n / n dtheta,
with w = sin^2(alpha theta), n = 2 alpha + 2 for the wedge family and
w = cos^2(beta theta / 2), n = beta + 2 for the reflex family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    AnnularSector,
    Arc,
    CircularSector,
    Domain,
    GeometryError,
    Polygon,
    Pose,
    Segment,
    WedgeFamily,
    bounding_box,
    boundary_pieces,
    contains_in_wedge,
    inside,
    is_star_shaped,
    length_scale,
    polar_structure,
    radial_distance,
    to_wedge_frame,
)
from .quadrature import ear_clip, gauss_kronrod, triangle_adaptive

METHODS = ("closed_form", "polar_adaptive", "triangle_gauss", "monte_carlo")


class ContainmentError(GeometryError):
    """The domain is not contained in the requested wedge."""

    def __init__(self, report, family):
        self.report = report
        self.family = family
        super().__init__(f"domain not contained in {family.kind.value} wedge (param={family.param}); violation at {report.violation}")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_err: float
    method: str
    samples: int


def _frame_shape(domain, pose, family, check=True):
    if isinstance(domain, Domain):
        frame = to_wedge_frame(domain, pose).shape
    else:
        frame = domain
    if check:
        report = contains_in_wedge(frame, family)
        if not report.ok:
            raise ContainmentError(report, family)
    return frame


def _at_origin(point, shape) -> bool:
    return math.hypot(*point) <= 1e-13 * length_scale(shape)


def closed_form_applicable(shape, family: WedgeFamily) -> bool:
    return isinstance(shape, (CircularSector, AnnularSector)) and _at_origin(shape.vertex, shape)


def _closed_form(shape, family: WedgeFamily) -> QuadratureResult:
    n = family.exponent
    if isinstance(shape, CircularSector):
        radial = shape.radius**n / n
    else:
        radial = (shape.rho2**n - shape.rho1**n) / n
    a = shape.direction - 0.5 * shape.aperture
    b = shape.direction + 0.5 * shape.aperture
    return QuadratureResult(radial * family.weight_integral(a, b), 0.0, "closed_form", 0)


def _polar(shape, family: WedgeFamily, rtol: float = 1e-12) -> QuadratureResult:
    n = family.exponent
    total, err, evals = 0.0, 0.0, 0
    for iv in polar_structure(shape):

        def f(theta, radial=iv.radial):
            acc = np.zeros_like(theta)
            for lo, hi in radial:
                acc += radial_distance(hi, theta) ** n
                if lo is not None:
                    acc -= radial_distance(lo, theta) ** n
            return family.weight(theta) * acc / n

        v, e, k = gauss_kronrod(f, iv.a, iv.b, rtol=rtol)
        total += v
        err += e
        evals += k
    return QuadratureResult(total, err, "polar_adaptive", evals)


def _triangles(shape, family: WedgeFamily, rtol: float = 1e-10) -> QuadratureResult:
    if not isinstance(shape, Polygon):
        raise GeometryError("triangle quadrature needs a polygon")
    tris = ear_clip(shape.vertices)
    v, e, k = triangle_adaptive(family.integrand, tris, rtol=rtol)
    return QuadratureResult(v, e, "triangle_gauss", k)


def _moment(domain, family: WedgeFamily, pose=None, method=None, check=True, **kw) -> QuadratureResult:
    shape = _frame_shape(domain, pose, family, check)
    if method is None:
        if closed_form_applicable(shape, family):
            method = "closed_form"
        elif not isinstance(shape, Polygon) or is_star_shaped(shape):
            method = "polar_adaptive"
        else:
            method = "triangle_gauss"
    if method == "closed_form":
        if not closed_form_applicable(shape, family):
            raise GeometryError("closed form needs a sector with its vertex at the wedge vertex")
        return _closed_form(shape, family)
    if method == "polar_adaptive":
        return _polar(shape, family)
    if method == "triangle_gauss":
        return _triangles(shape, family)
    if method == "monte_carlo":
        return moment_mc_oracle(shape, family, kw.get("n", 200_000), kw.get("seed", 0), check=False)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def moment_pw(domain, alpha: float, pose: Pose | None = None, method: str | None = None, check: bool = True):
    """int_D r^(2 alpha + 1) sin^2(alpha theta) dr dtheta in the S_alpha frame."""
    return _moment(domain, WedgeFamily.pw(alpha), pose, method, check)


def moment_reflex(domain, beta: float, pose: Pose | None = None, method: str | None = None, check: bool = True):
    """int_D r^(beta + 1) cos^2(beta theta / 2) dr dtheta in the R_beta frame."""
    return _moment(domain, WedgeFamily.reflex(beta), pose, method, check)


def moment(domain, family: WedgeFamily, pose: Pose | None = None, method: str | None = None, check: bool = True, **kw):
    return _moment(domain, family, pose, method, check, **kw)


def boundary_moment(domain, beta: float, pose: Pose | None = None, rtol: float = 1e-12) -> QuadratureResult:
    """int over the boundary (both slit sides) of r^beta cos^2(beta theta/2) ds."""
    family = WedgeFamily.reflex(beta)
    shape = _frame_shape(domain, pose, family, check=False)

    def integrand(pts):
        r = np.hypot(pts[..., 0], pts[..., 1])
        return r**beta * family.weight(np.arctan2(pts[..., 1], pts[..., 0]))

    total, err, evals = 0.0, 0.0, 0
    for piece in boundary_pieces(shape, include_slits=True):
        if isinstance(piece, Segment):
            L = piece.length
            f = lambda s, piece=piece, L=L: L * integrand(piece.point(s))
            lo, hi = 0.0, 1.0
        else:
            f = lambda phi, piece=piece: piece.radius * integrand(piece.point(phi))
            lo, hi = piece.t0, piece.t1
        v, e, k = gauss_kronrod(f, lo, hi, rtol=rtol)
        total += v
        err += e
        evals += k
    return QuadratureResult(total, err, "gauss_kronrod", evals)


def moment_mc_oracle(domain, family: WedgeFamily, n: int, seed: int, pose: Pose | None = None, check: bool = True):
    """Rejection-sampling estimate; abs_err is three standard errors."""
    n = int(n)
    if n < 10_000:
        raise ValueError(f"Monte Carlo oracle needs n >= 10000 samples, got {n}")
    shape = _frame_shape(domain, pose, family, check)
    x0, y0, x1, y1 = bounding_box(shape)
    box = (x1 - x0) * (y1 - y0)
    rng = np.random.default_rng(seed)
    s1 = s2 = 0.0
    hits = 0
    chunk = 100_000
    done = 0
    while done < n:
        m = min(chunk, n - done)
        pts = np.column_stack([rng.uniform(x0, x1, m), rng.uniform(y0, y1, m)])
        mask = inside(shape, pts, tol=0.0, ignore_slits=True)
        vals = np.where(mask, family.integrand(pts), 0.0)
        s1 += float(vals.sum())
        s2 += float((vals * vals).sum())
        hits += int(mask.sum())
        done += m
    if hits == 0:
        raise ArithmeticError("Monte Carlo oracle: no sample landed inside the domain")
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0)
    return QuadratureResult(box * mean, 3.0 * box * math.sqrt(var / n), "monte_carlo", n)
