"""Membrane shapes, poses, wedge containment and boundary parametrization.

Frame convention: a pose (origin o, rotation g) places the wedge vertex at o
and points the wedge's reference axis along world angle g.  World points map
to frame points by p -> R(-g) (p - o).  The reference axis is the bisector for
the reflex family R_beta and the lower edge for the wedge family S_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

import numpy as np

TWO_PI = 2.0 * math.pi
REL_TOL = 1e-11


class GeometryError(ValueError):
    """Malformed shape or wedge description."""


class NotStarShapedError(GeometryError):
    """A ray from the origin meets the boundary more than once."""


def wrap_angle(a):
    """Map angles to (-pi, pi]."""
    out = np.mod(np.asarray(a, dtype=float) + math.pi, TWO_PI) - math.pi
    out = np.where(out == -math.pi, math.pi, out)
    return float(out) if np.ndim(out) == 0 else out


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


# --------------------------------------------------------------------------
# wedge families


class WedgeKind(str, Enum):
    PW = "pw"
    REFLEX = "reflex"


@dataclass(frozen=True)
class WedgeFamily:
    kind: WedgeKind
    param: float

    def __post_init__(self):
        object.__setattr__(self, "kind", WedgeKind(self.kind))
        object.__setattr__(self, "param", float(self.param))
        if self.kind is WedgeKind.PW and not self.param >= 1.0:
            raise GeometryError(f"wedge S_alpha needs alpha >= 1, got {self.param}")
        if self.kind is WedgeKind.REFLEX and not (1.0 <= self.param <= 2.0):
            raise GeometryError(f"reflex angle R_beta needs 1 <= beta <= 2, got {self.param}")

    @classmethod
    def pw(cls, alpha: float) -> "WedgeFamily":
        return cls(WedgeKind.PW, alpha)

    @classmethod
    def reflex(cls, beta: float) -> "WedgeFamily":
        return cls(WedgeKind.REFLEX, beta)

    @property
    def aperture(self) -> float:
        if self.kind is WedgeKind.PW:
            return math.pi / self.param
        return TWO_PI / self.param

    @property
    def exponent(self) -> float:
        """Radial power n with moment = int w(theta) R^n / n dtheta."""
        if self.kind is WedgeKind.PW:
            return 2.0 * self.param + 2.0
        return self.param + 2.0

    @property
    def is_cut_plane(self) -> bool:
        return self.kind is WedgeKind.REFLEX and self.param == 1.0

    def weight(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.kind is WedgeKind.PW:
            return np.sin(self.param * theta) ** 2
        return np.cos(0.5 * self.param * theta) ** 2

    def weight_integral(self, a: float, b: float) -> float:
        """Exact integral of the angular weight over [a, b]."""
        p = self.param
        if self.kind is WedgeKind.PW:
            F = lambda t: 0.5 * t - math.sin(2.0 * p * t) / (4.0 * p)
        else:
            F = lambda t: 0.5 * t + math.sin(p * t) / (2.0 * p)
        return F(b) - F(a)

    def integrand(self, pts):
        """Area-measure integrand r^(n-2) w(theta) at Cartesian points."""
        pts = np.asarray(pts, dtype=float)
        x, y = pts[..., 0], pts[..., 1]
        r = np.hypot(x, y)
        return r ** (self.exponent - 2.0) * self.weight(np.arctan2(y, x))

    def boundary_rays(self) -> list[np.ndarray]:
        """Unit directions of the rays bounding the wedge."""
        if self.kind is WedgeKind.PW:
            a = math.pi / self.param
            return [np.array([1.0, 0.0]), np.array([math.cos(a), math.sin(a)])]
        a = math.pi / self.param
        return [np.array([math.cos(a), math.sin(a)]), np.array([math.cos(a), -math.sin(a)])]

    def excluded_interior(self, pts, tol: float = 0.0):
        """True where a point lies at distance > tol inside the excluded set.

        Not meaningful for the cut plane (beta = 1), whose excluded set is a ray.
        """
        pts = np.asarray(pts, dtype=float)
        if self.kind is WedgeKind.PW:
            u = self.boundary_rays()[1]
            return (pts[..., 1] < -tol) | (_cross(u, pts) > tol)
        u1, u2 = self.boundary_rays()
        return (_cross(u1, pts) > tol) & (_cross(u2, pts) < -tol)


# --------------------------------------------------------------------------
# poses and shapes


@dataclass(frozen=True)
class Pose:
    origin: tuple[float, float] = (0.0, 0.0)
    rotation: float = 0.0

    def __post_init__(self):
        o = tuple(float(v) for v in self.origin)
        if len(o) != 2:
            raise GeometryError("pose origin must be a 2-vector")
        object.__setattr__(self, "origin", o)
        object.__setattr__(self, "rotation", wrap_angle(float(self.rotation)))

    def to_frame(self, pts):
        pts = np.asarray(pts, dtype=float)
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        d = pts - np.asarray(self.origin)
        return np.stack([c * d[..., 0] + s * d[..., 1], -s * d[..., 0] + c * d[..., 1]], axis=-1)

    def to_world(self, pts):
        pts = np.asarray(pts, dtype=float)
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        x = c * pts[..., 0] - s * pts[..., 1] + self.origin[0]
        y = s * pts[..., 0] + c * pts[..., 1] + self.origin[1]
        return np.stack([x, y], axis=-1)


def _pt(p) -> tuple[float, float]:
    p = tuple(float(v) for v in p)
    if len(p) != 2:
        raise GeometryError(f"expected a 2-D point, got {p}")
    return p


def _check_aperture(a: float) -> float:
    a = float(a)
    if not (0.0 < a <= TWO_PI * (1.0 + 1e-15)):
        raise GeometryError(f"aperture must lie in (0, 2*pi], got {a}")
    return min(a, TWO_PI)


@dataclass(frozen=True)
class Disc:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _pt(self.center))
        if not float(self.radius) > 0.0:
            raise GeometryError("disc radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class CircularSector:
    """Sector {|p - vertex| < radius, |arg(p - vertex) - direction| < aperture/2}.

    Aperture 2*pi gives the disc cut along the ray opposite to `direction`.
    """

    radius: float
    aperture: float
    vertex: tuple[float, float] = (0.0, 0.0)
    direction: float = 0.0

    def __post_init__(self):
        if not float(self.radius) > 0.0:
            raise GeometryError("sector radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "aperture", _check_aperture(self.aperture))
        object.__setattr__(self, "vertex", _pt(self.vertex))
        object.__setattr__(self, "direction", wrap_angle(float(self.direction)))


@dataclass(frozen=True)
class AnnularSector:
    rho1: float
    rho2: float
    aperture: float
    vertex: tuple[float, float] = (0.0, 0.0)
    direction: float = 0.0

    def __post_init__(self):
        r1, r2 = float(self.rho1), float(self.rho2)
        if not (0.0 < r1 < r2):
            raise GeometryError(f"annular sector needs 0 < rho1 < rho2, got {r1}, {r2}")
        object.__setattr__(self, "rho1", r1)
        object.__setattr__(self, "rho2", r2)
        object.__setattr__(self, "aperture", _check_aperture(self.aperture))
        object.__setattr__(self, "vertex", _pt(self.vertex))
        object.__setattr__(self, "direction", wrap_angle(float(self.direction)))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _segments_intersect(p1, p2, q1, q2, tol):
    """Closed-segment intersection test with tolerance."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and (
        (d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)
    ):
        return True
    for a, b, c, d in ((q1, q2, p1, d1), (q1, q2, p2, d2), (p1, p2, q1, d3), (p1, p2, q2, d4)):
        if abs(d) <= tol and _on_segment(a, b, c, tol):
            return True
    return False


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, c, tol):
    return (
        min(a[0], b[0]) - tol <= c[0] <= max(a[0], b[0]) + tol
        and min(a[1], b[1]) - tol <= c[1] <= max(a[1], b[1]) + tol
    )


def segment_distance(pts, a, b):
    """Distance from points to the closed segment [a, b]."""
    pts = np.asarray(pts, dtype=float)
    a = np.asarray(a, dtype=float)
    e = np.asarray(b, dtype=float) - a
    ee = float(e @ e)
    if ee == 0.0:
        return np.hypot(*(pts - a).T)
    s = np.clip(((pts - a) @ e) / ee, 0.0, 1.0)
    d = pts - a - s[..., None] * e
    return np.hypot(d[..., 0], d[..., 1])


@dataclass(frozen=True, eq=False)
class Polygon:
    """Simple polygon (stored counterclockwise) with optional slit chains."""

    vertices: np.ndarray
    slits: tuple = ()

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise GeometryError("polygon needs at least 3 vertices given as [x, y] pairs")
        if np.allclose(v[0], v[-1]) and len(v) > 3:
            v = v[:-1]
        signed = 0.5 * float(np.sum(_cross(v, np.roll(v, -1, axis=0))))
        if signed == 0.0:
            raise GeometryError("polygon has zero area")
        if signed < 0.0:
            v = v[::-1].copy()
        slits = []
        for chain in self.slits:
            c = np.array(chain, dtype=float)
            if c.ndim != 2 or c.shape[1] != 2 or len(c) < 2:
                raise GeometryError("each slit must be a chain of at least two [x, y] points")
            slits.append(_frozen(c))
        object.__setattr__(self, "vertices", _frozen(v))
        object.__setattr__(self, "slits", tuple(slits))
        self._validate()

    @property
    def edges(self) -> np.ndarray:
        v = self.vertices
        return np.stack([v, np.roll(v, -1, axis=0)], axis=1)

    def _validate(self):
        v = self.vertices
        n = len(v)
        scale = float(np.max(np.abs(v))) + float(np.ptp(v))
        tol = REL_TOL * scale * scale
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n], tol):
                    raise GeometryError(f"polygon is not simple: edges {i} and {j} intersect")
        ltol = REL_TOL * scale
        for k, chain in enumerate(self.slits):
            ends = (chain[0], chain[-1])
            for a, b in zip(chain[:-1], chain[1:]):
                mid = 0.5 * (a + b)
                if not _polygon_inside(v, mid[None, :], ltol)[0]:
                    raise GeometryError(f"slit {k} leaves the polygon interior")
                for e0, e1 in zip(v, np.roll(v, -1, axis=0)):
                    if not _segments_intersect(a, b, e0, e1, tol):
                        continue
                    # touching is allowed only at the chain's end points
                    touch = [p for p in (a, b) if segment_distance(p[None, :], e0, e1)[0] <= ltol]
                    if not touch or any(
                        not any(np.allclose(p, q, atol=ltol) for q in ends) for p in touch
                    ):
                        raise GeometryError(f"slit {k} crosses the polygon boundary")
                    inner = a + 0.5 * (b - a)
                    if segment_distance(inner[None, :], e0, e1)[0] <= ltol:
                        raise GeometryError(f"slit {k} runs along the polygon boundary")


Shape = Union[Disc, CircularSector, AnnularSector, Polygon]


@dataclass(frozen=True)
class Domain:
    shape: Shape
    pose: Pose = field(default_factory=Pose)
    name: str = ""


# --------------------------------------------------------------------------
# transformations


def transform_shape(shape: Shape, pose: Pose) -> Shape:
    """Express `shape` in the frame of `pose`."""
    f = pose.to_frame
    if isinstance(shape, Disc):
        return Disc(tuple(f(shape.center)), shape.radius)
    if isinstance(shape, (CircularSector, AnnularSector)):
        return replace(shape, vertex=tuple(f(shape.vertex)), direction=shape.direction - pose.rotation)
    return Polygon(f(shape.vertices), tuple(f(c) for c in shape.slits))


def inverse_transform_shape(shape: Shape, pose: Pose) -> Shape:
    g = pose.to_world
    if isinstance(shape, Disc):
        return Disc(tuple(g(shape.center)), shape.radius)
    if isinstance(shape, (CircularSector, AnnularSector)):
        return replace(shape, vertex=tuple(g(shape.vertex)), direction=shape.direction + pose.rotation)
    return Polygon(g(shape.vertices), tuple(g(c) for c in shape.slits))


def to_wedge_frame(domain: Domain, pose: Pose | None = None) -> Domain:
    """Re-express a domain in wedge-frame coordinates (identity pose)."""
    pose = domain.pose if pose is None else pose
    return Domain(transform_shape(domain.shape, pose), Pose(), domain.name)


def from_wedge_frame(domain: Domain, pose: Pose) -> Domain:
    return Domain(inverse_transform_shape(domain.shape, pose), pose, domain.name)


def scale_shape(shape: Shape, s: float) -> Shape:
    """Dilate by s about the coordinate origin."""
    s = float(s)
    if isinstance(shape, Disc):
        return Disc(tuple(s * np.asarray(shape.center)), s * shape.radius)
    if isinstance(shape, CircularSector):
        return replace(shape, radius=s * shape.radius, vertex=tuple(s * np.asarray(shape.vertex)))
    if isinstance(shape, AnnularSector):
        return replace(shape, rho1=s * shape.rho1, rho2=s * shape.rho2, vertex=tuple(s * np.asarray(shape.vertex)))
    return Polygon(s * shape.vertices, tuple(s * c for c in shape.slits))


def scale_domain(domain: Domain, s: float) -> Domain:
    pose = Pose(tuple(s * np.asarray(domain.pose.origin)), domain.pose.rotation)
    return Domain(scale_shape(domain.shape, s), pose, domain.name)


# --------------------------------------------------------------------------
# measures and membership


def area(domain: Domain | Shape) -> float:
    shape = domain.shape if isinstance(domain, Domain) else domain
    if isinstance(shape, Disc):
        return math.pi * shape.radius**2
    if isinstance(shape, CircularSector):
        return 0.5 * shape.aperture * shape.radius**2
    if isinstance(shape, AnnularSector):
        return 0.5 * shape.aperture * (shape.rho2**2 - shape.rho1**2)
    v = shape.vertices
    return 0.5 * float(np.sum(_cross(v, np.roll(v, -1, axis=0))))


def _arc_range(shape) -> tuple[float, float]:
    return shape.direction - 0.5 * shape.aperture, shape.direction + 0.5 * shape.aperture


def bounding_box(shape: Shape) -> tuple[float, float, float, float]:
    if isinstance(shape, Disc):
        (cx, cy), r = shape.center, shape.radius
        return cx - r, cy - r, cx + r, cy + r
    if isinstance(shape, Polygon):
        v = shape.vertices
        return float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max())
    t0, t1 = _arc_range(shape)
    angles = [t0, t1] + [k * 0.5 * math.pi for k in range(-8, 9) if t0 < k * 0.5 * math.pi < t1]
    radii = [shape.radius] if isinstance(shape, CircularSector) else [shape.rho1, shape.rho2]
    pts = [shape.vertex] if isinstance(shape, CircularSector) else []
    for r in radii:
        for a in angles:
            pts.append((shape.vertex[0] + r * math.cos(a), shape.vertex[1] + r * math.sin(a)))
    pts = np.array(pts)
    return float(pts[:, 0].min()), float(pts[:, 1].min()), float(pts[:, 0].max()), float(pts[:, 1].max())


def length_scale(shape: Shape) -> float:
    x0, y0, x1, y1 = bounding_box(shape)
    return max(abs(x0), abs(x1), abs(y0), abs(y1)) + max(x1 - x0, y1 - y0)


def _polygon_inside(v, pts, tol):
    """Strict interior test (crossing number, boundary band excluded)."""
    pts = np.asarray(pts, dtype=float)
    a = v[None, :, :]
    b = np.roll(v, -1, axis=0)[None, :, :]
    px, py = pts[:, None, 0], pts[:, None, 1]
    ay, by = a[..., 1], b[..., 1]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = a[..., 0] + (py - ay) * (b[..., 0] - a[..., 0]) / (by - ay)
    crossings = np.sum(straddle & (px < xint), axis=1)
    inside = (crossings % 2) == 1
    if tol > 0.0:
        for e0, e1 in zip(v, np.roll(v, -1, axis=0)):
            inside &= segment_distance(pts, e0, e1) > tol
    return inside


def inside(shape: Shape, pts, tol: float | None = None, ignore_slits: bool = False):
    """Strict membership in the open domain (slits and cuts excluded)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if tol is None:
        tol = REL_TOL * length_scale(shape)
    if isinstance(shape, Polygon):
        out = _polygon_inside(shape.vertices, pts, tol)
        if not ignore_slits:
            for chain in shape.slits:
                for a, b in zip(chain[:-1], chain[1:]):
                    out &= segment_distance(pts, a, b) > tol
        return out
    if isinstance(shape, Disc):
        return np.hypot(*(pts - np.asarray(shape.center)).T) < shape.radius - tol
    d = pts - np.asarray(shape.vertex)
    r = np.hypot(d[:, 0], d[:, 1])
    margin = 0.5 * shape.aperture - np.abs(wrap_angle(np.arctan2(d[:, 1], d[:, 0]) - shape.direction))
    if shape.aperture >= TWO_PI:
        ang_ok = r * np.sin(np.clip(margin, 0.0, 0.5 * math.pi)) > tol
    else:
        ang_ok = (margin > 0.0) & (r * np.sin(np.clip(margin, 0.0, 0.5 * math.pi)) > tol)
    if isinstance(shape, CircularSector):
        return ang_ok & (r < shape.radius - tol) & (r > tol)
    return ang_ok & (r < shape.rho2 - tol) & (r > shape.rho1 + tol)


# --------------------------------------------------------------------------
# boundary pieces


@dataclass(frozen=True)
class Segment:
    p: tuple[float, float]
    q: tuple[float, float]
    slit: bool = False

    @property
    def length(self) -> float:
        return math.hypot(self.q[0] - self.p[0], self.q[1] - self.p[1])

    def point(self, s):
        s = np.asarray(s, dtype=float)[..., None]
        return np.asarray(self.p) + s * (np.asarray(self.q) - np.asarray(self.p))


@dataclass(frozen=True)
class Arc:
    center: tuple[float, float]
    radius: float
    t0: float
    t1: float

    @property
    def length(self) -> float:
        return self.radius * (self.t1 - self.t0)

    def point(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.stack(
            [self.center[0] + self.radius * np.cos(phi), self.center[1] + self.radius * np.sin(phi)], axis=-1
        )


Piece = Union[Segment, Arc]


@dataclass(frozen=True)
class BoundaryCurve:
    pieces: tuple

    @property
    def length(self) -> float:
        return float(sum(p.length for p in self.pieces))


def boundary_pieces(shape: Shape, include_slits: bool = True) -> list:
    """Boundary as segments and arcs; each slit segment appears once per side."""
    if isinstance(shape, Disc):
        return [Arc(shape.center, shape.radius, 0.0, TWO_PI)]
    if isinstance(shape, Polygon):
        out = [Segment(tuple(a), tuple(b)) for a, b in shape.edges]
        if include_slits:
            for chain in shape.slits:
                for a, b in zip(chain[:-1], chain[1:]):
                    out.append(Segment(tuple(a), tuple(b), slit=True))
                    out.append(Segment(tuple(b), tuple(a), slit=True))
        return out
    t0, t1 = _arc_range(shape)
    v = np.asarray(shape.vertex)
    u0 = np.array([math.cos(t0), math.sin(t0)])
    u1 = np.array([math.cos(t1), math.sin(t1)])
    if isinstance(shape, CircularSector):
        r = shape.radius
        return [
            Segment(tuple(v), tuple(v + r * u0)),
            Arc(shape.vertex, r, t0, t1),
            Segment(tuple(v + r * u1), tuple(v)),
        ]
    r1, r2 = shape.rho1, shape.rho2
    return [
        Segment(tuple(v + r1 * u0), tuple(v + r2 * u0)),
        Arc(shape.vertex, r2, t0, t1),
        Segment(tuple(v + r2 * u1), tuple(v + r1 * u1)),
        Arc(shape.vertex, r1, t0, t1),
    ]


def boundary_curve(domain: Domain | Shape) -> BoundaryCurve:
    shape = domain.shape if isinstance(domain, Domain) else domain
    return BoundaryCurve(tuple(boundary_pieces(shape)))


def _arc_param(arc: Arc, pts) -> np.ndarray:
    d = np.atleast_2d(pts) - np.asarray(arc.center)
    phi = np.arctan2(d[:, 1], d[:, 0])
    # unwrap into [t0, t0 + 2 pi)
    return arc.t0 + np.mod(phi - arc.t0, TWO_PI)


def _line_circle(u, c, rho):
    """Parameters t with |t u - c| = rho (u unit)."""
    dc = float(u @ c)
    disc = dc * dc - float(c @ c) + rho * rho
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    return [dc - sq, dc + sq]


# --------------------------------------------------------------------------
# containment


@dataclass(frozen=True)
class ContainmentReport:
    ok: bool
    violation: tuple[float, float] | None = None


def _piece_split_params(piece: Piece, rays, tol) -> list[float]:
    """Parameters where a boundary piece meets the given rays from the origin."""
    params: list[float] = []
    if isinstance(piece, Segment):
        p, q = np.asarray(piece.p), np.asarray(piece.q)
        e = q - p
        ee = float(e @ e)
        # passage through the apex
        if ee > 0.0:
            s0 = float(-(p @ e) / ee)
            if 0.0 < s0 < 1.0 and np.hypot(*(p + s0 * e)) <= tol:
                params.append(s0)
        for u in rays:
            den = float(_cross(u, e))
            if abs(den) <= 1e-15 * math.sqrt(ee):
                continue
            s = float(_cross(p, u)) / den
            t = float(_cross(p, e)) / den
            if 0.0 < s < 1.0 and t >= -tol:
                params.append(s)
        return params
    c = np.asarray(piece.center)
    if abs(np.hypot(*c) - piece.radius) <= tol:
        params.extend(float(x) for x in _arc_param(piece, np.zeros((1, 2))))
    for u in rays:
        for t in _line_circle(u, c, piece.radius):
            if t >= -tol:
                phi = float(_arc_param(piece, (t * u)[None, :])[0])
                if piece.t0 < phi < piece.t1:
                    params.append(phi)
    return params


def _piece_samples(piece: Piece, params) -> np.ndarray:
    lo, hi = (0.0, 1.0) if isinstance(piece, Segment) else (piece.t0, piece.t1)
    knots = np.unique(np.clip(np.concatenate([[lo, hi], np.asarray(params, dtype=float)]), lo, hi))
    mids = 0.5 * (knots[:-1] + knots[1:])
    return piece.point(mids)


def _ray_breakpoints(shape: Shape, u, tol) -> np.ndarray:
    """Distances along ray t u (t >= 0) where the ray meets any boundary piece."""
    ts = [0.0]
    for piece in boundary_pieces(shape, include_slits=True):
        ends = (piece.p, piece.q) if isinstance(piece, Segment) else (piece.point(piece.t0), piece.point(piece.t1))
        # end points near the ray bound short pieces the crossings would miss
        ts.extend(float(u @ np.asarray(w)) for w in ends)
        if isinstance(piece, Segment):
            p, q = np.asarray(piece.p), np.asarray(piece.q)
            e = q - p
            den = float(_cross(u, e))
            if abs(den) <= 1e-15 * max(float(np.hypot(*e)), 1e-300):
                if abs(float(_cross(u, p))) <= tol:
                    ts.extend(float(u @ w) for w in (p, q))
                continue
            s = float(_cross(p, u)) / den
            t = float(_cross(p, e)) / den
            if -1e-12 <= s <= 1.0 + 1e-12:
                ts.append(t)
        else:
            c = np.asarray(piece.center)
            for t in _line_circle(u, c, piece.radius):
                ts.append(t)
    ts = np.array([t for t in ts if t >= 0.0])
    return np.unique(ts)


def contains_in_wedge(domain: Domain | Shape, wedge: WedgeFamily, tol: float | None = None) -> ContainmentReport:
    """Check that the (frame-expressed) domain lies in S_alpha or R_beta."""
    shape = domain.shape if isinstance(domain, Domain) else domain
    if tol is None:
        tol = REL_TOL * length_scale(shape)
    if wedge.is_cut_plane:
        u = np.array([-1.0, 0.0])
        ts = _ray_breakpoints(shape, u, tol)
        ts = np.append(ts, ts[-1] + length_scale(shape) + 1.0)
        mids = 0.5 * (ts[:-1] + ts[1:])
        pts = mids[:, None] * u[None, :]
        hit = inside(shape, pts, tol)
        if np.any(hit):
            return ContainmentReport(False, tuple(float(v) for v in pts[np.argmax(hit)]))
        return ContainmentReport(True)
    rays = wedge.boundary_rays()
    for piece in boundary_pieces(shape, include_slits=False):
        pts = _piece_samples(piece, _piece_split_params(piece, rays, tol))
        bad = wedge.excluded_interior(pts, tol)
        if np.any(bad):
            return ContainmentReport(False, tuple(float(v) for v in pts[np.argmax(bad)]))
    return ContainmentReport(True)


# --------------------------------------------------------------------------
# rays from the origin and polar structure


def _crossings(pieces, theta: float, tol: float):
    """(t, piece index, branch) for every transversal hit of ray theta."""
    u = np.array([math.cos(theta), math.sin(theta)])
    out = []
    for k, piece in enumerate(pieces):
        if isinstance(piece, Segment):
            p, q = np.asarray(piece.p), np.asarray(piece.q)
            e = q - p
            den = float(_cross(u, e))
            if abs(den) <= 1e-15 * float(np.hypot(*e)):
                continue
            s = float(_cross(p, u)) / den
            t = float(_cross(p, e)) / den
            if -1e-12 <= s <= 1.0 + 1e-12 and t > tol:
                out.append((t, k, 0))
        else:
            c = np.asarray(piece.center)
            for branch, t in zip((-1, 1), _line_circle(u, c, piece.radius)):
                if t > tol:
                    phi = float(_arc_param(piece, (t * u)[None, :])[0])
                    if piece.t0 - 1e-12 <= phi <= piece.t1 + 1e-12:
                        out.append((t, k, branch))
    out.sort()
    return out


def ray_intervals(shape: Shape, theta: float, tol: float | None = None):
    """Radial intervals (a, b) along ray theta lying inside the domain."""
    if tol is None:
        tol = REL_TOL * length_scale(shape)
    pieces = boundary_pieces(shape, include_slits=False)
    hits = _crossings(pieces, theta, tol)
    ts = [0.0]
    for t, _, _ in hits:
        if t - ts[-1] > tol:
            ts.append(t)
    if len(ts) == 1:
        return []
    ts = np.array(ts)
    u = np.array([math.cos(theta), math.sin(theta)])
    mids = 0.5 * (ts[:-1] + ts[1:])
    ins = inside(shape, mids[:, None] * u[None, :], tol, ignore_slits=True)
    return [(float(ts[i]), float(ts[i + 1])) for i in np.flatnonzero(ins)]


def ray_cast(domain: Domain | Shape, theta: float) -> float:
    """Distance R(theta) from the origin to the boundary of a star-shaped domain."""
    shape = domain.shape if isinstance(domain, Domain) else domain
    iv = ray_intervals(shape, theta)
    if not iv:
        return 0.0
    # adjacent intervals separated only by a measure-zero cut still count once
    merged = [list(iv[0])]
    tol = REL_TOL * length_scale(shape)
    for a, b in iv[1:]:
        if a - merged[-1][1] <= tol:
            merged[-1][1] = b
        else:
            merged.append([a, b])
    if len(merged) > 1 or merged[0][0] > tol:
        raise NotStarShapedError(f"ray at theta={theta} meets the boundary more than once")
    return merged[0][1]


def is_star_shaped(domain: Domain | Shape, n_rays: int = 720) -> bool:
    shape = domain.shape if isinstance(domain, Domain) else domain
    thetas = -math.pi + (np.arange(n_rays) + 0.5) * TWO_PI / n_rays
    try:
        for th in thetas:
            ray_cast(shape, float(th))
    except NotStarShapedError:
        return False
    return True


def angular_breakpoints(shape: Shape, tol: float | None = None) -> np.ndarray:
    """Angles in [-pi, pi] where the ray/boundary incidence can change."""
    if tol is None:
        tol = REL_TOL * length_scale(shape)
    angles = [-math.pi, math.pi]
    for piece in boundary_pieces(shape, include_slits=False):
        if isinstance(piece, Segment):
            ends = [piece.p, piece.q]
        else:
            ends = [tuple(piece.point(piece.t0)), tuple(piece.point(piece.t1))]
            c = np.asarray(piece.center)
            d = float(np.hypot(*c))
            # tangent rays; a circle through the origin is tangent at +-pi/2
            if d > tol and d >= piece.radius - tol:
                phi = math.atan2(c[1], c[0])
                half = math.asin(min(1.0, piece.radius / d))
                angles.extend([phi - half, phi + half])
        for p in ends:
            if math.hypot(*p) > tol:
                angles.append(math.atan2(p[1], p[0]))
    a = np.unique(wrap_angle(np.array(angles)))
    return np.unique(np.concatenate([[-math.pi], a, [math.pi]]))


@dataclass(frozen=True)
class PolarInterval:
    """Angular interval with a fixed incidence structure.

    `radial` lists (lo, hi) pairs of boundary-crossing specs; a spec is None
    for the origin, ("seg", p, e) or ("arc", c, rho, branch).
    """

    a: float
    b: float
    radial: tuple


def _spec(piece: Piece, branch: int):
    if isinstance(piece, Segment):
        p = np.asarray(piece.p)
        return ("seg", p, np.asarray(piece.q) - p)
    return ("arc", np.asarray(piece.center), piece.radius, branch)


def radial_distance(spec, theta):
    """Vectorized distance along ray theta to the boundary piece in `spec`."""
    theta = np.asarray(theta, dtype=float)
    if spec is None:
        return np.zeros_like(theta)
    c, s = np.cos(theta), np.sin(theta)
    if spec[0] == "seg":
        _, p, e = spec
        return (p[0] * e[1] - p[1] * e[0]) / (c * e[1] - s * e[0])
    _, ctr, rho, branch = spec
    dc = c * ctr[0] + s * ctr[1]
    disc = np.maximum(dc * dc - float(ctr @ ctr) + rho * rho, 0.0)
    return dc + branch * np.sqrt(disc)


def polar_structure(shape: Shape) -> list[PolarInterval]:
    """Split (-pi, pi] into intervals on which each ray meets the same pieces."""
    tol = REL_TOL * length_scale(shape)
    pieces = boundary_pieces(shape, include_slits=False)
    knots = angular_breakpoints(shape, tol)
    out = []
    for a, b in zip(knots[:-1], knots[1:]):
        if b - a < 1e-13:
            continue
        theta = 0.5 * (a + b)
        hits = _crossings(pieces, theta, tol)
        if not hits:
            continue
        u = np.array([math.cos(theta), math.sin(theta)])
        ts = np.array([0.0] + [h[0] for h in hits])
        specs = [None] + [_spec(pieces[h[1]], h[2]) for h in hits]
        mids = 0.5 * (ts[:-1] + ts[1:])
        ins = inside(shape, mids[:, None] * u[None, :], tol, ignore_slits=True)
        radial = tuple((specs[i], specs[i + 1]) for i in np.flatnonzero(ins) if ts[i + 1] - ts[i] > tol)
        if radial:
            out.append(PolarInterval(float(a), float(b), radial))
    return out


# --------------------------------------------------------------------------
# proof diagnostic


def proof_map(r: float, theta: float, beta: float) -> tuple[float, float]:
    """(r, theta) -> r^((beta+1)/3) (cos(beta theta/2), sin(beta theta/2))."""
    if not (1.0 <= beta <= 2.0):
        raise GeometryError(f"beta must lie in [1, 2], got {beta}")
    if r < 0.0:
        raise GeometryError("r must be non-negative")
    if abs(theta) >= math.pi / beta:
        raise GeometryError(f"|theta| must be < pi/beta, got theta={theta}")
    rho = r ** ((beta + 1.0) / 3.0)
    return rho * math.cos(0.5 * beta * theta), rho * math.sin(0.5 * beta * theta)
