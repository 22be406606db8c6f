"""Search over wedge placements (vertex and orientation) for the largest bound.

Stage one evaluates a deterministic seed set: slit tips, sector vertices,
polygon vertices and edges, the centroid, and a coarse grid crossed with 16
orientations.  Stage two runs Nelder-Mead from the best feasible seeds.
Infeasible poses score -inf (rejection, no penalty), so a returned pose
always passed the containment test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .bounds import BoundReport, wedge_bound
from .geometry import (
    AnnularSector,
    CircularSector,
    Disc,
    Domain,
    GeometryError,
    Polygon,
    Pose,
    WedgeFamily,
    WedgeKind,
    bounding_box,
    inside,
    length_scale,
)
from .moments import ContainmentError

N_ORIENT = 16
SEED_SHARE = 0.6


@dataclass(frozen=True, eq=False)
class PoseSearchResult:
    best_pose: Pose | None
    best_bound: BoundReport | None
    trace: list = field(repr=False)
    evaluations: int = 0

    @property
    def feasible(self) -> bool:
        return self.best_bound is not None

    def best_so_far(self) -> list[float]:
        out, best = [], -math.inf
        for _, v in self.trace:
            if v is not None and v > best:
                best = v
            out.append(best)
        return out


def _angle(v) -> float:
    return math.atan2(v[1], v[0])


def _orientation_for(family: WedgeFamily, axis: float) -> float:
    """Rotation putting the wedge's bisector along world angle `axis`."""
    if family.kind is WedgeKind.PW:
        return axis - 0.5 * family.aperture
    return axis


def _centroid(shape) -> np.ndarray:
    if isinstance(shape, Disc):
        return np.asarray(shape.center)
    if isinstance(shape, (CircularSector, AnnularSector)):
        r = shape.radius if isinstance(shape, CircularSector) else 0.5 * (shape.rho1 + shape.rho2)
        d = shape.direction
        return np.asarray(shape.vertex) + 0.5 * r * np.array([math.cos(d), math.sin(d)])
    v = shape.vertices
    w = np.roll(v, -1, axis=0)
    c = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
    a = 0.5 * c.sum()
    return np.array([((v[:, 0] + w[:, 0]) * c).sum(), ((v[:, 1] + w[:, 1]) * c).sum()]) / (6.0 * a)


def seed_poses(shape, family: WedgeFamily, limit: int) -> list[Pose]:
    """Deterministic candidate poses, most promising first."""
    seeds: list[Pose] = []
    turns = [2.0 * math.pi * k / N_ORIENT for k in range(N_ORIENT)]

    def add(p, rot):
        seeds.append(Pose(tuple(float(t) for t in p), rot))

    if isinstance(shape, (CircularSector, AnnularSector)):
        add(shape.vertex, _orientation_for(family, shape.direction))
    if isinstance(shape, Polygon):
        for chain in shape.slits:
            for tip, nxt in ((chain[0], chain[1]), (chain[-1], chain[-2])):
                # cut along the slit: the slit direction maps to theta = pi
                back = _angle(nxt - tip)
                add(tip, back + math.pi if family.kind is WedgeKind.REFLEX else back)
                if family.kind is WedgeKind.PW:
                    add(tip, back - family.aperture)
        v = shape.vertices
        n = len(v)
        for i in range(n):
            prev, cur, nxt = v[i - 1], v[i], v[(i + 1) % n]
            e_out, e_in = nxt - cur, cur - prev
            # interior is to the left of each counterclockwise edge
            inward = _angle(np.array([-e_in[1], e_in[0]]) + np.array([-e_out[1], e_out[0]]))
            add(cur, _orientation_for(family, inward))
            if family.kind is WedgeKind.PW:
                add(cur, _angle(e_out))
        for i in range(n):
            a, b = v[i], v[(i + 1) % n]
            normal = _angle(np.array([-(b - a)[1], (b - a)[0]]))
            add(0.5 * (a + b), _orientation_for(family, normal))
    c = _centroid(shape)
    for t in turns:
        add(c, t)
    x0, y0, x1, y1 = bounding_box(shape)
    room = max(limit - len(seeds), N_ORIENT)
    g = max(2, int(math.sqrt(room / N_ORIENT)))
    gx = np.linspace(x0, x1, g + 2)[1:-1]
    gy = np.linspace(y0, y1, g + 2)[1:-1]
    grid = np.array([(x, y) for y in gy for x in gx])
    # grid points outside the closure can still be feasible vertices, but
    # interior points are cheaper to reject early in the simplex stage
    keep = inside(shape, grid, tol=0.0, ignore_slits=True) if len(grid) else np.zeros(0, bool)
    for p in np.concatenate([grid[keep], grid[~keep]]):
        for t in turns:
            add(p, t)
    return seeds[:limit]


class _Objective:
    def __init__(self, shape, family: WedgeFamily, budget: int):
        self.shape = shape
        self.family = family
        self.budget = budget
        self.trace: list = []
        self.best: tuple[float, Pose | None] = (-math.inf, None)

    @property
    def left(self) -> int:
        return self.budget - len(self.trace)

    def __call__(self, pose: Pose) -> float:
        if self.left <= 0:
            return -math.inf
        try:
            value = wedge_bound(Domain(self.shape, pose), self.family).value
        except (ContainmentError, GeometryError, ArithmeticError):
            value = None
        self.trace.append((pose, value))
        if value is not None and value > self.best[0]:
            self.best = (value, pose)
        return -math.inf if value is None else value


def optimize_pose(domain, family: WedgeFamily, budget: int = 500, starts: int = 3) -> PoseSearchResult:
    """Maximize the wedge bound over poses with at most `budget` evaluations."""
    budget = int(budget)
    if budget < 50:
        raise ValueError(f"budget must be at least 50 evaluations, got {budget}")
    shape = domain.shape if isinstance(domain, Domain) else domain
    f = _Objective(shape, family, budget)
    seeds = seed_poses(shape, family, int(SEED_SHARE * budget))
    scored = [(f(p), k, p) for k, p in enumerate(seeds)]
    feasible = sorted((s for s in scored if s[0] > -math.inf), key=lambda s: (-s[0], s[1]))
    L = length_scale(shape)
    chosen: list[Pose] = []
    for _, _, p in feasible:
        if all(math.hypot(p.origin[0] - q.origin[0], p.origin[1] - q.origin[1]) > 1e-3 * L or
               abs(math.remainder(p.rotation - q.rotation, 2 * math.pi)) > 1e-3 for q in chosen):
            chosen.append(p)
        if len(chosen) == starts:
            break
    for i, p in enumerate(chosen):
        share = f.left // (len(chosen) - i)
        if share < 4:
            break
        x0 = np.array([p.origin[0], p.origin[1], p.rotation])
        simplex = np.array([x0, x0 + [0.05 * L, 0, 0], x0 + [0, 0.05 * L, 0], x0 + [0, 0, 0.1]])
        minimize(
            lambda x: -f(Pose((x[0], x[1]), x[2])),
            x0,
            method="Nelder-Mead",
            options={"maxfev": share, "initial_simplex": simplex, "xatol": 1e-10 * L, "fatol": 1e-14},
        )
    value, pose = f.best
    if pose is None:
        return PoseSearchResult(None, None, f.trace, len(f.trace))
    report = wedge_bound(Domain(shape, pose), family)
    return PoseSearchResult(pose, report, f.trace, len(f.trace))
