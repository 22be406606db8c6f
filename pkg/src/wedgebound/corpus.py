"""Random test domains placed in a wedge frame.

Every generator takes a numpy Generator and returns shapes already expressed
in the wedge frame (vertex at the origin), so the identity pose is feasible.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import Domain, Polygon, Pose, WedgeFamily, WedgeKind


def _angles(rng, lo, hi, n, max_gap, closed=False):
    """Sorted angles in (lo, hi); closed=True also bounds the end gaps."""
    for _ in range(1000):
        t = np.sort(rng.uniform(lo, hi, n))
        gaps = np.diff(np.concatenate([[lo], t, [hi]])) if closed else np.diff(t)
        if np.all(gaps < max_gap) and np.all(np.diff(t) > 1e-3):
            return t
    raise RuntimeError("could not draw well-spread angles")


def _radial_slits(rng, verts, count):
    """Slits from boundary vertices part of the way toward the origin."""
    slits = []
    if count == 0:
        return slits
    picks = rng.choice(len(verts), size=min(count, len(verts)), replace=False)
    for k in np.sort(picks):
        v = verts[k]
        if np.hypot(*v) < 1e-12:
            continue
        f = rng.uniform(0.2, 0.6)
        slits.append(np.array([v, (1.0 - f) * v]))
    return slits


def cut_plane_polygon(rng, n: int | None = None, extra_slits: int = 0, rmin=0.5, rmax=1.5) -> Polygon:
    """Star-shaped polygon around the origin, cut from the origin to its vertex on theta = pi."""
    n = int(rng.integers(5, 11)) if n is None else n
    t = _angles(rng, -math.pi, math.pi, n - 1, 0.9 * math.pi, closed=True)
    r = rng.uniform(rmin, rmax, n - 1)
    rp = rng.uniform(rmin, rmax)
    verts = np.column_stack([r * np.cos(t), r * np.sin(t)])
    verts = np.vstack([verts, [-rp, 0.0]])
    slits = [np.array([[0.0, 0.0], [-rp, 0.0]])]
    slits += _radial_slits(rng, verts[:-1], extra_slits)
    return Polygon(verts, tuple(slits))


def vertex_polygon(rng, family: WedgeFamily, n: int | None = None, extra_slits: int = 0, rmin=0.5, rmax=1.5) -> Polygon:
    """Polygon with a vertex at the origin and the rest inside the wedge."""
    n = int(rng.integers(4, 10)) if n is None else n
    if family.kind is WedgeKind.PW:
        lo, hi = 0.0, family.aperture
    else:
        lo, hi = -0.5 * family.aperture, 0.5 * family.aperture
    t = _angles(rng, lo, hi, n - 1, 0.9 * math.pi)
    r = rng.uniform(rmin, rmax, n - 1)
    verts = np.vstack([[0.0, 0.0], np.column_stack([r * np.cos(t), r * np.sin(t)])])
    # the vertices next to the origin would give slits along an edge
    return Polygon(verts, tuple(_radial_slits(rng, verts[2:-1], extra_slits)))


def star_polygon(rng, beta: float, extra_slits: int = 0) -> Polygon:
    """Corpus member for the reflex family with parameter beta."""
    if beta == 1.0:
        return cut_plane_polygon(rng, extra_slits=extra_slits)
    return vertex_polygon(rng, WedgeFamily.reflex(beta), extra_slits=extra_slits)


def corpus(seed: int = 0, per_beta: int = 36, betas=(1.0, 1.5, 2.0)) -> list[tuple[Domain, float]]:
    """(domain, beta) pairs; a third of each group carries extra slits."""
    rng = np.random.default_rng(seed)
    out = []
    for beta in betas:
        for k in range(per_beta):
            extra = 1 + k % 2 if k % 3 == 2 else 0
            shape = star_polygon(rng, beta, extra_slits=extra)
            out.append((Domain(shape, Pose(), f"star-b{beta:g}-{k:03d}"), beta))
    return out


def random_pose(rng, spread: float = 3.0) -> Pose:
    return Pose(tuple(rng.uniform(-spread, spread, 2)), rng.uniform(-math.pi, math.pi))


def half_plane_domain(rng) -> tuple[Polygon, Pose, Pose]:
    """World polygon in a random half-plane, with matching reflex and wedge poses.

    Returns (world shape, pose for R_2, pose for S_1).
    """
    shape = vertex_polygon(rng, WedgeFamily.reflex(2.0))
    if rng.random() < 0.5:
        # lift off the supporting line: the vertex no longer touches the domain
        shape = Polygon(shape.vertices + [rng.uniform(0.1, 1.0), rng.uniform(-0.5, 0.5)])
    pose = random_pose(rng)
    world = Polygon(pose.to_world(shape.vertices))
    return world, pose, Pose(pose.origin, pose.rotation - 0.5 * math.pi)
