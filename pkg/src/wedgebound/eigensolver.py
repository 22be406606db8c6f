"""Piecewise-linear finite elements for the first Dirichlet eigenvalue.

Slits are meshed as interior constrained edges whose nodes are pinned to
zero, which is exactly the Dirichlet condition from both sides.  Curved
boundaries are approximated by inscribed polygons; every red refinement
snaps new boundary midpoints back onto the arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
import triangle

from .geometry import (
    AnnularSector,
    CircularSector,
    Disc,
    Domain,
    GeometryError,
    Polygon,
    length_scale,
    segment_distance,
)
from .special import cross_product_root, first_bessel_zero


class MeshError(GeometryError):
    """Mesh generation failed."""


class EigenSolveError(ArithmeticError):
    """Inverse iteration did not converge."""


STRAIGHT = -1


@dataclass(frozen=True, eq=False)
class SlitMesh:
    nodes: np.ndarray
    elements: np.ndarray
    dirichlet: np.ndarray
    h: float
    # constrained edges (boundary and slit) with a marker: -1 straight, k >= 0 arc k
    marked_edges: np.ndarray = field(repr=False)
    edge_markers: np.ndarray = field(repr=False)
    arcs: tuple = ()
    structured: bool = False

    @property
    def inscribed(self) -> bool:
        """True when curved boundary is approximated by chords."""
        return len(self.arcs) > 0

    @property
    def dirichlet_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.dirichlet)

    @property
    def free(self) -> np.ndarray:
        return np.flatnonzero(~self.dirichlet)

    def signed_areas(self) -> np.ndarray:
        p = self.nodes[self.elements]
        d1, d2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def _finish(nodes, elements, edges, markers, arcs, h, structured=False) -> SlitMesh:
    nodes = np.asarray(nodes, dtype=float)
    elements = np.asarray(elements, dtype=np.int64)
    p = nodes[elements]
    d1, d2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
    neg = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0] < 0.0
    elements[neg] = elements[neg][:, [0, 2, 1]]
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    dirichlet = np.zeros(len(nodes), dtype=bool)
    dirichlet[edges.ravel()] = True
    mesh = SlitMesh(nodes, elements, dirichlet, float(h), edges, np.asarray(markers, dtype=np.int64), tuple(arcs), structured)
    if np.any(mesh.signed_areas() <= 0.0):
        raise MeshError("mesh contains degenerate elements")
    if not dirichlet.any():
        raise MeshError("mesh has no Dirichlet nodes")
    return mesh


# --------------------------------------------------------------------------
# coarse meshes


class _Points:
    """Point list with merging of near-duplicates."""

    def __init__(self, tol):
        self.tol = tol
        self.pts: list[np.ndarray] = []

    def add(self, p) -> int:
        p = np.asarray(p, dtype=float)
        if self.pts:
            d = np.hypot(*(np.asarray(self.pts) - p).T)
            k = int(np.argmin(d))
            if d[k] <= self.tol:
                return k
        self.pts.append(p)
        return len(self.pts) - 1


class _PSLG:
    def __init__(self, tol):
        self.points = _Points(tol)
        self.segments: list[tuple[int, int]] = []
        self.markers: list[int] = []
        self.arcs: list[tuple[tuple[float, float], float]] = []
        self.holes: list[tuple[float, float]] = []

    def line(self, a, b, h):
        a, b = np.asarray(a, float), np.asarray(b, float)
        n = max(1, math.ceil(np.hypot(*(b - a)) / h - 1e-9))
        ids = [self.points.add(a + (b - a) * k / n) for k in range(n + 1)]
        for i, j in zip(ids[:-1], ids[1:]):
            if i != j:
                self.segments.append((i, j))
                self.markers.append(STRAIGHT)

    def arc(self, c, rho, t0, t1, h):
        c = np.asarray(c, float)
        span = t1 - t0
        n = max(math.ceil(rho * span / h - 1e-9), math.ceil(span / (math.pi / 12) - 1e-9), 1)
        k = len(self.arcs)
        self.arcs.append((tuple(c), float(rho)))
        t = t0 + span * np.arange(n + 1) / n
        ids = [self.points.add(c + rho * np.array([math.cos(s), math.sin(s)])) for s in t]
        for i, j in zip(ids[:-1], ids[1:]):
            if i != j:
                self.segments.append((i, j))
                self.markers.append(k)

    def triangulate(self, h) -> SlitMesh:
        target = math.sqrt(3.0) / 4.0 * h * h
        data = {"vertices": np.asarray(self.points.pts), "segments": np.asarray(self.segments)}
        if self.holes:
            data["holes"] = np.asarray(self.holes)
        # YY: no Steiner points on any segment, slits included, so the
        # input segments stay element edges with unchanged indices
        out = triangle.triangulate(data, f"pq30YYa{target:.12f}Q")
        nodes = out["vertices"]
        if len(nodes) < len(self.points.pts) or "triangles" not in out:
            raise MeshError("triangulation dropped input vertices")
        tris = out["triangles"]
        n = len(nodes)
        have = np.unique(_edge_keys(*np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]]).T, n))
        seg = np.asarray(self.segments)
        if not np.all(np.isin(_edge_keys(seg[:, 0], seg[:, 1], n), have)):
            raise MeshError("a boundary or slit segment is missing from the triangulation")
        return _finish(nodes, tris, self.segments, self.markers, self.arcs, h)


def _polygon_pslg(poly: Polygon, h: float, tol: float) -> _PSLG:
    g = _PSLG(tol)
    v = poly.vertices
    ends = [c[0] for c in poly.slits] + [c[-1] for c in poly.slits]
    for a, b in zip(v, np.roll(v, -1, axis=0)):
        d = b - a
        L2 = float(d @ d)
        ts = [0.0, 1.0]
        for p in ends:
            if segment_distance(p[None, :], a, b)[0] <= tol:
                t = float((p - a) @ d) / L2
                if tol < t * math.sqrt(L2) < math.sqrt(L2) - tol:
                    ts.append(t)
        ts = sorted(ts)
        for t0, t1 in zip(ts[:-1], ts[1:]):
            g.line(a + t0 * d, a + t1 * d, h)
    for chain in poly.slits:
        for a, b in zip(chain[:-1], chain[1:]):
            g.line(a, b, h)
    return g


def _curved_pslg(shape, h: float, tol: float) -> _PSLG:
    g = _PSLG(tol)
    if isinstance(shape, Disc):
        g.arc(shape.center, shape.radius, -math.pi, math.pi, h)
        return g
    c = np.asarray(shape.vertex)
    cut = shape.direction + math.pi
    u = np.array([math.cos(cut), math.sin(cut)])
    full = shape.aperture >= 2.0 * math.pi * (1.0 - 1e-14)
    t0, t1 = shape.direction - 0.5 * shape.aperture, shape.direction + 0.5 * shape.aperture
    e0 = np.array([math.cos(t0), math.sin(t0)])
    e1 = np.array([math.cos(t1), math.sin(t1)])
    if isinstance(shape, CircularSector):
        R = shape.radius
        if full:
            g.arc(c, R, cut - 2.0 * math.pi, cut, h)
            g.line(c, c + R * u, h)
        else:
            g.line(c, c + R * e0, h)
            g.arc(c, R, t0, t1, h)
            g.line(c + R * e1, c, h)
        return g
    r1, r2 = shape.rho1, shape.rho2
    if full:
        g.arc(c, r2, cut - 2.0 * math.pi, cut, h)
        g.arc(c, r1, cut - 2.0 * math.pi, cut, h)
        g.line(c + r1 * u, c + r2 * u, h)
        g.holes.append(tuple(c))
    else:
        g.line(c + r1 * e0, c + r2 * e0, h)
        g.arc(c, r2, t0, t1, h)
        g.line(c + r2 * e1, c + r1 * e1, h)
        g.arc(c, r1, t0, t1, h)
    return g


def _grid_index(x, x0, h, n, tol):
    k = (x - x0) / h
    i = np.rint(k)
    if np.any(np.abs(k - i) > tol) or np.any(i < 0) or np.any(i > n):
        return None
    return i.astype(int)


def _structured(poly: Polygon, h: float) -> SlitMesh | None:
    """Right-triangle grid for an axis-aligned rectangle with grid-aligned slits."""
    v = poly.vertices
    xs, ys = np.unique(np.round(v[:, 0], 12)), np.unique(np.round(v[:, 1], 12))
    if len(v) != 4 or len(xs) != 2 or len(ys) != 2:
        return None
    x0, x1 = xs
    y0, y1 = ys
    nx, ny = (x1 - x0) / h, (y1 - y0) / h
    if abs(nx - round(nx)) > 1e-9 * nx or abs(ny - round(ny)) > 1e-9 * ny:
        return None
    nx, ny = int(round(nx)), int(round(ny))
    node = lambda i, j: j * (nx + 1) + i
    slit_edges = []
    for chain in poly.slits:
        ii = _grid_index(chain[:, 0], x0, h, nx, 1e-9)
        jj = _grid_index(chain[:, 1], y0, h, ny, 1e-9)
        if ii is None or jj is None:
            return None
        for (ia, ja), (ib, jb) in zip(zip(ii[:-1], jj[:-1]), zip(ii[1:], jj[1:])):
            di, dj = ib - ia, jb - ja
            steps = max(abs(di), abs(dj))
            # horizontal, vertical, or along the cell diagonal
            if not (di == 0 or dj == 0 or di == dj):
                return None
            si, sj = np.sign(di), np.sign(dj)
            for k in range(steps):
                slit_edges.append((node(ia + k * si, ja + k * sj), node(ia + (k + 1) * si, ja + (k + 1) * sj)))
    gx, gy = np.meshgrid(np.linspace(x0, x1, nx + 1), np.linspace(y0, y1, ny + 1))
    nodes = np.column_stack([gx.ravel(), gy.ravel()])
    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    a, b = node(i, j).ravel(), node(i + 1, j).ravel()
    c, d = node(i + 1, j + 1).ravel(), node(i, j + 1).ravel()
    elements = np.concatenate([np.column_stack([a, b, c]), np.column_stack([a, c, d])])
    bnd = []
    for k in range(nx):
        bnd += [(node(k, 0), node(k + 1, 0)), (node(k + 1, ny), node(k, ny))]
    for k in range(ny):
        bnd += [(node(nx, k), node(nx, k + 1)), (node(0, k + 1), node(0, k))]
    edges = bnd + slit_edges
    return _finish(nodes, elements, edges, [STRAIGHT] * len(edges), (), h, structured=True)


def build_slit_mesh(domain, h: float) -> SlitMesh:
    """Conforming triangulation with slits on element edges.

    Axis-aligned rectangles whose slits follow grid lines get a structured
    right-triangle grid; everything else goes through a constrained quality
    Delaunay mesh with maximum element size about h.
    """
    h = float(h)
    if not h > 0.0:
        raise MeshError(f"mesh size must be positive, got {h}")
    shape = domain.shape if isinstance(domain, Domain) else domain
    L = length_scale(shape)
    if h > L:
        h = L
    tol = 1e-10 * L
    if isinstance(shape, Polygon):
        mesh = _structured(shape, h)
        if mesh is not None:
            return mesh
        g = _polygon_pslg(shape, h, tol)
    elif isinstance(shape, (Disc, CircularSector, AnnularSector)):
        g = _curved_pslg(shape, h, tol)
    else:
        raise MeshError(f"cannot mesh {type(shape).__name__}")
    return g.triangulate(h)


def _edge_keys(a, b, n):
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    return lo * n + hi


def refine(mesh: SlitMesh) -> SlitMesh:
    """Red refinement: split every triangle into four, snapping arc midpoints."""
    t = mesh.elements
    n = len(mesh.nodes)
    pairs = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    keys = _edge_keys(pairs[:, 0], pairs[:, 1], n)
    uniq, inv = np.unique(keys, return_inverse=True)
    lo, hi = uniq // n, uniq % n
    mids = 0.5 * (mesh.nodes[lo] + mesh.nodes[hi])
    m = len(t)
    mid_id = n + inv
    m01, m12, m20 = mid_id[:m], mid_id[m:2 * m], mid_id[2 * m:]
    a, b, c = t[:, 0], t[:, 1], t[:, 2]
    elements = np.concatenate([
        np.column_stack([a, m01, m20]),
        np.column_stack([m01, b, m12]),
        np.column_stack([m20, m12, c]),
        np.column_stack([m01, m12, m20]),
    ])
    e = mesh.marked_edges
    pos = np.searchsorted(uniq, _edge_keys(e[:, 0], e[:, 1], n))
    em = n + pos
    for k, (center, rho) in enumerate(mesh.arcs):
        sel = pos[mesh.edge_markers == k]
        d = mids[sel] - np.asarray(center)
        mids[sel] = np.asarray(center) + rho * d / np.hypot(d[:, 0], d[:, 1])[:, None]
    nodes = np.concatenate([mesh.nodes, mids])
    edges = np.concatenate([np.column_stack([e[:, 0], em]), np.column_stack([em, e[:, 1]])])
    markers = np.concatenate([mesh.edge_markers, mesh.edge_markers])
    return _finish(nodes, elements, edges, markers, mesh.arcs, 0.5 * mesh.h, mesh.structured)


def prolong(coarse: SlitMesh, fine: SlitMesh, values) -> np.ndarray:
    """Interpolate a coarse mesh function onto its red refinement."""
    t = coarse.elements
    n = len(coarse.nodes)
    pairs = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    uniq = np.unique(_edge_keys(pairs[:, 0], pairs[:, 1], n))
    out = np.empty(len(fine.nodes))
    out[:n] = values
    out[n:] = 0.5 * (values[uniq // n] + values[uniq % n])
    out[fine.dirichlet] = 0.0
    return out


# --------------------------------------------------------------------------
# assembly and eigen-solve


def assemble(mesh: SlitMesh):
    """Global P1 stiffness and consistent mass matrices (CSR)."""
    p = mesh.nodes[mesh.elements]
    x, y = p[..., 0], p[..., 1]
    # gradients of barycentric coordinates, times 2A
    gx = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    gy = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * (gy[:, 2] * gx[:, 1] - gx[:, 2] * gy[:, 1])
    kl = (gx[:, :, None] * gx[:, None, :] + gy[:, :, None] * gy[:, None, :]) / (4.0 * area)[:, None, None]
    ml = (np.ones((3, 3)) + np.eye(3))[None] * (area / 12.0)[:, None, None]
    rows = np.repeat(mesh.elements, 3, axis=1).ravel()
    cols = np.tile(mesh.elements, (1, 3)).ravel()
    n = len(mesh.nodes)
    K = sp.csr_matrix((kl.ravel(), (rows, cols)), shape=(n, n))
    M = sp.csr_matrix((ml.ravel(), (rows, cols)), shape=(n, n))
    return K, M


def rayleigh_quotient(mesh: SlitMesh, values, matrices=None) -> float:
    """Dirichlet energy over mass of the piecewise-linear interpolant."""
    v = np.asarray(values, dtype=float)
    if v.shape != (len(mesh.nodes),):
        raise ValueError(f"expected {len(mesh.nodes)} nodal values, got shape {v.shape}")
    vmax = float(np.max(np.abs(v))) if v.size else 0.0
    if vmax == 0.0:
        raise ValueError("Rayleigh quotient of the zero function is undefined")
    if np.max(np.abs(v[mesh.dirichlet]), initial=0.0) > 1e-12 * vmax:
        raise ValueError("trial function must vanish on the Dirichlet nodes")
    K, M = assemble(mesh) if matrices is None else matrices
    return float(v @ (K @ v)) / float(v @ (M @ v))


@dataclass(frozen=True)
class Eigenpair:
    value: float
    vector: np.ndarray
    iterations: int
    residual: float


def inverse_iteration(
    K, M, x0=None, tol: float = 1e-10, max_iter: int = 10_000, solver: str = "direct", seed: int = 0
) -> Eigenpair:
    """Smallest eigenpair of K x = lam M x (K, M symmetric positive definite)."""
    n = K.shape[0]
    if solver == "direct":
        lu = spla.splu(sp.csc_matrix(K))
        solve = lu.solve
    elif solver == "cg":
        diag = K.diagonal()
        pre = spla.LinearOperator(K.shape, matvec=lambda r: r / diag)

        def solve(b, _x=[None]):
            y, info = spla.cg(K, b, x0=_x[0], rtol=1e-12, atol=0.0, maxiter=20 * n, M=pre)
            if info != 0:
                raise EigenSolveError(f"conjugate gradients failed (info={info})")
            _x[0] = y
            return y
    else:
        raise ValueError(f"unknown solver {solver!r}")
    x = np.ones(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    x /= math.sqrt(x @ (M @ x))
    best, stall, restarted = math.inf, 0, False
    res = math.inf
    for it in range(1, max_iter + 1):
        y = solve(M @ x)
        x = y / math.sqrt(y @ (M @ y))
        kx = K @ x
        lam = float(x @ kx)
        res = float(np.linalg.norm(kx - lam * (M @ x)) / np.linalg.norm(kx))
        if res <= tol:
            return Eigenpair(lam, x, it, res)
        if res < 0.999 * best:
            best, stall = res, 0
        else:
            stall += 1
        if stall > 500 and not restarted:
            x = np.random.default_rng(seed).random(n)
            x /= math.sqrt(x @ (M @ x))
            best, stall, restarted = math.inf, 0, True
    raise EigenSolveError(f"inverse iteration stopped after {max_iter} steps with relative residual {res:.3e}")


@dataclass(frozen=True)
class LevelSolve:
    mesh: SlitMesh
    value: float
    vector: np.ndarray
    iterations: int
    residual: float


def solve_level(mesh: SlitMesh, x0=None, solver: str = "direct") -> LevelSolve:
    K, M = assemble(mesh)
    free = mesh.free
    if free.size == 0:
        raise MeshError("mesh has no interior nodes; refine further")
    Kf = K[free][:, free]
    Mf = M[free][:, free]
    pair = inverse_iteration(Kf, Mf, None if x0 is None else x0[free], solver=solver)
    u = np.zeros(len(mesh.nodes))
    u[free] = pair.vector
    if u.sum() < 0.0:
        u = -u
    return LevelSolve(mesh, pair.value, u, pair.iterations, pair.residual)


@dataclass(frozen=True, eq=False)
class EigenEstimate:
    levels: list
    extrapolated: float
    observed_order: float
    error_estimate: float
    upper_bound: float
    eigenvector: np.ndarray = field(repr=False)
    mesh: SlitMesh = field(repr=False)
    iterations: int = 0
    inscribed: bool = False

    @property
    def finest(self) -> float:
        return self.levels[-1][1]

    @property
    def positive(self) -> bool:
        """Discrete first eigenfunction has one sign on interior nodes."""
        return bool(np.min(self.eigenvector[self.mesh.free]) > 0.0)


def richardson(levels):
    """Extrapolate (h, lambda_h) pairs with step ratio 2 using the observed order.

    Returns (extrapolated, observed_order, error_estimate).  The order used
    for the extrapolation is clamped to [0.5, 4]; the reported order is not.
    """
    lam = np.array([v for _, v in levels], dtype=float)
    if len(lam) < 3:
        raise ValueError("Richardson extrapolation needs at least three levels")

    def step(a, b, c):
        d1, d2 = a - b, b - c
        if d1 * d2 <= 0.0 or d2 == 0.0:
            return c, math.nan, abs(d2)
        p = math.log2(d1 / d2)
        q = min(max(p, 0.5), 4.0)
        ext = c - d2 / (2.0**q - 1.0)
        return ext, p, abs(c - ext)

    ext, p, err = step(*lam[-3:])
    if len(lam) >= 4:
        prev, _, _ = step(*lam[-4:-1])
        err = max(err, abs(ext - prev))
    return ext, p, err


def lambda1_fem(domain, h0: float | None = None, refinements: int = 3, solver: str = "direct") -> EigenEstimate:
    """lambda_1 on meshes of size h0, h0/2, ..., h0/2^refinements, extrapolated."""
    refinements = int(refinements)
    if refinements < 2:
        raise ValueError("need at least two refinements (three levels) for extrapolation")
    shape = domain.shape if isinstance(domain, Domain) else domain
    if h0 is None:
        h0 = length_scale(shape) / 8.0
    mesh = build_slit_mesh(shape, h0)
    # a thin domain can leave the coarsest mesh without interior nodes
    while mesh.free.size < 8:
        mesh = refine(mesh)
    solves = [solve_level(mesh, solver=solver)]
    for _ in range(refinements):
        fine = refine(solves[-1].mesh)
        x0 = prolong(solves[-1].mesh, fine, solves[-1].vector)
        solves.append(solve_level(fine, x0=x0, solver=solver))
    levels = [(s.mesh.h, s.value) for s in solves]
    ext, p, err = richardson(levels)
    last = solves[-1]
    upper = rayleigh_quotient(last.mesh, last.vector)
    return EigenEstimate(
        levels, ext, p, err, upper, last.vector, last.mesh,
        sum(s.iterations for s in solves), last.mesh.inscribed,
    )


def lambda1_closed(shape) -> float:
    """Exact lambda_1 for discs and (annular) sectors; aperture 2 pi is the cut disc."""
    if isinstance(shape, Domain):
        shape = shape.shape
    if isinstance(shape, Disc):
        return (first_bessel_zero(0.0).k / shape.radius) ** 2
    if isinstance(shape, CircularSector):
        nu = math.pi / shape.aperture
        return (first_bessel_zero(nu).k / shape.radius) ** 2
    if isinstance(shape, AnnularSector):
        nu = math.pi / shape.aperture
        return cross_product_root(nu, shape.rho1, shape.rho2).k ** 2
    raise GeometryError(f"no closed form for {type(shape).__name__}")
