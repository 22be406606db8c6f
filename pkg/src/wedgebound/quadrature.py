"""Vectorized adaptive quadrature: Gauss-Kronrod on intervals, Gauss on triangles."""

from __future__ import annotations

import numpy as np

# 7-point Gauss / 15-point Kronrod pair on [-1, 1]
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_EPS = np.finfo(float).eps
_MAX_ACTIVE = 1 << 15
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def gauss_kronrod(f, a: float, b: float, rtol: float = 1e-12, atol: float = 0.0, max_rounds: int = 60):
    """Adaptive G7/K15 integration of a vectorized f over [a, b].

    Every round bisects the intervals whose |K15 - G7| exceeds their share of
    the tolerance.  Returns (value, error_estimate, n_evaluations).
    """
    if b <= a:
        return 0.0, 0.0, 0
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    total, err_done, evals = 0.0, 0.0, 0
    target = None
    for _ in range(max_rounds):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid[:, None] + half[:, None] * _NODES[None, :]
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
        evals += fx.size
        k = half * (fx @ _KW)
        g = half * (fx @ _GW)
        e = np.abs(k - g)
        if target is None:
            target = max(atol, rtol * abs(float(k.sum())))
        share = target * (hi - lo) / (b - a)
        # an interval whose integrand sits at rounding level cannot do better
        roundoff = 50.0 * _EPS * half * (np.abs(fx) @ _KW)
        done = (e <= share) | (e <= roundoff)
        if len(lo) > _MAX_ACTIVE:
            done[:] = True
        total += float(k[done].sum())
        err_done += float(e[done].sum())
        if done.all():
            return total, err_done, evals
        keep = ~done
        lo_k, hi_k = lo[keep], hi[keep]
        m = 0.5 * (lo_k + hi_k)
        lo = np.concatenate([lo_k, m])
        hi = np.concatenate([m, hi_k])
        # refresh the target once a better global estimate is available
        target = max(atol, rtol * abs(total + float(k[keep].sum())))
    total += float(k[~done].sum())
    err_done += float(e[~done].sum())
    return total, err_done, evals


# Dunavant degree-5 rule (7 points), barycentric coordinates and weights
_A1, _B1 = 0.059715871789770, 0.470142064105115
_A2, _B2 = 0.797426985353087, 0.101286507323456
_TRI_BARY = np.array([
    [1 / 3, 1 / 3, 1 / 3],
    [_A1, _B1, _B1], [_B1, _A1, _B1], [_B1, _B1, _A1],
    [_A2, _B2, _B2], [_B2, _A2, _B2], [_B2, _B2, _A2],
])
_TRI_W = np.array([0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3)


def _tri_rule(f, tris):
    pts = np.einsum("qk,tkd->tqd", _TRI_BARY, tris)
    fx = np.asarray(f(pts.reshape(-1, 2)), dtype=float).reshape(pts.shape[:2])
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    ar = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    return ar * (fx @ _TRI_W), fx.size


def _quadrisect(tris):
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
    return np.concatenate([
        np.stack([a, ab, ca], 1), np.stack([ab, b, bc], 1),
        np.stack([ca, bc, c], 1), np.stack([ab, bc, ca], 1),
    ])


def triangle_adaptive(f, tris, rtol: float = 1e-10, max_rounds: int = 14):
    """Adaptive quadrisection with the 7-point rule on a list of triangles.

    A triangle is accepted once the parent rule and the sum over its four
    children agree to within its area share of the tolerance.
    """
    tris = np.asarray(tris, dtype=float)
    d1 = tris[:, 1] - tris[:, 0]
    d2 = tris[:, 2] - tris[:, 0]
    total_area = float(np.sum(0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])))
    parent, evals = _tri_rule(f, tris)
    target = rtol * abs(float(parent.sum()))
    total, err = 0.0, 0.0
    for _ in range(max_rounds):
        kids = _quadrisect(tris)
        q_kids, n = _tri_rule(f, kids)
        evals += n
        n_t = len(tris)
        child_sum = q_kids.reshape(4, n_t).sum(axis=0)
        e1 = tris[:, 1] - tris[:, 0]
        e2 = tris[:, 2] - tris[:, 0]
        ar = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
        diff = np.abs(child_sum - parent)
        done = (diff <= target * ar / total_area) | (diff <= 50.0 * _EPS * np.abs(child_sum))
        if n_t > _MAX_ACTIVE:
            done[:] = True
        total += float(child_sum[done].sum())
        err += float(diff[done].sum())
        if done.all():
            return total, err, evals
        keep = np.flatnonzero(~done)
        idx = np.concatenate([keep + j * n_t for j in range(4)])
        tris = kids[idx]
        parent = q_kids[idx]
    total += float(parent.sum())
    err += float(diff[~done].sum())
    return total, err, evals


def ear_clip(vertices) -> np.ndarray:
    """Triangulate a simple counterclockwise polygon; returns (n-2, 3, 2)."""
    v = [np.asarray(p, dtype=float) for p in vertices]
    idx = list(range(len(v)))
    tris = []

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10 * len(v) ** 2:
            raise ValueError("ear clipping failed; polygon is not simple")
        n = len(idx)
        for i in range(n):
            ip, ic, inx = idx[i - 1], idx[i], idx[(i + 1) % n]
            a, b, c = v[ip], v[ic], v[inx]
            if cross(a, b, c) <= 0.0:
                continue
            ok = True
            for j in idx:
                if j in (ip, ic, inx):
                    continue
                p = v[j]
                if cross(a, b, p) >= 0.0 and cross(b, c, p) >= 0.0 and cross(c, a, p) >= 0.0:
                    ok = False
                    break
            if ok:
                tris.append((a, b, c))
                idx.pop(i)
                break
    tris.append(tuple(v[i] for i in idx))
    return np.array(tris)
