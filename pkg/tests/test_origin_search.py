import math

import numpy as np
import pytest

from wedgebound.bounds import pw_bound, reflex_bound
from wedgebound.domains import named_domain
from wedgebound.eigensolver import lambda1_fem
from wedgebound.geometry import CircularSector, Disc, Domain, Polygon, Pose, WedgeFamily, contains_in_wedge, to_wedge_frame
from wedgebound.origin_search import optimize_pose, seed_poses


def test_budget_validation():
    with pytest.raises(ValueError):
        optimize_pose(named_domain("@D1"), WedgeFamily.reflex(1.0), budget=10)


def test_budget_is_respected():
    res = optimize_pose(named_domain("@D1"), WedgeFamily.reflex(1.5), budget=120)
    assert res.evaluations == len(res.trace) <= 120


def test_infeasible_family_reports_no_pose():
    res = optimize_pose(Domain(Disc((0.0, 0.0), 1.0)), WedgeFamily.reflex(1.0), budget=60)
    assert not res.feasible
    assert res.best_pose is None and res.best_bound is None
    assert all(v is None for _, v in res.trace)


def test_seeds_include_slit_tip_pose():
    seeds = seed_poses(named_domain("@D1").shape, WedgeFamily.reflex(1.0), 100)
    assert any(np.allclose(p.origin, (0.0, 0.0)) and abs(math.remainder(p.rotation, 2 * math.pi)) < 1e-12 for p in seeds)


def test_sector_vertex_is_recovered():
    beta = 1.5
    s = Domain(CircularSector(1.0, 2 * math.pi / beta, vertex=(0.3, -0.2), direction=1.0))
    res = optimize_pose(s, WedgeFamily.reflex(beta), budget=200)
    at_vertex = reflex_bound(s, beta, Pose((0.3, -0.2), 1.0)).value
    assert res.best_bound.value == pytest.approx(at_vertex, rel=1e-9)


def test_best_pose_is_feasible_and_dominates_trace():
    d = named_domain("@D0")
    fam = WedgeFamily.pw(1.0)
    res = optimize_pose(d, fam, budget=200)
    assert contains_in_wedge(to_wedge_frame(d, res.best_pose), fam).ok
    values = [v for _, v in res.trace if v is not None]
    assert res.best_bound.value == max(values)
    # a vertex on the midpoint of an edge is one of the candidates
    edge_mid = pw_bound(d, 1.0, Pose((0.0, -1.0), 0.0)).value
    assert res.best_bound.value >= edge_mid


def test_best_so_far_is_monotone():
    res = optimize_pose(named_domain("@D1"), WedgeFamily.reflex(1.0), budget=150)
    trace = res.best_so_far()
    assert len(trace) == res.evaluations
    assert all(b >= a for a, b in zip(trace, trace[1:]))


def test_search_over_poses_can_exceed_the_eigenvalue():
    # a feasible pose for the slit square whose cut-plane value lies above the
    # Rayleigh upper bound of lambda_1; the maximized bound is therefore unsound
    d = named_domain("@D1")
    pose = Pose((-2.1045, -1.0163), -3.1377)
    rep = reflex_bound(d, 1.0, pose)
    fem = lambda1_fem(d)
    assert rep.valid
    assert rep.value > fem.upper_bound


def test_polygon_world_pose_is_ignored():
    # the search works on the shape; the domain's own pose is only a default
    sq = Polygon([(0, 0), (2, 0), (2, 2), (0, 2)], [[(0, 1), (1, 1)]])
    a = optimize_pose(Domain(sq, Pose()), WedgeFamily.reflex(1.0), budget=80)
    b = optimize_pose(Domain(sq, Pose((5, 5), 2.0)), WedgeFamily.reflex(1.0), budget=80)
    assert a.best_bound.value == b.best_bound.value
