import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from wedgebound.corpus import corpus
from wedgebound.domains import named_domain
from wedgebound.geometry import (
    AnnularSector,
    CircularSector,
    Disc,
    Domain,
    GeometryError,
    NotStarShapedError,
    Polygon,
    Pose,
    WedgeFamily,
    area,
    contains_in_wedge,
    inside,
    is_star_shaped,
    polar_structure,
    proof_map,
    radial_distance,
    ray_cast,
    scale_shape,
    to_wedge_frame,
)

SQUARE = [(-1, -1), (1, -1), (1, 1), (-1, 1)]


@pytest.mark.parametrize("bad", [("pw", 0.5), ("reflex", 0.9), ("reflex", 2.1)])
def test_family_parameter_ranges(bad):
    with pytest.raises(GeometryError):
        WedgeFamily(*bad)


def test_apertures():
    assert WedgeFamily.pw(2.0).aperture == pytest.approx(math.pi / 2)
    assert WedgeFamily.reflex(1.0).aperture == pytest.approx(2 * math.pi)
    assert WedgeFamily.reflex(2.0).aperture == pytest.approx(math.pi)


@pytest.mark.parametrize("fam", [WedgeFamily.pw(1.0), WedgeFamily.pw(2.5), WedgeFamily.reflex(1.0), WedgeFamily.reflex(1.7)])
def test_weight_integral_matches_quadrature(fam):
    a, b = -0.4, 1.3
    ref, _ = quad(lambda t: float(fam.weight(t)), a, b, epsabs=1e-14)
    assert fam.weight_integral(a, b) == pytest.approx(ref, abs=1e-13)


@settings(max_examples=50, deadline=None)
@given(
    x=st.floats(-5, 5), y=st.floats(-5, 5),
    ox=st.floats(-5, 5), oy=st.floats(-5, 5), rot=st.floats(-7, 7),
)
def test_pose_round_trip(x, y, ox, oy, rot):
    pose = Pose((ox, oy), rot)
    p = np.array([x, y])
    assert np.allclose(pose.to_world(pose.to_frame(p)), p, atol=1e-12)


def test_pose_rotation_convention():
    # a point on the wedge axis at world angle `rot` maps to the positive x-axis
    pose = Pose((1.0, 2.0), 0.5)
    q = np.array([1.0 + math.cos(0.5), 2.0 + math.sin(0.5)])
    assert np.allclose(pose.to_frame(q), [1.0, 0.0])


def test_polygon_normalizes_orientation_and_closure():
    cw = Polygon(SQUARE[::-1] + [SQUARE[-1]])
    assert len(cw.vertices) == 4
    assert area(cw) == pytest.approx(4.0)


def test_polygon_rejects_bad_input():
    with pytest.raises(GeometryError):
        Polygon([(0, 0), (1, 0)])
    with pytest.raises(GeometryError):
        Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])  # bow tie
    with pytest.raises(GeometryError):
        Polygon([(0, 0), (1, 0), (2, 0)])


def test_slit_validation():
    with pytest.raises(GeometryError, match="leaves"):
        Polygon(SQUARE, [[(0, 0), (2, 0)]])
    with pytest.raises(GeometryError):
        Polygon(SQUARE, [[(-1, -1), (0, -1)]])
    with pytest.raises(GeometryError, match="crosses"):
        Polygon([(0, 0), (2, 0), (2, 2), (1, 0.5), (0, 2)], [[(0.2, 0.6), (1.2, 0.6)]])
    Polygon(SQUARE, [[(-1, 0), (0, 0)], [(0.5, 0.5), (0.2, 0.8), (0.0, 0.5)]])


def test_areas():
    assert area(Disc((3, 4), 2.0)) == pytest.approx(4 * math.pi)
    assert area(CircularSector(2.0, 1.0)) == pytest.approx(2.0)
    assert area(AnnularSector(1.0, 2.0, math.pi)) == pytest.approx(1.5 * math.pi)
    # slits carry no area
    assert area(named_domain("@D1")) == area(named_domain("@D0")) == pytest.approx(4.0)


def test_inside_excludes_slit_points():
    d1 = named_domain("@D1").shape
    pts = np.array([[0.5, 0.5], [-0.5, 0.0], [1.5, 0.0], [0.5, 0.0]])
    assert list(inside(d1, pts)) == [True, False, False, True]
    assert inside(d1, pts[1:2], ignore_slits=True)[0]


def test_sector_inside_honours_direction():
    s = CircularSector(1.0, math.pi / 2, vertex=(1.0, 1.0), direction=math.pi / 2)
    assert inside(s, np.array([[1.0, 1.5]]))[0]
    assert not inside(s, np.array([[1.5, 1.0]]))[0]


def test_containment_cases():
    d1 = named_domain("@D1")
    assert contains_in_wedge(d1, WedgeFamily.reflex(1.0)).ok
    rep = contains_in_wedge(named_domain("@D0"), WedgeFamily.reflex(1.0))
    assert not rep.ok and rep.violation is not None
    assert not contains_in_wedge(Disc((0, 0), 1.0), WedgeFamily.reflex(1.0)).ok
    half = CircularSector(1.0, math.pi, direction=math.pi / 2)
    assert contains_in_wedge(half, WedgeFamily.pw(1.0)).ok
    assert not contains_in_wedge(half, WedgeFamily.pw(1.01)).ok


@pytest.mark.parametrize("beta", [1.0, 1.3, 1.5, 2.0])
def test_sector_fits_exactly_its_own_reflex_angle(beta):
    s = CircularSector(1.0, 2 * math.pi / beta)
    assert contains_in_wedge(s, WedgeFamily.reflex(beta)).ok
    if beta < 2.0:
        assert not contains_in_wedge(s, WedgeFamily.reflex(beta + 0.05)).ok


def test_short_slit_does_not_reach_vertex():
    # the cut must run all the way to the wedge vertex
    d = Polygon(SQUARE, [[(-1.0, 0.0), (-0.5, 0.0)]])
    assert not contains_in_wedge(d, WedgeFamily.reflex(1.0)).ok
    # and its tip may not sit just past the vertex either
    d = Polygon(SQUARE, [[(-1.0, 0.0), (-1e-6, 0.0)]])
    assert not contains_in_wedge(d, WedgeFamily.reflex(1.0)).ok


def test_containment_uses_pose():
    d = Domain(Polygon(SQUARE, [[(1.0, 0.0), (0.0, 0.0)]]), Pose((0.0, 0.0), math.pi))
    assert contains_in_wedge(to_wedge_frame(d), WedgeFamily.reflex(1.0)).ok
    assert not contains_in_wedge(d.shape, WedgeFamily.reflex(1.0)).ok


def test_ray_cast_square():
    sq = Polygon(SQUARE)
    assert ray_cast(sq, 0.0) == pytest.approx(1.0)
    assert ray_cast(sq, math.pi / 4) == pytest.approx(math.sqrt(2.0))


def test_ray_cast_rejects_non_star():
    c_shape = Polygon([(-1, -1), (1, -1), (1, -0.5), (-0.5, -0.5), (-0.5, 0.5), (1, 0.5), (1, 1), (-1, 1)])
    with pytest.raises(NotStarShapedError):
        # slope 0.4 leaves through the notch and re-enters the upper arm
        ray_cast(Polygon(c_shape.vertices + [0.75, 0.0]), math.atan(0.4))
    assert not is_star_shaped(Polygon(c_shape.vertices + [0.75, 0.0]))
    assert is_star_shaped(Polygon(SQUARE))


@pytest.mark.parametrize(
    "shape",
    [Polygon(SQUARE), Disc((0.3, -0.2), 1.0), Disc((3.0, 0.0), 1.0), CircularSector(1.5, 4.0, vertex=(0.2, 0.1)),
     AnnularSector(1.0, 2.0, 5.0, vertex=(0.5, 0.0), direction=1.0)],
)
def test_polar_structure_reproduces_area(shape):
    total = 0.0
    for iv in polar_structure(shape):
        for lo, hi in iv.radial:
            f = lambda t: 0.5 * (radial_distance(hi, t) ** 2 - radial_distance(lo, t) ** 2)
            total += quad(f, iv.a, iv.b, epsabs=1e-13, limit=200)[0]
    assert total == pytest.approx(area(shape), rel=1e-10)


def test_polar_structure_on_corpus_areas():
    for d, _ in corpus(seed=4, per_beta=4):
        total = 0.0
        for iv in polar_structure(d.shape):
            for lo, hi in iv.radial:
                f = lambda t: 0.5 * (radial_distance(hi, t) ** 2 - radial_distance(lo, t) ** 2)
                total += quad(f, iv.a, iv.b, epsabs=1e-13)[0]
        assert total == pytest.approx(area(d), rel=1e-10)


def test_scale_shape_area():
    for shape in (Polygon(SQUARE, [[(-1, 0), (0, 0)]]), Disc((1, 1), 0.5), AnnularSector(1, 2, 3.0)):
        assert area(scale_shape(shape, 2.5)) == pytest.approx(6.25 * area(shape))


def test_proof_map():
    x, y = proof_map(8.0, 0.0, 2.0)
    assert (x, y) == pytest.approx((8.0, 0.0))
    x, y = proof_map(1.0, math.pi / 2, 1.0)
    assert (x, y) == pytest.approx((math.cos(math.pi / 4), math.sin(math.pi / 4)))
    with pytest.raises(GeometryError):
        proof_map(1.0, math.pi, 1.0)
    with pytest.raises(GeometryError):
        proof_map(-1.0, 0.0, 1.5)
    with pytest.raises(GeometryError):
        proof_map(1.0, 0.0, 2.5)
