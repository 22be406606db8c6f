import math

import pytest

from wedgebound.domains import DomainFileError, domain_to_json, load_domain, named_domain, parse_domain
from wedgebound.geometry import AnnularSector, CircularSector, Disc, Domain, GeometryError, Polygon, Pose, area


@pytest.mark.parametrize(
    "name,expected_area",
    [("@D0", 4.0), ("@D1", 4.0), ("@D2-literal", 1.0), ("@D2-area4", 4.0), ("@cut-disc:2", 4 * math.pi),
     ("@disc:1", math.pi), ("@sector:1.5,1", 2 * math.pi / 3), ("@annulus:1,1,2", 3 * math.pi)],
)
def test_named_domains(name, expected_area):
    assert area(named_domain(name)) == pytest.approx(expected_area, rel=1e-12)


def test_named_domain_errors():
    with pytest.raises(GeometryError, match="unknown"):
        named_domain("@D9")
    with pytest.raises(GeometryError, match="3 comma-separated"):
        named_domain("@annulus:1,2")
    with pytest.raises(GeometryError, match="numbers"):
        named_domain("@disc:abc")


@pytest.mark.parametrize(
    "domain",
    [
        Domain(Disc((1.0, 2.0), 0.5), Pose((0.1, 0.2), 0.3)),
        Domain(CircularSector(1.0, 4.0, (0.5, 0.5), 1.0)),
        Domain(AnnularSector(1.0, 2.0, 3.0, (0.0, 1.0), -1.0)),
        named_domain("@D1"),
    ],
)
def test_json_round_trip(domain):
    back = parse_domain(domain_to_json(domain))
    assert type(back.shape) is type(domain.shape)
    assert area(back) == pytest.approx(area(domain), rel=1e-15)
    assert back.pose.origin == pytest.approx(domain.pose.origin)
    assert back.pose.rotation == pytest.approx(domain.pose.rotation)
    if isinstance(domain.shape, Polygon):
        assert len(back.shape.slits) == len(domain.shape.slits)


def test_load_from_file(tmp_path):
    p = tmp_path / "sq.json"
    p.write_text('{"shape": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]], "name": "unit"}')
    d = load_domain(str(p))
    assert d.name == "unit" and area(d) == pytest.approx(1.0)
    assert load_domain("@D0").name == "D0"


def test_invalid_json_reports_line():
    with pytest.raises(DomainFileError) as e:
        parse_domain('{\n  "shape": "disc",\n  "radius": ,\n}', "f.json")
    assert e.value.line == 3 and "f.json:3" in str(e.value)


def test_bad_field_reports_its_line():
    text = '{\n  "shape": "sector",\n  "aperture": 7.5,\n  "radius": 1\n}'
    with pytest.raises(DomainFileError) as e:
        parse_domain(text, "s.json")
    assert e.value.line == 3


def test_missing_field():
    with pytest.raises(DomainFileError, match="missing required field 'radius'"):
        parse_domain('{"shape": "disc"}')


@pytest.mark.parametrize(
    "text",
    ['[1, 2]', '{"shape": "blob"}', '{"shape": "disc", "radius": "big"}', '{"shape": "disc", "radius": -1}',
     '{"shape": "polygon", "vertices": [[0,0],[1,0]]}', '{"shape": "polygon", "vertices": [[0,0],[1,0],[0,1]], "slits": [3]}',
     '{"shape": "disc", "radius": 1, "pose": [0, 0]}'],
)
def test_rejected_documents(text):
    with pytest.raises(DomainFileError):
        parse_domain(text)
