"""Built-in named domains and the JSON domain-file format.

Domain file schema (UTF-8 JSON object)::

    {
      "shape": "disc" | "sector" | "annular_sector" | "polygon",
      "radius": 1.0,                      # disc, sector
      "center": [0, 0],                   # disc (optional)
      "rho1": 1.0, "rho2": 2.0,           # annular_sector
      "aperture": 6.283185307179586,      # sector, annular_sector
      "vertex": [0, 0], "direction": 0.0, # sector, annular_sector (optional)
      "vertices": [[x, y], ...],          # polygon
      "slits": [[[x, y], [x, y]], ...],   # polygon (optional)
      "pose": {"origin": [x, y], "rotation": r}   # optional
    }
"""

from __future__ import annotations

import json
import math
import re

from .geometry import (
    AnnularSector,
    CircularSector,
    Disc,
    Domain,
    GeometryError,
    Polygon,
    Pose,
)

SQ = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
_H = math.sqrt(2.0) / 2.0


def _diamond(a: float) -> Polygon:
    return Polygon([(a, 0.0), (0.0, a), (-a, 0.0), (0.0, -a)], [[(-a, 0.0), (0.0, 0.0)]])


def _args(text: str, n: int, name: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")] if text else []
    except ValueError:
        raise GeometryError(f"@{name}: parameters must be numbers, got {text!r}") from None
    if len(vals) != n:
        raise GeometryError(f"@{name} takes {n} comma-separated parameter(s), got {len(vals)}")
    return vals


def named_domain(spec: str) -> Domain:
    """Resolve '@NAME' or '@NAME:params' to a Domain."""
    name, _, params = spec.lstrip("@").partition(":")
    if name == "D0":
        return Domain(Polygon(SQ), Pose(), "D0")
    if name == "D1":
        return Domain(Polygon(SQ, [[(-1.0, 0.0), (0.0, 0.0)]]), Pose(), "D1")
    if name == "D2-literal":
        return Domain(_diamond(_H), Pose(), "D2-literal")
    if name == "D2-area4":
        return Domain(_diamond(2.0 * _H), Pose(), "D2-area4")
    if name == "cut-disc":
        (r,) = _args(params or "1", 1, name)
        return Domain(CircularSector(r, 2.0 * math.pi), Pose(), f"cut-disc:{r:g}")
    if name == "disc":
        (r,) = _args(params or "1", 1, name)
        return Domain(Disc((0.0, 0.0), r), Pose(), f"disc:{r:g}")
    if name == "sector":
        beta, r = _args(params, 2, name)
        return Domain(CircularSector(r, 2.0 * math.pi / beta), Pose(), f"sector:{beta:g},{r:g}")
    if name == "annulus":
        beta, r1, r2 = _args(params, 3, name)
        return Domain(AnnularSector(r1, r2, 2.0 * math.pi / beta), Pose(), f"annulus:{beta:g},{r1:g},{r2:g}")
    raise GeometryError(
        f"unknown named domain @{name}; known: @D0 @D1 @D2-literal @D2-area4 "
        "@cut-disc:r @disc:r @sector:beta,r @annulus:beta,r1,r2"
    )


class DomainFileError(GeometryError):
    def __init__(self, path: str, line: int, message: str):
        self.path, self.line = path, line
        super().__init__(f"{path}:{line}: {message}")


def _line_of(text: str, key: str) -> int:
    m = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def _point(v, what):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v)):
        raise ValueError(f"{what} must be an [x, y] pair of numbers")
    return (float(v[0]), float(v[1]))


def _number(obj, key, default=None, positive=False):
    v = obj.get(key, default)
    if v is None:
        raise KeyError(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"'{key}' must be a number")
    if positive and not v > 0:
        raise ValueError(f"'{key}' must be positive, got {v}")
    return float(v)


def parse_domain(text: str, path: str = "<domain>") -> Domain:
    """Parse a JSON domain document; errors carry the offending line."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainFileError(path, e.lineno, f"invalid JSON: {e.msg} (column {e.colno})") from None
    if not isinstance(obj, dict):
        raise DomainFileError(path, 1, "top level must be an object")
    key = "shape"
    try:
        kind = obj.get("shape")
        if kind == "disc":
            key = "radius"
            r = _number(obj, "radius", positive=True)
            key = "center"
            shape = Disc(_point(obj.get("center", [0, 0]), "center"), r)
        elif kind in ("sector", "annular_sector"):
            extra = {}
            for key in ("vertex",):
                if key in obj:
                    extra["vertex"] = _point(obj[key], key)
            key = "direction"
            extra["direction"] = _number(obj, "direction", 0.0)
            key = "aperture"
            ap = _number(obj, "aperture")
            if not 0.0 < ap <= 2.0 * math.pi:
                raise ValueError(f"aperture must lie in (0, 2*pi], got {ap}")
            if kind == "sector":
                key = "radius"
                shape = CircularSector(_number(obj, "radius", positive=True), ap, **extra)
            else:
                key = "rho1"
                r1 = _number(obj, "rho1", positive=True)
                key = "rho2"
                shape = AnnularSector(r1, _number(obj, "rho2", positive=True), ap, **extra)
        elif kind == "polygon":
            key = "vertices"
            verts = obj["vertices"]
            if not isinstance(verts, list):
                raise ValueError("'vertices' must be a list of [x, y] pairs")
            verts = [_point(v, "each vertex") for v in verts]
            key = "slits"
            slits = obj.get("slits", [])
            if not isinstance(slits, list):
                raise ValueError("'slits' must be a list of point chains")
            chains = [[_point(p, "each slit point") for p in c] if isinstance(c, list) else None for c in slits]
            if any(c is None for c in chains):
                raise ValueError("each slit must be a list of [x, y] pairs")
            key = "vertices"
            shape = Polygon(verts, tuple(chains))
        else:
            raise ValueError(f"'shape' must be one of disc, sector, annular_sector, polygon; got {kind!r}")
        key = "pose"
        pose = Pose()
        if "pose" in obj:
            p = obj["pose"]
            if not isinstance(p, dict):
                raise ValueError("'pose' must be an object with 'origin' and 'rotation'")
            key = "origin"
            origin = _point(p.get("origin", [0, 0]), "pose origin")
            key = "rotation"
            pose = Pose(origin, _number(p, "rotation", 0.0))
    except KeyError as e:
        raise DomainFileError(path, _line_of(text, "shape"), f"missing required field {e.args[0]!r}") from None
    except (ValueError, TypeError, GeometryError) as e:
        raise DomainFileError(path, _line_of(text, key), str(e)) from None
    return Domain(shape, pose, obj.get("name", path))


def load_domain(ref: str) -> Domain:
    """'@NAME' for a built-in domain, otherwise a path to a JSON file."""
    if ref.startswith("@"):
        return named_domain(ref)
    with open(ref, encoding="utf-8") as fh:
        return parse_domain(fh.read(), ref)


def domain_to_json(domain: Domain) -> str:
    s = domain.shape
    if isinstance(s, Disc):
        obj = {"shape": "disc", "center": list(s.center), "radius": s.radius}
    elif isinstance(s, CircularSector):
        obj = {"shape": "sector", "radius": s.radius, "aperture": s.aperture, "vertex": list(s.vertex), "direction": s.direction}
    elif isinstance(s, AnnularSector):
        obj = {"shape": "annular_sector", "rho1": s.rho1, "rho2": s.rho2, "aperture": s.aperture,
               "vertex": list(s.vertex), "direction": s.direction}
    else:
        obj = {"shape": "polygon", "vertices": s.vertices.tolist(), "slits": [c.tolist() for c in s.slits]}
    obj["pose"] = {"origin": list(domain.pose.origin), "rotation": domain.pose.rotation}
    return json.dumps(obj, indent=2)
