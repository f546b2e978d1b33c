"""JSON scene and chain files with exact rationals stored as "p/q" strings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import AcSigmaError, ParseError, UnknownId
from .geometry import AffineMap, Line, Point, Polygon, Side, fmt_q, q, validate_simple_polygon
from .maps import HpaMap, LpaMap, MapChain, Step
from .polygons import ReductionCertificate
from .regions import GenusRegion
from .variation import SampledFunction, value


def enc_q(v: Fraction) -> str:
    return fmt_q(Fraction(v))


def enc_point(p) -> list[str]:
    return [enc_q(p[0]), enc_q(p[1])]


def _dec_q(v, where: str) -> Fraction:
    try:
        return q(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: bad number {v!r}") from exc


def _dec_point(v, where: str) -> Point:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ParseError(f"{where}: expected [x, y], got {v!r}")
    return Point(_dec_q(v[0], f"{where}[0]"), _dec_q(v[1], f"{where}[1]"))


def _dec_points(v, where: str) -> list[Point]:
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected a list of points")
    return [_dec_point(p, f"{where}[{i}]") for i, p in enumerate(v)]


def load_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _enc_value(v):
    return enc_q(v) if isinstance(v, Fraction) else [enc_q(v[0]), enc_q(v[1])]


# --- scenes -----------------------------------------------------------------------


@dataclass
class Scene:
    points: list[Point] = field(default_factory=list)
    lists: dict[str, list[int]] = field(default_factory=dict)
    functions: dict[str, list[tuple[int, object]]] = field(default_factory=dict)
    polygons: dict[str, Polygon] = field(default_factory=dict)
    regions: dict[str, GenusRegion] = field(default_factory=dict)

    def point_list(self, ident: str) -> list[Point]:
        if ident not in self.lists:
            raise UnknownId(f"no list named {ident!r}")
        return [self.points[i] for i in self.lists[ident]]

    def function(self, ident: str) -> SampledFunction:
        if ident not in self.functions:
            raise UnknownId(f"no function named {ident!r}")
        return SampledFunction({self.points[i]: v for i, v in self.functions[ident]})

    def polygon(self, ident: str) -> Polygon:
        if ident not in self.polygons:
            raise UnknownId(f"no polygon named {ident!r}")
        return self.polygons[ident]

    def region(self, ident: str) -> GenusRegion:
        if ident not in self.regions:
            raise UnknownId(f"no region named {ident!r}")
        return self.regions[ident]


def _named(doc: dict, key: str) -> dict:
    v = doc.get(key, {})
    if isinstance(v, list):
        return {str(i): item for i, item in enumerate(v)}
    if not isinstance(v, dict):
        raise ParseError(f"{key}: expected an object or a list")
    return v


def _region_from(doc, where: str) -> GenusRegion:
    if not isinstance(doc, dict) or "outer" not in doc:
        raise ParseError(f"{where}: expected {{outer, windows}}")
    outer = _dec_points(doc["outer"], f"{where}.outer")
    wins = [_dec_points(w, f"{where}.windows[{i}]") for i, w in enumerate(doc.get("windows", []))]
    try:
        return GenusRegion.make(outer, wins)
    except AcSigmaError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def scene_from_doc(doc) -> Scene:
    if not isinstance(doc, dict):
        raise ParseError("scene must be a JSON object")
    sc = Scene()
    sc.points = _dec_points(doc.get("points", []), "points")
    n = len(sc.points)
    for name, idx in _named(doc, "lists").items():
        if not isinstance(idx, list) or not idx or not all(isinstance(i, int) and 0 <= i < n for i in idx):
            raise ParseError(f"lists.{name}: expected a nonempty list of point indices")
        sc.lists[name] = idx
    for name, table in _named(doc, "functions").items():
        if not isinstance(table, list):
            raise ParseError(f"functions.{name}: expected [[index, value], ...]")
        rows = []
        for k, row in enumerate(table):
            if not (isinstance(row, list) and len(row) == 2 and isinstance(row[0], int) and 0 <= row[0] < n):
                raise ParseError(f"functions.{name}[{k}]: expected [index, value]")
            try:
                rows.append((row[0], value(row[1])))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"functions.{name}[{k}]: bad value {row[1]!r}") from exc
        sc.functions[name] = rows
    for name, vs in _named(doc, "polygons").items():
        pts = _dec_points(vs, f"polygons.{name}")
        try:
            sc.polygons[name] = validate_simple_polygon(pts)
        except AcSigmaError as exc:
            raise ParseError(f"polygons.{name}: {exc}") from exc
    for name, reg in _named(doc, "regions").items():
        sc.regions[name] = _region_from(reg, f"regions.{name}")
    return sc


def region_doc(r: GenusRegion) -> dict:
    return {
        "outer": [enc_point(p) for p in r.outer.vertices],
        "windows": [[enc_point(p) for p in w.vertices] for w in r.windows],
    }


def scene_to_doc(sc: Scene) -> dict:
    return {
        "points": [enc_point(p) for p in sc.points],
        "lists": {k: list(v) for k, v in sc.lists.items()},
        "functions": {k: [[i, _enc_value(v)] for i, v in rows] for k, rows in sc.functions.items()},
        "polygons": {k: [enc_point(p) for p in P.vertices] for k, P in sc.polygons.items()},
        "regions": {k: region_doc(r) for k, r in sc.regions.items()},
    }


def load_scene(path: str) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return scene_from_doc(load_json(fh.read(), path))


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# --- chains -----------------------------------------------------------------------


def _enc_affine(m: AffineMap) -> list[str]:
    return [enc_q(v) for v in (m.m11, m.m12, m.m21, m.m22, m.t1, m.t2)]


def _dec_affine(v, where: str) -> AffineMap:
    if not isinstance(v, list) or len(v) != 6:
        raise ParseError(f"{where}: expected six affine coefficients")
    return AffineMap(*(_dec_q(x, f"{where}[{i}]") for i, x in enumerate(v)))


def step_doc(step: Step) -> dict:
    if isinstance(step, AffineMap):
        return {"type": "affine", "map": _enc_affine(step)}
    if isinstance(step, HpaMap):
        line = step.splitting.boundary
        return {
            "type": "hpa",
            "line": [line.a, line.b, line.c],
            "h1_side": int(step.splitting.h1_side),
            "alpha1": _enc_affine(step.alpha1),
            "alpha2": _enc_affine(step.alpha2),
        }
    if isinstance(step, LpaMap):
        return {
            "type": "lpa",
            "cell": [enc_point(p) for p in step.cell_polygon],
            "alpha": _enc_affine(step.outer),
            "x0": enc_point(step.x0),
            "y0": enc_point(step.y0),
        }
    raise TypeError(f"not a chain step: {step!r}")


def step_from_doc(doc, where: str = "step") -> Step:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    kind = doc.get("type")
    try:
        if kind == "affine":
            m = _dec_affine(doc.get("map"), f"{where}.map")
            if not m.invertible:
                raise ParseError(f"{where}: affine step is singular")
            return m
        if kind == "hpa":
            a, b, c = (int(v) for v in doc["line"])
            line = Line.from_coeffs(a, b, c)
            return HpaMap.make(
                line,
                _dec_affine(doc["alpha1"], f"{where}.alpha1"),
                _dec_affine(doc["alpha2"], f"{where}.alpha2"),
                Side(int(doc.get("h1_side", 1))),
            )
        if kind == "lpa":
            return LpaMap.make(
                _dec_points(doc["cell"], f"{where}.cell"),
                _dec_affine(doc["alpha"], f"{where}.alpha"),
                _dec_point(doc["x0"], f"{where}.x0"),
                _dec_point(doc["y0"], f"{where}.y0"),
            )
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc}") from exc
    except ParseError:
        raise
    except (AcSigmaError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}: unknown step type {kind!r}")


def chain_doc(chain: MapChain) -> dict:
    return {"steps": [step_doc(s) for s in chain.steps]}


def chain_from_doc(doc) -> MapChain:
    if not isinstance(doc, dict) or not isinstance(doc.get("steps"), list):
        raise ParseError("chain file must be an object with a 'steps' list")
    return MapChain(tuple(step_from_doc(s, f"steps[{i}]") for i, s in enumerate(doc["steps"])))


def _stage_doc(stage):
    if isinstance(stage, Polygon):
        return [enc_point(p) for p in stage.vertices]
    return region_doc(stage)


def _stage_from(doc, where: str):
    if isinstance(doc, dict):
        return _region_from(doc, where)
    try:
        return validate_simple_polygon(_dec_points(doc, where))
    except AcSigmaError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def certificate_doc(cert: ReductionCertificate) -> dict:
    doc = chain_doc(cert.chain)
    doc["stages"] = [_stage_doc(s) for s in cert.stages]
    return doc


def certificate_from_doc(doc) -> ReductionCertificate:
    chain = chain_from_doc(doc)
    stages = doc.get("stages")
    if not isinstance(stages, list):
        raise ParseError("certificate needs a 'stages' list")
    return ReductionCertificate(chain, tuple(_stage_from(s, f"stages[{i}]") for i, s in enumerate(stages)))


def load_chain(path: str) -> MapChain:
    with open(path, encoding="utf-8") as fh:
        return chain_from_doc(load_json(fh.read(), path))


__all__ = [
    "Scene",
    "certificate_doc",
    "certificate_from_doc",
    "chain_doc",
    "chain_from_doc",
    "dump_json",
    "load_chain",
    "load_json",
    "load_scene",
    "region_doc",
    "scene_from_doc",
    "scene_to_doc",
    "step_doc",
    "step_from_doc",
]
