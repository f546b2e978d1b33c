"""Ears, triangulation, ear quadrilaterals and polygon-to-triangle reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PolygonAlgoError
from .geometry import (
    AffineMap,
    Hit,
    Location,
    Point,
    Polygon,
    Segment,
    canonical_vertices,
    in_convex_interior,
    is_convex,
    lerp,
    midpoint,
    orient,
    point_in_polygon,
    segment_intersects,
    segment_meets_convex,
    segment_meets_convex_interior,
    signed_area2,
)
from .maps import LpaMap, MapChain, map_polygon

MAX_HALVINGS = 200


def _verts(P) -> tuple[Point, ...]:
    return P.vertices if isinstance(P, Polygon) else tuple(P)


def _edges(vs: Sequence[Point]) -> list[Segment]:
    n = len(vs)
    return [Segment(vs[i], vs[(i + 1) % n]) for i in range(n)]


def open_segment_location(vs: Sequence[Point], a: Point, b: Point) -> Location:
    """Where the open segment ``(a, b)`` lies relative to the polygon ``vs``.

    ``a`` and ``b`` are polygon vertices or points off the boundary.  Returns
    ``INSIDE`` or ``OUTSIDE`` when the open segment avoids the boundary
    entirely, ``BOUNDARY`` otherwise.
    """
    seg = Segment(a, b)
    for e in _edges(vs):
        hit = segment_intersects(seg, e)
        if hit.kind is Hit.DISJOINT:
            continue
        if hit.kind is Hit.OVERLAP:
            return Location.BOUNDARY
        if hit.point != a and hit.point != b:
            return Location.BOUNDARY
    return point_in_polygon(midpoint(a, b), vs)


def is_diagonal(vs: Sequence[Point], i: int, j: int) -> bool:
    """Is the open segment between vertices ``i`` and ``j`` inside the polygon?"""
    return open_segment_location(vs, vs[i], vs[j]) is Location.INSIDE


@dataclass(frozen=True)
class Ear:
    polygon: tuple[Point, ...]
    vertex_index: int

    @property
    def vertex(self) -> Point:
        return self.polygon[self.vertex_index]

    @property
    def neighbours(self) -> tuple[Point, Point]:
        n = len(self.polygon)
        return self.polygon[self.vertex_index - 1], self.polygon[(self.vertex_index + 1) % n]


def _ear_indices(vs: Sequence[Point]) -> list[int]:
    n = len(vs)
    if n == 3:
        return [0, 1, 2]
    out = []
    for i in range(n):
        a, v, b = vs[i - 1], vs[i], vs[(i + 1) % n]
        if orient(a, v, b) <= 0:
            continue  # reflex or straight vertices are never ears of a CCW polygon
        if open_segment_location(vs, a, b) is Location.INSIDE:
            out.append(i)
    return out


def find_ears(P: Polygon | Sequence[Point]) -> list[Ear]:
    """All ears of a simple polygon; every vertex of a triangle counts as an ear."""
    vs = _verts(P)
    if signed_area2(vs) < 0:
        vs = tuple(reversed(vs))
    return [Ear(vs, i) for i in _ear_indices(vs)]


def triangulate(P: Polygon | Sequence[Point], first_ear: int | None = None) -> list[tuple[Point, Point, Point]]:
    """Ear-clipping triangulation; ``first_ear`` forces the first clipped vertex."""
    vs = list(_verts(P))
    if signed_area2(vs) < 0:
        vs.reverse()
        if first_ear is not None:
            first_ear = len(vs) - 1 - first_ear
    tris = []
    while len(vs) > 3:
        if first_ear is not None:
            i, first_ear = first_ear, None
        else:
            ears = _ear_indices(vs)
            if not ears:
                raise PolygonAlgoError("no ear found; polygon is not simple")
            i = ears[0]
        n = len(vs)
        tris.append((vs[i - 1], vs[i], vs[(i + 1) % n]))
        del vs[i]
    tris.append(tuple(vs))
    return tris


@dataclass(frozen=True)
class EarQuadrilateral:
    """Convex quadrilateral ``a, u, b, w`` around the ear ``v`` (a, b its neighbours)."""

    a: Point
    u: Point
    b: Point
    w: Point
    v: Point

    @property
    def vertices(self) -> tuple[Point, ...]:
        vs = (self.a, self.u, self.b, self.w)
        return vs if signed_area2(vs) > 0 else tuple(reversed(vs))

    @property
    def m(self) -> Point:
        return midpoint(self.a, self.b)


def _median_point_in(v: Point, m: Point, tri: Sequence[Point]) -> Point:
    tri = tri if signed_area2(tri) > 0 else tuple(reversed(tri))
    s = Fraction(1)
    for _ in range(MAX_HALVINGS):
        w = lerp(m, m + (m - v), s)
        if in_convex_interior(w, tri):
            return w
        s /= 2
    raise PolygonAlgoError("median point w not found inside the adjacent triangle")


def _adjacent_triangle(vs: Sequence[Point], i: int) -> tuple[Point, Point, Point]:
    n = len(vs)
    a, b = vs[i - 1], vs[(i + 1) % n]
    for tri in triangulate(vs, first_ear=i)[1:]:
        if a in tri and b in tri:
            return tri
    raise PolygonAlgoError("no triangle adjacent to the ear diagonal")


def check_ear_quadrilateral(
    vs: Sequence[Point], i: int, quad: EarQuadrilateral, obstacles: Sequence[Sequence[Point]] = ()
) -> bool:
    """Exact check of every property the reduction relies on."""
    n = len(vs)
    a, v, b = vs[i - 1], vs[i], vs[(i + 1) % n]
    Q = quad.vertices
    if not is_convex(Q) or not in_convex_interior(v, Q):
        return False
    if open_segment_location(vs, a, quad.u) is not Location.OUTSIDE:
        return False
    if open_segment_location(vs, b, quad.u) is not Location.OUTSIDE:
        return False
    if open_segment_location(vs, a, quad.w) is not Location.INSIDE:
        return False
    if open_segment_location(vs, b, quad.w) is not Location.INSIDE:
        return False
    # every edge not at v stays out of int Q, so the lpa step fixes it
    for k in range(n):
        if k == i or (k + 1) % n == i:
            continue
        if segment_meets_convex_interior(Segment(vs[k], vs[(k + 1) % n]), Q):
            return False
    for obs in obstacles:
        for e in _edges(obs):
            if segment_meets_convex(e, Q):
                return False
    return True


def construct_ear_quadrilateral(
    P: Polygon | Sequence[Point], i: int, obstacles: Sequence[Sequence[Point]] = ()
) -> EarQuadrilateral:
    """The quadrilateral for the ear at vertex ``i`` of a CCW polygon with at least 4 vertices.

    ``w`` sits on the median from ``v`` through the midpoint ``m`` inside the
    triangle across the diagonal; ``u = (1+t) v - t w`` with ``t`` halved from
    1 until every property verifies.  ``obstacles`` are extra polygons whose
    boundaries must stay clear of the closed quadrilateral.
    """
    vs = _verts(P)
    if signed_area2(vs) < 0:
        raise PolygonAlgoError("polygon must be counter-clockwise")
    n = len(vs)
    if n < 4:
        raise PolygonAlgoError("a triangle has no adjacent triangle across an ear diagonal")
    a, v, b = vs[i - 1], vs[i], vs[(i + 1) % n]
    m = midpoint(a, b)
    w = _median_point_in(v, m, _adjacent_triangle(vs, i))
    t = Fraction(1)
    for _ in range(MAX_HALVINGS):
        u = lerp(v, v + (v - w), t)
        quad = EarQuadrilateral(a, u, b, w, v)
        if check_ear_quadrilateral(vs, i, quad, obstacles):
            return quad
        t /= 2
    raise PolygonAlgoError("no ear quadrilateral found")


@dataclass(frozen=True)
class ReductionCertificate:
    """A chain with the exact image after each step.

    ``stages[0]`` is the input and ``stages[k]`` the image after the first
    ``k`` steps; stages are polygons or genus regions.
    """

    chain: MapChain
    stages: tuple

    @property
    def source(self):
        return self.stages[0]

    @property
    def target(self):
        return self.stages[-1]

    def replay(self) -> bool:
        """Re-apply every step to the input and compare each snapshot exactly."""
        cur = self.stages[0]
        for step, expected in zip(self.chain.steps, self.stages[1:]):
            if isinstance(cur, Polygon):
                cur = map_polygon(step, cur)
            else:
                from .regions import map_region  # regions builds on this module

                cur = map_region(step, cur)
            if cur != expected:
                return False
        return len(self.stages) == len(self.chain.steps) + 1


def ear_step(P: Polygon, i: int, obstacles: Sequence[Sequence[Point]] = ()) -> LpaMap:
    """The lpa map moving ear vertex ``i`` to the midpoint of its neighbours."""
    quad = construct_ear_quadrilateral(P, i, obstacles)
    return LpaMap.make(quad.vertices, AffineMap.identity(), quad.v, quad.m)


def reduce_polygon_to_triangle(
    P: Polygon, obstacles: Sequence[Sequence[Point]] = ()
) -> ReductionCertificate:
    """Remove ears one at a time (lowest index first) until a triangle remains."""
    cur = P
    steps = []
    stages = [P]
    while len(cur.vertices) > 3:
        i = _ear_indices(cur.vertices)[0]
        step = ear_step(cur, i, obstacles)
        cur = map_polygon(step, cur)
        steps.append(step)
        stages.append(cur)
    return ReductionCertificate(MapChain(tuple(steps)), tuple(stages))


def polygon_vertices(P) -> tuple[Point, ...]:
    return canonical_vertices(_verts(P))


__all__ = [
    "Ear",
    "EarQuadrilateral",
    "ReductionCertificate",
    "check_ear_quadrilateral",
    "construct_ear_quadrilateral",
    "ear_step",
    "find_ears",
    "is_diagonal",
    "open_segment_location",
    "reduce_polygon_to_triangle",
    "triangulate",
]
