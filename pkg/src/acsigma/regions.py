"""Polygonal regions with windows: triangle relocation and normalisation.

A region of genus ``n`` is a simple outer polygon with ``n`` pairwise
disjoint closed windows in its interior.  :func:`normalize_genus_region`
builds a chain of exact piecewise affine homeomorphisms taking any such
region onto :func:`standard_tau`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EpsilonTooLarge, GeometryError, InvalidRegion, MarginTooSmall, NotConvex
from .geometry import (
    AffineMap,
    Hit,
    Line,
    Location,
    Point,
    Polygon,
    Segment,
    Side,
    canonical_vertices,
    clip_convex,
    in_convex_interior,
    is_convex,
    lerp,
    point_in_polygon,
    pt,
    segment_intersects,
    segment_meets_convex,
    validate_simple_polygon,
)
from .maps import LpaMap, MapChain, Step, map_polygon
from .polygons import ReductionCertificate, _ear_indices, ear_step

MAX_HALVINGS = 80


@dataclass(frozen=True)
class GenusRegion:
    """Outer polygon minus the interiors of the windows."""

    outer: Polygon
    windows: tuple[Polygon, ...] = ()

    @property
    def genus(self) -> int:
        return len(self.windows)

    @classmethod
    def make(cls, outer, windows=()) -> GenusRegion:
        try:
            o = outer if isinstance(outer, Polygon) else validate_simple_polygon(outer)
            ws = tuple(w if isinstance(w, Polygon) else validate_simple_polygon(w) for w in windows)
        except GeometryError as exc:
            raise InvalidRegion(str(exc)) from exc
        region = cls(o, ws)
        problem = region_problem(region)
        if problem:
            raise InvalidRegion(problem)
        return region

    def same_as(self, other: GenusRegion) -> bool:
        """Equality up to the order of the windows."""
        return self.outer == other.outer and sorted(w.vertices for w in self.windows) == sorted(
            w.vertices for w in other.windows
        )


def _edges(vs: Sequence[Point]) -> list[Segment]:
    n = len(vs)
    return [Segment(vs[i], vs[(i + 1) % n]) for i in range(n)]


def _boundaries_meet(p: Sequence[Point], r: Sequence[Point]) -> bool:
    er = _edges(r)
    return any(segment_intersects(e, f).kind is not Hit.DISJOINT for e in _edges(p) for f in er)


def region_problem(region: GenusRegion) -> str | None:
    """A description of the first violated region invariant, or ``None``."""
    outer = region.outer.vertices
    wins = [w.vertices for w in region.windows]
    for k, w in enumerate(wins):
        if point_in_polygon(w[0], outer) is not Location.INSIDE:
            return f"window {k} is not inside the outer polygon"
        if _boundaries_meet(w, outer):
            return f"window {k} touches the outer boundary"
    for i in range(len(wins)):
        for j in range(i + 1, len(wins)):
            if _boundaries_meet(wins[i], wins[j]):
                return f"windows {i} and {j} meet"
            if point_in_polygon(wins[i][0], wins[j]) is not Location.OUTSIDE:
                return f"window {i} lies inside window {j}"
            if point_in_polygon(wins[j][0], wins[i]) is not Location.OUTSIDE:
                return f"window {j} lies inside window {i}"
    return None


def map_region(step: Step | MapChain, region: GenusRegion) -> GenusRegion:
    return GenusRegion(map_polygon(step, region.outer), tuple(map_polygon(step, w) for w in region.windows))


def standard_tau(n: int) -> GenusRegion:
    """Triangle (0,-1), (1,0), (0,1) with ``n`` small triangular windows along the x-axis."""
    if n < 0:
        raise ValueError("genus must be nonnegative")
    outer = validate_simple_polygon([pt(0, -1), pt(1, 0), pt(0, 1)])
    wins = []
    for k in range(1, n + 1):
        wins.append(
            validate_simple_polygon(
                [
                    Point(Fraction(3 * k - 2, 3 * n), Fraction(0)),
                    Point(Fraction(3 * k - 1, 3 * n), Fraction(0)),
                    Point(Fraction(2 * k - 1, 2 * n), Fraction(1, 3 * n)),
                ]
            )
        )
    return GenusRegion(outer, tuple(wins))


# --- vertex moves and triangle relocation ---------------------------------------


def vertex_move(container: Sequence[Point], fixed1: Point, fixed2: Point, p: Point, target: Point) -> LpaMap | None:
    """Lpa map sliding ``p`` to ``target`` while fixing the edge ``fixed1 fixed2``.

    The cell polygon is the part of the convex ``container`` on ``p``'s side
    of the fixed edge, so the triangle ``(p, fixed1, fixed2)`` goes exactly
    onto ``(target, fixed1, fixed2)`` and everything outside the container
    stays put.  Returns ``None`` when the move is not possible in this
    container.
    """
    line = Line.through(fixed1, fixed2)
    side = line.side(p)
    if side == Side.ON or line.side(target) != side:
        return None
    C = clip_convex(container, line, side)
    if len(C) < 3 or not in_convex_interior(p, C) or not in_convex_interior(target, C):
        return None
    return LpaMap.make(C, AffineMap.identity(), p, target)


def epsilon_corner_points(R: Sequence[Point], lam) -> tuple[Point, ...]:
    """Points ``r_i + lam (r_{i+2} - r_i)`` on the diagonals of the quadrilateral ``R``."""
    lam = Fraction(lam)
    if not 0 < lam < Fraction(1, 2):
        raise EpsilonTooLarge("diagonal parameter must lie strictly between 0 and 1/2")
    if len(R) != 4:
        raise ValueError("corner points need a quadrilateral")
    return tuple(lerp(R[i], R[(i + 2) % 4], lam) for i in range(4))


class _Retry(Exception):
    pass


def _route_to_corners(R: Sequence[Point], tri: Sequence[Point], lam: Fraction) -> list[LpaMap]:
    """Vertex moves taking ``tri`` onto the corner triangle ``{E0, E1, E2}``."""
    E = epsilon_corner_points(R, lam)
    cur = list(tri)
    steps: list[LpaMap] = []

    def move(i: int, target: Point):
        f1, f2 = (cur[j] for j in range(3) if j != i)
        step = vertex_move(R, f1, f2, cur[i], target)
        if step is None:
            raise _Retry
        steps.append(step)
        cur[i] = target

    used: list[int] = []
    for i in range(3):
        f1, f2 = (cur[j] for j in range(3) if j != i)
        line = Line.through(f1, f2)
        s = line.side(cur[i])
        cands = [j for j in range(4) if j not in used and line.side(R[j]) == s]
        if not cands:
            raise _Retry
        move(i, E[cands[0]])
        used.append(cands[0])
    missing = ({0, 1, 2, 3} - set(used)).pop()
    where = {j: used.index(j) for j in used}
    if missing == 0:
        move(where[3], E[0])
    elif missing == 2:
        move(where[3], E[2])
    elif missing == 1:
        move(where[2], E[1])
        move(where[3], E[2])
    return steps


def _as_quad(R) -> tuple[Point, ...]:
    if len(R) == 4 and not isinstance(R[0], (tuple, list)):
        x1, y1, x2, y2 = (Fraction(v) for v in R)
        R = [Point(x1, y1), Point(x2, y1), Point(x2, y2), Point(x1, y2)]
    vs = canonical_vertices(p if isinstance(p, Point) else pt(*p) for p in R)
    if len(vs) != 4 or not is_convex(vs):
        raise NotConvex("container must be a strictly convex quadrilateral")
    return vs


def move_triangle_in_quad(R, T: Sequence[Point], T2: Sequence[Point], lam=Fraction(1, 8)) -> ReductionCertificate:
    """Chain of vertex moves inside the convex quadrilateral ``R`` taking ``T`` onto ``T2``.

    The chain is the identity off the interior of ``R``.  Both triangles are
    routed to a common triangle of corner points near three corners of
    ``R``; the diagonal parameter is halved until every move verifies.
    """
    Rq = _as_quad(R)
    tris = []
    for tri in (T, T2):
        tv = canonical_vertices(p if isinstance(p, Point) else pt(*p) for p in tri)
        if len(tv) != 3:
            raise GeometryError("triangle is degenerate")
        if not all(in_convex_interior(p, Rq) for p in tv):
            raise MarginTooSmall("triangle is not strictly inside the container")
        tris.append(tv)
    lam = Fraction(lam)
    for _ in range(MAX_HALVINGS):
        try:
            there = _route_to_corners(Rq, tris[0], lam)
            back = _route_to_corners(Rq, tris[1], lam)
        except _Retry:
            lam /= 2
            continue
        chain = MapChain(tuple(there)).then(MapChain(tuple(back)).inverse())
        stages = [validate_simple_polygon(tris[0])]
        for step in chain.steps:
            stages.append(map_polygon(step, stages[-1]))
        if stages[-1].vertices != canonical_vertices(tris[1]):
            raise AssertionError("relocation chain missed its target triangle")
        return ReductionCertificate(chain, tuple(stages))
    raise MarginTooSmall("no corner parameter found for the relocation")


def move_triangle_in_rectangle(R, T, T2, lam=Fraction(1, 8)) -> ReductionCertificate:
    """``R`` is ``(x1, y1, x2, y2)`` or four corner points."""
    return move_triangle_in_quad(R, T, T2, lam)


# --- normalisation ----------------------------------------------------------------


class _Recorder:
    def __init__(self, region: GenusRegion):
        self.region = region
        self.steps: list[Step] = []
        self.stages: list[GenusRegion] = [region]

    def apply(self, step: Step):
        nxt = map_region(step, self.region)
        problem = region_problem(nxt)
        if problem or nxt.genus != self.region.genus:
            raise InvalidRegion(f"normalisation step broke the region: {problem}")
        self.region = nxt
        self.steps.append(step)
        self.stages.append(nxt)

    def certificate(self) -> ReductionCertificate:
        return ReductionCertificate(MapChain(tuple(self.steps)), tuple(self.stages))


def _others(region: GenusRegion, k: int) -> list[tuple[Point, ...]]:
    return [region.outer.vertices] + [w.vertices for j, w in enumerate(region.windows) if j != k]


def _hull_container(region: GenusRegion, k: int) -> tuple[Point, ...]:
    """A slightly enlarged copy of triangular window ``k`` that meets nothing else."""
    tri = region.windows[k].vertices
    cx = sum(p.x for p in tri) / 3
    cy = sum(p.y for p in tri) / 3
    c = Point(cx, cy)
    grow = Fraction(1, 2)
    for _ in range(MAX_HALVINGS):
        big = tuple(lerp(c, p, 1 + grow) for p in tri)
        if all(point_in_polygon(p, region.outer) is Location.INSIDE for p in big) and not any(
            segment_meets_convex(e, big) for obs in _others(region, k) for e in _edges(obs)
        ):
            return big
        grow /= 2
    raise InvalidRegion("window has no clearance")


def _shrink(rec: _Recorder, k: int, toward: Point, f: Fraction):
    """Homothety of triangular window ``k`` about its vertex ``toward`` by factor ``f``."""
    container = _hull_container(rec.region, k)
    p = toward
    q, r = (v for v in rec.region.windows[k].vertices if v != p)
    q2 = lerp(p, q, f)
    r2 = lerp(p, r, f)
    for fixed, moving, target in ((r, q, q2), (q2, r, r2)):
        step = vertex_move(container, p, fixed, moving, target)
        if step is None:
            raise AssertionError("shrinking move failed inside its own hull")
        rec.apply(step)


def _relocate(rec: _Recorder, k: int, R: Sequence[Point], target: Sequence[Point]):
    cert = move_triangle_in_quad(R, rec.region.windows[k].vertices, target)
    for step in cert.chain.steps:
        rec.apply(step)


def _strip(l: Fraction, r: Fraction, m: Fraction) -> tuple[Point, ...]:
    """Trapezoid between x = l and x = r, inset by ``m`` from the slanted sides of the standard triangle."""
    return (
        Point(l, -(1 - l) + m),
        Point(r, -(1 - r) + m),
        Point(r, 1 - r - m),
        Point(l, 1 - l - m),
    )


def normalize_genus_region(region: GenusRegion) -> ReductionCertificate:
    """Chain of exact homeomorphisms taking ``region`` onto ``standard_tau(genus)``."""
    problem = region_problem(region)
    if problem:
        raise InvalidRegion(problem)
    rec = _Recorder(region)
    n = region.genus

    # outer boundary down to a triangle, windows carried along
    while len(rec.region.outer.vertices) > 3:
        i = _ear_indices(rec.region.outer.vertices)[0]
        rec.apply(ear_step(rec.region.outer, i))
    tau = standard_tau(n)
    A = AffineMap.from_triangles(rec.region.outer.vertices, tau.outer.vertices)
    if not A.is_identity:
        rec.apply(A)

    # every window down to a triangle, clear of everything else
    for k in range(n):
        while len(rec.region.windows[k].vertices) > 3:
            w = rec.region.windows[k]
            i = _ear_indices(w.vertices)[0]
            rec.apply(ear_step(w, i, _others(rec.region, k)))
    if n == 0:
        return rec.certificate()

    # distinct x for the lexicographically smallest vertices, working from the right
    def minx(k: int) -> Fraction:
        return rec.region.windows[k].vertices[0].x

    order = sorted(range(n), key=lambda k: rec.region.windows[k].vertices[0], reverse=True)
    for k in order:
        others = {minx(j) for j in range(n) if j != k}
        if minx(k) not in others:
            continue
        tri = rec.region.windows[k].vertices
        far = max(tri, key=lambda p: (p.x, p.y))
        x0 = tri[0].x
        s = Fraction(1, 2)
        while x0 + s * (far.x - x0) in others:
            s /= 2
        _shrink(rec, k, far, 1 - s)

    # disjoint strips around the smallest vertices, shrinking each window into its strip
    order = sorted(range(n), key=minx)
    xs = [minx(k) for k in order]
    gap = min([xs[0]] + [b - a for a, b in zip(xs, xs[1:])])
    strips = {}
    for k in order:
        p = rec.region.windows[k].vertices[0]
        d = 1 - p.x - abs(p.y)
        l = p.x - min(gap / 3, p.x / 2)
        r = p.x + min(gap / 3, d / 3)
        m = (1 - r - abs(p.y)) / 2
        strips[k] = (l, r, m)
        S = _strip(l, r, m)
        f = Fraction(1)
        tri = rec.region.windows[k].vertices
        while not all(in_convex_interior(lerp(p, v, f), S) for v in tri):
            f /= 2
        if f != 1:
            _shrink(rec, k, p, f)

    # standard small triangle in each strip
    for k in order:
        l, r, m = strips[k]
        a, b = l + (r - l) / 4, l + (r - l) / 2
        e = (1 - r - m) / 2
        _relocate(rec, k, _strip(l, r, m), [Point(a, Fraction(0)), Point(b, Fraction(0)), Point(a, e)])

    # stage at scale delta from the left, then place from the right
    a1 = strips[order[0]][0] + (strips[order[0]][1] - strips[order[0]][0]) / 4
    delta = min(a1, Fraction(1, 3 * n)) / 2
    for idx, k in enumerate(order, start=1):
        l = delta * (6 * idx - 5) / (6 * n)
        _, r, m = strips[k]
        target = [
            Point(delta * (3 * idx - 2) / (3 * n), Fraction(0)),
            Point(delta * (3 * idx - 1) / (3 * n), Fraction(0)),
            Point(delta * (2 * idx - 1) / (2 * n), Fraction(1, 3 * n)),
        ]
        _relocate(rec, k, _strip(l, r, min(m, Fraction(1, 12 * n))), target)
    for idx in range(n, 0, -1):
        k = order[idx - 1]
        l = delta * (6 * idx - 5) / (6 * n)
        r = Fraction(6 * idx - 1, 6 * n)
        _relocate(rec, k, _strip(l, r, Fraction(1, 12 * n)), tau.windows[idx - 1].vertices)

    if not rec.region.same_as(tau):
        raise AssertionError("normalisation did not reach the standard region")
    return rec.certificate()


__all__ = [
    "GenusRegion",
    "epsilon_corner_points",
    "map_region",
    "move_triangle_in_quad",
    "move_triangle_in_rectangle",
    "normalize_genus_region",
    "region_problem",
    "standard_tau",
    "vertex_move",
]
