"""Half-plane-affine maps, locally piecewise affine maps and chains of them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    ApexOutside,
    BoundaryMismatch,
    GeometryError,
    ImageNotSimple,
    NotConvex,
    NotInjective,
    SingularAffine,
)
from .geometry import (
    AffineMap,
    Hit,
    Line,
    Point,
    Polygon,
    Segment,
    Side,
    canonical_vertices,
    in_convex_interior,
    is_convex,
    lerp,
    segment_intersects,
    signed_area2,
    validate_simple_polygon,
)
from .variation import vf


@dataclass(frozen=True)
class HalfPlaneSplitting:
    """The two closed half-planes of ``boundary``; ``h1_side`` names H1."""

    boundary: Line
    h1_side: Side = Side.LEFT

    def piece(self, p) -> int:
        """1 or 2; points on the boundary belong to both and report 1."""
        s = self.boundary.side(p)
        return 1 if s == Side.ON or s == self.h1_side else 2


@dataclass(frozen=True)
class HpaMap:
    """A map equal to ``alpha1`` on H1 and ``alpha2`` on H2.

    Build with :meth:`make`, which checks boundary agreement and global
    injectivity exactly.
    """

    splitting: HalfPlaneSplitting
    alpha1: AffineMap
    alpha2: AffineMap

    kind = "hpa"

    @classmethod
    def make(cls, line: Line, alpha1: AffineMap, alpha2: AffineMap, h1_side: Side = Side.LEFT) -> HpaMap:
        if h1_side == Side.ON:
            raise ValueError("h1_side must be LEFT or RIGHT")
        if not (alpha1.invertible and alpha2.invertible):
            raise SingularAffine("hpa pieces must be invertible")
        p0 = line.point()
        p1 = p0 + line.direction()
        if alpha1(p0) != alpha2(p0) or alpha1(p1) != alpha2(p1):
            raise BoundaryMismatch("pieces disagree on the splitting line")
        image = alpha1.image_line(line)
        normal = Point(Fraction(line.a * h1_side), Fraction(line.b * h1_side))
        s1 = image.side(alpha1(p0 + normal))
        s2 = image.side(alpha2(p0 - normal))
        if s1 == s2:
            raise NotInjective("images of the two open half-planes overlap")
        return cls(HalfPlaneSplitting(line, Side(h1_side)), alpha1, alpha2)

    def __call__(self, p) -> Point:
        return (self.alpha1 if self.splitting.piece(p) == 1 else self.alpha2)(p)

    def image_splitting(self) -> HalfPlaneSplitting:
        line = self.splitting.boundary
        image = self.alpha1.image_line(line)
        p0 = line.point()
        normal = Point(Fraction(line.a * self.splitting.h1_side), Fraction(line.b * self.splitting.h1_side))
        return HalfPlaneSplitting(image, image.side(self.alpha1(p0 + normal)))

    def inverse(self) -> HpaMap:
        sp = self.image_splitting()
        return HpaMap(sp, self.alpha1.inverse(), self.alpha2.inverse())


def hpa_make(line: Line, alpha1: AffineMap, alpha2: AffineMap, h1_side: Side = Side.LEFT) -> HpaMap:
    return HpaMap.make(line, alpha1, alpha2, h1_side)


def hpa_apply(h: HpaMap, p) -> Point:
    return h(p)


def hpa_inverse(h: HpaMap) -> HpaMap:
    return h.inverse()


def _orient_form(a: Point, b: Point) -> tuple[int, int, int]:
    """Integers (A, B, C) with sign(A x + B y + C) = sign(orient(a, b, (x, y)))."""
    A = -(b.y - a.y)
    B = b.x - a.x
    C = (b.y - a.y) * a.x - (b.x - a.x) * a.y
    den = math.lcm(A.denominator, B.denominator, C.denominator)
    return int(A * den), int(B * den), int(C * den)


def _ccw(vs: Sequence[Point]) -> tuple[Point, ...]:
    vs = tuple(vs)
    return vs if signed_area2(vs) > 0 else tuple(reversed(vs))


@dataclass(frozen=True)
class LpaMap:
    """The piecewise affine map determined by ``(C, alpha, x0, y0)``.

    It equals ``alpha`` off the interior of the convex polygon ``C`` and
    sends each fan triangle ``(x0, c_j, c_{j+1})`` affinely onto
    ``(y0, alpha(c_j), alpha(c_{j+1}))``.
    """

    cell_polygon: tuple[Point, ...]
    outer: AffineMap
    x0: Point
    y0: Point
    cells: tuple[tuple[Point, Point, Point], ...]
    cell_maps: tuple[AffineMap, ...]
    bbox: tuple[Fraction, Fraction, Fraction, Fraction] = field(compare=False, repr=False)
    # integer forms of orient(a, b, .) for the cell edges and the spokes from x0
    edge_forms: tuple[tuple[int, int, int], ...] = field(compare=False, repr=False, default=())
    spoke_forms: tuple[tuple[int, int, int], ...] = field(compare=False, repr=False, default=())

    kind = "lpa"

    @classmethod
    def make(cls, C: Iterable[Point], alpha: AffineMap, x0: Point, y0: Point) -> LpaMap:
        vs = canonical_vertices(C)
        if len(vs) < 3 or not is_convex(vs):
            raise NotConvex("cell polygon must be strictly convex")
        if not alpha.invertible:
            raise SingularAffine("outer map must be invertible")
        if not in_convex_interior(x0, vs):
            raise ApexOutside(f"source apex {x0!r} is not interior to C")
        img = [alpha(c) for c in vs]
        if not in_convex_interior(y0, _ccw(img)):
            raise ApexOutside(f"target apex {y0!r} is not interior to alpha(C)")
        n = len(vs)
        cells = tuple((x0, vs[j], vs[(j + 1) % n]) for j in range(n))
        maps = tuple(
            AffineMap.from_triangles(cells[j], (y0, img[j], img[(j + 1) % n])) for j in range(n)
        )
        xs = [v.x for v in vs]
        ys = [v.y for v in vs]
        edges = tuple(_orient_form(vs[j], vs[(j + 1) % n]) for j in range(n))
        spokes = tuple(_orient_form(x0, v) for v in vs)
        return cls(vs, alpha, x0, y0, cells, maps, (min(xs), min(ys), max(xs), max(ys)), edges, spokes)

    @property
    def n(self) -> int:
        return len(self.cell_polygon)

    def __call__(self, p) -> Point:
        # p = (X/D, Y/D) so every test below is an integer sign
        x, y = p
        if not isinstance(x, Fraction):
            x = Fraction(x)
        if not isinstance(y, Fraction):
            y = Fraction(y)
        xd, yd = x.denominator, y.denominator
        D = xd * yd
        X = x.numerator * yd
        Y = y.numerator * xd
        x1, y1, x2, y2 = self.bbox
        if (
            X * x1.denominator <= x1.numerator * D
            or X * x2.denominator >= x2.numerator * D
            or Y * y1.denominator <= y1.numerator * D
            or Y * y2.denominator >= y2.numerator * D
        ):
            return self.outer(p)
        for a, b, c in self.edge_forms:
            if a * X + b * Y + c * D <= 0:
                return self.outer(p)
        forms = self.spoke_forms
        n = len(forms)
        for j in range(n):
            a, b, c = forms[j]
            if a * X + b * Y + c * D < 0:
                continue
            a, b, c = forms[(j + 1) % n]
            if a * X + b * Y + c * D <= 0:
                return self.cell_maps[j](p)
        raise AssertionError("interior point not located in any cell")

    def inverse(self) -> LpaMap:
        img = _ccw([self.outer(c) for c in self.cell_polygon])
        return LpaMap.make(img, self.outer.inverse(), self.y0, self.x0)

    def boundary_segments(self) -> list[Segment]:
        vs = self.cell_polygon
        n = len(vs)
        out = [Segment(vs[j], vs[(j + 1) % n]) for j in range(n)]
        out += [Segment(self.x0, v) for v in vs]
        return out


def lpa_make(C: Iterable[Point], alpha: AffineMap, x0: Point, y0: Point) -> LpaMap:
    return LpaMap.make(C, alpha, x0, y0)


def lpa_apply(h: LpaMap, p) -> Point:
    return h(p)


def lpa_inverse(h: LpaMap) -> LpaMap:
    return h.inverse()


Step = Union[AffineMap, HpaMap, LpaMap]


def _step_inverse(step: Step) -> Step:
    return step.inverse()


@dataclass(frozen=True)
class MapChain:
    """Steps applied left to right."""

    steps: tuple[Step, ...] = ()

    def __call__(self, p) -> Point:
        for s in self.steps:
            p = s(p)
        return p

    def __len__(self) -> int:
        return len(self.steps)

    def then(self, other: MapChain | Step) -> MapChain:
        more = other.steps if isinstance(other, MapChain) else (other,)
        return MapChain(self.steps + tuple(more))

    def inverse(self) -> MapChain:
        return MapChain(tuple(_step_inverse(s) for s in reversed(self.steps)))


def chain_apply(chain: MapChain, p) -> Point:
    return chain(p)


def chain_inverse(chain: MapChain) -> MapChain:
    return chain.inverse()


def hpa_vf_bounds_check(h: HpaMap, S: Sequence[Point]) -> tuple[int, int, bool]:
    """``(vf(S), vf(h(S)), ½ vf(S) <= vf(h(S)) <= 2 vf(S))``."""
    v = vf(tuple(S))
    vh = vf(tuple(h(p) for p in S))
    return v, vh, v <= 2 * vh and vh <= 2 * v


def lpa_vf_bound_check(h: LpaMap, S: Sequence[Point]) -> tuple[int, int, int, bool]:
    """``(vf(S), vf(h(S)), n, pass)`` for the two-sided ``(n+1)^2`` bound."""
    v = vf(tuple(S))
    vh = vf(tuple(h(p) for p in S))
    k = (h.n + 1) ** 2
    return v, vh, h.n, vh * k >= v and v * k >= vh


# --- mapping polygons --------------------------------------------------------


def _cuts_line(a: Point, b: Point, line: Line) -> list[Fraction]:
    va, vb = line.value(a), line.value(b)
    if (va > 0 and vb < 0) or (va < 0 and vb > 0):
        return [va / (va - vb)]
    return []


def _param_on(a: Point, b: Point, p: Point) -> Fraction:
    dx, dy = b.x - a.x, b.y - a.y
    return (p.x - a.x) / dx if dx != 0 else (p.y - a.y) / dy


def _cuts_segments(a: Point, b: Point, segs: Sequence[Segment]) -> list[Fraction]:
    out = []
    edge = Segment(a, b)
    for s in segs:
        hit = segment_intersects(edge, s)
        if hit.kind is Hit.POINT:
            out.append(_param_on(a, b, hit.point))
        elif hit.kind is Hit.OVERLAP:
            out.append(_param_on(a, b, hit.overlap.p))
            out.append(_param_on(a, b, hit.overlap.q))
    return out


def subdivide(vertices: Sequence[Point], step: Step) -> list[Point]:
    """Insert the points where polygon edges cross the breaks of ``step``."""
    if isinstance(step, AffineMap):
        return list(vertices)
    segs = step.boundary_segments() if isinstance(step, LpaMap) else None
    if segs is not None:
        x1, y1, x2, y2 = step.bbox
    out: list[Point] = []
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        out.append(a)
        if isinstance(step, HpaMap):
            ts = _cuts_line(a, b, step.splitting.boundary)
        else:
            if max(a.x, b.x) < x1 or min(a.x, b.x) > x2 or max(a.y, b.y) < y1 or min(a.y, b.y) > y2:
                continue
            ts = _cuts_segments(a, b, segs)
        for t in sorted(set(ts)):
            if 0 < t < 1:
                out.append(lerp(a, b, t))
    return out


def map_vertices(step: Step | MapChain, vertices: Sequence[Point]) -> list[Point]:
    """Subdivide and map, without canonicalising (keeps straight angles)."""
    steps = step.steps if isinstance(step, MapChain) else (step,)
    vs = list(vertices)
    for s in steps:
        vs = [s(p) for p in subdivide(vs, s)]
    return vs


def map_polygon(chain: MapChain | Step, P: Polygon | Sequence[Point]) -> Polygon:
    """Exact image of a simple polygon, as a canonical simple polygon."""
    vs = P.vertices if isinstance(P, Polygon) else P
    steps = chain.steps if isinstance(chain, MapChain) else (chain,)
    for s in steps:
        vs = canonical_vertices(s(p) for p in subdivide(vs, s))
    try:
        return validate_simple_polygon(vs)
    except GeometryError as exc:
        raise ImageNotSimple(f"image polygon is not simple: {exc}") from exc


__all__ = [
    "HalfPlaneSplitting",
    "HpaMap",
    "LpaMap",
    "MapChain",
    "Step",
    "chain_apply",
    "chain_inverse",
    "hpa_apply",
    "hpa_inverse",
    "hpa_make",
    "hpa_vf_bounds_check",
    "lpa_apply",
    "lpa_inverse",
    "lpa_make",
    "lpa_vf_bound_check",
    "map_polygon",
    "map_vertices",
    "subdivide",
]
