"""Exact rational plane geometry.

Everything here works over :class:`fractions.Fraction`; no predicate ever
touches a float.  Points are plain named tuples so they hash, compare
lexicographically and unpack like ``(x, y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import Degenerate, NotSimple, SingularAffine, TooFewVertices

Rational = Fraction


def q(value) -> Fraction:
    """Convert ``value`` to an exact rational.

    Accepts ints, Fractions, strings such as ``"3/4"`` or ``"0.25"`` and
    floats.  Floats are read through their shortest repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def scale(self, k) -> Point:
        return Point(self.x * k, self.y * k)

    def __repr__(self) -> str:
        return f"Point({fmt_q(self.x)}, {fmt_q(self.y)})"


def pt(x, y) -> Point:
    return Point(q(x), q(y))


def fmt_q(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def lerp(a: Point, b: Point, t) -> Point:
    """The point ``a + t (b - a)``."""
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def midpoint(a: Point, b: Point) -> Point:
    return Point((a.x + b.x) / 2, (a.y + b.y) / 2)


def orient(a, b, c) -> Fraction:
    """Twice the signed area of triangle ``abc`` (positive when CCW)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def sign(v) -> int:
    return (v > 0) - (v < 0)


def is_ccw_triangle(a: Point, b: Point, c: Point) -> bool:
    return orient(a, b, c) > 0


class Side(IntEnum):
    RIGHT = -1
    ON = 0
    LEFT = 1


class Line(NamedTuple):
    """The locus ``a x + b y + c = 0`` with integer coefficients.

    Coefficients are normalised to content 1 with the first nonzero of
    ``(a, b)`` positive, so two ``Line`` values are equal exactly when they
    describe the same locus.
    """

    a: int
    b: int
    c: int

    @classmethod
    def from_coeffs(cls, a, b, c) -> Line:
        a, b, c = q(a), q(b), q(c)
        if a == 0 and b == 0:
            raise Degenerate("line with a = b = 0")
        den = math.lcm(a.denominator, b.denominator, c.denominator)
        ia, ib, ic = (int(v * den) for v in (a, b, c))
        g = math.gcd(ia, ib, ic)
        ia, ib, ic = ia // g, ib // g, ic // g
        if ia < 0 or (ia == 0 and ib < 0):
            ia, ib, ic = -ia, -ib, -ic
        return cls(ia, ib, ic)

    @classmethod
    def through(cls, p: Point, r: Point) -> Line:
        if p == r:
            raise Degenerate("line through a single point is undefined")
        a = r[1] - p[1]
        b = p[0] - r[0]
        return cls.from_coeffs(a, b, -(a * p[0] + b * p[1]))

    def value(self, p) -> Fraction:
        return self.a * p[0] + self.b * p[1] + self.c

    def side(self, p) -> Side:
        return Side(sign(self.value(p)))

    def contains(self, p) -> bool:
        return self.value(p) == 0

    def direction(self) -> Point:
        """A direction vector along the line; ``LEFT`` lies to its left."""
        return Point(Fraction(-self.b), Fraction(self.a))

    def param(self, p) -> Fraction:
        """Coordinate of ``p`` along :meth:`direction` (up to a constant)."""
        return -self.b * p[0] + self.a * p[1]

    def point(self) -> Point:
        """Some rational point on the line."""
        if self.b != 0:
            return Point(Fraction(0), Fraction(-self.c, self.b))
        return Point(Fraction(-self.c, self.a), Fraction(0))


def side_of_line(p: Point, line: Line) -> Side:
    return line.side(p)


class Segment(NamedTuple):
    p: Point
    q: Point


class Hit(Enum):
    DISJOINT = "disjoint"
    POINT = "point"
    OVERLAP = "overlap"


class SegmentHit(NamedTuple):
    kind: Hit
    point: Point | None = None
    overlap: Segment | None = None


_DISJOINT = SegmentHit(Hit.DISJOINT)


def _bbox_apart(p1, p2, p3, p4) -> bool:
    return (
        max(p1[0], p2[0]) < min(p3[0], p4[0])
        or max(p3[0], p4[0]) < min(p1[0], p2[0])
        or max(p1[1], p2[1]) < min(p3[1], p4[1])
        or max(p3[1], p4[1]) < min(p1[1], p2[1])
    )


def on_segment(p, a, b) -> bool:
    """Closed-segment membership of ``p`` in ``[a, b]``."""
    if orient(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segment_intersects(s1: Segment, s2: Segment) -> SegmentHit:
    """Exact classification of the intersection of two closed segments."""
    p1, p2 = s1
    p3, p4 = s2
    if _bbox_apart(p1, p2, p3, p4):
        return _DISJOINT
    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        return _collinear_hit(p1, p2, p3, p4)
    if (d1 > 0 and d2 > 0) or (d1 < 0 and d2 < 0) or (d3 > 0 and d4 > 0) or (d3 < 0 and d4 < 0):
        return _DISJOINT
    if p1 == p2:
        return SegmentHit(Hit.POINT, p1)
    if p3 == p4:
        return SegmentHit(Hit.POINT, p3)
    # proper or touching crossing of two non-parallel segments
    t = d1 / (d1 - d2)
    return SegmentHit(Hit.POINT, lerp(p1, p2, t))


def _collinear_hit(p1, p2, p3, p4) -> SegmentHit:
    # all four points on one line (or degenerate); project to a coordinate axis
    axis = 0 if (p1[0] != p2[0] or p3[0] != p4[0]) else 1
    a0, a1 = sorted((p1, p2), key=lambda p: (p[axis], p[1 - axis]))
    b0, b1 = sorted((p3, p4), key=lambda p: (p[axis], p[1 - axis]))
    lo = max(a0, b0, key=lambda p: (p[axis], p[1 - axis]))
    hi = min(a1, b1, key=lambda p: (p[axis], p[1 - axis]))
    klo, khi = (lo[axis], lo[1 - axis]), (hi[axis], hi[1 - axis])
    if klo > khi:
        return _DISJOINT
    if lo == hi:
        return SegmentHit(Hit.POINT, lo)
    return SegmentHit(Hit.OVERLAP, overlap=Segment(lo, hi))


def segment_line_hit(s: Segment, line: Line) -> SegmentHit:
    """Intersection of a closed segment with a full line."""
    v1, v2 = line.value(s.p), line.value(s.q)
    if v1 == 0 and v2 == 0:
        if s.p == s.q:
            return SegmentHit(Hit.POINT, s.p)
        return SegmentHit(Hit.OVERLAP, overlap=s)
    if (v1 > 0 and v2 > 0) or (v1 < 0 and v2 < 0):
        return _DISJOINT
    return SegmentHit(Hit.POINT, lerp(s.p, s.q, v1 / (v1 - v2)))


@dataclass(frozen=True)
class AffineMap:
    """``x -> M x + t`` with exact rational entries."""

    m11: Fraction
    m12: Fraction
    m21: Fraction
    m22: Fraction
    t1: Fraction
    t2: Fraction

    @classmethod
    def make(cls, m11, m12, m21, m22, t1=0, t2=0) -> AffineMap:
        return cls(q(m11), q(m12), q(m21), q(m22), q(t1), q(t2))

    @classmethod
    def identity(cls) -> AffineMap:
        return _IDENTITY

    @classmethod
    def translation(cls, dx, dy) -> AffineMap:
        return cls.make(1, 0, 0, 1, dx, dy)

    @classmethod
    def from_triangles(cls, src: Sequence[Point], dst: Sequence[Point]) -> AffineMap:
        """The affine map sending ``src[i]`` to ``dst[i]`` for i = 0, 1, 2."""
        (x0, y0), (x1, y1), (x2, y2) = src
        det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        if det == 0:
            raise Degenerate("source triangle is degenerate")
        (u0, v0), (u1, v1), (u2, v2) = dst
        # M = D * S^{-1} with S, D the edge matrices
        s11, s12, s21, s22 = (y2 - y0) / det, -(x2 - x0) / det, -(y1 - y0) / det, (x1 - x0) / det
        d11, d12 = u1 - u0, u2 - u0
        d21, d22 = v1 - v0, v2 - v0
        m11 = d11 * s11 + d12 * s21
        m12 = d11 * s12 + d12 * s22
        m21 = d21 * s11 + d22 * s21
        m22 = d21 * s12 + d22 * s22
        return cls(m11, m12, m21, m22, u0 - m11 * x0 - m12 * y0, v0 - m21 * x0 - m22 * y0)

    @cached_property
    def det(self) -> Fraction:
        return self.m11 * self.m22 - self.m12 * self.m21

    @cached_property
    def is_identity(self) -> bool:
        return self == _IDENTITY

    @property
    def invertible(self) -> bool:
        return self.det != 0

    def __call__(self, p) -> Point:
        if self.is_identity:
            return p if isinstance(p, Point) else Point(*p)
        x, y = p
        return Point(self.m11 * x + self.m12 * y + self.t1, self.m21 * x + self.m22 * y + self.t2)

    def inverse(self) -> AffineMap:
        d = self.det
        if d == 0:
            raise SingularAffine("affine map is not invertible")
        i11, i12, i21, i22 = self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d
        return AffineMap(i11, i12, i21, i22, -(i11 * self.t1 + i12 * self.t2), -(i21 * self.t1 + i22 * self.t2))

    def then(self, other: AffineMap) -> AffineMap:
        """``other ∘ self``: apply ``self`` first."""
        o = other
        return AffineMap(
            o.m11 * self.m11 + o.m12 * self.m21,
            o.m11 * self.m12 + o.m12 * self.m22,
            o.m21 * self.m11 + o.m22 * self.m21,
            o.m21 * self.m12 + o.m22 * self.m22,
            o.m11 * self.t1 + o.m12 * self.t2 + o.t1,
            o.m21 * self.t1 + o.m22 * self.t2 + o.t2,
        )

    def image_line(self, line: Line) -> Line:
        p = line.point()
        d = line.direction()
        return Line.through(self(p), self(p + d))


_IDENTITY = AffineMap(Fraction(1), Fraction(0), Fraction(0), Fraction(1), Fraction(0), Fraction(0))


def signed_area2(vertices: Sequence[Point]) -> Fraction:
    n = len(vertices)
    total = Fraction(0)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


def _rotate_to_min(vertices: Sequence[Point]) -> tuple[Point, ...]:
    k = min(range(len(vertices)), key=vertices.__getitem__)
    return tuple(vertices[k:]) + tuple(vertices[:k])


def canonical_vertices(vertices: Iterable[Point]) -> tuple[Point, ...]:
    """Drop repeats and straight-angle vertices, orient CCW, start at the minimum.

    Spikes (a vertex whose two edges fold back onto each other) are left in
    place so that :func:`validate_simple_polygon` still rejects them.
    """
    vs = list(vertices)
    changed = True
    while changed and len(vs) >= 3:
        changed = False
        out: list[Point] = []
        for v in vs:
            if not out or out[-1] != v:
                out.append(v)
        while len(out) > 1 and out[0] == out[-1]:
            out.pop()
        vs = out
        n = len(vs)
        if n < 3:
            break
        for i in range(n):
            a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
            if orient(a, b, c) == 0 and (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) > 0:
                del vs[i]
                changed = True
                break
    if len(vs) >= 3 and signed_area2(vs) < 0:
        vs.reverse()
    return _rotate_to_min(vs) if vs else ()


@dataclass(frozen=True)
class Polygon:
    """A validated simple polygon, CCW, starting at its lexicographic minimum.

    Build instances through :func:`validate_simple_polygon`.
    """

    vertices: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[Segment]:
        vs = self.vertices
        return [Segment(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    @cached_property
    def area(self) -> Fraction:
        return signed_area2(self.vertices) / 2

    @cached_property
    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def locate(self, p: Point) -> Location:
        return point_in_polygon(p, self)


def validate_simple_polygon(vertices: Iterable) -> Polygon:
    """Check simplicity exactly and return the canonical CCW polygon."""
    vs = [v if isinstance(v, Point) else pt(*v) for v in vertices]
    if len(vs) < 3:
        raise TooFewVertices(f"polygon needs at least 3 vertices, got {len(vs)}")
    if len(set(vs)) != len(vs):
        raise Degenerate("repeated vertex")
    n = len(vs)
    for i in range(n):
        if orient(vs[i - 1], vs[i], vs[(i + 1) % n]) == 0:
            raise Degenerate(f"collinear vertices around index {i}")
    edges = [Segment(vs[i], vs[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if segment_intersects(edges[i], edges[j]).kind is not Hit.DISJOINT:
                raise NotSimple(f"edges {i} and {j} intersect")
    if signed_area2(vs) < 0:
        vs.reverse()
    return Polygon(_rotate_to_min(vs))


class Location(Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def point_in_polygon(p: Point, poly: Polygon | Sequence[Point]) -> Location:
    vs = poly.vertices if isinstance(poly, Polygon) else poly
    n = len(vs)
    x, y = p
    inside = False
    for i in range(n):
        a = vs[i]
        b = vs[(i + 1) % n]
        if on_segment(p, a, b):
            return Location.BOUNDARY
        if (a[1] > y) != (b[1] > y):
            # x-coordinate of the edge at height y, compared without division
            lhs = (x - a[0]) * (b[1] - a[1])
            rhs = (b[0] - a[0]) * (y - a[1])
            if (lhs < rhs) == (b[1] > a[1]):
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def is_convex(poly: Polygon | Sequence[Point]) -> bool:
    """Strict convexity (no straight angles) of a CCW polygon."""
    vs = poly.vertices if isinstance(poly, Polygon) else poly
    n = len(vs)
    return n >= 3 and all(orient(vs[i - 1], vs[i], vs[(i + 1) % n]) > 0 for i in range(n))


def in_convex_interior(p, vs: Sequence[Point]) -> bool:
    """Strict interior test for a CCW convex polygon."""
    n = len(vs)
    return all(orient(vs[i], vs[(i + 1) % n], p) > 0 for i in range(n))


def in_convex_closed(p, vs: Sequence[Point]) -> bool:
    n = len(vs)
    return all(orient(vs[i], vs[(i + 1) % n], p) >= 0 for i in range(n))


def clip_convex(vs: Sequence[Point], line: Line, keep: Side) -> tuple[Point, ...]:
    """Intersection of a convex polygon with the closed half-plane ``keep``."""
    out: list[Point] = []
    n = len(vs)
    vals = [line.value(v) * keep for v in vs]
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        va, vb = vals[i], vals[(i + 1) % n]
        if va >= 0:
            out.append(a)
        if (va > 0 and vb < 0) or (va < 0 and vb > 0):
            out.append(lerp(a, b, va / (va - vb)))
    return canonical_vertices(out)


def segment_meets_convex(s: Segment, vs: Sequence[Point]) -> bool:
    """Does the closed segment touch the closed convex polygon ``vs``?"""
    if in_convex_closed(s.p, vs) or in_convex_closed(s.q, vs):
        return True
    n = len(vs)
    return any(
        segment_intersects(s, Segment(vs[i], vs[(i + 1) % n])).kind is not Hit.DISJOINT for i in range(n)
    )


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Strict convex hull (monotone chain), CCW, collinear points dropped."""
    ps = sorted(set(points))
    if len(ps) <= 2:
        return ps

    def half(seq):
        chain: list[Point] = []
        for p in seq:
            while len(chain) >= 2 and orient(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(ps)
    upper = half(reversed(ps))
    return lower[:-1] + upper[:-1]


def segment_meets_convex_interior(s: Segment, vs: Sequence[Point]) -> bool:
    """Does the closed segment meet the open interior of the CCW convex polygon ``vs``?"""
    p, r = s
    lo, hi = Fraction(0), Fraction(1)
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        # f(t) = orient(a, b, p + t (r - p)) must stay >= 0
        f0 = orient(a, b, p)
        f1 = orient(a, b, r)
        if f0 < 0 and f1 < 0:
            return False
        if f0 < 0:
            lo = max(lo, f0 / (f0 - f1))
        elif f1 < 0:
            hi = min(hi, f0 / (f0 - f1))
        if lo >= hi:
            return False
    return in_convex_interior(lerp(p, r, (lo + hi) / 2), vs)
