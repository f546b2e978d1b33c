"""Seeded generators for random exact test inputs."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .geometry import AffineMap, Line, Point, Polygon, Side, orient, pt, validate_simple_polygon
from .maps import HpaMap, LpaMap


def rng(seed: int | None) -> random.Random:
    return random.Random(seed)


def rand_q(r: random.Random, lo: int, hi: int, den: int = 8) -> Fraction:
    return Fraction(r.randint(lo * den, hi * den), den)


def rand_point(r: random.Random, lo: int = -10, hi: int = 10, den: int = 8) -> Point:
    return Point(rand_q(r, lo, hi, den), rand_q(r, lo, hi, den))


def rand_list(r: random.Random, max_len: int = 12, lo: int = -10, hi: int = 10, den: int = 1) -> list[Point]:
    """A point list, sometimes with repeats and collinear runs."""
    n = r.randint(1, max_len)
    pool = [rand_point(r, lo, hi, den) for _ in range(max(1, n // 2 + 1))]
    out = []
    for _ in range(n):
        roll = r.random()
        if roll < 0.15 and out:
            out.append(r.choice(out))
        elif roll < 0.35 and len(out) >= 2:
            a, b = out[-2], out[-1]
            k = r.randint(-2, 3)
            out.append(Point(a.x + k * (b.x - a.x), a.y + k * (b.y - a.y)))
        else:
            out.append(r.choice(pool) if roll < 0.5 else rand_point(r, lo, hi, den))
    return out


def rand_affine(r: random.Random, lo: int = -5, hi: int = 5) -> AffineMap:
    while True:
        m = AffineMap.make(*(r.randint(lo, hi) for _ in range(6)))
        if m.invertible:
            return m


def rand_line(r: random.Random, lo: int = -5, hi: int = 5) -> Line:
    while True:
        a, b, c = (r.randint(lo, hi) for _ in range(3))
        if a or b:
            return Line.from_coeffs(a, b, c)


def rand_hpa(r: random.Random) -> HpaMap:
    """``alpha1`` random; ``alpha2 = alpha1 ∘ beta`` with ``beta`` fixing the line."""
    line = rand_line(r)
    alpha1 = rand_affine(r)
    while True:
        vx, vy = rand_q(r, -5, 5, 4), rand_q(r, -5, 5, 4)
        if 1 + line.a * vx + line.b * vy > 0:
            break
    # beta(x) = x + (n.x + c) v
    beta = AffineMap.make(1 + vx * line.a, vx * line.b, vy * line.a, 1 + vy * line.b, vx * line.c, vy * line.c)
    side = r.choice((Side.LEFT, Side.RIGHT))
    return HpaMap.make(line, alpha1, beta.then(alpha1), side)


def circle_point(t: Fraction) -> Point:
    """Rational point on the unit circle (t -> angle 2 arctan t)."""
    d = 1 + t * t
    return Point((1 - t * t) / d, 2 * t / d)


def rand_convex_polygon(r: random.Random, n: int, den: int = 16) -> list[Point]:
    """``n`` rational points on the unit circle in CCW order, then a random affine image."""
    ts = set()
    while len(ts) < n:
        ts.add(Fraction(r.randint(-6 * den, 6 * den), den))
    # t -> angle is increasing, so sorted t gives CCW order
    vs = [circle_point(t) for t in sorted(ts)]
    m = rand_affine(r, -3, 3)
    img = [m(p) for p in vs]
    return img if m.det > 0 else img[::-1]


def rand_interior(r: random.Random, vs) -> Point:
    ws = [Fraction(r.randint(1, 9)) for _ in vs]
    tot = sum(ws)
    return Point(sum(w * v.x for w, v in zip(ws, vs)) / tot, sum(w * v.y for w, v in zip(ws, vs)) / tot)


def rand_lpa(r: random.Random, n: int | None = None) -> LpaMap:
    n = n if n is not None else r.randint(3, 8)
    C = rand_convex_polygon(r, n)
    alpha = rand_affine(r, -3, 3)
    x0 = rand_interior(r, C)
    y0 = rand_interior(r, [alpha(c) for c in C])
    return LpaMap.make(C, alpha, x0, y0)


def _general_position_points(r: random.Random, n: int, size: int) -> list[tuple[int, int]]:
    pts: list[tuple[int, int]] = []
    while len(pts) < n:
        p = (r.randint(0, size), r.randint(0, size))
        if p in pts:
            continue
        if any(orient(a, b, p) == 0 for a, b in combinations(pts, 2)):
            continue
        pts.append(p)
    return pts


def _cross(p1, p2, p3, p4) -> bool:
    # proper crossing; points are in general position
    return (orient(p1, p2, p3) > 0) != (orient(p1, p2, p4) > 0) and (orient(p3, p4, p1) > 0) != (
        orient(p3, p4, p2) > 0
    )


def rand_simple_polygon(r: random.Random, n: int, size: int | None = None) -> Polygon:
    """Random simple polygon, no three vertices collinear, by 2-opt untangling."""
    size = size if size is not None else max(4 * n, 20)
    pts = _general_position_points(r, n, size)
    r.shuffle(pts)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                if _cross(pts[i], pts[i + 1], pts[j], pts[(j + 1) % n]):
                    pts[i + 1 : j + 1] = reversed(pts[i + 1 : j + 1])
                    changed = True
    return validate_simple_polygon([pt(x, y) for x, y in pts])


__all__ = [
    "circle_point",
    "rand_affine",
    "rand_convex_polygon",
    "rand_hpa",
    "rand_interior",
    "rand_line",
    "rand_list",
    "rand_lpa",
    "rand_point",
    "rand_q",
    "rand_simple_polygon",
    "rng",
]
