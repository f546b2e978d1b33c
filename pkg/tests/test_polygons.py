import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acsigma.errors import PolygonAlgoError
from acsigma.geometry import (
    Hit,
    Location,
    Segment,
    in_convex_interior,
    is_convex,
    orient,
    point_in_polygon,
    pt,
    segment_intersects,
    signed_area2,
    validate_simple_polygon,
)
from acsigma.maps import map_polygon
from acsigma.polygons import (
    EarQuadrilateral,
    check_ear_quadrilateral,
    construct_ear_quadrilateral,
    ear_step,
    find_ears,
    is_diagonal,
    open_segment_location,
    reduce_polygon_to_triangle,
    triangulate,
)
from acsigma.randgen import rand_simple_polygon, rng

L_HEX = validate_simple_polygon([pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)])
SQUARE = validate_simple_polygon([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])
TRI = validate_simple_polygon([pt(0, -1), pt(1, 0), pt(0, 1)])


def brute_ears(vs):
    """Ears from first principles: the open diagonal avoids every edge and its midpoint is inside."""
    n = len(vs)
    if n == 3:
        return [0, 1, 2]
    out = []
    for i in range(n):
        a, b = vs[i - 1], vs[(i + 1) % n]
        diag = Segment(a, b)
        clear = True
        for k in range(n):
            e = Segment(vs[k], vs[(k + 1) % n])
            hit = segment_intersects(diag, e)
            if hit.kind is Hit.OVERLAP or (hit.kind is Hit.POINT and hit.point not in (a, b)):
                clear = False
        mid = pt((a.x + b.x) / 2, (a.y + b.y) / 2)
        if clear and point_in_polygon(mid, vs) is Location.INSIDE:
            out.append(i)
    return out


def test_ears_of_small_polygons():
    assert [e.vertex_index for e in find_ears(TRI)] == [0, 1, 2]
    assert [e.vertex_index for e in find_ears(SQUARE)] == [0, 1, 2, 3]


def test_ears_of_l_hexagon():
    ears = [e.vertex_index for e in find_ears(L_HEX)]
    assert ears == brute_ears(L_HEX.vertices) == [1, 2, 4, 5]


def test_diagonal_and_open_segment_location():
    vs = L_HEX.vertices
    # (2,1)-(1,2) cuts the notch, (2,0)-(0,2) passes through the reflex vertex
    assert open_segment_location(vs, pt(2, 1), pt(1, 2)) is Location.OUTSIDE
    assert not is_diagonal(vs, 2, 4)
    assert not is_diagonal(vs, 1, 5)
    assert is_diagonal(vs, 1, 3)


def _check_triangulation(P, tris):
    assert len(tris) == len(P.vertices) - 2
    assert sum(abs(signed_area2(t)) for t in tris) == 2 * P.area
    for t1, t2 in itertools.permutations(tris, 2):
        # with the areas adding up, a centroid inside another triangle means overlap
        c1 = pt(sum(p.x for p in t1) / 3, sum(p.y for p in t1) / 3)
        ccw = t2 if signed_area2(t2) > 0 else t2[::-1]
        assert not in_convex_interior(c1, ccw)


def test_triangulate_examples():
    assert triangulate(TRI) == [TRI.vertices]
    assert len(triangulate(SQUARE)) == 2
    tris = triangulate(L_HEX)
    assert len(tris) == 4
    assert sum(abs(signed_area2(t)) for t in tris) / 2 == 3
    _check_triangulation(L_HEX, tris)


@given(st.integers(4, 14), st.integers(0, 10**6))
def test_triangulation_area_and_disjointness(n, seed):
    P = rand_simple_polygon(rng(seed), n)
    _check_triangulation(P, triangulate(P))


@given(st.integers(4, 20), st.integers(0, 10**6))
def test_two_ears(n, seed):
    P = rand_simple_polygon(rng(seed), n)
    ears = [e.vertex_index for e in find_ears(P)]
    assert len(ears) >= 2
    assert ears == brute_ears(P.vertices)


def test_ear_quadrilateral_of_convex_polygon():
    P = validate_simple_polygon([pt(0, 0), pt(4, 0), pt(5, 3), pt(2, 5), pt(-1, 3)])
    for i in range(5):
        quad = construct_ear_quadrilateral(P, i)
        assert check_ear_quadrilateral(P.vertices, i, quad)
        assert is_convex(quad.vertices) and in_convex_interior(quad.v, quad.vertices)


def test_ear_quadrilateral_w_on_the_median_inside_the_next_triangle():
    quad = construct_ear_quadrilateral(L_HEX, 1)
    v, m, w = quad.v, quad.m, quad.w
    assert orient(v, m, w) == 0
    # w lies beyond m, away from v
    assert (w.x - m.x) * (m.x - v.x) + (w.y - m.y) * (m.y - v.y) > 0
    tri = [t for t in triangulate(L_HEX, first_ear=1)[1:] if quad.a in t and quad.b in t][0]
    ccw = tri if signed_area2(tri) > 0 else tri[::-1]
    assert in_convex_interior(w, ccw)


def test_ear_quadrilateral_diagonals_cross_inside():
    quad = construct_ear_quadrilateral(L_HEX, 2)
    hit = segment_intersects(Segment(quad.a, quad.b), Segment(quad.u, quad.w))
    assert hit.kind is Hit.POINT
    assert hit.point not in (quad.a, quad.b, quad.u, quad.w)


def test_bad_quadrilateral_is_rejected():
    vs = L_HEX.vertices
    good = construct_ear_quadrilateral(L_HEX, 1)
    assert check_ear_quadrilateral(vs, 1, good)
    # w pushed past the reflex vertex (1, 1): (a, w) leaves the polygon
    far = EarQuadrilateral(good.a, good.u, good.b, pt("3/2", "3/2"), good.v)
    assert not check_ear_quadrilateral(vs, 1, far)
    # u dragged inward so v is no longer interior to Q
    flat = EarQuadrilateral(good.a, good.v, good.b, good.w, good.v)
    assert not check_ear_quadrilateral(vs, 1, flat)


def test_construct_rejects_triangles():
    with pytest.raises(PolygonAlgoError):
        construct_ear_quadrilateral(TRI, 0)


def test_reduce_examples():
    assert len(reduce_polygon_to_triangle(TRI).chain) == 0
    cert = reduce_polygon_to_triangle(SQUARE)
    assert len(cert.chain) == 1 and len(cert.target.vertices) == 3
    assert cert.replay()


@pytest.mark.parametrize("seed", range(6))
def test_reduce_random_12_gon(seed):
    P = rand_simple_polygon(rng(seed), 12)
    cert = reduce_polygon_to_triangle(P)
    assert len(cert.chain) == 9
    assert len(cert.target.vertices) == 3
    assert cert.replay()
    assert map_polygon(cert.chain.inverse(), cert.target) == P


@pytest.mark.parametrize("seed", range(6))
def test_each_step_removes_one_ear_and_fixes_the_rest(seed):
    P = rand_simple_polygon(rng(100 + seed), 9)
    cert = reduce_polygon_to_triangle(P)
    for step, before, after in zip(cert.chain.steps, cert.stages, cert.stages[1:]):
        assert len(after.vertices) == len(before.vertices) - 1
        moved = [v for v in before.vertices if step(v) != v]
        assert len(moved) == 1
        assert set(before.vertices) - set(moved) == set(after.vertices)


def test_ear_step_sends_ear_to_midpoint():
    step = ear_step(SQUARE, 0)
    v = SQUARE.vertices[0]
    a, b = SQUARE.vertices[-1], SQUARE.vertices[1]
    assert step(v) == pt((a.x + b.x) / 2, (a.y + b.y) / 2)
    assert step(pt(5, 5)) == pt(5, 5)
