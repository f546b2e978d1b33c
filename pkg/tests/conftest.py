from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from acsigma.geometry import AffineMap, Line, Point

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_q = st.fractions(min_value=-10, max_value=10, max_denominator=8)
small_int = st.integers(min_value=-10, max_value=10)


@st.composite
def points(draw, coord=small_q):
    return Point(Fraction(draw(coord)), Fraction(draw(coord)))


@st.composite
def int_points(draw):
    return Point(Fraction(draw(small_int)), Fraction(draw(small_int)))


@st.composite
def lines(draw):
    a = draw(st.integers(-5, 5))
    b = draw(st.integers(-5, 5))
    if a == 0 and b == 0:
        a = 1
    return Line.from_coeffs(a, b, draw(st.integers(-20, 20)))


@st.composite
def invertible_affine(draw):
    ent = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    m11, m12, m21, m22 = draw(st.tuples(ent, ent, ent, ent).filter(lambda m: m[0] * m[3] != m[1] * m[2]))
    return AffineMap.make(m11, m12, m21, m22, draw(ent), draw(ent))


def point_lists(min_size=1, max_size=8):
    return st.lists(int_points(), min_size=min_size, max_size=max_size)
