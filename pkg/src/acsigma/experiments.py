"""Numerical experiments: disk-versus-square growth, fuzz campaigns and norm examples.

This is the only module that uses floating point, and only for the disk
construction; fuzz campaigns and norm examples stay exact.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ViolationFound
from .geometry import AffineMap, Line, Point, convex_hull, pt
from .maps import HpaMap, LpaMap, hpa_vf_bounds_check, lpa_vf_bound_check
from .randgen import rand_hpa, rand_interior, rand_list, rand_lpa
from .variation import SampledFunction, cvar, var_exact_collinear, var_lower_bound, vf

RATIO_TOL = 1e-6
# In polar form g sends (r, t) to (r cos t, t) for |t| <= pi/4, so the largest
# singular value of Dg is sqrt(4/3) = 1.1547..., reached where cos^2 t = 2/3.
# The square is rescaled by 2 before g is applied.
GAUGE_LIPSCHITZ = 1.155
SQUARE_TO_DISK_LIPSCHITZ = 2 * GAUGE_LIPSCHITZ


# --- square to disk -------------------------------------------------------------


def gauge(c: tuple[float, float]) -> tuple[float, float]:
    """Radial map of the square [-1,1]^2 onto the closed unit disk."""
    x, y = c
    n2 = math.hypot(x, y)
    if n2 == 0.0:
        return (0.0, 0.0)
    k = max(abs(x), abs(y)) / n2
    return (x * k, y * k)


def gauge_inverse(d: tuple[float, float]) -> tuple[float, float]:
    x, y = d
    ninf = max(abs(x), abs(y))
    if ninf == 0.0:
        return (0.0, 0.0)
    k = math.hypot(x, y) / ninf
    return (x * k, y * k)


def square_to_disk(p: tuple[float, float]) -> tuple[float, float]:
    """Homeomorphism from Q = [0,1]^2 onto the unit disk."""
    return gauge((2 * p[0] - 1, 2 * p[1] - 1))


def disk_to_square(d: tuple[float, float]) -> tuple[float, float]:
    c = gauge_inverse(d)
    return ((c[0] + 1) / 2, (c[1] + 1) / 2)


def modulus_of_continuity(delta: float) -> float:
    """Certified bound on |h(x) - h(x')| when |x - x'| <= delta."""
    return SQUARE_TO_DISK_LIPSCHITZ * delta


def choose_delta(eps: float, iters: int = 80) -> float:
    """Largest delta <= 1 (by bisection) with modulus_of_continuity(delta) < eps."""
    if modulus_of_continuity(1.0) < eps:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if modulus_of_continuity(mid) < eps:
            lo = mid
        else:
            hi = mid
    return lo


def _dist_to_segment(p, a, b) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / (dx * dx + dy * dy)
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - ax - t * dx, p[1] - ay - t * dy)


@dataclass(frozen=True)
class DiskSquareTrial:
    n: int
    eps: float
    delta: float
    points: tuple[tuple[float, float], ...]
    values: tuple[float, ...]
    cvar: float
    vf: int
    convex_certified: bool
    ratio: float


def in_convex_position_order(points) -> bool:
    """Exact test that the points are the vertices of a convex polygon in list order."""
    exact = [Point(Fraction(x), Fraction(y)) for x, y in points]
    if len(set(exact)) != len(exact):
        return False
    hull = convex_hull(exact)
    if len(hull) != len(exact):
        return False
    k = hull.index(exact[0])
    ccw = hull[k:] + hull[:k]
    cw = [ccw[0]] + ccw[1:][::-1]
    return exact in (ccw, cw)


def disk_square_trial(n: int, exact_vf: bool = False) -> DiskSquareTrial:
    """The list alternating boundary points and lifted points for even ``n``."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and at least 2")
    p = [square_to_disk((k / n, 0.0)) for k in range(n + 1)]
    eps = min(_dist_to_segment(p[k], p[k - 1], p[k + 1]) for k in range(1, n, 2)) / 2
    delta = choose_delta(eps)
    srcs = [(k / n, delta if k % 2 else 0.0) for k in range(n + 1)]
    S = tuple(square_to_disk(s) for s in srcs)
    # g = f o h^{-1} with f(x, y) = min(y / delta, 1)
    values = tuple(min(disk_to_square(s)[1] / delta, 1.0) for s in S)
    total = sum(abs(values[i] - values[i - 1]) for i in range(1, len(values)))
    certified = in_convex_position_order(S)
    v = 2 if certified else vf(tuple(Point(Fraction(x), Fraction(y)) for x, y in S))
    if exact_vf:
        v = vf(tuple(Point(Fraction(x), Fraction(y)) for x, y in S))
    return DiskSquareTrial(n, eps, delta, S, values, total, v, certified, total / v)


def disk_square_growth(n_max: int) -> list[DiskSquareTrial]:
    if n_max < 2 or n_max % 2:
        raise ValueError("n_max must be even and at least 2")
    return [disk_square_trial(n) for n in range(2, n_max + 1, 2)]


# --- fuzz campaigns ---------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


@dataclass
class FuzzReport:
    kind: str
    seed: int
    trials: int
    violations: list[int] = field(default_factory=list)
    worst_ratio: Fraction = Fraction(1)
    worst_trial: int | None = None
    by_n: dict[int, Fraction] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def _ratio(a: int, b: int) -> Fraction:
    return Fraction(max(a, b), min(a, b))


def fuzz_hpa_trial(seed: int, trial: int) -> tuple[HpaMap, list[Point], int, int, bool]:
    r = trial_rng(seed, trial)
    h = rand_hpa(r)
    S = rand_list(r)
    v, vh, ok = hpa_vf_bounds_check(h, S)
    return h, S, v, vh, ok


def fuzz_hpa(trials: int, seed: int = 0, raise_on_violation: bool = True) -> FuzzReport:
    rep = FuzzReport("hpa", seed, trials)
    for t in range(trials):
        _, _, v, vh, ok = fuzz_hpa_trial(seed, t)
        ratio = _ratio(v, vh)
        if ratio > rep.worst_ratio:
            rep.worst_ratio, rep.worst_trial = ratio, t
        if not ok:
            rep.violations.append(t)
            if raise_on_violation:
                raise ViolationFound(f"hpa bound violated: vf {v} -> {vh}", seed=seed, trial=t)
    return rep


def _lpa_list(r: random.Random, h: LpaMap, max_len: int = 12) -> list[Point]:
    """Random list concentrated around the cell polygon of ``h``."""
    C = h.cell_polygon
    n = r.randint(1, max_len)
    out = []
    for _ in range(n):
        roll = r.random()
        if roll < 0.5:
            out.append(rand_interior(r, C))
        elif roll < 0.7:
            out.append(r.choice(C + (h.x0,)))
        elif roll < 0.8 and out:
            out.append(r.choice(out))
        else:
            out.extend(rand_list(r, 1, -3, 3, 8))
    return out


def fuzz_lpa_trial(seed: int, trial: int, n: int | None = None):
    r = trial_rng(seed, trial)
    h = rand_lpa(r, n)
    S = _lpa_list(r, h)
    v, vh, cells, ok = lpa_vf_bound_check(h, S)
    return h, S, v, vh, ok


def fuzz_lpa(trials: int, seed: int = 0, raise_on_violation: bool = True) -> FuzzReport:
    rep = FuzzReport("lpa", seed, trials)
    for t in range(trials):
        h, _, v, vh, ok = fuzz_lpa_trial(seed, t)
        ratio = _ratio(v, vh)
        rep.by_n[h.n] = max(rep.by_n.get(h.n, Fraction(1)), ratio)
        if ratio > rep.worst_ratio:
            rep.worst_ratio, rep.worst_trial = ratio, t
        if not ok:
            rep.violations.append(t)
            if raise_on_violation:
                raise ViolationFound(f"lpa bound violated: vf {v} -> {vh} with {h.n} cells", seed=seed, trial=t)
    return rep


@dataclass(frozen=True)
class CnObservation:
    n: int
    observed_ratio: Fraction
    trial_count: int
    seed: int

    @property
    def within_proven_bound(self) -> bool:
        return self.observed_ratio <= (self.n + 1) ** 2

    @property
    def within_conjecture(self) -> bool:
        """Informational only: the conjectured constant ``n + 1``."""
        return self.observed_ratio <= self.n + 1


def cn_experiment(n: int, trials: int, seed: int = 0, identity: bool = False) -> CnObservation:
    """Largest two-sided vf distortion seen over random lpa maps with ``n`` cells."""
    if n < 3:
        raise ValueError("lpa maps need at least 3 cells")
    worst = Fraction(1)
    for t in range(trials):
        r = trial_rng(seed, t)
        h = rand_lpa(r, n)
        if identity:
            h = LpaMap.make(h.cell_polygon, AffineMap.identity(), h.x0, h.x0)
        S = _lpa_list(r, h)
        v, vh, _, _ = lpa_vf_bound_check(h, S)
        worst = max(worst, _ratio(v, vh))
    return CnObservation(n, worst, trials, seed)


# --- norm examples ------------------------------------------------------------------


@dataclass(frozen=True)
class NormExamples:
    collinear_idempotent_var: Fraction
    triangle_idempotent_var_max: Fraction
    quad_norm: Fraction
    quad_var: Fraction
    transferred_var_lower: Fraction
    constant_norms: tuple[Fraction, Fraction]

    @property
    def idempotent_gap(self) -> tuple[Fraction, Fraction]:
        return self.collinear_idempotent_var, self.triangle_idempotent_var_max


def example_hpa() -> HpaMap:
    """Unit square onto the dart with vertices (1,0), (0,4), (-1,0), (0,2)."""
    P = lambda x, y: pt(x, y)  # noqa: E731
    diag = Line.through(P(0, 0), P(1, 1))
    lower = AffineMap.from_triangles([P(0, 0), P(1, 1), P(1, 0)], [P(0, 2), P(0, 4), P(1, 0)])
    upper = AffineMap.from_triangles([P(0, 0), P(1, 1), P(0, 1)], [P(0, 2), P(0, 4), P(-1, 0)])
    return HpaMap.make(diag, lower, upper)


def norm_examples(max_len: int = 6) -> NormExamples:
    line3 = [pt(0, 0), pt(1, 0), pt(2, 0)]
    f = SampledFunction.from_pairs(zip(line3, (0, 1, 0)))
    collinear = var_exact_collinear(f, line3)

    tri = [pt(0, 0), pt(1, 0), pt(0, 1)]
    worst = Fraction(0)
    for bits in range(8):
        g = SampledFunction.from_pairs((p, (bits >> i) & 1) for i, p in enumerate(tri))
        worst = max(worst, var_lower_bound(g, tri, max_len).lower_bound)

    # f(x, y) = max(1 - y, 0) sampled on the dart (image of a 3 x 3 grid of the square)
    h = example_hpa()
    grid = [pt(Fraction(i, 2), Fraction(j, 2)) for i in range(3) for j in range(3)]
    dart = sorted({h(p) for p in grid})
    fq = SampledFunction.from_callable(dart, lambda p: max(1 - p.y, Fraction(0)))
    quad_var = var_lower_bound(fq, dart, 4).lower_bound
    quad_norm = fq.sup_norm()[0] + quad_var

    # g = f o h along the segment from z1 = (0,1) to z2 = (1,0) in the square
    gamma = [pt(0, 1), pt(Fraction(1, 2), Fraction(1, 2)), pt(1, 0)]
    g = SampledFunction.from_callable(gamma, lambda p: max(1 - h(p).y, Fraction(0)))
    transferred = cvar(g, gamma) / vf(tuple(gamma))

    const_line = SampledFunction.from_pairs((p, 1) for p in line3)
    const_tri = SampledFunction.from_pairs((p, 1) for p in tri)
    constant = (
        Fraction(1) + var_exact_collinear(const_line, line3),
        Fraction(1) + var_lower_bound(const_tri, tri, max_len).lower_bound,
    )
    return NormExamples(collinear, worst, quad_norm, quad_var, transferred, constant)


__all__ = [
    "CnObservation",
    "DiskSquareTrial",
    "FuzzReport",
    "NormExamples",
    "choose_delta",
    "cn_experiment",
    "disk_square_growth",
    "disk_square_trial",
    "disk_to_square",
    "example_hpa",
    "fuzz_hpa",
    "fuzz_lpa",
    "gauge",
    "gauge_inverse",
    "in_convex_position_order",
    "norm_examples",
    "square_to_disk",
]
