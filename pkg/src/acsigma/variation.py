"""Curve variation, crossing segments, the variation factor and BV norms.

The variation factor ``vf(S)`` is a maximum over *all* lines.  The crossing
rules only look at which side of the line each list point falls on, so the
maximum is taken over the finite set of side labelings that lines can
realise.  Those are enumerated from the lines through two distinct list
points together with their infinitesimal perturbations (parallel shifts and
small rotations about a point on the line); see :func:`vf_witness`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import NotCollinear, NotInjectiveOnDomain, PointOutsideDomain
from .geometry import Line, Point, Side, orient, pt, q

EXHAUSTIVE_BUDGET = 10**6
_SQRT_DIGITS = 34  # about 113 bits
_SQRT_REL_ERR = Fraction(1, 10**33)


def side_labels(points: Sequence[Point], line: Line) -> tuple[int, ...]:
    return tuple(int(line.side(p)) for p in points)


def crossing_segments(points: Sequence[Point], line: Line) -> list[int]:
    """Indices ``i`` such that ``[x_i, x_{i+1}]`` is a crossing segment on ``line``."""
    return _crossing_indices(side_labels(points, line))


def _crossing_indices(labels: Sequence[int]) -> list[int]:
    n = len(labels) - 1
    out = []
    for i in range(n):
        a, b = labels[i], labels[i + 1]
        if (
            a * b == -1  # strictly opposite sides
            or (i == 0 and a == 0)
            or (i > 0 and a == 0 and labels[i - 1] != 0)
            or (i == n - 1 and a != 0 and b == 0)
        ):
            out.append(i)
    return out


def vf_from_labels(labels: Sequence[int]) -> int:
    """Number of crossing segments for a side labeling (+1 left, 0 on, -1 right)."""
    labels = [int(v) for v in labels]
    if not labels:
        raise ValueError("empty labeling")
    if len(labels) == 1:
        return 1 if labels[0] == 0 else 0
    return len(_crossing_indices(labels))


def vf_on_line(points: Sequence[Point], line: Line) -> int:
    return vf_from_labels(side_labels(points, line))


def count_crossings(labels: np.ndarray) -> np.ndarray:
    """Vectorised :func:`vf_from_labels` over the last axis of an int8 array."""
    m = labels
    n = m.shape[-1] - 1
    if n == 0:
        return (m[..., 0] == 0).astype(np.int64)
    cross = (m[..., :-1] * m[..., 1:]) == -1
    cross[..., 0] |= m[..., 0] == 0
    if n >= 2:
        cross[..., 1:] |= (m[..., 1:-1] == 0) & (m[..., :-2] != 0)
    cross[..., n - 1] |= (m[..., n - 1] != 0) & (m[..., n] == 0)
    return cross.sum(axis=-1)


def _integer_coords(points: Sequence[Point]) -> list[tuple[int, int]]:
    den = math.lcm(*(v.denominator for p in points for v in p))
    return [(int(p[0] * den), int(p[1] * den)) for p in points]


@dataclass(frozen=True)
class VfWitness:
    """Where the maximum in ``vf(S)`` is attained.

    ``line`` passes through two list points; ``move`` says how it was
    perturbed: ``"exact"`` (the line itself), ``"shift"`` (parallel
    translation toward ``sign``) or ``"rotate"`` about the point of the line
    at parameter ``pivot`` (in units of :meth:`Line.param`).
    """

    value: int
    labels: tuple[int, ...]
    line: Line | None
    move: str = "exact"
    sign: int = 0
    pivot: Fraction | None = None


def vf(points: Sequence[Point]) -> int:
    return vf_witness(tuple(points)).value


@lru_cache(maxsize=1 << 16)
def vf_witness(points: tuple[Point, ...]) -> VfWitness:
    """Exact ``vf(S) = max_l vf(S, l)`` with a realising line."""
    npts = len(points)
    if npts == 0:
        raise ValueError("empty point list")
    if npts == 1:
        return VfWitness(1, (0,), None)
    coords = _integer_coords(points)
    distinct = sorted(set(coords))
    if len(distinct) == 1:
        return VfWitness(vf_from_labels([0] * npts), (0,) * npts, None)

    lines: list[tuple[int, int, int]] = []
    seen = set()
    for (x1, y1), (x2, y2) in combinations(distinct, 2):
        a, b = y2 - y1, x1 - x2
        c = -(a * x1 + b * y1)
        g = math.gcd(a, b, c)
        a, b, c = a // g, b // g, c // g
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        if (a, b, c) not in seen:
            seen.add((a, b, c))
            lines.append((a, b, c))

    nl = len(lines)
    base = np.empty((nl, npts), dtype=np.int8)
    ranks = np.zeros((nl, npts), dtype=np.int64)
    for li, (a, b, c) in enumerate(lines):
        row = base[li]
        on_t = []
        for k, (x, y) in enumerate(coords):
            v = a * x + b * y + c
            row[k] = (v > 0) - (v < 0)
            if v == 0:
                on_t.append((-b * x + a * y, k))
        order = {t: r for r, t in enumerate(sorted({t for t, _ in on_t}))}
        for t, k in on_t:
            ranks[li, k] = 2 * order[t]
    # pivot -1 is a parallel shift, even pivots rotate about an on-point,
    # odd pivots rotate about the midpoint between consecutive on-points
    pivots = np.arange(-1, 2 * npts - 1, dtype=np.int64)
    on = base == 0
    rel = np.sign(ranks[:, None, :] - pivots[None, :, None]).astype(np.int8)
    pert = np.empty((nl, len(pivots), 2, npts), dtype=np.int8)
    for si, s in enumerate((1, -1)):
        pert[:, :, si, :] = np.where(on[:, None, :], rel * s, base[:, None, :])
    exact_counts = count_crossings(base)
    pert_counts = count_crossings(pert)
    best_exact = int(exact_counts.max())
    best_pert = int(pert_counts.max())
    if best_exact >= best_pert:
        li = int(exact_counts.argmax())
        return VfWitness(best_exact, tuple(int(v) for v in base[li]), Line(*lines[li]))
    li, pi, si = np.unravel_index(int(pert_counts.argmax()), pert_counts.shape)
    labels = tuple(int(v) for v in pert[li, pi, si])
    s = 1 if si == 0 else -1
    piv = int(pivots[pi])
    line = Line(*lines[li])
    if piv == -1:
        return VfWitness(best_pert, labels, _rescale_line(line, points), "shift", s)
    on_ts = sorted({t for t, k in _on_params(line, coords)})
    if piv % 2 == 0:
        t0 = Fraction(on_ts[piv // 2])
    else:
        t0 = Fraction(on_ts[piv // 2] + on_ts[piv // 2 + 1], 2)
    den = math.lcm(*(v.denominator for p in points for v in p))
    return VfWitness(best_pert, labels, _rescale_line(line, points), "rotate", s, t0 / den)


def _on_params(line: Line, coords):
    a, b, c = line
    return [(-b * x + a * y, k) for k, (x, y) in enumerate(coords) if a * x + b * y + c == 0]


def _rescale_line(line: Line, points: Sequence[Point]) -> Line:
    # lines above were built in integer-scaled coordinates
    den = math.lcm(*(v.denominator for p in points for v in p))
    return Line.from_coeffs(line.a, line.b, Fraction(line.c, den))


def realize_witness(w: VfWitness, scale=Fraction(1, 10**6)) -> Line | None:
    """Turn a perturbation witness into an actual line, for small enough ``scale``.

    Lines are normalised, so :func:`side_labels` on the result gives the
    witness labels up to a global sign.  Callers must confirm them and halve
    ``scale`` if they disagree.
    """
    if w.line is None or w.move == "exact":
        return w.line
    a, b, c = (Fraction(v) for v in w.line)
    if w.move == "shift":
        return Line.from_coeffs(a, b, c + w.sign * scale)
    # rotate about the point p0 at parameter pivot: add s*scale*(param - pivot)
    return Line.from_coeffs(
        a - w.sign * scale * b, b + w.sign * scale * a, c - w.sign * scale * w.pivot
    )


# --- function values -------------------------------------------------------


def value(v):
    """Normalise a function value to a Fraction or a (re, im) pair of Fractions."""
    if isinstance(v, complex):
        re, im = q(v.real), q(v.imag)
        return re if im == 0 else (re, im)
    if isinstance(v, (tuple, list)):
        re, im = q(v[0]), q(v[1])
        return re if im == 0 else (re, im)
    return q(v)


def _parts(v) -> tuple[Fraction, Fraction]:
    return (v, Fraction(0)) if isinstance(v, Fraction) else v


def _is_square(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


def modulus(v) -> tuple[Fraction, bool]:
    """``|v|`` and whether it is exact.

    Complex moduli are exact only when ``re^2 + im^2`` is the square of a
    rational; otherwise a 34-digit decimal square root is returned (relative
    error below 1e-33) with the flag cleared.
    """
    if isinstance(v, Fraction):
        return abs(v), True
    re, im = v
    sq = re * re + im * im
    rn, rd = _is_square(sq.numerator), _is_square(sq.denominator)
    if rn is not None and rd is not None:
        return Fraction(rn, rd), True
    with localcontext() as ctx:
        ctx.prec = _SQRT_DIGITS
        root = (Decimal(sq.numerator) / Decimal(sq.denominator)).sqrt()
    return Fraction(root), False


def abs_diff(u, v) -> tuple[Fraction, bool]:
    (ur, ui), (vr, vi) = _parts(u), _parts(v)
    if ui == 0 and vi == 0:
        return abs(ur - vr), True
    return modulus((ur - vr, ui - vi))


@dataclass(frozen=True)
class SampledFunction:
    """A function known on a finite set of exact points."""

    values: Mapping[Point, object]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[object, object]]) -> SampledFunction:
        vals = {}
        for p, v in pairs:
            p = p if isinstance(p, Point) else pt(*p)
            vals[p] = value(v)
        return cls(vals)

    @classmethod
    def from_callable(cls, points: Iterable[Point], fn: Callable[[Point], object]) -> SampledFunction:
        return cls({p: value(fn(p)) for p in points})

    @property
    def domain(self) -> frozenset[Point]:
        return frozenset(self.values)

    def __call__(self, p: Point):
        try:
            return self.values[p]
        except KeyError:
            raise PointOutsideDomain(f"{p!r} is not in the sampled domain") from None

    def sup_norm(self) -> tuple[Fraction, bool]:
        best, exact = Fraction(0), True
        for v in self.values.values():
            m, ok = modulus(v)
            if m > best:
                best, exact = m, ok
        return best, exact


def cvar_checked(f: SampledFunction, points: Sequence[Point]) -> tuple[Fraction, bool]:
    total, exact = Fraction(0), True
    vals = [f(p) for p in points]
    for u, v in zip(vals, vals[1:]):
        d, ok = abs_diff(u, v)
        total += d
        exact = exact and ok
    return total, exact


def cvar(f: SampledFunction, points: Sequence[Point]) -> Fraction:
    """Curve variation ``sum |f(x_i) - f(x_{i-1})|`` (0 for a single point)."""
    return cvar_checked(f, points)[0]


# --- estimating var(f, sigma) ------------------------------------------------


@dataclass(frozen=True)
class VarEstimate:
    lower_bound: Fraction
    witness: tuple[Point, ...]
    max_len: int
    strategy: str
    exact: bool = True
    error_bound: Fraction = Fraction(0)
    lists_scored: int = field(default=0, compare=False)


def var_lower_bound(
    f: SampledFunction,
    sigma: Iterable[Point],
    max_len: int,
    strategy: str = "auto",
    beam_width: int = 64,
) -> VarEstimate:
    """Best ``cvar(f, S) / vf(S)`` over lists ``S`` in ``sigma`` of length <= ``max_len``.

    ``strategy`` is ``"exhaustive"`` (every list, branch-and-bound pruned),
    ``"beam"`` or ``"auto"`` (exhaustive while ``|sigma|**max_len`` stays
    within :data:`EXHAUSTIVE_BUDGET`).  The result is a certified lower bound
    on ``var(f, sigma)``; ties keep the lexicographically first list.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    pts = sorted(set(sigma))
    if not pts:
        raise ValueError("empty sample set")
    for p in pts:
        f(p)
    if strategy == "auto":
        strategy = "exhaustive" if len(pts) ** max_len <= EXHAUSTIVE_BUDGET else "beam"
    if strategy == "exhaustive":
        best, witness, scored = _exhaustive(f, pts, max_len)
    elif strategy == "beam":
        best, witness, scored = _beam(f, pts, max_len, beam_width)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    total, exact = cvar_checked(f, witness)
    v = vf(witness)
    lb = total / v
    err = Fraction(0) if exact else lb * _SQRT_REL_ERR * len(witness)
    return VarEstimate(lb, witness, max_len, strategy, exact, err, scored)


def _diff_table(f, pts):
    vals = [f(p) for p in pts]
    return [[abs_diff(u, v)[0] for v in vals] for u in vals]


def _exhaustive(f, pts, max_len):
    diffs = _diff_table(f, pts)
    dmax = max((max(row) for row in diffs), default=Fraction(0))
    best = Fraction(0)
    witness: tuple[Point, ...] = (pts[0],)
    scored = 0
    idx: list[int] = []

    def visit(total: Fraction):
        nonlocal best, witness, scored
        if len(idx) >= 2 and total > best:
            lst = tuple(pts[i] for i in idx)
            ratio = total / vf(lst)
            scored += 1
            if ratio > best:
                best, witness = ratio, lst
        if len(idx) == max_len:
            return
        if total + (max_len - len(idx)) * dmax <= best:
            return
        for j in range(len(pts)):
            step = diffs[idx[-1]][j] if idx else Fraction(0)
            idx.append(j)
            visit(total + step)
            idx.pop()

    visit(Fraction(0))
    return best, witness, scored


def _beam(f, pts, max_len, width):
    diffs = _diff_table(f, pts)
    beam: list[tuple[tuple[int, ...], Fraction]] = [((i,), Fraction(0)) for i in range(len(pts))]
    best = Fraction(0)
    witness: tuple[Point, ...] = (pts[0],)
    scored = 0
    for _ in range(max_len - 1):
        scoredlevel = []
        for idx, total in beam:
            for j in range(len(pts)):
                t = total + diffs[idx[-1]][j]
                nidx = idx + (j,)
                lst = tuple(pts[i] for i in nidx)
                ratio = t / vf(lst)
                scored += 1
                scoredlevel.append((ratio, t, nidx))
                if ratio > best or (ratio == best and best > 0 and lst < witness):
                    best, witness = ratio, lst
        scoredlevel.sort(key=lambda r: (-r[0], -r[1], r[2]))
        beam = [(nidx, t) for _, t, nidx in scoredlevel[:width]]
    return best, witness, scored


def _collinear_order(pts: Sequence[Point]) -> list[Point]:
    distinct = sorted(set(pts))
    if len(distinct) <= 2:
        return distinct
    a, b = distinct[0], distinct[1]
    for p in distinct[2:]:
        if orient(a, b, p) != 0:
            raise NotCollinear("sample points are not collinear")
    return distinct  # lexicographic order is the order along the line


def var_exact_collinear(f: SampledFunction, sigma: Iterable[Point]) -> Fraction:
    """Total variation along the line for a collinear finite sample."""
    return cvar(f, _collinear_order(list(sigma)))


def is_collinear(sigma: Iterable[Point]) -> bool:
    try:
        _collinear_order(list(sigma))
    except NotCollinear:
        return False
    return True


def bv_norm_estimate(f: SampledFunction, sigma: Iterable[Point], max_len: int, strategy: str = "auto") -> Fraction:
    """``sup|f| + var`` with var exact on collinear samples, else a search lower bound."""
    pts = list(set(sigma))
    sup = max(modulus(f(p))[0] for p in pts)
    if is_collinear(pts):
        return sup + var_exact_collinear(f, pts)
    return sup + var_lower_bound(f, pts, max_len, strategy).lower_bound


def transfer(f: SampledFunction, h: Callable[[Point], Point]) -> SampledFunction:
    """The pushed-forward function ``f ∘ h^{-1}`` on ``h(domain)``."""
    out = {}
    for p, v in f.values.items():
        img = h(p)
        if img in out:
            raise NotInjectiveOnDomain(f"two domain points map to {img!r}")
        out[img] = v
    return SampledFunction(out)


__all__ = [
    "Side",
    "SampledFunction",
    "VarEstimate",
    "VfWitness",
    "abs_diff",
    "bv_norm_estimate",
    "count_crossings",
    "crossing_segments",
    "cvar",
    "cvar_checked",
    "modulus",
    "side_labels",
    "transfer",
    "var_exact_collinear",
    "var_lower_bound",
    "vf",
    "vf_from_labels",
    "vf_on_line",
    "vf_witness",
]
