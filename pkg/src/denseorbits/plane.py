"""The piecewise-dyadic strip weight on R^2, with exact cell geometry.

The plane splits into bands ell_n <= |x| < ell_{n+1} with
ell_n = n(n+1)/2; inside band n the weight is 2^n on the top layer
1 - 2^-n <= y < 1, walks down 2^(n-2k) across the unit columns
k = 0..n of the middle layer 1 - 2^(1-n) < y < 1 - 2^-n, and is 2^-n
elsewhere.  It is even in x.  All geometry is exact rational; region
measures and suprema are computed cell by cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .dyadic import Dyadic
from .spaces import NormEstimate

RATIO_BOUND = Dyadic.pow2(2)  # unit steps never change the value by more than 4


def ell(n: int) -> int:
    """Band breakpoints 0, 1, 3, 6, 10, ...."""
    return n * (n + 1) // 2


def band_index(x) -> int:
    """The n with ell_n <= x < ell_{n+1}, for x >= 0."""
    m = math.floor(x)
    if m < 0:
        raise ValueError(f"band_index needs x >= 0, got {x}")
    return (math.isqrt(8 * m + 1) - 1) // 2


@dataclass(frozen=True)
class StripCell:
    """The constant-weight cell containing a point."""

    band: int
    layer: str        # "outside", "top" or "middle"
    column: Optional[int]
    value: Dyadic
    mirrored: bool


def cell_at(x, y) -> StripCell:
    x, y = Fraction(x), Fraction(y)
    mirrored = x < 0
    ax = -x if mirrored else x
    n = band_index(ax)
    top_edge = 1 - Fraction(1, 2 ** n)
    middle_edge = 1 - Fraction(2, 2 ** n)
    if top_edge <= y < 1:
        return StripCell(n, "top", None, Dyadic.pow2(n), mirrored)
    if middle_edge < y < top_edge:
        k = math.floor(ax) - ell(n)
        return StripCell(n, "middle", k, Dyadic.pow2(n - 2 * k), mirrored)
    return StripCell(n, "outside", None, Dyadic.pow2(-n), mirrored)


def strip_weight(x, y) -> Dyadic:
    """Exact value of the strip weight at a point."""
    return cell_at(x, y).value


# -- exact rectangle regions ----------------------------------------------


def _merge_intervals(intervals) -> tuple:
    merged = []
    for a, b in sorted(intervals):
        if b <= a:
            continue
        if merged and a <= merged[-1][1]:
            if b > merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return tuple(tuple(iv) for iv in merged)


def _subtract_interval(intervals, cut) -> tuple:
    lo, hi = cut
    out = []
    for a, b in intervals:
        if hi <= a or b <= lo:
            out.append((a, b))
            continue
        if a < lo:
            out.append((a, lo))
        if hi < b:
            out.append((hi, b))
    return tuple(out)


class CellRegion:
    """Finite union of axis-aligned rectangles with exact rational corners.

    Stored as disjoint vertical slabs, each carrying disjoint y-intervals;
    construction normalises overlaps away, so the area is just a sum.
    """

    __slots__ = ("slabs",)

    def __init__(self, slabs=()):
        self.slabs = tuple((a, b, tuple(ys)) for a, b, ys in slabs if b > a and ys)

    @classmethod
    def from_rects(cls, rects) -> "CellRegion":
        rects = [(Fraction(x1), Fraction(x2), Fraction(y1), Fraction(y2))
                 for x1, x2, y1, y2 in rects if x2 > x1 and y2 > y1]
        if not rects:
            return cls()
        cuts = sorted({x for r in rects for x in (r[0], r[1])})
        slabs = []
        for a, b in zip(cuts, cuts[1:]):
            ys = _merge_intervals((y1, y2) for x1, x2, y1, y2 in rects
                                  if x1 <= a and x2 >= b)
            if ys:
                slabs.append((a, b, ys))
        return cls(slabs)

    @classmethod
    def rect(cls, x1, x2, y1, y2) -> "CellRegion":
        return cls.from_rects([(x1, x2, y1, y2)])

    def rects(self) -> list:
        return [(a, b, y1, y2) for a, b, ys in self.slabs for y1, y2 in ys]

    def is_empty(self) -> bool:
        return not self.slabs

    def area(self) -> Fraction:
        return sum(((b - a) * sum((y2 - y1 for y1, y2 in ys), Fraction(0))
                    for a, b, ys in self.slabs), Fraction(0))

    def subtract_rect(self, x1, x2, y1, y2) -> "CellRegion":
        x1, x2, y1, y2 = Fraction(x1), Fraction(x2), Fraction(y1), Fraction(y2)
        slabs = []
        for a, b, ys in self.slabs:
            cuts = [a] + [x for x in (x1, x2) if a < x < b] + [b]
            for u, v in zip(cuts, cuts[1:]):
                if x1 <= u and v <= x2:
                    kept = _subtract_interval(ys, (y1, y2))
                else:
                    kept = ys
                if kept:
                    slabs.append((u, v, kept))
        return CellRegion(slabs)

    def translate(self, dx, dy) -> "CellRegion":
        dx, dy = Fraction(dx), Fraction(dy)
        return CellRegion((a + dx, b + dx, tuple((y1 + dy, y2 + dy) for y1, y2 in ys))
                          for a, b, ys in self.slabs)

    def pieces(self) -> Iterator[tuple]:
        for a, b, ys in self.slabs:
            for y1, y2 in ys:
                yield (a, b, y1, y2)

    def to_jsonable(self):
        def frac(q):
            return [q.numerator, q.denominator]
        return [{"x": [frac(a), frac(b)], "y": [frac(y1), frac(y2)]}
                for a, b, y1, y2 in self.rects()]

    def __repr__(self):
        return f"CellRegion({len(self.rects())} rects, area {self.area()})"


def _iter_region_cells(region: CellRegion) -> Iterator[tuple]:
    """Yield (value, area) for each constant-weight cell piece of the region."""
    for a, b, y1, y2 in region.pieces():
        cuts = [a] + [Fraction(j) for j in range(math.floor(a) + 1, math.ceil(b))] + [b]
        for u, v in zip(cuts, cuts[1:]):
            if v <= u:
                continue
            rep = (u + v) / 2
            ax = -rep if rep < 0 else rep
            n = band_index(ax)
            top_edge = 1 - Fraction(1, 2 ** n)
            middle_edge = 1 - Fraction(2, 2 ** n)
            k = math.floor(ax) - ell(n)
            width = v - u
            strata = (
                (Dyadic.pow2(-n), y1, min(y2, middle_edge)),
                (Dyadic.pow2(n - 2 * k), max(y1, middle_edge), min(y2, top_edge)),
                (Dyadic.pow2(n), max(y1, top_edge), min(y2, Fraction(1))),
                (Dyadic.pow2(-n), max(y1, Fraction(1)), y2),
            )
            for value, lo, hi in strata:
                if hi > lo:
                    yield value, width * (hi - lo)


def region_integral(region: CellRegion, p: int = 1) -> Fraction:
    """Exact integral of the p-th power of the weight over the region."""
    return sum(((value ** p).as_fraction() * area
                for value, area in _iter_region_cells(region)), Fraction(0))


def region_sup(region: CellRegion) -> Optional[Dyadic]:
    """Largest weight value on a positive-area part of the region."""
    best = None
    for value, _area in _iter_region_cells(region):
        if best is None or value > best:
            best = value
    return best


# -- translation-ratio bound ----------------------------------------------


def horizontal_ratio_bound(shift, band_extent: int = 20) -> NormEstimate:
    """Exact max of weight(x + shift, y)/weight(x, y) for shift in [0, 1).

    The weight is constant on unit columns, so a positive shift below 1
    realises exactly the adjacent-column ratios; they are enumerated
    over all integer boundaries inside bands |n| <= band_extent.
    """
    shift = Fraction(shift)
    if not 0 <= shift < 1:
        raise ValueError(f"shift must lie in [0, 1), got {shift}")
    region = f"bands |n| <= {band_extent}"
    if shift == 0:
        return NormEstimate(Dyadic.ONE, Dyadic.ONE, "identity shift", region)
    limit = ell(band_extent + 1)
    half = Fraction(1, 2)
    best = Dyadic.ONE
    for boundary in range(-limit + 1, limit):
        x_left = boundary - half
        x_right = boundary + half
        ys = set()
        for x in (x_left, x_right):
            n = band_index(-x if x < 0 else x)
            ys.update((1 - Fraction(2, 2 ** n), 1 - Fraction(1, 2 ** n), Fraction(1)))
        # the norm is an essential sup: probe only stratum interiors, the
        # boundary lines between layers are null sets
        samples = sorted(ys)
        probes = [samples[0] - 1, Fraction(2)]
        probes.extend((lo + hi) / 2 for lo, hi in zip(samples, samples[1:]))
        for y in probes:
            ratio = strip_weight(x_right, y) / strip_weight(x_left, y)
            if ratio > best:
                best = ratio
    return NormEstimate(
        best, RATIO_BOUND,
        "each unit step across a cell boundary changes the value by at most 4",
        region)


# -- witnesses for the moved-rectangle criterion ----------------------------


@dataclass(frozen=True)
class Criterion4Witness:
    """A shift s and trimmed rectangle E with both inequalities certified.

    For F = [-n, n]^2 and a tolerance delta, pick the least t >= 2 with
    2^-t < delta and n 2^(3-t) < delta, remove the strip
    [-n, n] x (1 - 2^(2-t), 1) from F, and shift by s = (2 ell_t, 0).
    """

    n: int
    delta: Fraction
    t: int
    shift: tuple
    region: CellRegion
    removed_area: Fraction
    area_ok: bool
    sup_value: Dyadic
    sup_bound: Dyadic
    sup_ok: bool


def criterion4_witness(n: int, delta) -> Criterion4Witness:
    delta = Fraction(delta)
    if n < 1 or delta <= 0:
        raise ValueError("need n >= 1 and delta > 0")
    t = 2
    while not (Fraction(1, 2 ** t) < delta and n * Fraction(8, 2 ** t) < delta):
        t += 1
    full = CellRegion.rect(-n, n, -n, n)
    strip_top = Fraction(1)
    strip_bottom = 1 - Fraction(4, 2 ** t)
    trimmed = full.subtract_rect(-n, n, strip_bottom, strip_top)
    removed = full.area() - trimmed.area()
    shift_x = 2 * ell(t)
    sup = None
    for moved in (trimmed.translate(shift_x, 0), trimmed.translate(-shift_x, 0)):
        value = region_sup(moved)
        if value is not None and (sup is None or value > sup):
            sup = value
    bound = Dyadic.pow2(-t)
    return Criterion4Witness(
        n=n,
        delta=delta,
        t=t,
        shift=(shift_x, 0),
        region=trimmed,
        removed_area=removed,
        area_ok=(removed == n * Fraction(8, 2 ** t)) and removed < delta,
        sup_value=sup,
        sup_bound=bound,
        sup_ok=sup <= bound and bound < delta,
    )
