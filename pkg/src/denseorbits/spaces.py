"""Weighted lp machinery: finitely supported vectors, norms, translations.

Norms follow a dual-track discipline: with integer p and rational data
the p-th power of a norm is an exact Fraction, reported alongside the
rooted float; otherwise everything is float with a 1e-12 comparison
tolerance.  Truncated suprema are reported as certified lower bounds,
never as the true operator norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .dyadic import Dyadic
from .groups import Group
from .weights import Weight

FLOAT_TOL = 1e-12


class FinSupFun:
    """Finitely supported function; zero values are never stored."""

    __slots__ = ("_data",)

    def __init__(self, data=()):
        items = data.items() if isinstance(data, dict) else data
        self._data = {el: v for el, v in items if v != 0}

    @classmethod
    def indicator(cls, elements: Iterable, value=1) -> "FinSupFun":
        return cls({el: value for el in elements})

    @property
    def support(self) -> frozenset:
        return frozenset(self._data)

    def items(self):
        return self._data.items()

    def __getitem__(self, element):
        return self._data.get(element, 0)

    def __len__(self):
        return len(self._data)

    def __bool__(self):
        return bool(self._data)

    def __eq__(self, other):
        return isinstance(other, FinSupFun) and self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def add(self, other: "FinSupFun") -> "FinSupFun":
        data = dict(self._data)
        for el, v in other.items():
            data[el] = data.get(el, 0) + v
        return FinSupFun(data)

    def sub(self, other: "FinSupFun") -> "FinSupFun":
        data = dict(self._data)
        for el, v in other.items():
            data[el] = data.get(el, 0) - v
        return FinSupFun(data)

    def scale(self, c) -> "FinSupFun":
        return FinSupFun({el: c * v for el, v in self._data.items()})

    def restrict(self, elements: frozenset) -> "FinSupFun":
        return FinSupFun({el: v for el, v in self._data.items() if el in elements})

    def sup_abs(self):
        """Largest |value| on the support (0 for the zero function)."""
        return max((abs(v) for v in self._data.values()), default=0)

    def to_pairs(self):
        return sorted(self._data.items())

    def __repr__(self):
        return f"FinSupFun({len(self._data)} points)"


@dataclass(frozen=True)
class SpaceParams:
    """The space lp(G, omega): exponent p and weight on a group."""

    group: Group
    weight: Weight
    p: int | float

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.weight.group.name != self.group.name:
            raise ValueError(
                f"weight is defined on {self.weight.group.name}, not {self.group.name}")

    @property
    def exact(self) -> bool:
        return isinstance(self.p, int)


@dataclass(frozen=True)
class NormValue:
    """A p-norm: exact p-th power when available, rooted float always."""

    pth_power: Fraction | float
    value: float
    exact: bool

    def __float__(self):
        return self.value


def _abs_pth(v, p: int | float):
    if isinstance(p, int) and isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return Fraction(abs(v)) ** p
    return abs(v) ** p


def translate(group: Group, s, f: FinSupFun) -> FinSupFun:
    """(T_s f)(t) = f(s^{-1} t): support moves to s * support."""
    mul = group.multiply
    return FinSupFun({mul(s, el): v for el, v in f.items()})


def weighted_norm(f: FinSupFun, params: SpaceParams) -> NormValue:
    """(sum |f|^p omega^p)^(1/p) over the support."""
    p = params.p
    w = params.weight
    if params.exact:
        total = Fraction(0)
        exact = True
        for el, v in f.items():
            wp = w.eval(el) ** p
            try:
                total += _abs_pth(v, p) * wp.as_fraction()
            except (ValueError, TypeError):
                exact = False
                break
        if exact:
            root = float(total) ** (1.0 / p) if total else 0.0
            return NormValue(total, root, True)
    total_f = 0.0
    for el, v in f.items():
        total_f += float(abs(v)) ** p * float(w.eval(el)) ** p
    return NormValue(total_f, total_f ** (1.0 / p) if total_f else 0.0, False)


def weight_pnorm_on_set(elements: frozenset, params: SpaceParams):
    """sum over the set of omega^p: the p-th power of the restricted norm."""
    p = params.p
    w = params.weight
    if params.exact:
        try:
            return sum(((w.eval(el) ** p).as_fraction() for el in elements), Fraction(0))
        except ValueError:
            pass
    return math.fsum(float(w.eval(el)) ** p for el in elements)


@dataclass(frozen=True)
class NormEstimate:
    """Certified lower bound from a finite scan, plus any declared bound."""

    lower_bound: Dyadic
    analytic_bound: Optional[Dyadic]
    provenance: Optional[str]
    region: str

    def __post_init__(self):
        if self.analytic_bound is not None and self.lower_bound > self.analytic_bound:
            raise ValueError(
                f"scanned ratio {self.lower_bound!r} exceeds the declared bound "
                f"{self.analytic_bound!r} ({self.provenance}); the declaration is wrong")

    def to_jsonable(self):
        return {
            "lower_bound": self.lower_bound.to_jsonable(),
            "analytic_bound": None if self.analytic_bound is None
            else self.analytic_bound.to_jsonable(),
            "provenance": self.provenance,
            "region": self.region,
        }


def translation_norm(s, params: SpaceParams, search_radius: int) -> NormEstimate:
    """Max of omega(st)/omega(t) over the ball, with any declared bound."""
    group, w = params.group, params.weight
    mul, ev = group.multiply, w.eval
    best = None
    for t in group.iter_ball(search_radius):
        ratio = ev(mul(s, t)) / ev(t)
        if best is None or ratio > best:
            best = ratio
    declared = w.declared_translation_bound(s)
    return NormEstimate(
        best,
        declared.bound if declared else None,
        declared.note if declared else None,
        f"ball({search_radius})",
    )


def left_right_functionals(g, params: SpaceParams,
                           search_radius: int) -> tuple[NormEstimate, NormEstimate]:
    """Truncated sup of omega(gt)/omega(t) and of omega(tg)/omega(t)."""
    group, w = params.group, params.weight
    mul, ev = group.multiply, w.eval
    best_l = None
    best_r = None
    for t in group.iter_ball(search_radius):
        wt = ev(t)
        left = ev(mul(g, t)) / wt
        right = ev(mul(t, g)) / wt
        if best_l is None or left > best_l:
            best_l = left
        if best_r is None or right > best_r:
            best_r = right
    declared = w.declared_translation_bound(g)
    bound = declared.bound if declared else None
    note = declared.note if declared else None
    region = f"ball({search_radius})"
    return (NormEstimate(best_l, bound, note, region),
            NormEstimate(best_r, bound, note, region))


@dataclass(frozen=True)
class AdmissibilityEntry:
    element: object
    estimate: NormEstimate
    lower_at_half_radius: Dyadic
    unproven: bool


def admissibility_report(candidates: Iterable, params: SpaceParams, count: int,
                         search_radius: int) -> list[AdmissibilityEntry]:
    """Translation-norm estimates for the first `count` candidates.

    A candidate with no declared bound whose scanned lower bound still
    grows from radius/2 to radius is flagged as unproven.
    """
    half = max(1, search_radius // 2)
    out = []
    for i, s in enumerate(candidates):
        if i >= count:
            break
        smaller = translation_norm(s, params, half)
        estimate = translation_norm(s, params, search_radius)
        unproven = (estimate.analytic_bound is None
                    and estimate.lower_bound > smaller.lower_bound)
        out.append(AdmissibilityEntry(s, estimate, smaller.lower_bound, unproven))
    return out
