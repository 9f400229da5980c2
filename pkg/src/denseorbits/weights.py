"""Weight constructions: exact evaluation plus declared operator-norm bounds.

Each weight maps group elements to exact Dyadic values.  A weight may
also declare proven bounds for the norms of individual translation
operators; numeric scans report those separately from the sampled
lower bounds and never silently replace them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .dyadic import Dyadic
from .groups import (DEFAULT_CAP, FreeGroup, Group, Lattice, set_product,
                     translate_set)


@dataclass(frozen=True)
class DeclaredBound:
    """A proven translation-norm bound together with its justification."""

    bound: Dyadic
    note: str


class Weight:
    """Strictly positive function on a group, evaluated exactly."""

    name: str
    group: Group

    def eval(self, element) -> Dyadic:
        raise NotImplementedError

    def __call__(self, element) -> Dyadic:
        return self.eval(element)

    def declared_translation_bound(self, s) -> Optional[DeclaredBound]:
        """Proven bound for the norm of translation by s, if one is known."""
        return None

    def __repr__(self):
        return f"<weight {self.name} on {self.group.name}>"


class UnitWeight(Weight):
    """The constant weight 1; every translation is an isometry."""

    def __init__(self, group: Group):
        self.group = group
        self.name = "unit"

    def eval(self, element) -> Dyadic:
        return Dyadic.ONE

    def declared_translation_bound(self, s) -> Optional[DeclaredBound]:
        return DeclaredBound(Dyadic.ONE, "constant weight: translations preserve the norm")


class TableWeight(Weight):
    """Finitely many prescribed values, 1 everywhere else."""

    def __init__(self, group: Group, table: dict, default: Dyadic = Dyadic.ONE):
        self.group = group
        self.name = "table"
        self.table = dict(table)
        self.default = default

    def eval(self, element) -> Dyadic:
        return self.table.get(element, self.default)

    @classmethod
    def from_csv(cls, group: Group, path: str | Path) -> "TableWeight":
        """Rows of (element-as-JSON, exponent); values are 2**exponent."""
        import json

        table = {}
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                if len(row) != 2:
                    raise ValueError(f"expected two columns (element, exponent), got {row!r}")
                element = group.element_from_json(json.loads(row[0]))
                table[element] = Dyadic.pow2(Fraction(row[1].strip()))
        return cls(group, table)


class ExpDecayWeight(Weight):
    """On Z: value 2^(-alpha*|n|) for a positive rational decay rate alpha."""

    def __init__(self, alpha: Fraction | int, group: Optional[Lattice] = None):
        alpha = Fraction(alpha)
        if alpha <= 0:
            raise ValueError(f"decay rate must be positive, got {alpha}")
        self.group = group or Lattice(1)
        if not isinstance(self.group, Lattice) or self.group.dim != 1:
            raise ValueError("exponential decay weight is defined on Z^1")
        self.alpha = alpha
        self._alpha_int = alpha.numerator if alpha.denominator == 1 else None
        self.name = f"salas({alpha})"

    def eval(self, element) -> Dyadic:
        n = abs(element[0])
        if self._alpha_int is not None:
            return Dyadic.pow2(-self._alpha_int * n)
        return Dyadic.pow2(-self.alpha * n)

    def declared_translation_bound(self, s) -> Optional[DeclaredBound]:
        m = abs(s[0])
        return DeclaredBound(
            Dyadic.pow2(self.alpha * m),
            "ratio 2^(alpha(|t| - |t - s|)) is largest when the shift moves t toward 0",
        )


def suffix_class(word) -> str:
    """Final letter of a reduced word: 'e', 'a', 'a^-1', 'b', ...."""
    if not word:
        return "e"
    g, e = word[-1]
    letter = chr(ord("a") + g - 1) if g <= 26 else f"g{g}"
    return letter if e > 0 else f"{letter}^-1"


def double_power(j: int) -> int:
    """The marked exponents 2^(2^j)."""
    return 1 << (1 << j)


def _double_power_index(value: int) -> Optional[int]:
    # value == 2^(2^j) for some j >= 1?
    if value < 4 or value & (value - 1):
        return None
    e = value.bit_length() - 1
    if e & (e - 1):
        return None
    return e.bit_length() - 1


class MarkedPowerWeight(Weight):
    """On F_2: dips to 2^(j-k) on the j-th left shell of a^(±2^(2^k)).

    Words u * a^(±n_k) with 1 <= |u| = j <= k get value 2^(j-k), the
    marked powers themselves get 2^(-k), and everything else gets 1.
    The doubly exponential gaps between the n_k make the decomposition
    unique, so the trailing syllable determines the value.
    """

    def __init__(self, k_max: int = 4, group: Optional[FreeGroup] = None):
        if k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {k_max}")
        self.group = group or FreeGroup(2)
        if not isinstance(self.group, FreeGroup) or self.group.rank != 2:
            raise ValueError("marked-power weight is defined on F_2")
        self.k_max = k_max
        self._nks = [double_power(k) for k in range(1, k_max + 1)]
        self.name = f"f2_nondense({k_max})"

    def value_exponent(self, word) -> int:
        """log2 of the weight; the fast integer path used by scans."""
        if not word:
            return 0
        g, e = word[-1]
        if g != 1:
            return 0
        if e > 0:
            for k, nk in enumerate(self._nks, start=1):
                if e < nk - k:
                    break
                if e > nk + k:
                    continue
                d = e - nk
                j = abs(d)
                for _, ee in word[:-1]:
                    j += abs(ee)
                if j == 0:
                    return -k
                if j <= k:
                    return j - k
        else:
            for k, nk in enumerate(self._nks, start=1):
                if -e < nk - k:
                    break
                if -e > nk + k:
                    continue
                d = e + nk
                j = abs(d)
                for _, ee in word[:-1]:
                    j += abs(ee)
                if j == 0:
                    return -k
                if j <= k:
                    return j - k
        return 0

    def eval(self, element) -> Dyadic:
        return Dyadic.pow2(self.value_exponent(element))

    def marked_power(self, k: int, sign: int = 1):
        return ((1, sign * double_power(k)),)

    def declared_translation_bound(self, s) -> Optional[DeclaredBound]:
        j = self.group.word_length(s)
        return DeclaredBound(
            Dyadic.pow2(j),
            "each single-letter left shift changes the value by a factor of at most 2",
        )


class SearchBoundExceeded(RuntimeError):
    """A membership question needs indices or depth beyond the search bounds.

    Distinct from a definite non-membership answer: raising this means
    a larger l_max or depth_max might change the verdict.
    """

    def __init__(self, what: str, detail: str):
        super().__init__(f"bounded search exhausted ({what}): {detail}")
        self.what = what


@dataclass(frozen=True)
class PrefixParse:
    """Normal form s * a^p * r of a member of the monoid-shifted regions.

    prefix_factors are the indices (j_1..j_m) with s = a^(n_j1) b ... a^(n_jm) b;
    (left_index, right_index) identify the region V_{l,k} = s_l s_k^{-1} U^k;
    central_power is the exponent p; remainder is the reduced word r.
    """

    prefix_factors: tuple
    left_index: int
    right_index: int
    central_power: int
    remainder: tuple

    def __post_init__(self):
        l, k, p = self.left_index, self.right_index, self.central_power
        gap = abs(double_power(l) - double_power(k))
        if not (gap - k <= abs(p) <= gap + k):
            raise ValueError(f"central power {p} outside the window of ({l},{k})")

    def reassemble(self, group: FreeGroup):
        """Rebuild the parsed word; must reproduce the input exactly."""
        word = group.identity()
        for j in self.prefix_factors:
            word = group.multiply(word, ((1, double_power(j)), (2, 1)))
        word = group.multiply(word, ((1, self.central_power),))
        return group.multiply(word, self.remainder)


def _classify_central_power(p: int) -> Optional[tuple[int, int]]:
    # unique (l, k), if any, with |p - (n_l - n_k)| <= k; indices unbounded
    bound = 1
    while double_power(bound) <= abs(p) + bound:
        bound += 1
    bound += 2
    matches = []
    for l in range(1, bound + 1):
        for k in range(1, bound + 1):
            if l == k:
                continue
            if abs(p - (double_power(l) - double_power(k))) <= k:
                matches.append((l, k))
    assert len(matches) <= 1, f"window overlap at p={p}: {matches}"
    return matches[0] if matches else None


def parse_sv_membership(word, l_max: int = 4,
                        depth_max: int = 8) -> Optional[PrefixParse]:
    """Decide membership in the union of monoid-shifted regions S·V_{l,k}.

    Returns the unique parse for members, None for definite
    non-members, and raises SearchBoundExceeded when the answer would
    need prefix factors deeper than depth_max or indices above l_max.
    """
    rest = word
    prefix: list[int] = []
    while rest and rest[0][0] == 1 and rest[0][1] > 0:
        j = _double_power_index(rest[0][1])
        if j is None or len(rest) < 2 or rest[1][0] != 2 or rest[1][1] < 1:
            break
        # leading block a^(n_j) b; members never carry n_j as the central
        # power, so consuming the block greedily cannot miss a parse
        if j > l_max:
            raise SearchBoundExceeded("generator index",
                                      f"leading block uses index {j} > l_max={l_max}")
        if len(prefix) >= depth_max:
            raise SearchBoundExceeded("prefix depth",
                                      f"prefix longer than depth_max={depth_max}")
        prefix.append(j)
        q = rest[1][1]
        rest = rest[2:] if q == 1 else ((2, q - 1),) + rest[2:]
    if not rest or rest[0][0] != 1:
        return None
    p = rest[0][1]
    remainder = rest[1:]
    pair = _classify_central_power(p)
    if pair is None:
        return None
    l, k = pair
    if l > l_max or k > l_max:
        raise SearchBoundExceeded("region index",
                                  f"central power fits ({l},{k}) but l_max={l_max}")
    if sum(abs(e) for _, e in remainder) > 2 * k:
        return None
    return PrefixParse(tuple(prefix), l, k, p, remainder)


def monoid_factors(word, l_max: int = 4) -> Optional[tuple]:
    """Indices (j_1..j_m) when the word is a product of blocks a^(n_j) b."""
    rest = word
    out: list[int] = []
    while rest:
        if rest[0][0] != 1 or rest[0][1] <= 0:
            return None
        j = _double_power_index(rest[0][1])
        if j is None or j > l_max:
            return None
        if len(rest) < 2 or rest[1][0] != 2 or rest[1][1] < 1:
            return None
        out.append(j)
        q = rest[1][1]
        rest = rest[2:] if q == 1 else ((2, q - 1),) + rest[2:]
    return tuple(out)


def semigroup_generator(k: int):
    """The k-th block generator a^(n_k) b."""
    return ((1, double_power(k)), (2, 1))


def v_region(group: FreeGroup, left: int, right: int,
             cap: int = DEFAULT_CAP) -> frozenset:
    """Brute-force V_{l,k} = s_l s_k^{-1} U^k, the oracle for the parser."""
    head = group.multiply(semigroup_generator(left),
                          group.invert(semigroup_generator(right)))
    return translate_set(group, head, group.ball(right, cap))


class MonoidRegionWeight(Weight):
    """On F_2: value 8^(-l-k) on S·V_{l,k}, 1 elsewhere.

    S is the monoid (empty product included) generated by the blocks
    s_j = a^(n_j) b with j <= l_max; membership is decided by the
    normal-form parser, whose verdicts the oracle tests pin down.
    """

    def __init__(self, l_max: int = 4, depth_max: int = 8,
                 group: Optional[FreeGroup] = None):
        if l_max < 1:
            raise ValueError(f"l_max must be >= 1, got {l_max}")
        self.group = group or FreeGroup(2)
        if not isinstance(self.group, FreeGroup) or self.group.rank != 2:
            raise ValueError("monoid-region weight is defined on F_2")
        self.l_max = l_max
        self.depth_max = depth_max
        self.name = f"f2_semigroup({l_max},{depth_max})"

    def parse(self, element) -> Optional[PrefixParse]:
        return parse_sv_membership(element, self.l_max, self.depth_max)

    def eval(self, element) -> Dyadic:
        parsed = self.parse(element)
        if parsed is None:
            return Dyadic.ONE
        return Dyadic.pow2(-3 * (parsed.left_index + parsed.right_index))

    def declared_translation_bound(self, s) -> Optional[DeclaredBound]:
        if monoid_factors(s, self.l_max) is not None:
            return DeclaredBound(
                Dyadic.ONE,
                "left shifts by monoid elements map each weighted region into itself",
            )
        return None


class CenteredSquaresWeight(Weight):
    """On Z^2: dips to 2^(k-n) on squares of radius n around (±n, ±2^n).

    A point inside several squares (they overlap for small n) gets the
    smallest matching value.
    """

    def __init__(self, group: Optional[Lattice] = None):
        self.group = group or Lattice(2)
        if not isinstance(self.group, Lattice) or self.group.dim != 2:
            raise ValueError("centered-squares weight is defined on Z^2")
        self.name = "z2"

    def matches(self, point) -> list[tuple[int, int]]:
        """All (n, k) with the point at sup-distance k <= n from a centre."""
        out = []
        for sign in (1, -1):
            x, y = sign * point[0], sign * point[1]
            if y <= 0:
                continue
            n = 0
            while (1 << n) <= y + n:
                k = abs(x - n)
                c = abs(y - (1 << n))
                if c > k:
                    k = c
                if k <= n:
                    out.append((n, k))
                n += 1
        return out

    def eval(self, element) -> Dyadic:
        best = None
        for n, k in self.matches(element):
            e = k - n
            if best is None or e < best:
                best = e
        return Dyadic.ONE if best is None else Dyadic.pow2(best)

    def declared_translation_bound(self, s) -> Optional[DeclaredBound]:
        j = self.group.word_length(s)
        return DeclaredBound(
            Dyadic.pow2(j),
            "a shift changes the sup-distance to every centre by at most its sup-norm",
        )


class WeightConstructionError(ValueError):
    """The chosen points violate the disjointness the construction needs."""


class PointShellWeight(Weight):
    """Value 2^(k-n) on the k-th two-sided shell around the n-th point.

    Shells are V_{n,k} = U_k s_n U_k ∪ U_k s_n^{-1} U_k with
    U_k = ball(k * radius); the weight is 1 outside every V_{n,n}.
    Use build via point_shell_weight, which checks the separation
    requirements.
    """

    def __init__(self, group: Group, radius: int, points: tuple,
                 envelopes: tuple, cap: int = DEFAULT_CAP):
        self.group = group
        self.radius = radius
        self.points = points
        self.envelopes = envelopes  # the separating sets, one per point
        self.cap = cap
        self.name = f"existence(r={radius}, N={len(points)})"
        self._lattice = isinstance(group, Lattice)
        self._memo: dict[tuple[int, int], frozenset] = {}

    def _shell_index(self, element, n: int) -> Optional[int]:
        s = self.points[n - 1]
        if self._lattice:
            d1 = self.group.word_length(self.group.multiply(element, self.group.invert(s)))
            d2 = self.group.word_length(self.group.multiply(element, s))
            dist = min(d1, d2)
            k = -(-dist // (2 * self.radius))  # ceil
            return k if k <= n else None
        for k in range(0, n + 1):
            if element in self._v_set(n, k):
                return k
        return None

    def _v_set(self, n: int, k: int) -> frozenset:
        key = (n, k)
        cached = self._memo.get(key)
        if cached is None:
            s = self.points[n - 1]
            if k == 0:
                cached = frozenset((s, self.group.invert(s)))
            else:
                u = self.group.ball(k * self.radius, self.cap)
                half = set_product(self.group, set_product(self.group, u, frozenset((s,)), self.cap), u, self.cap)
                mirror = set_product(self.group, set_product(
                    self.group, u, frozenset((self.group.invert(s),)), self.cap), u, self.cap)
                cached = half | mirror
            self._memo[key] = cached
        return cached

    def eval(self, element) -> Dyadic:
        best = None
        for n in range(1, len(self.points) + 1):
            k = self._shell_index(element, n)
            if k is not None:
                e = k - n
                if best is None or e < best:
                    best = e
        return Dyadic.ONE if best is None else Dyadic.pow2(best)

    def declared_translation_bound(self, s) -> Optional[DeclaredBound]:
        j = -(-self.group.word_length(s) // self.radius)  # ceil
        return DeclaredBound(
            Dyadic.pow2(j),
            "shifting by an element of the j-fold generating ball moves shell "
            "indices by at most j",
        )


def point_shell_weight(group: Group, generating_radius: int, points,
                       cap: int = DEFAULT_CAP) -> PointShellWeight:
    """Build the shell weight, verifying the separation of the points.

    The envelopes E_n = U_{n+1} s_n U_{n+1} ∪ U_{n+1} s_n^{-1} U_{n+1}
    must be pairwise disjoint and each envelope's two halves disjoint;
    violations name the colliding pair.
    """
    if generating_radius < 1:
        raise ValueError("generating radius must be >= 1")
    points = tuple(points)
    if not points:
        raise ValueError("at least one point is required")
    envelopes = []
    for n, s in enumerate(points, start=1):
        if s == group.identity():
            raise WeightConstructionError(f"point {n} is the identity")
        u = group.ball((n + 1) * generating_radius, cap)
        half = set_product(group, set_product(group, u, frozenset((s,)), cap), u, cap)
        mirror = set_product(group, set_product(
            group, u, frozenset((group.invert(s),)), cap), u, cap)
        if not half.isdisjoint(mirror):
            raise WeightConstructionError(
                f"the two halves of the envelope of point {n} "
                f"({group.format_element(s)}) intersect")
        envelopes.append(half | mirror)
    for n in range(len(points)):
        for m in range(n + 1, len(points)):
            if not envelopes[n].isdisjoint(envelopes[m]):
                raise WeightConstructionError(
                    f"envelopes of points {n + 1} ({group.format_element(points[n])}) "
                    f"and {m + 1} ({group.format_element(points[m])}) intersect")
    return PointShellWeight(group, generating_radius, points, tuple(envelopes), cap)
