"""Exact group arithmetic for the lattices Z^d and the free groups F_r.

Elements are plain hashable tuples: a lattice point is a tuple of d
ints, a free-group word is a tuple of (generator, exponent) syllables
in reduced form with generators numbered 1..r.  Group objects carry the
operations; finite subsets are ordinary frozensets of elements.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator

DEFAULT_CAP = 10 ** 6

LatticePoint = tuple  # tuple[int, ...]
FreeWord = tuple      # tuple[tuple[int, int], ...]


class CapExceeded(RuntimeError):
    """An enumeration would produce more elements than the configured cap."""

    def __init__(self, what: str, needed: int, cap: int):
        super().__init__(f"{what} needs {needed} elements, over the cap of {cap}")
        self.needed = needed
        self.cap = cap


def reduce_syllables(items: Iterable[tuple[int, int]]) -> FreeWord:
    """Collapse a syllable sequence to reduced form (single stack pass)."""
    out: list[tuple[int, int]] = []
    for g, e in items:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((g, e))
    return tuple(out)


class Group:
    """Common interface of the two concrete group families."""

    name: str

    def identity(self):
        raise NotImplementedError

    def multiply(self, a, b):
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    def word_length(self, a) -> int:
        raise NotImplementedError

    def ball_size(self, radius: int) -> int:
        raise NotImplementedError

    def iter_ball(self, radius: int) -> Iterator:
        raise NotImplementedError

    def ball(self, radius: int, cap: int = DEFAULT_CAP) -> frozenset:
        """All elements of word length <= radius, cap-guarded."""
        size = self.ball_size(radius)
        if size > cap:
            raise CapExceeded(f"{self.name} ball({radius})", size, cap)
        return frozenset(self.iter_ball(radius))

    def power(self, a, k: int):
        if k == 0:
            return self.identity()
        base = a if k > 0 else self.invert(a)
        out = base
        for _ in range(abs(k) - 1):
            out = self.multiply(out, base)
        return out

    def check_element(self, a) -> None:
        raise NotImplementedError

    def element_from_json(self, obj):
        raise NotImplementedError

    def element_to_json(self, a):
        raise NotImplementedError

    def format_element(self, a) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.name


class Lattice(Group):
    """Z^d with componentwise addition; word length is the sup norm."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError(f"lattice dimension must be >= 1, got {dim}")
        self.dim = dim
        self.name = f"Z^{dim}"

    def identity(self):
        return (0,) * self.dim

    def multiply(self, a, b):
        if len(a) != self.dim or len(b) != self.dim:
            raise ValueError(f"{a!r} and {b!r} are not both {self.name} elements")
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    def word_length(self, a) -> int:
        return max(abs(x) for x in a)

    def ball_size(self, radius: int) -> int:
        return (2 * radius + 1) ** self.dim

    def iter_ball(self, radius: int) -> Iterator:
        return itertools.product(range(-radius, radius + 1), repeat=self.dim)

    def power(self, a, k: int):
        return tuple(k * x for x in a)

    def check_element(self, a) -> None:
        if (not isinstance(a, tuple) or len(a) != self.dim
                or not all(isinstance(x, int) for x in a)):
            raise ValueError(f"{a!r} is not a {self.name} element")

    def element_from_json(self, obj):
        if not isinstance(obj, list) or len(obj) != self.dim:
            raise ValueError(f"expected a length-{self.dim} coordinate array, got {obj!r}")
        return tuple(int(x) for x in obj)

    def element_to_json(self, a):
        return list(a)

    def format_element(self, a) -> str:
        return "(" + ", ".join(str(x) for x in a) + ")"


def _gen_letter(g: int) -> str:
    return chr(ord("a") + g - 1) if g <= 26 else f"g{g}"


class FreeGroup(Group):
    """F_r on generators 1..r; words are reduced run-length syllables."""

    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError(f"free group rank must be >= 1, got {rank}")
        self.rank = rank
        self.name = f"F_{rank}"

    def identity(self):
        return ()

    def multiply(self, a, b):
        if (a and not isinstance(a[0], tuple)) or (b and not isinstance(b[0], tuple)):
            raise ValueError(f"{a!r} and {b!r} are not both {self.name} elements")
        left = list(a)
        j = 0
        while left and j < len(b):
            g, e = left[-1]
            h, f = b[j]
            if g != h:
                break
            s = e + f
            left.pop()
            j += 1
            if s:
                left.append((g, s))
                break
        left.extend(b[j:])
        return tuple(left)

    def invert(self, a):
        return tuple((g, -e) for g, e in reversed(a))

    def word_length(self, a) -> int:
        return sum(abs(e) for _, e in a)

    def ball_size(self, radius: int) -> int:
        if radius < 0:
            return 0
        r = self.rank
        if r == 1:
            return 2 * radius + 1
        # 1 + sum_{m=1..radius} 2r (2r-1)^(m-1)
        return 1 + 2 * r * ((2 * r - 1) ** radius - 1) // (2 * r - 2)

    def iter_ball(self, radius: int) -> Iterator:
        return self._iter_ball(radius)

    def _iter_ball(self, radius: int):
        yield ()
        if radius < 1:
            return
        steps = [(g, s) for g in range(1, self.rank + 1) for s in (1, -1)]
        stack: list[tuple[FreeWord, int]] = [((), radius)]
        while stack:
            word, budget = stack.pop()
            for g, s in steps:
                if word:
                    g0, e0 = word[-1]
                    if g0 == g:
                        if (e0 > 0) != (s > 0):
                            continue  # would cancel
                        new = word[:-1] + ((g, e0 + s),)
                    else:
                        new = word + ((g, s),)
                else:
                    new = ((g, s),)
                yield new
                if budget > 1:
                    stack.append((new, budget - 1))

    def check_element(self, a) -> None:
        if not isinstance(a, tuple):
            raise ValueError(f"{a!r} is not a {self.name} element")
        prev = 0
        for syl in a:
            if (not isinstance(syl, tuple) or len(syl) != 2
                    or not isinstance(syl[0], int) or not isinstance(syl[1], int)):
                raise ValueError(f"{a!r} is not a {self.name} element")
            g, e = syl
            if g < 1 or g > self.rank:
                raise ValueError(f"generator {g} out of range 1..{self.rank} in {a!r}")
            if e == 0:
                raise ValueError(f"zero exponent in {a!r}")
            if g == prev:
                raise ValueError(f"{a!r} is not reduced")
            prev = g

    def element_from_json(self, obj):
        if not isinstance(obj, list):
            raise ValueError(f"expected a syllable array [[gen, exp], ...], got {obj!r}")
        sylls = []
        for item in obj:
            if not isinstance(item, list) or len(item) != 2:
                raise ValueError(f"bad syllable {item!r}")
            g, e = int(item[0]), int(item[1])
            if g < 1 or g > self.rank:
                raise ValueError(f"generator {g} out of range 1..{self.rank}")
            sylls.append((g, e))
        return reduce_syllables(sylls)

    def element_to_json(self, a):
        return [[g, e] for g, e in a]

    def format_element(self, a) -> str:
        if not a:
            return "e"
        parts = []
        for g, e in a:
            letter = _gen_letter(g)
            parts.append(letter if e == 1 else f"{letter}^{e}")
        return " ".join(parts)


def set_product(group: Group, first: frozenset, second: frozenset,
                cap: int = DEFAULT_CAP) -> frozenset:
    """{a*b : a in first, b in second}, duplicate-free and cap-guarded."""
    pairs = len(first) * len(second)
    if pairs > cap:
        raise CapExceeded("set_product", pairs, cap)
    mul = group.multiply
    return frozenset(mul(a, b) for a in first for b in second)


def translate_set(group: Group, s, elements: frozenset) -> frozenset:
    """{s*a : a in elements}."""
    mul = group.multiply
    return frozenset(mul(s, a) for a in elements)


def invert_set(group: Group, elements: frozenset) -> frozenset:
    inv = group.invert
    return frozenset(inv(a) for a in elements)


def disjoint(first: frozenset, second: frozenset) -> bool:
    return first.isdisjoint(second)


_GROUP_RE = re.compile(r"^(Z\^(\d+)|F_(\d+))$")


def group_from_name(name: str) -> Group:
    m = _GROUP_RE.match(name.strip())
    if not m:
        raise ValueError(f"unknown group name {name!r}; use 'Z^d' or 'F_r'")
    if m.group(2) is not None:
        return Lattice(int(m.group(2)))
    return FreeGroup(int(m.group(3)))
