"""Witness searches for the density criteria, with re-checkable certificates.

Every search runs over a deterministic, duplicate-free enumeration of
candidates from a subset S.  A finite scan can only produce witnesses
or report that none was found within the horizon; "not found" is kept
strictly apart from "does not exist".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

from .dyadic import Dyadic
from .groups import DEFAULT_CAP, Group, Lattice, invert_set, set_product, translate_set
from .spaces import SpaceParams, weight_pnorm_on_set


@dataclass(frozen=True)
class SubsetSpec:
    """A subset S of the group: deterministic enumerator plus membership."""

    name: str
    factory: Callable[[], Iterator]
    membership: Optional[Callable[[Any], bool]] = None

    def candidates(self) -> Iterator:
        return self.factory()

    def contains(self, element) -> bool:
        if self.membership is None:
            raise NotImplementedError(f"subset {self.name} has no membership predicate")
        return self.membership(element)


def whole_lattice(group: Lattice) -> SubsetSpec:
    """All of Z^d, swept shell by shell in the sup norm, lexicographic inside."""

    def gen():
        dim = group.dim
        yield group.identity()
        r = 1
        while True:
            for pt in sorted(p for p in itertools.product(range(-r, r + 1), repeat=dim)
                             if max(abs(x) for x in p) == r):
                yield pt
            r += 1

    return SubsetSpec(f"{group.name}", gen, lambda el: True)


def whole_free_group(group) -> SubsetSpec:
    """All of F_r, sphere by sphere, in the deterministic walk order."""

    def gen():
        yield group.identity()
        r = 1
        while True:
            wl = group.word_length
            for w in group.iter_ball(r):
                if wl(w) == r:
                    yield w
            r += 1

    return SubsetSpec(group.name, gen, lambda el: True)


def whole_group(group: Group) -> SubsetSpec:
    if isinstance(group, Lattice):
        return whole_lattice(group)
    return whole_free_group(group)


def positive_integers(group: Lattice) -> SubsetSpec:
    """S = {1, 2, 3, ...} inside Z^1."""
    if group.dim != 1:
        raise ValueError("positive_integers needs Z^1")

    def gen():
        n = 1
        while True:
            yield (n,)
            n += 1

    return SubsetSpec("N", gen, lambda el: el[0] > 0)


def powers_of(group: Group, g) -> SubsetSpec:
    """S = {g, g^2, g^3, ...}: the cyclic semigroup of one element."""

    def gen():
        current = g
        while True:
            yield current
            current = group.multiply(current, g)

    return SubsetSpec(f"powers({group.format_element(g)})", gen)


def semigroup_products(group: Group, generators, include_identity: bool = False,
                       dedupe_window: int = 1 << 20) -> SubsetSpec:
    """Products of the generators, by factor count then index order."""
    gens = tuple(generators)

    def gen():
        seen = set()
        if include_identity:
            e = group.identity()
            seen.add(e)
            yield e
        level = [group.identity()]
        while level:
            nxt = []
            for w in level:
                for g in gens:
                    prod = group.multiply(w, g)
                    if prod not in seen:
                        if len(seen) < dedupe_window:
                            seen.add(prod)
                        nxt.append(prod)
                        yield prod
            level = nxt

    return SubsetSpec("semigroup", gen)


def explicit_elements(group: Group, elements) -> SubsetSpec:
    elems = tuple(elements)
    return SubsetSpec("explicit", lambda: iter(elems), lambda el: el in set(elems))


# -- the inf and ess-sup criteria ---------------------------------------


@dataclass(frozen=True)
class InfWitness:
    """A candidate with max(omega(s), omega(s^-1)) below its threshold."""

    element: Any
    value: Dyadic
    threshold: Fraction
    index: int

    def recheck(self, params: SpaceParams) -> bool:
        w, group = params.weight, params.group
        value = max(w.eval(self.element), w.eval(group.invert(self.element)))
        return value == self.value and value < self.threshold


@dataclass(frozen=True)
class ThresholdOutcome:
    """Witness for one threshold, or a horizon-exhaustion report."""

    threshold: Fraction
    witness: Optional[InfWitness]
    scanned: int

    @property
    def exhausted(self) -> bool:
        return self.witness is None


def _check_thresholds(epsilons) -> list[Fraction]:
    eps = [Fraction(e) for e in epsilons]
    if not eps or any(e <= 0 for e in eps):
        raise ValueError("thresholds must be positive")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("thresholds must be strictly decreasing")
    return eps


def abelian_inf_search(subset: SubsetSpec, params: SpaceParams, epsilons,
                       horizon: int) -> list[ThresholdOutcome]:
    """First candidate with max(omega(s), omega(s^-1)) < eps, per threshold."""
    eps = _check_thresholds(epsilons)
    w, group = params.weight, params.group
    found: dict[int, InfWitness] = {}
    scanned = 0
    for idx, s in enumerate(itertools.islice(subset.candidates(), horizon)):
        scanned = idx + 1
        value = w.eval(s)
        other = w.eval(group.invert(s))
        if other > value:
            value = other
        for i, e in enumerate(eps):
            if i not in found and value < e:
                found[i] = InfWitness(s, value, e, idx)
        if len(found) == len(eps):
            break
    return [ThresholdOutcome(e, found.get(i),
                             found[i].index + 1 if i in found else scanned)
            for i, e in enumerate(eps)]


@dataclass(frozen=True)
class EssSupOutcome:
    """Witness with sup over sK ∪ s^-1 K below epsilon, or exhaustion."""

    threshold: Fraction
    element: Optional[Any]
    sup_value: Optional[Dyadic]
    scanned: int

    @property
    def exhausted(self) -> bool:
        return self.element is None


def esssup_sufficient_check(subset: SubsetSpec, params: SpaceParams,
                            region: frozenset, epsilon,
                            horizon: int) -> EssSupOutcome:
    """First s with sup of omega over sK ∪ s^-1 K strictly below epsilon."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if not region:
        raise ValueError("the compact set K must be nonempty")
    w, group = params.weight, params.group
    scanned = 0
    for idx, s in enumerate(itertools.islice(subset.candidates(), horizon)):
        scanned = idx + 1
        s_inv = group.invert(s)
        sup = None
        for t in region:
            for shifted in (group.multiply(s, t), group.multiply(s_inv, t)):
                v = w.eval(shifted)
                if sup is None or v > sup:
                    sup = v
        if sup < eps:
            return EssSupOutcome(eps, s, sup, scanned)
    return EssSupOutcome(eps, None, None, scanned)


# -- the series criterion ------------------------------------------------


@dataclass
class StageRecord:
    stage: int
    element: Any
    increment: Fraction
    budget: Fraction
    pool_size: int
    forbidden_size: int


@dataclass
class SeriesCertificate:
    """Witnesses and exact sums certifying the truncated series condition.

    Index 0 is the identity with an empty set; terms maps (n, k) with
    n != k to the exact value of multiplier_k * ||omega||^p over
    s_n s_k^-1 E_k.  Empty-set terms are omitted (they vanish).
    """

    group_name: str
    weight_name: str
    p: int | float
    witnesses: list
    region_sets: list
    multipliers: list
    terms: dict
    total: Fraction
    stage_records: list = field(default_factory=list)
    budget0: Optional[Fraction] = None

    def row_sum(self, n: int) -> Fraction:
        return sum((v for (r, _c), v in self.terms.items() if r == n), Fraction(0))

    def partial_sum(self, min_index: int = 0) -> Fraction:
        """Sum of the stored terms with both indices >= min_index."""
        return sum((v for (r, c), v in self.terms.items()
                    if r >= min_index and c >= min_index), Fraction(0))

    def recheck(self, params: SpaceParams) -> bool:
        """Recompute disjointness and every stored quantity from scratch."""
        group = params.group
        translated = [translate_set(group, group.invert(s), E)
                      for s, E in zip(self.witnesses, self.region_sets)]
        for i in range(len(translated)):
            for j in range(i + 1, len(translated)):
                if not translated[i].isdisjoint(translated[j]):
                    return False
        fresh = _certificate_terms(self.witnesses, self.region_sets,
                                   self.multipliers, params)
        return fresh == self.terms and sum(fresh.values(), Fraction(0)) == self.total

    def to_jsonable(self, group: Group):
        return {
            "group": self.group_name,
            "weight": self.weight_name,
            "p": self.p,
            "witnesses": [group.element_to_json(s) for s in self.witnesses],
            "region_sets": [[group.element_to_json(el) for el in sorted(E)]
                            for E in self.region_sets],
            "multipliers": [_frac_str(m) for m in self.multipliers],
            "terms": [[n, k, _frac_str(v)] for (n, k), v in sorted(self.terms.items())],
            "total": _frac_str(self.total),
            "budget0": None if self.budget0 is None else _frac_str(self.budget0),
            "stages": [{"stage": r.stage,
                        "element": group.element_to_json(r.element),
                        "increment": _frac_str(r.increment),
                        "budget": _frac_str(r.budget),
                        "pool_size": r.pool_size,
                        "forbidden_size": r.forbidden_size}
                       for r in self.stage_records],
        }


@dataclass(frozen=True)
class SeriesFailure:
    """A search that ended without a certificate; never a disproof."""

    stage: int
    reason: str  # "budget" or "exhausted"
    best_increment: Optional[Fraction]
    budget: Optional[Fraction]
    scanned: int

    def to_jsonable(self, group: Group = None):
        return {
            "stage": self.stage,
            "reason": self.reason,
            "best_increment": None if self.best_increment is None
            else _frac_str(self.best_increment),
            "budget": None if self.budget is None else _frac_str(self.budget),
            "scanned": self.scanned,
        }


def _frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _pair_term(params: SpaceParams, s_row, s_col, col_set: frozenset) -> Fraction:
    if not col_set:
        return Fraction(0)
    group = params.group
    shift = group.multiply(s_row, group.invert(s_col))
    value = weight_pnorm_on_set(translate_set(group, shift, col_set), params)
    if not isinstance(value, Fraction):
        raise ValueError("certificates need exact arithmetic: integer p and dyadic weights")
    return value


def _certificate_terms(witnesses, region_sets, multipliers, params) -> dict:
    terms = {}
    count = len(witnesses)
    for n in range(count):
        for k in range(count):
            if n == k or not region_sets[k]:
                continue
            terms[(n, k)] = multipliers[k] * _pair_term(
                params, witnesses[n], witnesses[k], region_sets[k])
    return terms


def build_series_certificate(witnesses, region_sets, params: SpaceParams,
                             multipliers=None, stage_records=None,
                             budget0=None) -> SeriesCertificate:
    """Certificate for explicitly given witnesses; disjointness is checked.

    witnesses are s_1..s_N and region_sets the matching E_1..E_N; the
    identity stage s_0, E_0 = empty is prepended automatically.
    """
    group = params.group
    witnesses = [group.identity()] + list(witnesses)
    region_sets = [frozenset()] + [frozenset(E) for E in region_sets]
    if len(witnesses) != len(region_sets):
        raise ValueError("one region set is needed per witness")
    if multipliers is None:
        multipliers = [Fraction(1)] * len(witnesses)
    else:
        multipliers = [Fraction(0)] + [Fraction(m) for m in multipliers]
    translated = [translate_set(group, group.invert(s), E)
                  for s, E in zip(witnesses, region_sets)]
    for i in range(len(translated)):
        for j in range(i + 1, len(translated)):
            if not translated[i].isdisjoint(translated[j]):
                raise ValueError(
                    f"translated sets of witnesses {i} and {j} intersect")
    terms = _certificate_terms(witnesses, region_sets, multipliers, params)
    return SeriesCertificate(
        group_name=group.name,
        weight_name=params.weight.name,
        p=params.p,
        witnesses=witnesses,
        region_sets=region_sets,
        multipliers=multipliers,
        terms=terms,
        total=sum(terms.values(), Fraction(0)),
        stage_records=list(stage_records or []),
        budget0=budget0,
    )


def series_criterion_search(subset: SubsetSpec, params: SpaceParams,
                            region_sets, budget0=Fraction(1),
                            stage_scan: int = 1024, multipliers=None,
                            require_increasing: bool = True,
                            cap: int = DEFAULT_CAP):
    """Greedy stage-by-stage witness selection under tail-geometric budgets.

    Stage n scans the first stage_scan candidates outside the exact
    forbidden region (which enforces pairwise disjointness of the
    translated sets), scores each by the exact increment it adds to the
    weighted double sum, and accepts the cheapest one within the stage
    budget budget0 * 2^-n.  When a stage has no affordable candidate,
    the previous stage advances to its next-best candidate once per
    retry (single-level backtracking).  Returns a SeriesCertificate or
    a SeriesFailure; exhaustion is reported apart from budget failure.
    """
    group = params.group
    sets = [frozenset(E) for E in region_sets]
    if not sets:
        raise ValueError("at least one region set is required")
    if require_increasing:
        for i in range(len(sets) - 1):
            if not sets[i] <= sets[i + 1]:
                raise ValueError(f"region sets must increase: set {i + 1} is not "
                                 f"contained in set {i + 2}")
    count = len(sets)
    budget0 = Fraction(budget0)
    if multipliers is None:
        mult = [Fraction(1)] * (count + 1)
    else:
        mult = [Fraction(0)] + [Fraction(m) for m in multipliers]
        if len(mult) != count + 1:
            raise ValueError("one multiplier per region set is required")

    identity = group.identity()
    chosen: list = [identity]          # chosen[n] = s_n
    all_sets = [frozenset()] + sets    # all_sets[n] = E_n
    inv_sets = [invert_set(group, E) for E in all_sets]

    def stage_budget(n: int) -> Fraction:
        return budget0 * Fraction(1, 2 ** n)

    def _forbidden_region(n: int) -> tuple[set, set]:
        target = all_sets[n]
        forbidden = set()
        for k in range(1, n):
            forbidden |= set_product(
                group, set_product(group, target, inv_sets[k], cap),
                frozenset((chosen[k],)), cap)
        return forbidden, set(chosen[1:n])

    def _increment(n: int, s, abandon_above: Optional[Fraction]) -> Optional[Fraction]:
        # exact increment of the weighted double sum: new column n plus new row n
        target = all_sets[n]
        increment = Fraction(0)
        for k in range(n):
            increment += mult[n] * _pair_term(params, chosen[k], s, target)
            if abandon_above is not None and increment > abandon_above:
                return None
            if all_sets[k]:
                increment += mult[k] * _pair_term(params, s, chosen[k], all_sets[k])
                if abandon_above is not None and increment > abandon_above:
                    return None
        return increment

    def score_stage(n: int) -> tuple[list, int]:
        # every candidate outside the forbidden region that fits the stage
        # budget, fully scored (so backtracking sees true next-best choices)
        forbidden, used = _forbidden_region(n)
        budget = stage_budget(n)
        pool = []
        for idx, s in enumerate(itertools.islice(subset.candidates(), stage_scan)):
            if s in forbidden or s in used:
                continue
            increment = _increment(n, s, budget)
            if increment is not None:
                pool.append((increment, idx, s))
        pool.sort(key=lambda item: (item[0], item[1]))
        return pool, len(forbidden)

    def best_unpruned_increment(n: int) -> Optional[Fraction]:
        # slow path, used only to report how close a failed stage came
        forbidden, used = _forbidden_region(n)
        best: Optional[Fraction] = None
        for s in itertools.islice(subset.candidates(), stage_scan):
            if s in forbidden or s in used:
                continue
            increment = _increment(n, s, best)
            if increment is not None and (best is None or increment < best):
                best = increment
        return best

    pools: dict[int, list] = {}
    cursor: dict[int, int] = {}
    forbidden_sizes: dict[int, int] = {}
    records: dict[int, StageRecord] = {}
    stage = 1
    while stage <= count:
        if stage not in pools:
            pools[stage], forbidden_sizes[stage] = score_stage(stage)
            cursor[stage] = 0
        pool = pools[stage]
        pos = cursor[stage]
        if pos < len(pool) and pool[pos][0] <= stage_budget(stage):
            increment, idx, element = pool[pos]
            if len(chosen) > stage:
                chosen[stage] = element
            else:
                chosen.append(element)
            records[stage] = StageRecord(stage, element, increment,
                                         stage_budget(stage), len(pool),
                                         forbidden_sizes[stage])
            stage += 1
            continue
        # stage failed: retry the previous stage with its next-best candidate
        def failure() -> SeriesFailure:
            best_inc = best_unpruned_increment(stage)
            reason = "exhausted" if best_inc is None else "budget"
            return SeriesFailure(stage, reason, best_inc, stage_budget(stage),
                                 len(pool))

        if stage == 1:
            return failure()
        prev = stage - 1
        cursor[prev] += 1
        prev_pool = pools[prev]
        if cursor[prev] >= len(prev_pool):
            return failure()
        increment, idx, element = prev_pool[cursor[prev]]
        chosen[prev] = element
        records[prev] = StageRecord(prev, element, increment,
                                    stage_budget(prev), len(prev_pool),
                                    forbidden_sizes[prev])
        pools.pop(stage)

    cert = build_series_certificate(
        chosen[1:], sets, params,
        multipliers=mult[1:],
        stage_records=[records[n] for n in sorted(records)],
        budget0=budget0)
    return cert


# -- one-element semigroups ----------------------------------------------


@dataclass(frozen=True)
class SingleTranslationReport:
    """Inf-search over the powers of one element, plus its non-1 trace."""

    element: Any
    outcomes: list
    nonunit_powers: tuple
    min_value: Dyadic
    horizon: int

    @property
    def any_witness(self) -> bool:
        return any(not o.exhausted for o in self.outcomes)


def single_translation_check(g, params: SpaceParams, thresholds,
                             horizon: int) -> SingleTranslationReport:
    """abelian_inf_search specialised to S = {g^n : n >= 1}.

    Also reports every n <= horizon where omega(g^n) != 1 or
    omega(g^-n) != 1, exhibiting how much of the weight the cyclic
    semigroup ever sees.
    """
    eps = _check_thresholds(thresholds)
    group, w = params.group, params.weight
    found: dict[int, InfWitness] = {}
    nonunit = []
    min_value: Optional[Dyadic] = None
    current = g
    for n in range(1, horizon + 1):
        v_pos = w.eval(current)
        v_neg = w.eval(group.invert(current))
        value = v_pos if v_pos > v_neg else v_neg
        if not (v_pos.is_one and v_neg.is_one):
            nonunit.append(n)
        if min_value is None or value < min_value:
            min_value = value
        for i, e in enumerate(eps):
            if i not in found and value < e:
                found[i] = InfWitness(current, value, e, n - 1)
        current = group.multiply(current, g)
    outcomes = [ThresholdOutcome(e, found.get(i),
                                 found[i].index + 1 if i in found else horizon)
                for i, e in enumerate(eps)]
    return SingleTranslationReport(g, outcomes, tuple(nonunit), min_value, horizon)
