"""Assemble candidate dense vectors and verify their approximation bounds.

The assembly schedules finitely many targets round-robin, finds
translation witnesses whose translated supports are pairwise disjoint
(delegating to the series-criterion search with sup-norm-weighted
budgets), builds X as the disjoint sum of pulled-back target copies,
and verifies exactly that translating X back reproduces each target up
to its certified cross-sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

from .criteria import (SeriesCertificate, SeriesFailure, SubsetSpec,
                       build_series_certificate, series_criterion_search)
from .spaces import FinSupFun, SpaceParams, translate, weighted_norm


@dataclass(frozen=True)
class TargetSchedule:
    """Base targets arranged with repetitions, with their sup-norm powers."""

    targets: tuple
    order: tuple          # order[n-1] = index of the target used at stage n
    p: Union[int, float]
    sup_pows: tuple       # p_n = ||P_n||_inf^p per stage
    supports: tuple       # supp P_n per stage

    @property
    def stages(self) -> int:
        return len(self.order)

    def stage_target(self, n: int) -> FinSupFun:
        return self.targets[self.order[n - 1]]


def schedule_targets(targets, stages: int, p: Union[int, float]) -> TargetSchedule:
    """Round-robin arrangement P_1..P_N of the base targets."""
    targets = tuple(targets)
    if not targets:
        raise ValueError("at least one target is required")
    if stages < len(targets):
        raise ValueError(f"need at least {len(targets)} stages to place every target")
    for i, q in enumerate(targets):
        if not q:
            raise ValueError(f"target {i} is the zero function")
    order = tuple(n % len(targets) for n in range(stages))
    sup_pows = []
    supports = []
    for idx in order:
        q = targets[idx]
        sup = q.sup_abs()
        sup_pows.append(Fraction(sup) ** p if isinstance(p, int)
                        and isinstance(sup, (int, Fraction)) else sup ** p)
        supports.append(q.support)
    return TargetSchedule(targets, order, p, tuple(sup_pows), tuple(supports))


@dataclass
class Assembly:
    """The vector X with its witnesses and certified cross-sums."""

    schedule: TargetSchedule
    witnesses: list        # t_0 = e, t_1..t_N
    region_sets: list      # E_0 = empty, E_n = supp P_n
    vector: FinSupFun
    eps: list              # eps[n-1] = sum_{k != n, k >= 1} p_k ||omega||^p_{p, t_n t_k^-1 E_k}
    certificate: SeriesCertificate

    def with_vector(self, vector: FinSupFun) -> "Assembly":
        return replace(self, vector=vector)


def _assembly_from_certificate(schedule: TargetSchedule,
                               certificate: SeriesCertificate,
                               params: SpaceParams) -> Assembly:
    group = params.group
    vector = FinSupFun()
    for n in range(1, schedule.stages + 1):
        piece = translate(group, group.invert(certificate.witnesses[n]),
                          schedule.stage_target(n))
        vector = vector.add(piece)
    eps = []
    for n in range(1, schedule.stages + 1):
        eps.append(sum((v for (r, c), v in certificate.terms.items()
                        if r == n and c >= 1), Fraction(0)))
    return Assembly(schedule, list(certificate.witnesses),
                    list(certificate.region_sets), vector, eps, certificate)


def assemble(schedule: TargetSchedule, subset: SubsetSpec, params: SpaceParams,
             budget0=Fraction(1), stage_scan: int = 1024):
    """Search witnesses and build X; returns Assembly or SeriesFailure."""
    result = series_criterion_search(
        subset, params, list(schedule.supports),
        budget0=budget0, stage_scan=stage_scan,
        multipliers=list(schedule.sup_pows), require_increasing=False)
    if isinstance(result, SeriesFailure):
        return result
    return _assembly_from_certificate(schedule, result, params)


def assemble_with_witnesses(schedule: TargetSchedule, witnesses,
                            params: SpaceParams) -> Assembly:
    """Build X from explicitly given witnesses t_1..t_N (no budget search)."""
    certificate = build_series_certificate(
        list(witnesses), list(schedule.supports), params,
        multipliers=list(schedule.sup_pows))
    return _assembly_from_certificate(schedule, certificate, params)


@dataclass(frozen=True)
class StageCheck:
    """Exact verification of one stage of the assembly.

    lhs_pth is ||translate(t_n, X) - P_n||^p; pieces are the per-k
    norms of the cross copies; piece_caps the certified majorants
    p_k ||omega||^p over the same sets.
    """

    n: int
    lhs_pth: Fraction
    mass_term: Fraction
    pieces: tuple
    piece_caps: tuple
    eps: Fraction
    tail: Fraction
    bound_ok: bool
    split_ok: bool
    pieces_saturate: bool


@dataclass(frozen=True)
class VerifyReport:
    stages: tuple

    @property
    def all_ok(self) -> bool:
        return all(s.bound_ok and s.split_ok for s in self.stages)


def verify(assembly: Assembly, params: SpaceParams) -> VerifyReport:
    """Check ||translate(t_n, X) - P_n||^p <= eps_n + 2^-n for every stage.

    Also recomputes the disjoint-support decomposition independently:
    the norm must split exactly into the per-k cross pieces plus the
    mass lost by restricting P_n to E_n (zero here, where E_n is the
    full support).
    """
    group = params.group
    schedule = assembly.schedule
    checks = []
    for n in range(1, schedule.stages + 1):
        target = schedule.stage_target(n)
        t_n = assembly.witnesses[n]
        shifted = translate(group, t_n, assembly.vector)
        difference = shifted.sub(target)
        lhs = weighted_norm(difference, params)
        if not lhs.exact:
            raise ValueError("verification requires the exact pipeline")
        pieces = []
        caps = []
        for k in range(1, schedule.stages + 1):
            if k == n:
                continue
            copy_k = schedule.stage_target(k).restrict(assembly.region_sets[k])
            shift = group.multiply(t_n, group.invert(assembly.witnesses[k]))
            piece = weighted_norm(translate(group, shift, copy_k), params)
            pieces.append(piece.pth_power)
            caps.append(sum((v for (r, c), v in assembly.certificate.terms.items()
                             if r == n and c == k), Fraction(0)))
        mass = weighted_norm(
            target.sub(target.restrict(assembly.region_sets[n])), params).pth_power
        eps_n = assembly.eps[n - 1]
        tail = Fraction(1, 2 ** n)
        checks.append(StageCheck(
            n=n,
            lhs_pth=lhs.pth_power,
            mass_term=mass,
            pieces=tuple(pieces),
            piece_caps=tuple(caps),
            eps=eps_n,
            tail=tail,
            bound_ok=lhs.pth_power <= eps_n + tail,
            split_ok=lhs.pth_power == sum(pieces, Fraction(0)) + mass,
            pieces_saturate=all(piece == cap for piece, cap in zip(pieces, caps)),
        ))
    return VerifyReport(tuple(checks))
