"""Scenario files: declarative JSON analyses and their runners.

A scenario names a group, a weight with parameters, a subset S, the
exponent p, and one analysis (criteria | construct | norms | plane).
This module validates the file, builds the objects, and dispatches.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .criteria import (SeriesFailure, SubsetSpec, abelian_inf_search,
                       build_series_certificate, esssup_sufficient_check,
                       explicit_elements, positive_integers, powers_of,
                       semigroup_products, series_criterion_search,
                       single_translation_check, whole_group)
from .constructor import (Assembly, assemble, assemble_with_witnesses,
                          schedule_targets, verify)
from .groups import DEFAULT_CAP, FreeGroup, Group, Lattice, group_from_name
from .plane import (CellRegion, criterion4_witness, horizontal_ratio_bound,
                    region_integral)
from .reports import Report, frac_str, parse_frac
from .spaces import FinSupFun, SpaceParams, admissibility_report
from .weights import (CenteredSquaresWeight, ExpDecayWeight, MarkedPowerWeight,
                      MonoidRegionWeight, TableWeight, UnitWeight, Weight,
                      point_shell_weight, semigroup_generator)

ENV_CAP = "DENSEORBITS_CAP"

ANALYSES = ("criteria", "construct", "norms", "plane")
CRITERIA = ("abelian_inf", "esssup", "series", "single_translation")


class ScenarioError(ValueError):
    """A scenario file failed validation; the message names the field."""


@dataclass
class Scenario:
    group_name: str
    weight_spec: dict
    p: Any
    analysis: str
    subset_spec: Optional[dict] = None
    options: dict = field(default_factory=dict)
    cap: int = DEFAULT_CAP
    raw: dict = field(default_factory=dict)


def default_cap() -> int:
    value = os.environ.get(ENV_CAP)
    if value is None:
        return DEFAULT_CAP
    try:
        return int(value)
    except ValueError as exc:
        raise ScenarioError(f"{ENV_CAP} must be an integer, got {value!r}") from exc


def load_scenario(path: str | Path) -> Scenario:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_scenario(data)


def parse_scenario(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    for key in ("group", "weight", "analysis"):
        if key not in data:
            raise ScenarioError(f"scenario is missing the '{key}' field")
    analysis = data["analysis"]
    if analysis not in ANALYSES:
        raise ScenarioError(f"unknown analysis {analysis!r}; expected one of {ANALYSES}")
    p = data.get("p", 1)
    if isinstance(p, str):
        frac = parse_frac(p)
        p = frac.numerator if frac.denominator == 1 else float(frac)
    if p < 1:
        raise ScenarioError(f"p must be >= 1, got {p}")
    scenario = Scenario(
        group_name=data["group"],
        weight_spec=data["weight"],
        p=p,
        analysis=analysis,
        subset_spec=data.get("subset"),
        options=data.get("options", {}),
        cap=int(data.get("cap", default_cap())),
        raw=data,
    )
    # cheap validation of group/weight compatibility before running
    if analysis == "plane":
        if scenario.group_name != "R^2":
            raise ScenarioError("the plane analysis runs on group 'R^2'")
        if scenario.weight_spec.get("id") != "r2_strip":
            raise ScenarioError("the plane analysis needs weight id 'r2_strip'")
    else:
        group = build_group(scenario.group_name)
        build_weight(group, scenario.weight_spec)
    return scenario


def build_group(name: str) -> Group:
    try:
        return group_from_name(name)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def build_weight(group: Group, spec: dict) -> Weight:
    if not isinstance(spec, dict) or "id" not in spec:
        raise ScenarioError("weight must be an object with an 'id' field")
    wid = spec["id"]
    try:
        if wid == "salas":
            return ExpDecayWeight(parse_frac(spec.get("alpha", 1)), group)
        if wid == "f2_nondense":
            return MarkedPowerWeight(int(spec.get("k_max", 4)), group)
        if wid == "f2_semigroup":
            return MonoidRegionWeight(int(spec.get("l_max", 4)),
                                      int(spec.get("depth_max", 8)), group)
        if wid == "z2":
            return CenteredSquaresWeight(group)
        if wid == "existence":
            points = [group.element_from_json(pt) for pt in spec["points"]]
            return point_shell_weight(group, int(spec.get("radius", 1)), points)
        if wid == "unit":
            return UnitWeight(group)
        if wid == "table":
            return TableWeight.from_csv(group, spec["csv"])
    except ScenarioError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise ScenarioError(f"weight {wid!r}: {exc}") from exc
    raise ScenarioError(f"unknown weight id {wid!r}")


def build_subset(group: Group, spec: Optional[dict]) -> SubsetSpec:
    if spec is None:
        raise ScenarioError("this analysis needs a 'subset' field")
    kind = spec.get("kind")
    if kind == "whole":
        return whole_group(group)
    if kind == "positive":
        if not isinstance(group, Lattice) or group.dim != 1:
            raise ScenarioError("subset kind 'positive' needs Z^1")
        return positive_integers(group)
    if kind == "powers":
        return powers_of(group, group.element_from_json(spec["element"]))
    if kind == "semigroup_blocks":
        if not isinstance(group, FreeGroup) or group.rank != 2:
            raise ScenarioError("subset kind 'semigroup_blocks' needs F_2")
        gens = [semigroup_generator(k) for k in range(1, int(spec.get("l_max", 4)) + 1)]
        return semigroup_products(group, gens,
                                  include_identity=bool(spec.get("include_identity", True)))
    if kind == "semigroup":
        gens = [group.element_from_json(g) for g in spec["generators"]]
        return semigroup_products(group, gens,
                                  include_identity=bool(spec.get("include_identity", False)))
    if kind == "explicit":
        return explicit_elements(group, [group.element_from_json(el)
                                         for el in spec["elements"]])
    raise ScenarioError(f"unknown subset kind {kind!r}")


def parse_finsupfun(group: Group, pairs) -> FinSupFun:
    data = {}
    for item in pairs:
        if not isinstance(item, list) or len(item) != 2:
            raise ScenarioError(f"function entries are [element, value] pairs, got {item!r}")
        element = group.element_from_json(item[0])
        data[element] = parse_frac(item[1])
    return FinSupFun(data)


def _witness_jsonable(group, outcome):
    return {
        "threshold": frac_str(outcome.threshold),
        "witness": None if outcome.witness is None else {
            "element": group.element_to_json(outcome.witness.element),
            "value": outcome.witness.value.to_jsonable(),
            "index": outcome.witness.index,
        },
        "scanned": outcome.scanned,
    }


def _run_criteria(sc: Scenario) -> dict:
    group = build_group(sc.group_name)
    weight = build_weight(group, sc.weight_spec)
    params = SpaceParams(group, weight, sc.p)
    opts = sc.options
    criterion = opts.get("criterion")
    if criterion not in CRITERIA:
        raise ScenarioError(f"options.criterion must be one of {CRITERIA}")
    if criterion == "abelian_inf":
        subset = build_subset(group, sc.subset_spec)
        epsilons = [parse_frac(e) for e in opts.get("epsilons", ["1/2"])]
        horizon = int(opts.get("horizon", 1000))
        outcomes = abelian_inf_search(subset, params, epsilons, horizon)
        return {
            "criterion": criterion,
            "subset": subset.name,
            "outcomes": [_witness_jsonable(group, o) for o in outcomes],
            "all_found": all(not o.exhausted for o in outcomes),
        }
    if criterion == "esssup":
        subset = build_subset(group, sc.subset_spec)
        region = frozenset(group.element_from_json(el) for el in opts["region"])
        outcome = esssup_sufficient_check(
            subset, params, region, parse_frac(opts.get("epsilon", "1/2")),
            int(opts.get("horizon", 1000)))
        return {
            "criterion": criterion,
            "subset": subset.name,
            "threshold": frac_str(outcome.threshold),
            "witness": None if outcome.element is None else {
                "element": group.element_to_json(outcome.element),
                "sup_value": outcome.sup_value.to_jsonable(),
            },
            "scanned": outcome.scanned,
            "exhausted": outcome.exhausted,
        }
    if criterion == "series":
        if "sets" in opts:
            sets = [frozenset(group.element_from_json(el) for el in members)
                    for members in opts["sets"]]
        else:
            radii = opts.get("radii")
            if radii is None:
                raise ScenarioError("series needs options.sets or options.radii")
            sets = [group.ball(int(r), sc.cap) for r in radii]
        if "witnesses" in opts:
            witnesses = [group.element_from_json(el) for el in opts["witnesses"]]
            cert = build_series_certificate(witnesses, sets, params)
            return {"criterion": criterion, "found": True, "mode": "direct",
                    "certificate": cert.to_jsonable(group)}
        subset = build_subset(group, sc.subset_spec)
        result = series_criterion_search(
            subset, params, sets,
            budget0=parse_frac(opts.get("budget0", 1)),
            stage_scan=int(opts.get("stage_scan", 1024)),
            cap=sc.cap)
        if isinstance(result, SeriesFailure):
            return {"criterion": criterion, "found": False, "subset": subset.name,
                    "failure": result.to_jsonable(group)}
        return {"criterion": criterion, "found": True, "subset": subset.name,
                "certificate": result.to_jsonable(group)}
    # single_translation
    g = group.element_from_json(opts["element"])
    thresholds = [parse_frac(e) for e in opts.get("thresholds", ["1/2"])]
    horizon = int(opts.get("horizon", 64))
    report = single_translation_check(g, params, thresholds, horizon)
    return {
        "criterion": criterion,
        "element": group.element_to_json(g),
        "outcomes": [_witness_jsonable(group, o) for o in report.outcomes],
        "nonunit_powers": list(report.nonunit_powers),
        "min_value": report.min_value.to_jsonable(),
        "horizon": horizon,
    }


def _run_construct(sc: Scenario) -> dict:
    group = build_group(sc.group_name)
    weight = build_weight(group, sc.weight_spec)
    params = SpaceParams(group, weight, sc.p)
    opts = sc.options
    targets = [parse_finsupfun(group, t) for t in opts["targets"]]
    stages = int(opts.get("stages", len(targets)))
    schedule = schedule_targets(targets, stages, sc.p)
    if "witnesses" in opts:
        assembly = assemble_with_witnesses(
            schedule, [group.element_from_json(el) for el in opts["witnesses"]], params)
    else:
        subset = build_subset(group, sc.subset_spec)
        result = assemble(schedule, subset, params,
                          budget0=parse_frac(opts.get("budget0", 1)),
                          stage_scan=int(opts.get("stage_scan", 1024)))
        if isinstance(result, SeriesFailure):
            return {"found": False, "verdict": "no certificate found",
                    "failure": result.to_jsonable(group)}
        assembly = result
    report = verify(assembly, params)
    return {
        "found": True,
        "witnesses": [group.element_to_json(t) for t in assembly.witnesses],
        "vector": [[group.element_to_json(el), frac_str(v)]
                   for el, v in assembly.vector.to_pairs()],
        "eps": [frac_str(e) for e in assembly.eps],
        "stages": [{
            "n": chk.n,
            "lhs_pth": frac_str(chk.lhs_pth),
            "eps": frac_str(chk.eps),
            "tail": frac_str(chk.tail),
            "bound_ok": chk.bound_ok,
            "split_ok": chk.split_ok,
            "pieces_saturate": chk.pieces_saturate,
        } for chk in report.stages],
        "all_ok": report.all_ok,
        "certificate": assembly.certificate.to_jsonable(group),
    }


def _run_norms(sc: Scenario) -> dict:
    group = build_group(sc.group_name)
    weight = build_weight(group, sc.weight_spec)
    params = SpaceParams(group, weight, sc.p)
    opts = sc.options
    radius = int(opts.get("search_radius", 6))
    if "elements" in opts:
        candidates = [group.element_from_json(el) for el in opts["elements"]]
        count = len(candidates)
    else:
        subset = build_subset(group, sc.subset_spec)
        candidates = subset.candidates()
        count = int(opts.get("count", 4))
    entries = admissibility_report(candidates, params, count, radius)
    return {
        "search_radius": radius,
        "entries": [{
            "element": group.element_to_json(e.element),
            "estimate": e.estimate.to_jsonable(),
            "unproven": e.unproven,
        } for e in entries],
        "any_unproven": any(e.unproven for e in entries),
    }


def _run_plane(sc: Scenario) -> dict:
    opts = sc.options
    extent = int(opts.get("band_extent", 20))
    shift = parse_frac(opts.get("shift", "1/2"))
    ratio = horizontal_ratio_bound(shift, extent)
    witnesses = []
    for item in opts.get("witnesses", []):
        wit = criterion4_witness(int(item["n"]), parse_frac(item["delta"]))
        witnesses.append({
            "n": wit.n,
            "delta": frac_str(wit.delta),
            "t": wit.t,
            "shift": [frac_str(wit.shift[0]), frac_str(wit.shift[1])],
            "removed_area": frac_str(wit.removed_area),
            "area_ok": wit.area_ok,
            "sup_value": wit.sup_value.to_jsonable(),
            "sup_bound": wit.sup_bound.to_jsonable(),
            "sup_ok": wit.sup_ok,
        })
    integrals = []
    for n in range(int(opts.get("unit_squares", 0)) + 1):
        value = region_integral(CellRegion.rect(n, n + 1, 0, 1), 1)
        integrals.append({"n": n, "integral": frac_str(value),
                          "at_least_one": value >= 1})
    return {
        "ratio": ratio.to_jsonable(),
        "witnesses": witnesses,
        "unit_square_integrals": integrals,
        "all_witnesses_ok": all(w["area_ok"] and w["sup_ok"] for w in witnesses),
    }


_RUNNERS = {
    "criteria": _run_criteria,
    "construct": _run_construct,
    "norms": _run_norms,
    "plane": _run_plane,
}


def run_scenario(sc: Scenario) -> Report:
    start = time.perf_counter()
    verdicts = _RUNNERS[sc.analysis](sc)
    elapsed = time.perf_counter() - start
    return Report(
        scenario=sc.raw,
        analysis=sc.analysis,
        verdicts=verdicts,
        wall_time_s=elapsed,
        tool_version=__version__,
    )
