"""Reports: exact certified fields plus advisory CSV emissions.

Certified quantities are serialized exactly (integers, "num/den"
strings, dyadic exponent records); floats appear only in advisory
fields such as wall time and CSV plot data.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional


def frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def parse_frac(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text))


@dataclass
class Report:
    """Result of one scenario run; every certified number is exact."""

    scenario: dict
    analysis: str
    verdicts: dict
    wall_time_s: float
    tool_version: str
    seed: Optional[int] = None
    summary: list = field(default_factory=list)

    def to_jsonable(self) -> dict:
        out = {
            "scenario": self.scenario,
            "analysis": self.analysis,
            "verdicts": self.verdicts,
            "wall_time_s": self.wall_time_s,
            "tool_version": self.tool_version,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.summary:
            out["summary"] = self.summary
        return out

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_jsonable(), indent=indent, sort_keys=True)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        return cls(
            scenario=data["scenario"],
            analysis=data["analysis"],
            verdicts=data["verdicts"],
            wall_time_s=data["wall_time_s"],
            tool_version=data["tool_version"],
            seed=data.get("seed"),
            summary=data.get("summary", []),
        )


def write_csv(path: str | Path, header: list, rows: list) -> None:
    """Advisory float data for plotting; never certified."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def csv_rows_for(analysis: str, verdicts: dict) -> tuple[list, list]:
    """Per-analysis plot columns (floats derived from the exact fields)."""
    if analysis == "construct" and "stages" in verdicts:
        rows = [[s["n"],
                 float(parse_frac(s["eps"]) + parse_frac(s["tail"])),
                 float(parse_frac(s["lhs_pth"]))]
                for s in verdicts["stages"]]
        return ["n", "bound", "achieved"], rows
    if analysis == "criteria" and "certificate" in verdicts:
        rows = []
        running = 0.0
        for s in verdicts["certificate"].get("stages", []):
            running += float(parse_frac(s["increment"]))
            rows.append([s["stage"], float(parse_frac(s["increment"])), running])
        return ["stage", "increment", "partial_sum"], rows
    if analysis == "criteria" and "outcomes" in verdicts:
        rows = [[o["threshold"], 0 if o["witness"] is None else 1, o["scanned"]]
                for o in verdicts["outcomes"]]
        return ["threshold", "found", "scanned"], rows
    if analysis == "norms" and "entries" in verdicts:
        rows = []
        for e in verdicts["entries"]:
            lower = e["estimate"]["lower_bound"]["pow2"]
            rows.append([json.dumps(e["element"]),
                         float(2.0 ** lower) if isinstance(lower, (int, float)) else "",
                         1 if e["unproven"] else 0])
        return ["element", "lower_bound", "unproven"], rows
    if analysis == "plane" and "witnesses" in verdicts:
        rows = [[w["n"], w["t"], float(parse_frac(w["removed_area"]))]
                for w in verdicts["witnesses"]]
        return ["n", "t", "removed_area"], rows
    return ["key", "value"], [[k, json.dumps(v)] for k, v in verdicts.items()]
