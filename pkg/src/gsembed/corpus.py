"""Bundled catalogue of worked examples with known answers.

Each case pins one analyzer call to an expected outcome that was checked by
hand (or is classical).  The ``reproduce`` CLI subcommand and the regression
suite both run through :func:`run_all`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Dict, List, Optional

from .embanalyzer import (
    EmbeddingProblem,
    compact_not_nuclear_band,
    compactness,
    entropy_rate,
    ext,
    nuclearity,
)

__all__ = ["ReproCase", "load_cases", "run_case", "run_all"]


@dataclass(frozen=True)
class ReproCase:
    id: str
    title: str
    source: str
    citation: str
    check: Dict[str, Any]


def load_cases() -> List[ReproCase]:
    raw = resources.files("gsembed").joinpath("corpus.json").read_text()
    return [ReproCase(**entry) for entry in json.loads(raw)]


def _fmt(x: Any) -> Optional[str]:
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return str(x)


def _problem(check: Dict[str, Any]) -> EmbeddingProblem:
    return EmbeddingProblem(
        sigma=check["sigma"],
        tau=check["tau"],
        p1=check["p1"],
        q1=check["q1"],
        p2=check["p2"],
        q2=check["q2"],
        dim=int(check["dim"]),
        scale=check.get("scale", "B"),
    )


def run_case(case: ReproCase) -> Dict[str, Any]:
    check = case.check
    expect = check["expect"]
    got: Dict[str, Any] = {}
    op = check["op"]

    if op in ("compactness", "nuclearity"):
        problem = _problem(check)
        verdict = compactness(problem) if op == "compactness" else nuclearity(problem)
        got = {"status": verdict.status}
        passed = verdict.status == expect["status"]
    elif op == "entropy_rate":
        problem = _problem(check)
        formula = entropy_rate(problem)
        got = {
            "kind": formula.kind,
            "k_exponent": _fmt(formula.k_exponent),
            "log_exponent": _fmt(formula.log_exponent),
            "residual": formula.residual,
        }
        passed = formula.kind == expect["kind"]
        if "k_exponent" in expect:
            passed = passed and got["k_exponent"] == expect["k_exponent"]
        if "log_exponent" in expect:
            passed = passed and got["log_exponent"] == expect["log_exponent"]
        if "residual_contains" in expect:
            passed = passed and expect["residual_contains"] in (formula.residual or "")
    elif op == "band":
        band = compact_not_nuclear_band(ext(check["p1"]), ext(check["p2"]), int(check["dim"]))
        got = {"lower": _fmt(band.lower), "upper": _fmt(band.upper), "empty": band.empty}
        passed = (
            got["lower"] == expect["lower"]
            and got["upper"] == expect["upper"]
            and got["empty"] == expect["empty"]
        )
    else:
        raise ValueError(f"unknown corpus op: {op!r}")

    return {
        "id": case.id,
        "title": case.title,
        "source": case.source,
        "citation": case.citation,
        "op": op,
        "expected": expect,
        "got": got,
        "passed": bool(passed),
    }


def run_all(only: Optional[str] = None) -> Dict[str, Any]:
    cases = load_cases()
    if only is not None:
        cases = [c for c in cases if c.id == only]
        if not cases:
            raise KeyError(f"no corpus case with id {only!r}")
    results = [run_case(c) for c in cases]
    return {"cases": results, "all_pass": all(r["passed"] for r in results)}
