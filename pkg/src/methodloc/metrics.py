"""Accuracy (AP/RR) and effort (top-k LOC) metrics over ranked lists.

Top-k LOC budget semantics: a bug counts as a hit when some relevant
module sits at a rank whose cumulative LOC, including the relevant
module's own lines, is <= k. Oracle modules missing from a ranked list
contribute zero to AP instead of shrinking the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import mean

from .model import BugId, OracleSet, RankedList


class EmptyOracle(ValueError):
    pass


class EmptyResults(ValueError):
    pass


class MissingLoc(KeyError):
    """A ranked module inside the LOC budget has no known size."""


@dataclass(frozen=True)
class BugResult:
    bug: BugId
    ranked: RankedList
    oracle: OracleSet
    loc_by_module: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.oracle.modules:
            raise EmptyOracle(str(self.bug))


@dataclass(frozen=True)
class ProjectSummary:
    project: str
    technique: str
    granularity: str
    map_value: float
    mrr_value: float
    top_k_loc: dict[int, float]
    bug_count: int


def average_precision(ranked: RankedList, oracle: OracleSet) -> float:
    if not oracle.modules:
        raise EmptyOracle(str(oracle.bug))
    seen = 0
    total = 0.0
    for rank, (module, _) in enumerate(ranked.entries, start=1):
        if module in oracle.modules:
            seen += 1
            total += seen / rank
    return total / len(oracle.modules)


def reciprocal_rank(ranked: RankedList, oracle: OracleSet) -> float:
    if not oracle.modules:
        raise EmptyOracle(str(oracle.bug))
    for rank, (module, _) in enumerate(ranked.entries, start=1):
        if module in oracle.modules:
            return 1.0 / rank
    return 0.0


def is_top_k_loc_hit(result: BugResult, k: int) -> bool:
    """Does a relevant module fall within the first k lines read?"""
    cumulative = 0
    for module, _ in result.ranked.entries:
        if module not in result.loc_by_module:
            raise MissingLoc(f"{result.bug}: no LOC for {module}")
        cumulative += result.loc_by_module[module]
        if cumulative > k:
            return False
        if module in result.oracle.modules:
            return True
    return False


def top_k_loc(results: list[BugResult], k: int) -> float:
    if not results:
        raise EmptyResults("no bug results")
    hits = sum(1 for r in results if is_top_k_loc_hit(r, k))
    return hits / len(results)


DEFAULT_K_VALUES = (100, 500, 1000, 5000)


def summarize_project(
    results: list[BugResult],
    project: str,
    technique: str,
    granularity: str,
    k_values: tuple[int, ...] = DEFAULT_K_VALUES,
) -> ProjectSummary:
    if not results:
        raise EmptyResults(f"{project}/{technique}/{granularity}")
    return ProjectSummary(
        project=project,
        technique=technique,
        granularity=granularity,
        map_value=mean(average_precision(r.ranked, r.oracle) for r in results),
        mrr_value=mean(reciprocal_rank(r.ranked, r.oracle) for r in results),
        top_k_loc={k: top_k_loc(results, k) for k in k_values},
        bug_count=len(results),
    )
