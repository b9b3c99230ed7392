"""Deterministic CSV and Markdown emission for localization runs.

No wall-clock values, environment details, or unordered collections reach
the output files: identical inputs must produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import os

from .metrics import ProjectSummary
from .model import RankedList
from .stats import DegenerateSample, cliffs_delta, wilcoxon_signed_rank

SUMMARY_COLUMNS = (
    "project", "technique", "granularity", "map", "mrr",
    "top100", "top500", "top1000", "top5000", "bugs",
)


def fmt6(value: float) -> str:
    return f"{value:.6f}"


def write_ranked_csv(path: str, ranked: RankedList) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "module_id", "score"])
        for rank, (module, score) in enumerate(ranked.entries, start=1):
            writer.writerow([rank, module, fmt6(score)])


def read_ranked_csv(path: str) -> list[tuple[str, float]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["rank", "module_id", "score"]:
            raise ValueError(f"{path}: unexpected header {header}")
        return [(row[1], float(row[2])) for row in reader]


def write_loc_csv(path: str, loc_by_module: dict[str, int]) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["module_id", "loc"])
        for module in sorted(loc_by_module):
            writer.writerow([module, loc_by_module[module]])


def read_loc_csv(path: str) -> dict[str, int]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        return {row[0]: int(row[1]) for row in reader}


def write_json(path: str, payload) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_summary_csv(path: str, summaries: list[ProjectSummary]) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    rows = sorted(summaries, key=lambda s: (s.project, s.technique, s.granularity))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for s in rows:
            writer.writerow(
                [
                    s.project,
                    s.technique,
                    s.granularity,
                    fmt6(s.map_value),
                    fmt6(s.mrr_value),
                    fmt6(s.top_k_loc[100]),
                    fmt6(s.top_k_loc[500]),
                    fmt6(s.top_k_loc[1000]),
                    fmt6(s.top_k_loc[5000]),
                    s.bug_count,
                ]
            )


def _median(values: list[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    return ordered[mid] if n % 2 else (ordered[mid - 1] + ordered[mid]) / 2


def comparison_markdown(
    summaries: list[ProjectSummary],
    techniques: tuple[str, ...],
    comparison_k: int = 1000,
) -> str:
    """MAP-per-project table plus the file-vs-method effort comparison.

    The comparison pairs per-project top-k LOC values across the two
    levels for each technique; techniques missing a level get an ``n/a``
    row rather than failing the report.
    """
    by_key = {(s.project, s.technique, s.granularity): s for s in summaries}
    projects = sorted({s.project for s in summaries})

    lines: list[str] = []
    lines.append("# Localization results")
    lines.append("")
    lines.append("## MAP per project")
    lines.append("")
    header = ["Project"]
    for level in ("file", "method"):
        header.extend(f"{t} ({level})" for t in techniques)
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "---|" * len(header))
    for project in projects:
        row = [project]
        for level in ("file", "method"):
            for t in techniques:
                s = by_key.get((project, t, level))
                row.append(f"{s.map_value:.3f}" if s else "n/a")
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")

    lines.append(f"## Top-{comparison_k} LOC: file level vs method level")
    lines.append("")
    lines.append("| Technique | File level | Method level | p-value | Cliff's d |")
    lines.append("|---|---|---|---|---|")
    for t in techniques:
        file_vals = []
        method_vals = []
        for project in projects:
            sf = by_key.get((project, t, "file"))
            sm = by_key.get((project, t, "method"))
            if sf is not None and sm is not None:
                file_vals.append(sf.top_k_loc[comparison_k])
                method_vals.append(sm.top_k_loc[comparison_k])
        if not file_vals:
            lines.append(f"| {t} | n/a | n/a | n/a | n/a |")
            continue
        med_f = _median(file_vals)
        med_m = _median(method_vals)
        try:
            _, p = wilcoxon_signed_rank(file_vals, method_vals)
            p_text = f"{p:.3f}"
        except DegenerateSample:
            p_text = "n/a"
        d, label = cliffs_delta(method_vals, file_vals)
        lines.append(
            f"| {t} | {med_f:.3f} | {med_m:.3f} | {p_text} | {d:.3f} ({label}) |"
        )
    lines.append("")
    return "\n".join(lines)
