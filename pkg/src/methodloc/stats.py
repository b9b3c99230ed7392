"""Paired nonparametric statistics for level and technique comparisons.

The Wilcoxon signed-rank test drops zero differences, average-ranks ties,
and computes the exact two-sided p over the full sign-assignment null when
n <= 25 (dynamic programming over the achievable rank sums, which equals
the 2^n enumeration), switching to the normal approximation with tie
correction and continuity correction for larger n. The statistic reported
is W+, the sum of ranks of positive differences.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right

EXACT_LIMIT = 25


class DegenerateSample(ValueError):
    """All paired differences are zero; the test is undefined."""


class EmptySample(ValueError):
    pass


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_two_sided(ranks: list[float], w_plus: float) -> float:
    # Ranks are multiples of 1/2, so doubling gives integers and the
    # distribution of 2*W+ is a polynomial product with exact counts.
    doubled = [round(2 * r) for r in ranks]
    total = sum(doubled)
    counts = [0] * (total + 1)
    counts[0] = 1
    for d in doubled:
        for s in range(total, d - 1, -1):
            counts[s] += counts[s - d]
    n_assignments = 1 << len(ranks)
    w2 = round(2 * w_plus)
    low = sum(counts[: w2 + 1])
    high = sum(counts[w2:])
    p = 2 * min(low, high) / n_assignments
    return min(p, 1.0)


def _approx_two_sided(ranks: list[float], w_plus: float) -> float:
    n = len(ranks)
    mean = n * (n + 1) / 4
    var = n * (n + 1) * (2 * n + 1) / 24
    # Tie correction: subtract sum(t^3 - t) / 48 over tied groups.
    groups: dict[float, int] = {}
    for r in ranks:
        groups[r] = groups.get(r, 0) + 1
    var -= sum(t**3 - t for t in groups.values() if t > 1) / 48
    if var <= 0:
        raise DegenerateSample("zero variance after tie correction")
    d = w_plus - mean
    if d > 0.5:
        d -= 0.5
    elif d < -0.5:
        d += 0.5
    else:
        d = 0.0
    z = d / math.sqrt(var)
    return math.erfc(abs(z) / math.sqrt(2))


def wilcoxon_signed_rank(x: list[float], y: list[float]) -> tuple[float, float]:
    """Two-sided paired test; returns (W+, p)."""
    if len(x) != len(y) or not x:
        raise ValueError("wilcoxon needs equal-length, non-empty samples")
    diffs = [a - b for a, b in zip(x, y) if a != b]
    if not diffs:
        raise DegenerateSample("all paired differences are zero")
    ranks = _average_ranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    if len(diffs) <= EXACT_LIMIT:
        p = _exact_two_sided(ranks, w_plus)
    else:
        p = _approx_two_sided(ranks, w_plus)
    return w_plus, p


CLIFFS_THRESHOLDS = ((0.147, "negligible"), (0.33, "small"), (0.474, "medium"))


def cliffs_delta(x: list[float], y: list[float]) -> tuple[float, str]:
    """Effect size d = (#{x_i > y_j} - #{x_i < y_j}) / (n*m) with the
    conventional magnitude label."""
    if not x or not y:
        raise EmptySample("cliffs_delta needs non-empty samples")
    ys = sorted(y)
    greater = smaller = 0
    for xi in x:
        greater += bisect_left(ys, xi)
        smaller += len(ys) - bisect_right(ys, xi)
    d = (greater - smaller) / (len(x) * len(ys))
    return d, cliffs_label(d)


def cliffs_label(d: float) -> str:
    magnitude = abs(d)
    for threshold, label in CLIFFS_THRESHOLDS:
        if magnitude < threshold:
            return label
    return "large"
