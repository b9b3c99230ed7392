"""One configurable localization engine; five technique presets.

Every technique is the same scoring pipeline with information sources
switched on or off: a base text similarity (length-boosted content cosine
or field-structured cosine), similar past bug reports, stack-trace
mentions, and recent change history. The combination is

    s1    = (1 - alpha) * minmax(text) + alpha * minmax(simi)
    s2    = s1 + beta * stack
    final = (1 - gamma) * s2 + gamma * history

so zeroing a weight removes that source exactly. Presets:

    BugLocator  rvsm        alpha=0.3
    BRTracer    rvsm        alpha=0.3  beta=0.2
    BLUiR       structured  alpha=0.3
    AmaLgam     structured  alpha=0.3             gamma=0.3
    BLIA        structured  alpha=0.3  beta=0.2   gamma=0.3

All weights and the history window come from the config and are recorded
with every emitted ranking.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from datetime import datetime

import numpy as np

from .ir import Index, minmax01, query_tokens, stream_cosine, tokenize
from .model import (
    FILE_LEVEL,
    METHOD_LEVEL,
    BugReport,
    OracleSet,
    RankedList,
    Snapshot,
)

RVSM = "rvsm"
STRUCTURED = "structured"

TECHNIQUES = ("BugLocator", "BLUiR", "BRTracer", "AmaLgam", "BLIA")


class UnknownTechnique(KeyError):
    pass


@dataclass(frozen=True)
class StackFrame:
    fq_class: str
    method_name: str
    file_name: str
    line: int
    rank: int

    def __post_init__(self):
        if self.rank < 1 or self.line < 1:
            raise ValueError("frame rank and line are 1-based")

    @property
    def simple_class(self) -> str:
        """Outermost simple name: last dotted part, before any ``$``."""
        return self.fq_class.rsplit(".", 1)[-1].split("$", 1)[0]


@dataclass(frozen=True)
class TechniqueConfig:
    text_mode: str = RVSM
    alpha: float = 0.0  # similar-report weight
    beta: float = 0.0  # stack-trace weight
    gamma: float = 0.0  # history weight
    history_window_days: float = 15.0
    history_decay_days: float = 7.0
    max_frames: int = 10

    def __post_init__(self):
        if self.text_mode not in (RVSM, STRUCTURED):
            raise ValueError(f"bad text_mode: {self.text_mode}")
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.gamma <= 1.0):
            raise ValueError("alpha and gamma must lie in [0, 1]")
        if self.beta < 0.0:
            raise ValueError("beta must be >= 0")
        if self.history_window_days <= 0 or self.history_decay_days <= 0:
            raise ValueError("history window and decay must be positive")
        if self.max_frames < 1:
            raise ValueError("max_frames must be positive")

    def to_dict(self) -> dict:
        return {
            "text_mode": self.text_mode,
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "history_window_days": self.history_window_days,
            "history_decay_days": self.history_decay_days,
            "max_frames": self.max_frames,
        }


_PRESETS: dict[str, TechniqueConfig] = {
    "BugLocator": TechniqueConfig(text_mode=RVSM, alpha=0.3),
    "BRTracer": TechniqueConfig(text_mode=RVSM, alpha=0.3, beta=0.2),
    "BLUiR": TechniqueConfig(text_mode=STRUCTURED, alpha=0.3),
    "AmaLgam": TechniqueConfig(text_mode=STRUCTURED, alpha=0.3, gamma=0.3),
    "BLIA": TechniqueConfig(text_mode=STRUCTURED, alpha=0.3, beta=0.2, gamma=0.3),
}


def preset(technique: str, **overrides) -> TechniqueConfig:
    try:
        config = _PRESETS[technique]
    except KeyError:
        raise UnknownTechnique(technique) from None
    return replace(config, **overrides) if overrides else config


@dataclass(frozen=True)
class LocalizeInput:
    bug: BugReport
    snapshot: Snapshot
    index: Index
    past_bugs: tuple[tuple[BugReport, OracleSet], ...] = ()
    history: dict[str, list[datetime]] = field(default_factory=dict)


_FRAME_RE = re.compile(
    r"at\s+([A-Za-z_$][\w$.]*)\.([\w$<>]+)\s*\(\s*([\w$]+\.java)\s*:\s*(\d+)\s*\)"
)


def parse_stack_traces(description: str) -> list[StackFrame]:
    """Every ``at pkg.Class.method(File.java:NN)`` frame, in textual order.

    Frames under ``Caused by:`` sections are ordinary matches, so ranks
    simply continue across sections.
    """
    frames = []
    for rank, m in enumerate(_FRAME_RE.finditer(description), start=1):
        frames.append(
            StackFrame(
                fq_class=m.group(1),
                method_name=m.group(2),
                file_name=m.group(3),
                line=int(m.group(4)),
                rank=rank,
            )
        )
    return frames


def _method_leaf(module_id: str) -> tuple[str, str] | None:
    """(outermost class, method name) parsed from a method-file id."""
    leaf = module_id.rsplit("/", 1)[-1]
    if "#" not in leaf or not leaf.endswith(".java"):
        return None
    chain, _, rest = leaf.partition("#")
    method = rest.split("(", 1)[0]
    return chain.split("$", 1)[0], method


def stack_trace_boost(
    frames: list[StackFrame],
    snapshot: Snapshot,
    granularity: str,
    max_frames: int,
) -> dict[str, float]:
    """Module id -> 1/rank for modules a stack frame points at.

    File level matches on the path basename; method level matches the
    frame's outer simple class plus the method name, so every overload of
    a mentioned method gets the boost. A module keeps its best (lowest
    rank) frame.
    """
    boosts: dict[str, float] = {}
    use = [f for f in frames if f.rank <= max_frames]
    if not use:
        return boosts
    for doc in snapshot.docs:
        for frame in use:
            hit = False
            if granularity == FILE_LEVEL:
                hit = doc.id.rsplit("/", 1)[-1] == frame.file_name
            elif granularity == METHOD_LEVEL:
                parsed = _method_leaf(doc.id)
                hit = parsed is not None and parsed == (
                    frame.simple_class,
                    frame.method_name,
                )
            if hit:
                score = 1.0 / frame.rank
                if score > boosts.get(doc.id, 0.0):
                    boosts[doc.id] = score
    return boosts


def simi_score(
    bug: BugReport,
    past_bugs: tuple[tuple[BugReport, OracleSet], ...],
    snapshot: Snapshot,
) -> dict[str, float]:
    """Similar-report evidence: each past bug spreads its text similarity
    uniformly over its own oracle modules; contributions sum per module.

    Past bugs resolved at or after this bug's report date are ignored here
    regardless of what the caller passed; the retrospective setup must
    never leak future fixes into a query.
    """
    snapshot_ids = {d.id for d in snapshot.docs}
    query = tokenize(bug.text)
    scores: dict[str, float] = {}
    for past, oracle in past_bugs:
        if past.resolved_at is None or past.resolved_at >= bug.reported_at:
            continue
        if not oracle.modules:
            continue
        s = stream_cosine(query, tokenize(past.text))
        if s == 0.0:
            continue
        share = s / len(oracle.modules)
        for module in oracle.modules:
            if module in snapshot_ids:
                scores[module] = scores.get(module, 0.0) + share
    return scores


def history_score(
    snapshot: Snapshot,
    history: dict[str, list[datetime]],
    query_date: datetime,
    window_days: float,
    decay_days: float,
) -> dict[str, float]:
    """Recent-change evidence in [0, 1]: exponentially decayed commit
    counts inside the window, normalized by the snapshot maximum."""
    raw: dict[str, float] = {}
    for doc in snapshot.docs:
        total = 0.0
        for ts in history.get(doc.id, ()):
            age = (query_date - ts).total_seconds() / 86400.0
            if 0.0 <= age <= window_days:
                total += math.exp(-age / decay_days)
        if total > 0.0:
            raw[doc.id] = total
    if not raw:
        return {}
    peak = max(raw.values())
    return {m: v / peak for m, v in raw.items()}


def combine(
    doc_ids: list[str],
    text_scores: np.ndarray,
    simi: dict[str, float],
    stack: dict[str, float],
    history: dict[str, float],
    config: TechniqueConfig,
) -> np.ndarray:
    """Blend the component scores over the candidate set (see module doc)."""
    simi_vec = np.array([simi.get(d, 0.0) for d in doc_ids])
    stack_vec = np.array([stack.get(d, 0.0) for d in doc_ids])
    hist_vec = np.array([history.get(d, 0.0) for d in doc_ids])
    s1 = (1.0 - config.alpha) * minmax01(text_scores) + config.alpha * minmax01(simi_vec)
    s2 = s1 + config.beta * stack_vec
    return (1.0 - config.gamma) * s2 + config.gamma * hist_vec


def localize(
    inp: LocalizeInput,
    config: TechniqueConfig,
    limit: int | None = None,
) -> RankedList:
    """Rank every module of the snapshot for this bug.

    Positive scores come first; zero-score candidates pad the list up to
    ``limit`` (default: the whole corpus) in ascending id order.
    """
    index = inp.index
    doc_ids = index.doc_ids
    if config.text_mode == RVSM:
        text = index.rvsm_all(tokenize(inp.bug.text))
    else:
        text = index.structured_all(
            query_tokens(inp.bug.summary, inp.bug.description)
        )
    simi = (
        simi_score(inp.bug, inp.past_bugs, inp.snapshot) if config.alpha > 0.0 else {}
    )
    stack = (
        stack_trace_boost(
            parse_stack_traces(inp.bug.description),
            inp.snapshot,
            inp.snapshot.granularity,
            config.max_frames,
        )
        if config.beta > 0.0
        else {}
    )
    history = (
        history_score(
            inp.snapshot,
            inp.history,
            inp.bug.reported_at,
            config.history_window_days,
            config.history_decay_days,
        )
        if config.gamma > 0.0
        else {}
    )
    final = combine(doc_ids, text, simi, stack, history, config)
    ranked = RankedList.from_scores(inp.bug.id, zip(doc_ids, final.tolist()))
    if limit is not None:
        ranked = RankedList(inp.bug.id, ranked.entries[:limit])
    return ranked
