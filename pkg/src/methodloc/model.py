"""Shared domain types: bug reports, module documents, snapshots, oracles, rankings.

Everything here is an immutable value object; instances are safe to share
across worker threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping

BUG_ID_PATTERN = re.compile(r"[A-Z][A-Z0-9]*-[1-9][0-9]*")

FILE_LEVEL = "file"
METHOD_LEVEL = "method"
GRANULARITIES = (FILE_LEVEL, METHOD_LEVEL)


class MalformedBugId(ValueError):
    """Raised when a string is not a canonical issue key like ``CODEC-199``."""


@dataclass(frozen=True, order=True)
class BugId:
    """Issue-tracker key, e.g. ``CODEC-199``."""

    project_key: str
    number: int

    def __post_init__(self):
        if not re.fullmatch(r"[A-Z][A-Z0-9]*", self.project_key):
            raise MalformedBugId(f"bad project key: {self.project_key!r}")
        if self.number < 1:
            raise MalformedBugId(f"bug number must be positive: {self.number}")

    def __str__(self) -> str:
        return f"{self.project_key}-{self.number}"


def parse_bug_id(text: str) -> BugId:
    """Parse a canonical bug key.

    Accepts exactly the strings matching ``[A-Z][A-Z0-9]*-[1-9][0-9]*``;
    anything else (lowercase key, leading zeros, surrounding junk) raises
    :class:`MalformedBugId`.
    """
    if not BUG_ID_PATTERN.fullmatch(text):
        raise MalformedBugId(f"not a canonical bug id: {text!r}")
    key, num = text.rsplit("-", 1)
    return BugId(key, int(num))


def count_loc(content: str) -> int:
    """Count physical lines; a final unterminated line counts as one.

    Raw line count, no blank or comment exclusion, so the number is
    reproducible from bytes alone.
    """
    if not content:
        return 0
    n = content.count("\n")
    if not content.endswith("\n"):
        n += 1
    return n


def ensure_utc(dt: datetime) -> datetime:
    """Normalize a timestamp to an aware UTC instant."""
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def parse_instant(text: str) -> datetime:
    """Parse an ISO-8601 timestamp (``Z`` suffix accepted) into aware UTC."""
    return ensure_utc(datetime.fromisoformat(text.replace("Z", "+00:00")))


@dataclass(frozen=True)
class BugReport:
    """One issue-tracker record; serves as the retrieval query."""

    id: BugId
    summary: str
    description: str = ""
    reported_at: datetime = None  # type: ignore[assignment]
    resolved_at: datetime | None = None
    affected_versions: tuple[str, ...] = ()
    fixed_versions: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.summary.strip():
            raise ValueError(f"{self.id}: summary is empty")
        if self.reported_at is None:
            raise ValueError(f"{self.id}: reported_at is required")
        object.__setattr__(self, "reported_at", ensure_utc(self.reported_at))
        if self.resolved_at is not None:
            object.__setattr__(self, "resolved_at", ensure_utc(self.resolved_at))
            if self.resolved_at < self.reported_at:
                raise ValueError(f"{self.id}: resolved before reported")
        object.__setattr__(self, "affected_versions", tuple(self.affected_versions))
        object.__setattr__(self, "fixed_versions", tuple(self.fixed_versions))

    @property
    def text(self) -> str:
        return f"{self.summary}\n{self.description}"


# Structural field names every indexable document carries.
DOC_FIELDS = ("class_names", "method_names", "identifiers", "comments")


@dataclass(frozen=True)
class ModuleDoc:
    """One searchable module: a whole source file or a single method file."""

    id: str
    granularity: str
    content: str
    loc: int = -1
    fields: Mapping[str, str] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"bad granularity: {self.granularity!r}")
        if self.loc < 0:
            object.__setattr__(self, "loc", count_loc(self.content))
        elif self.loc != count_loc(self.content):
            raise ValueError(f"{self.id}: loc={self.loc} != counted {count_loc(self.content)}")
        if self.fields is None:
            object.__setattr__(self, "fields", {name: "" for name in DOC_FIELDS})


@dataclass(frozen=True)
class Snapshot:
    """The module corpus of one released version."""

    project: str
    version_label: str
    release_date: datetime
    docs: tuple[ModuleDoc, ...]

    def __post_init__(self):
        object.__setattr__(self, "release_date", ensure_utc(self.release_date))
        docs = tuple(self.docs)
        object.__setattr__(self, "docs", docs)
        seen = set()
        for d in docs:
            if d.id in seen:
                raise ValueError(f"duplicate doc id in snapshot: {d.id}")
            seen.add(d.id)
        if len({d.granularity for d in docs}) > 1:
            raise ValueError("snapshot mixes granularities")

    @property
    def granularity(self) -> str:
        return self.docs[0].granularity if self.docs else FILE_LEVEL

    def doc_ids(self) -> list[str]:
        return sorted(d.id for d in self.docs)


@dataclass(frozen=True)
class OracleSet:
    """The modules actually changed by the commits that fixed one bug."""

    bug: BugId
    granularity: str
    modules: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "modules", frozenset(self.modules))


@dataclass(frozen=True)
class RankedList:
    """Modules ordered by descending suspiciousness.

    Scores are non-increasing, ids unique, and ties are broken by
    ascending module id so two runs always emit identical bytes.
    """

    bug: BugId
    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        entries = tuple((m, float(s)) for m, s in self.entries)
        object.__setattr__(self, "entries", entries)
        ids = [m for m, _ in entries]
        if len(set(ids)) != len(ids):
            raise ValueError(f"{self.bug}: duplicate module in ranked list")
        for (m1, s1), (m2, s2) in zip(entries, entries[1:]):
            if s2 > s1 or (s1 == s2 and m2 < m1):
                raise ValueError(f"{self.bug}: ranking order violated at {m2}")

    @classmethod
    def from_scores(cls, bug: BugId, scores: Iterable[tuple[str, float]]) -> "RankedList":
        ordered = sorted(scores, key=lambda e: (-e[1], e[0]))
        return cls(bug, tuple(ordered))

    def ranks(self) -> dict[str, int]:
        """Module id -> 1-based rank."""
        return {m: r for r, (m, _) in enumerate(self.entries, start=1)}
