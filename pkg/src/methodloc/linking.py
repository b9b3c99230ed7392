"""Link bug reports to fixing commits and derive localization oracles.

A bug is linked to every commit whose message mentions its canonical id as
a whole token (``CODEC-199`` links, ``CODEC-1990`` and ``XCODEC-199`` do
not). The modules an admitted bug should localize to are the ``.java``
leaf paths added or modified by its fix commits. Snapshot choice follows
reporter-declared affected versions first, then the latest release that
predates the report.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime

from .gitrepo import GitRepo
from .model import BugId, BugReport, OracleSet, ensure_utc


class BugExcluded(Exception):
    """The bug has no oracle modules at the requested granularity."""

    def __init__(self, bug: BugId, reason: str):
        super().__init__(f"{bug}: {reason}")
        self.bug = bug
        self.reason = reason


@dataclass(frozen=True)
class VersionEntry:
    label: str
    release_date: datetime
    ref: str

    def __post_init__(self):
        object.__setattr__(self, "release_date", ensure_utc(self.release_date))


@dataclass(frozen=True)
class VersionCatalog:
    """Released versions ordered by release date."""

    versions: tuple[VersionEntry, ...]

    def __post_init__(self):
        versions = tuple(self.versions)
        object.__setattr__(self, "versions", versions)
        labels = [v.label for v in versions]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate version labels in catalog")
        for a, b in zip(versions, versions[1:]):
            if b.release_date < a.release_date:
                raise ValueError(f"catalog not ordered by release date at {b.label}")

    def __len__(self) -> int:
        return len(self.versions)

    def labels(self) -> list[str]:
        return [v.label for v in self.versions]

    def by_label(self, label: str) -> VersionEntry:
        for v in self.versions:
            if v.label == label:
                return v
        raise KeyError(label)


def _mention_re(bug: BugId) -> re.Pattern[str]:
    return re.compile(rf"(?<![A-Za-z0-9-]){re.escape(str(bug))}(?![A-Za-z0-9-])")


def link_bugs(repo_path: str, bugs: list[BugReport]) -> dict[BugId, list[str]]:
    """Map each bug to the commits naming it, ordered by commit time.

    Works identically on original and transformed histories because the
    transformer preserves commit messages byte for byte.
    """
    links: dict[BugId, list[str]] = {b.id: [] for b in bugs}
    if not bugs:
        return links
    patterns = [(b.id, _mention_re(b.id)) for b in bugs]
    with GitRepo(repo_path) as repo:
        stamped: list[tuple[int, str, str]] = []
        for sha in repo.rev_list_all_topo():
            info = repo.commit_info(sha)
            stamped.append((info.committer_timestamp, sha, info.message.decode("utf-8", "replace")))
        stamped.sort(key=lambda t: (t[0], t[1]))
        for ts, sha, message in stamped:
            for bug_id, pattern in patterns:
                if pattern.search(message):
                    links[bug_id].append(sha)
    return links


def derive_oracle(
    bug: BugId,
    links: dict[BugId, list[str]],
    repo_path: str,
    granularity: str,
) -> OracleSet:
    """Union of ``.java`` paths added/modified by the bug's fix commits.

    Deleted paths are excluded: a deleted module cannot appear in any
    searchable snapshot. Raises BugExcluded when nothing remains, which at
    method level is how fixes entirely outside of methods drop out.
    """
    shas = links.get(bug) or []
    if not shas:
        raise BugExcluded(bug, "no linked fix commits")
    modules: set[str] = set()
    with GitRepo(repo_path) as repo:
        for sha in shas:
            for status, path in repo.changed_paths(sha):
                if status in ("A", "M") and path.endswith(".java"):
                    modules.add(path)
    if not modules:
        raise BugExcluded(bug, f"fix commits touch no .java modules at {granularity} level")
    return OracleSet(bug=bug, granularity=granularity, modules=frozenset(modules))


def select_snapshot(bug: BugReport, catalog: VersionCatalog) -> str:
    """Version to search for this bug.

    Preference order: the first affected version the reporter listed that
    the catalog knows; otherwise the newest release at or before the
    report date; otherwise the earliest release.
    """
    if not len(catalog):
        raise ValueError("empty version catalog")
    known = set(catalog.labels())
    for label in bug.affected_versions:
        if label in known:
            return label
    best = None
    for v in catalog.versions:
        if v.release_date <= bug.reported_at:
            best = v.label
    return best if best is not None else catalog.versions[0].label
