"""Rewrite a Git history so every Java file becomes a directory of method files.

The transformed history mirrors the original commit graph one-to-one:
same topology, same messages, same author/committer identities and
timestamps, tags re-created on the mapped commits. Only trees change.
Each ``.java`` blob that parses is replaced by ``<path>/<Chain#m(T).java>``
method files; the original path becoming a directory keeps method ids
collision-free across files and preserves provenance.

Determinism: blobs are transformed once per distinct content, commits are
emitted in topological order, and tree entries are sorted, so repeated
runs produce identical object ids.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping

from . import javasplit
from .gitrepo import GitRepo, StorageError, data_block, quote_path
from .model import FILE_LEVEL, ModuleDoc, Snapshot, count_loc

log = logging.getLogger(__name__)

COPY_ORIGINAL = "copy_original"
SKIP_FILE = "skip_file"


@dataclass(frozen=True)
class TransformOptions:
    keep_non_java: bool = False
    parse_failure_policy: str = COPY_ORIGINAL

    def __post_init__(self):
        if self.parse_failure_policy not in (COPY_ORIGINAL, SKIP_FILE):
            raise ValueError(f"bad parse_failure_policy: {self.parse_failure_policy}")


@dataclass
class TransformReport:
    commits_processed: int = 0
    files_split: int = 0  # distinct Java blobs successfully split
    method_files_emitted: int = 0  # distinct method-file blobs produced
    parse_failures: list[tuple[str, str, str]] = field(default_factory=list)
    commit_map: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "commits_processed": self.commits_processed,
            "files_split": self.files_split,
            "method_files_emitted": self.method_files_emitted,
            "parse_failures": [list(f) for f in self.parse_failures],
            "commit_map": dict(self.commit_map),
        }


def decode_source(data: bytes) -> tuple[str, str]:
    """Decode Java source bytes; returns (text, codec for re-encoding)."""
    try:
        text = data.decode("utf-8")
        codec = "utf-8"
    except UnicodeDecodeError:
        text = data.decode("latin-1")
        codec = "latin-1"
    if text.startswith("﻿"):
        text = text[1:]
    return text, codec


def split_java_source(path: str, data: bytes) -> list[tuple[str, bytes]]:
    """Split one Java blob into (leaf name, rendered bytes) method files.

    Raises javasplit.ParseError when the content does not parse. Rare
    erased-signature collisions within one compilation unit get a ``~N``
    suffix in textual order, so every unit keeps a distinct, stable name.
    """
    text, codec = decode_source(data)
    units = javasplit.split_compilation_unit(text, path)
    out: list[tuple[str, bytes]] = []
    seen: dict[str, int] = {}
    for unit in units:
        name = javasplit.method_file_name(unit)
        bump = seen.get(name, 0)
        seen[name] = bump + 1
        if bump:
            stem, ext = name.rsplit(".java", 1)
            name = f"{stem}~{bump + 1}.java"
        out.append((name, javasplit.render_method_file(unit).encode(codec)))
    return out


def transform_tree(
    tree: Mapping[str, bytes], options: TransformOptions = TransformOptions()
) -> dict[str, bytes]:
    """Pure tree-level transform: path->bytes in, path->bytes out."""
    out: dict[str, bytes] = {}
    for path in sorted(tree):
        data = tree[path]
        if not path.endswith(".java"):
            if options.keep_non_java:
                out[path] = data
            continue
        try:
            for leaf, blob in split_java_source(path, data):
                out[f"{path}/{leaf}"] = blob
        except javasplit.ParseError:
            if options.parse_failure_policy == COPY_ORIGINAL:
                out[path] = data
    return out


class _BlobPlan:
    """Transformed form of one original blob, expressed in fast-import marks."""

    __slots__ = ("kind", "files", "error")

    def __init__(self, kind: str, files: list[tuple[str, int]], error: str = ""):
        self.kind = kind  # "split" | "failed"
        self.files = files  # (leaf name, blob mark); failed -> [("", mark)]
        self.error = error


def transform_repository(
    source_path: str,
    dest_path: str,
    options: TransformOptions = TransformOptions(),
) -> TransformReport:
    """Rewrite the whole history of ``source_path`` into ``dest_path``.

    The destination is created as a bare repository. gpg signatures and
    submodule (gitlink) entries do not survive the rewrite; everything
    else a commit carries is preserved.
    """
    report = TransformReport()
    with GitRepo(source_path) as src:
        commits = src.rev_list_all_topo()
        dest = GitRepo.init(dest_path, bare=True)
        if not commits:
            return report

        next_mark = [0]
        blob_plans: dict[str, _BlobPlan] = {}
        kept_blobs: dict[str, int] = {}
        commit_marks: dict[str, int] = {}

        def new_mark() -> int:
            next_mark[0] += 1
            return next_mark[0]

        def plan_java_blob(entry) -> tuple[_BlobPlan, list[bytes]]:
            data = src.blob_bytes(entry.sha)
            chunks: list[bytes] = []
            try:
                files = split_java_source(entry.path, data)
            except javasplit.ParseError as exc:
                mark = new_mark()
                chunks.append(b"blob\nmark :%d\n" % mark)
                chunks.append(data_block(data))
                return _BlobPlan("failed", [("", mark)], str(exc)), chunks
            report.files_split += 1
            report.method_files_emitted += len(files)
            marked = []
            for leaf, blob in files:
                mark = new_mark()
                marked.append((leaf, mark))
                chunks.append(b"blob\nmark :%d\n" % mark)
                chunks.append(data_block(blob))
            return _BlobPlan("split", marked), chunks

        def stream():
            for sha in commits:
                info = src.commit_info(sha)
                lines: list[bytes] = []
                for entry in sorted(src.ls_tree(sha), key=lambda e: e.path):
                    if entry.otype != "blob":
                        continue  # gitlinks dropped
                    is_java = entry.path.endswith(".java") and entry.is_regular_blob
                    if is_java:
                        plan = blob_plans.get(entry.sha)
                        if plan is None:
                            plan, chunks = plan_java_blob(entry)
                            blob_plans[entry.sha] = plan
                            yield from chunks
                        if plan.kind == "split":
                            for leaf, mark in plan.files:
                                lines.append(
                                    b"M 100644 :%d %s\n"
                                    % (mark, quote_path(f"{entry.path}/{leaf}"))
                                )
                        else:
                            report.parse_failures.append((sha, entry.path, plan.error))
                            if options.parse_failure_policy == COPY_ORIGINAL:
                                mark = plan.files[0][1]
                                lines.append(
                                    b"M %s :%d %s\n"
                                    % (entry.mode.encode(), mark, quote_path(entry.path))
                                )
                    elif options.keep_non_java:
                        mark = kept_blobs.get(entry.sha)
                        if mark is None:
                            mark = new_mark()
                            kept_blobs[entry.sha] = mark
                            yield b"blob\nmark :%d\n" % mark
                            yield data_block(src.blob_bytes(entry.sha))
                        lines.append(
                            b"M %s :%d %s\n"
                            % (entry.mode.encode(), mark, quote_path(entry.path))
                        )

                cmark = new_mark()
                commit_marks[sha] = cmark
                yield b"commit refs/methodloc/rewrite\n"
                yield b"mark :%d\n" % cmark
                yield b"author " + info.author + b"\n"
                yield b"committer " + info.committer + b"\n"
                yield data_block(info.message)
                if info.parents:
                    yield b"from :%d\n" % commit_marks[info.parents[0]]
                    for p in info.parents[1:]:
                        yield b"merge :%d\n" % commit_marks[p]
                yield b"deleteall\n"
                for line in lines:
                    yield line
                yield b"\n"
                report.commits_processed += 1

            for branch, target in sorted(src.branches().items()):
                yield b"reset refs/heads/%s\n" % branch.encode()
                yield b"from :%d\n\n" % commit_marks[target]
            for tag in sorted(src.tags(), key=lambda t: t.name):
                if tag.target not in commit_marks:
                    continue
                if tag.annotated:
                    yield b"tag %s\n" % tag.name.encode()
                    yield b"from :%d\n" % commit_marks[tag.target]
                    if tag.tagger:
                        yield b"tagger " + tag.tagger + b"\n"
                    yield data_block(tag.message or b"")
                    yield b"\n"
                else:
                    yield b"reset refs/tags/%s\n" % tag.name.encode()
                    yield b"from :%d\n\n" % commit_marks[tag.target]

        marks_path = os.path.join(dest_path, "methodloc-marks.txt")
        marks = dest.fast_import(stream(), marks_path)
        os.unlink(marks_path)
        dest.delete_ref("refs/methodloc/rewrite")
        head = src.head_branch()
        if head and head in src.branches():
            dest.set_head(head)
        dest.close()

        for sha, mark in commit_marks.items():
            report.commit_map[sha] = marks[mark]
    return report


def module_commit_times(repo_path: str) -> dict[str, list[datetime]]:
    """Per-module commit timestamps over the whole history.

    Feeds the history component of localization; the query-date window
    filter is applied at scoring time, so handing over the full history
    never leaks future changes.
    """
    touched: dict[str, list[datetime]] = {}
    with GitRepo(repo_path) as repo:
        for sha in repo.rev_list_all_topo():
            ts = datetime.fromtimestamp(
                repo.commit_info(sha).committer_timestamp, tz=timezone.utc
            )
            for status, path in repo.changed_paths(sha):
                if status != "D" and path.endswith(".java"):
                    touched.setdefault(path, []).append(ts)
    for series in touched.values():
        series.sort()
    return touched


def checkout_snapshot(
    repo_path: str,
    version_ref: str,
    granularity: str = FILE_LEVEL,
    project: str = "",
    version_label: str = "",
    release_date: datetime | None = None,
) -> Snapshot:
    """Materialize the ``.java`` documents reachable from a version ref.

    Raises UnknownVersion when the ref does not resolve. Fields are
    extracted per document so structured retrieval works out of the box.
    """
    with GitRepo(repo_path) as repo:
        sha = repo.resolve(version_ref)
        if release_date is None:
            ts = repo.commit_info(sha).committer_timestamp
            release_date = datetime.fromtimestamp(ts, tz=timezone.utc)
        docs = []
        for entry in repo.ls_tree(sha):
            if not entry.path.endswith(".java") or not entry.is_regular_blob:
                continue
            text, _ = decode_source(repo.blob_bytes(entry.sha))
            docs.append(
                ModuleDoc(
                    id=entry.path,
                    granularity=granularity,
                    content=text,
                    loc=count_loc(text),
                    fields=javasplit.extract_fields(text),
                )
            )
    docs.sort(key=lambda d: d.id)
    return Snapshot(
        project=project,
        version_label=version_label or version_ref,
        release_date=release_date,
        docs=tuple(docs),
    )
