"""Thin plumbing layer over the ``git`` executable.

Reading goes through ``rev-list``/``ls-tree``/``cat-file --batch`` (one
persistent batch process per repository); writing goes through a single
``fast-import`` run. Nothing here touches the network, and no porcelain
commands are used, so behaviour is stable across git versions.
"""

from __future__ import annotations

import os
import re
import subprocess
import threading
from dataclasses import dataclass

EMPTY_TREE = "4b825dc642cb6eb9a060e54bf8d69288fbee4904"


class StorageError(RuntimeError):
    """A git object could not be read or written."""


class UnknownVersion(KeyError):
    """A version ref does not resolve to a commit."""


@dataclass(frozen=True)
class CommitInfo:
    sha: str
    tree: str
    parents: tuple[str, ...]
    author: bytes  # raw ident payload: name <email> timestamp tz
    committer: bytes
    message: bytes

    @property
    def committer_timestamp(self) -> int:
        return int(self.committer.rsplit(b" ", 2)[-2])


@dataclass(frozen=True)
class TreeEntry:
    mode: str
    otype: str
    sha: str
    path: str

    @property
    def is_regular_blob(self) -> bool:
        return self.otype == "blob" and self.mode in ("100644", "100755")


@dataclass
class TagInfo:
    name: str
    target: str  # commit the tag (possibly via tag object) points at
    tagger: bytes | None = None  # raw ident payload for annotated tags
    message: bytes | None = None

    @property
    def annotated(self) -> bool:
        return self.message is not None


class GitRepo:
    """One local repository, addressed by its directory."""

    def __init__(self, path: str):
        self.path = str(path)
        self._batch: subprocess.Popen | None = None
        self._batch_lock = threading.Lock()
        if not os.path.isdir(self.path):
            raise StorageError(f"not a directory: {self.path}")

    # -- process helpers ---------------------------------------------------

    def _run(self, *args: str, input_bytes: bytes | None = None) -> bytes:
        proc = subprocess.run(
            ["git", "-C", self.path, *args],
            input=input_bytes,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        if proc.returncode != 0:
            raise StorageError(
                f"git {' '.join(args)} failed: {proc.stderr.decode('utf-8', 'replace').strip()}"
            )
        return proc.stdout

    @classmethod
    def init(cls, path: str, bare: bool = True) -> "GitRepo":
        os.makedirs(path, exist_ok=True)
        args = ["git", "init", "-q"]
        if bare:
            args.append("--bare")
        args.append(path)
        proc = subprocess.run(args, stdout=subprocess.PIPE, stderr=subprocess.PIPE)
        if proc.returncode != 0:
            raise StorageError(f"git init failed: {proc.stderr.decode('utf-8', 'replace')}")
        return cls(path)

    def close(self) -> None:
        if self._batch is not None:
            self._batch.stdin.close()
            self._batch.wait()
            self._batch = None

    def __enter__(self) -> "GitRepo":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- object reads ------------------------------------------------------

    def _batch_read(self, spec: str) -> tuple[str, str, bytes]:
        """Return (sha, type, payload) for an object spec via cat-file --batch."""
        with self._batch_lock:
            if self._batch is None:
                self._batch = subprocess.Popen(
                    ["git", "-C", self.path, "cat-file", "--batch"],
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                )
            self._batch.stdin.write(spec.encode() + b"\n")
            self._batch.stdin.flush()
            header = self._batch.stdout.readline().decode().strip()
            if header.endswith(("missing", "ambiguous")):
                raise StorageError(f"object not found: {spec}")
            sha, otype, size = header.split()
            payload = self._batch.stdout.read(int(size))
            self._batch.stdout.read(1)  # trailing newline
            return sha, otype, payload

    def blob_bytes(self, sha: str) -> bytes:
        got, otype, payload = self._batch_read(sha)
        if otype != "blob":
            raise StorageError(f"{sha} is a {otype}, expected blob")
        return payload

    def commit_info(self, sha: str) -> CommitInfo:
        got, otype, payload = self._batch_read(sha)
        if otype != "commit":
            raise StorageError(f"{sha} is a {otype}, expected commit")
        head, _, message = payload.partition(b"\n\n")
        tree = ""
        parents: list[str] = []
        author = committer = b""
        current: bytes | None = None
        for line in head.split(b"\n"):
            if line.startswith(b" "):  # continuation (gpgsig etc.): ignore
                continue
            key, _, value = line.partition(b" ")
            current = key
            if key == b"tree":
                tree = value.decode()
            elif key == b"parent":
                parents.append(value.decode())
            elif key == b"author":
                author = value
            elif key == b"committer":
                committer = value
        return CommitInfo(got, tree, tuple(parents), author, committer, message)

    def resolve(self, ref: str) -> str:
        try:
            out = self._run("rev-parse", "--verify", f"{ref}^{{commit}}")
        except StorageError as e:
            raise UnknownVersion(ref) from e
        return out.decode().strip()

    def rev_list_all_topo(self) -> list[str]:
        """All commits, parents before children; deterministic for a fixed repo."""
        out = self._run("rev-list", "--topo-order", "--reverse", "--all")
        return out.decode().split()

    def ls_tree(self, ref: str) -> list[TreeEntry]:
        out = self._run("ls-tree", "-r", "-z", "--full-tree", ref)
        entries = []
        for record in out.split(b"\0"):
            if not record:
                continue
            meta, _, path = record.partition(b"\t")
            mode, otype, sha = meta.decode().split()
            entries.append(TreeEntry(mode, otype, sha, path.decode("utf-8", "replace")))
        return entries

    def changed_paths(self, sha: str) -> list[tuple[str, str]]:
        """(status, path) of this commit against its first parent (A/M/D...)."""
        info = self.commit_info(sha)
        base = info.parents[0] if info.parents else EMPTY_TREE
        out = self._run("diff-tree", "-r", "-z", "--no-renames", base, sha)
        items: list[tuple[str, str]] = []
        fields = out.split(b"\0")
        i = 0
        while i < len(fields) and fields[i]:
            # Records look like ":100644 100644 <sha> <sha> M"; path follows.
            status = fields[i].decode().split(" ")[-1]
            path = fields[i + 1].decode("utf-8", "replace")
            items.append((status, path))
            i += 2
        return items

    def branches(self) -> dict[str, str]:
        out = self._run(
            "for-each-ref", "refs/heads", "--format=%(refname:short) %(objectname)"
        )
        result = {}
        for line in out.decode().splitlines():
            name, sha = line.rsplit(" ", 1)
            result[name] = sha
        return result

    def head_branch(self) -> str | None:
        try:
            out = self._run("symbolic-ref", "--short", "HEAD")
        except StorageError:
            return None
        return out.decode().strip()

    def tags(self) -> list[TagInfo]:
        out = self._run(
            "for-each-ref",
            "refs/tags",
            "--format=%(refname:short)%00%(objecttype)%00%(objectname)%00%(*objectname)",
        )
        tags = []
        for line in out.decode().splitlines():
            name, otype, sha, peeled = line.split("\0")
            if otype == "tag":
                _, _, payload = self._batch_read(sha)
                head, _, message = payload.partition(b"\n\n")
                tagger = None
                for hline in head.split(b"\n"):
                    key, _, value = hline.partition(b" ")
                    if key == b"tagger":
                        tagger = value
                tags.append(TagInfo(name, peeled or sha, tagger, message))
            else:
                tags.append(TagInfo(name, sha))
        return tags

    def set_head(self, branch: str) -> None:
        self._run("symbolic-ref", "HEAD", f"refs/heads/{branch}")

    def delete_ref(self, ref: str) -> None:
        self._run("update-ref", "-d", ref)

    # -- fast-import -------------------------------------------------------

    def fast_import(self, stream, marks_path: str) -> dict[int, str]:
        """Feed a fast-import command stream (iterable of bytes chunks).

        Returns the mark table (mark number -> object sha).
        """
        proc = subprocess.Popen(
            ["git", "-C", self.path, "fast-import", "--quiet",
             f"--export-marks={marks_path}"],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        try:
            for chunk in stream:
                proc.stdin.write(chunk)
            proc.stdin.close()
        except BrokenPipeError:
            pass
        proc.stdout.read()
        err = proc.stderr.read()
        proc.wait()
        if proc.returncode != 0:
            raise StorageError(f"fast-import failed: {err.decode('utf-8', 'replace')}")
        marks: dict[int, str] = {}
        with open(marks_path) as fh:
            for line in fh:
                mark, sha = line.split()
                marks[int(mark[1:])] = sha
        return marks


_PATH_PLAIN_RE = re.compile(rb'[^"\\\n\x00-\x1f\x7f]*')


def quote_path(path: str) -> bytes:
    """Encode a tree path for a fast-import stream (C-quoted when needed)."""
    raw = path.encode("utf-8")
    if _PATH_PLAIN_RE.fullmatch(raw) and not raw.startswith(b'"'):
        return raw
    out = bytearray(b'"')
    for b in raw:
        if b in b'"\\':
            out += b"\\" + bytes([b])
        elif b == 0x0A:
            out += b"\\n"
        elif b < 0x20 or b == 0x7F:
            out += f"\\{b:03o}".encode()
        else:
            out.append(b)
    out += b'"'
    return bytes(out)


def data_block(payload: bytes) -> bytes:
    return b"data %d\n" % len(payload) + payload + b"\n"
