"""Run configuration: one YAML (or JSON) file drives every subcommand.

Schema (all paths relative to the config file's directory):

    project: CODEC                  # optional; inferred from bug ids
    source_repo: repos/codec        # original file-level history
    transformed_repo: repos/codec-m # method-level history
    bug_reports: bugs.json          # JSON array or NDJSON of bug records
    version_catalog: versions.json  # records: label, release_date, ref
    output_dir: out
    techniques: [BugLocator, BLUiR, BRTracer, AmaLgam, BLIA]
    granularities: [file, method]
    k_values: [100, 500, 1000, 5000]
    jobs: 1
    list_length: null               # optional ranked-list truncation
    tokenizer_version: "1"          # must match the library's pin
    keep_non_java: false
    parse_failure_policy: copy_original
    overrides:                      # per-technique weight overrides
      BLIA: {alpha: 0.25, beta: 0.1}

Bug record fields: id, summary, description, reported_at (ISO-8601),
resolved_at (optional), affected_versions, fixed_versions.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

import yaml

from .ir.text import TOKENIZER_VERSION
from .linking import VersionCatalog, VersionEntry
from .metrics import DEFAULT_K_VALUES
from .model import GRANULARITIES, BugReport, parse_bug_id, parse_instant
from .techniques import TECHNIQUES, TechniqueConfig, preset


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    source_repo: str
    transformed_repo: str
    bug_reports: str
    version_catalog: str
    output_dir: str
    project: str = ""
    techniques: tuple[str, ...] = TECHNIQUES
    granularities: tuple[str, ...] = GRANULARITIES
    k_values: tuple[int, ...] = DEFAULT_K_VALUES
    jobs: int = 1
    list_length: int | None = None
    tokenizer_version: str = TOKENIZER_VERSION
    keep_non_java: bool = False
    parse_failure_policy: str = "copy_original"
    overrides: dict[str, dict[str, Any]] = field(default_factory=dict)

    def technique_config(self, technique: str) -> TechniqueConfig:
        return preset(technique, **self.overrides.get(technique, {}))

    def to_dict(self) -> dict:
        return {
            "project": self.project,
            "source_repo": self.source_repo,
            "transformed_repo": self.transformed_repo,
            "bug_reports": self.bug_reports,
            "version_catalog": self.version_catalog,
            "output_dir": self.output_dir,
            "techniques": list(self.techniques),
            "granularities": list(self.granularities),
            "k_values": list(self.k_values),
            # jobs is an execution detail, deliberately not part of outputs:
            # reports must not depend on the worker count.
            "list_length": self.list_length,
            "tokenizer_version": self.tokenizer_version,
            "keep_non_java": self.keep_non_java,
            "parse_failure_policy": self.parse_failure_policy,
            "overrides": self.overrides,
            "resolved_technique_configs": {
                t: self.technique_config(t).to_dict() for t in self.techniques
            },
        }


_REQUIRED = ("source_repo", "transformed_repo", "bug_reports", "version_catalog", "output_dir")


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise ConfigError(f"{path}: missing keys: {', '.join(missing)}")
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base, p)

    cfg = RunConfig(
        source_repo=resolve(str(raw["source_repo"])),
        transformed_repo=resolve(str(raw["transformed_repo"])),
        bug_reports=resolve(str(raw["bug_reports"])),
        version_catalog=resolve(str(raw["version_catalog"])),
        output_dir=resolve(str(raw["output_dir"])),
        project=str(raw.get("project", "")),
        techniques=tuple(raw.get("techniques", TECHNIQUES)),
        granularities=tuple(raw.get("granularities", GRANULARITIES)),
        k_values=tuple(int(k) for k in raw.get("k_values", DEFAULT_K_VALUES)),
        jobs=int(raw.get("jobs", 1)),
        list_length=raw.get("list_length"),
        tokenizer_version=str(raw.get("tokenizer_version", TOKENIZER_VERSION)),
        keep_non_java=bool(raw.get("keep_non_java", False)),
        parse_failure_policy=str(raw.get("parse_failure_policy", "copy_original")),
        overrides={str(k): dict(v) for k, v in (raw.get("overrides") or {}).items()},
    )
    for t in cfg.techniques:
        if t not in TECHNIQUES:
            raise ConfigError(f"unknown technique: {t}")
    for g in cfg.granularities:
        if g not in GRANULARITIES:
            raise ConfigError(f"unknown granularity: {g}")
    if cfg.tokenizer_version != TOKENIZER_VERSION:
        raise ConfigError(
            f"config pins tokenizer {cfg.tokenizer_version!r}, "
            f"library provides {TOKENIZER_VERSION!r}"
        )
    for t, ov in cfg.overrides.items():
        if t not in TECHNIQUES:
            raise ConfigError(f"override for unknown technique: {t}")
        cfg.technique_config(t)  # validates field names and ranges
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    return cfg


def _iter_records(path: str) -> list[dict]:
    """Read a JSON array or newline-delimited JSON records."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if not stripped:
        return []
    if stripped.startswith("["):
        records = json.loads(text)
        if not isinstance(records, list):
            raise ConfigError(f"{path}: expected an array")
        return records
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def load_bug_reports(path: str) -> list[BugReport]:
    bugs = []
    for rec in _iter_records(path):
        try:
            bugs.append(
                BugReport(
                    id=parse_bug_id(rec["id"]),
                    summary=rec["summary"],
                    description=rec.get("description", ""),
                    reported_at=parse_instant(rec["reported_at"]),
                    resolved_at=(
                        parse_instant(rec["resolved_at"]) if rec.get("resolved_at") else None
                    ),
                    affected_versions=tuple(rec.get("affected_versions", ())),
                    fixed_versions=tuple(rec.get("fixed_versions", ())),
                )
            )
        except (KeyError, ValueError) as e:
            raise ConfigError(f"{path}: bad bug record {rec.get('id')!r}: {e}") from e
    return bugs


def load_version_catalog(path: str) -> VersionCatalog:
    entries = []
    for rec in _iter_records(path):
        try:
            entries.append(
                VersionEntry(
                    label=str(rec["label"]),
                    release_date=parse_instant(rec["release_date"]),
                    ref=str(rec["ref"]),
                )
            )
        except (KeyError, ValueError) as e:
            raise ConfigError(f"{path}: bad version record: {e}") from e
    entries.sort(key=lambda v: (v.release_date, v.label))
    return VersionCatalog(tuple(entries))
