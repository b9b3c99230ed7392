"""Command-line pipeline: transform, link, localize, eval.

Each subcommand reads the same config file and can be rerun independently;
state passes through the output directory as plain JSON/CSV. Exit codes:
0 success, 2 input or environment problem, 3 internal invariant violation.
"""

from __future__ import annotations

import functools
import json
import os
import re
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import click

from . import report as rep
from .config import ConfigError, RunConfig, load_bug_reports, load_config, load_version_catalog
from .gitrepo import StorageError, UnknownVersion
from .ir import BACKEND, EmptyCorpus, Index
from .linking import BugExcluded, derive_oracle, link_bugs, select_snapshot
from .metrics import BugResult, EmptyResults, summarize_project
from .model import FILE_LEVEL, METHOD_LEVEL, BugReport, OracleSet, RankedList, parse_bug_id
from .techniques import LocalizeInput, localize
from .transform import (
    TransformOptions,
    checkout_snapshot,
    module_commit_times,
    transform_repository,
)

EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ConfigError, StorageError, UnknownVersion, FileNotFoundError, NotADirectoryError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except (AssertionError, ValueError, KeyError) as e:
            click.echo(f"internal error: {e!r}", err=True)
            sys.exit(EXIT_INTERNAL)

    return wrapper


@click.group()
@click.version_option(package_name="methodloc")
def main():
    """Method-granularity IR bug localization pipeline."""


_config_option = click.option(
    "-c", "--config", "config_path", required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Run configuration file (YAML or JSON).",
)


def _require(path: str, what: str) -> None:
    if not os.path.exists(path):
        raise ConfigError(f"{what} does not exist: {path}")


@main.command()
@_config_option
@_guarded
def transform(config_path: str):
    """Rewrite the source history into a method-file history."""
    cfg = load_config(config_path)
    _require(cfg.source_repo, "source_repo")
    dest = cfg.transformed_repo
    if os.path.exists(dest) and os.listdir(dest):
        raise ConfigError(f"transformed_repo already exists and is not empty: {dest}")
    options = TransformOptions(
        keep_non_java=cfg.keep_non_java,
        parse_failure_policy=cfg.parse_failure_policy,
    )
    result = transform_repository(cfg.source_repo, dest, options)
    rep.write_json(os.path.join(cfg.output_dir, "transform_report.json"), result.to_dict())
    click.echo(
        f"transformed {result.commits_processed} commits: "
        f"{result.files_split} files split into {result.method_files_emitted} method files, "
        f"{len(result.parse_failures)} parse failures"
    )
    for sha, path, message in result.parse_failures:
        click.echo(f"  parse failure at {sha[:10]} {path}: {message}", err=True)


def _link_and_oracles(cfg: RunConfig, bugs: list[BugReport]):
    """Per-granularity links and oracles; exclusion reasons per bug.

    Each granularity links against its own history (commit ids differ
    between the original and transformed repositories, their structure
    must not), then derives oracles from that history's diffs.
    """
    repos = {FILE_LEVEL: cfg.source_repo, METHOD_LEVEL: cfg.transformed_repo}
    links_by_level = {g: link_bugs(repos[g], bugs) for g in cfg.granularities}
    if len(links_by_level) == 2:
        a, b = (links_by_level[g] for g in (FILE_LEVEL, METHOD_LEVEL))
        assert {k: len(v) for k, v in a.items()} == {
            k: len(v) for k, v in b.items()
        }, "bug-commit links differ between original and transformed histories"
    links = links_by_level.get(FILE_LEVEL) or next(iter(links_by_level.values()))
    oracles: dict[str, dict] = {g: {} for g in cfg.granularities}
    excluded: dict[str, str] = {}
    for bug in bugs:
        for g in cfg.granularities:
            try:
                oracles[g][bug.id] = derive_oracle(bug.id, links_by_level[g], repos[g], g)
            except BugExcluded as e:
                excluded.setdefault(str(bug.id), f"{g}: {e.reason}")
    return links, oracles, excluded


@main.command()
@_config_option
@_guarded
def link(config_path: str):
    """Link bugs to fix commits and write the oracle module sets."""
    cfg = load_config(config_path)
    for path, what in ((cfg.source_repo, "source_repo"), (cfg.bug_reports, "bug_reports")):
        _require(path, what)
    if METHOD_LEVEL in cfg.granularities:
        _require(cfg.transformed_repo, "transformed_repo")
    bugs = load_bug_reports(cfg.bug_reports)
    links, oracles, excluded = _link_and_oracles(cfg, bugs)
    rep.write_json(
        os.path.join(cfg.output_dir, "links.json"),
        {str(b): shas for b, shas in sorted(links.items(), key=lambda kv: str(kv[0]))},
    )
    for g, by_bug in oracles.items():
        rep.write_json(
            os.path.join(cfg.output_dir, "oracles", f"{g}.json"),
            {str(b): sorted(o.modules) for b, o in sorted(by_bug.items(), key=lambda kv: str(kv[0]))},
        )
    linked = sum(1 for shas in links.values() if shas)
    click.echo(f"linked {linked}/{len(bugs)} bugs; {len(excluded)} excluded")


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", lambda m: f"%{ord(m.group()):02X}", label)


@main.command(name="localize")
@_config_option
@click.option("--jobs", type=int, default=None, help="Worker threads (overrides config).")
@_guarded
def localize_cmd(config_path: str, jobs: int | None):
    """Run every technique at every granularity; write ranked lists."""
    cfg = load_config(config_path)
    for path, what in (
        (cfg.bug_reports, "bug_reports"),
        (cfg.version_catalog, "version_catalog"),
    ):
        _require(path, what)
    if FILE_LEVEL in cfg.granularities:
        _require(cfg.source_repo, "source_repo")
    if METHOD_LEVEL in cfg.granularities:
        _require(cfg.transformed_repo, "transformed_repo")
    workers = jobs if jobs is not None else cfg.jobs
    bugs = load_bug_reports(cfg.bug_reports)
    catalog = load_version_catalog(cfg.version_catalog)
    if not len(catalog):
        raise ConfigError("version catalog is empty")
    repos = {FILE_LEVEL: cfg.source_repo, METHOD_LEVEL: cfg.transformed_repo}
    project = cfg.project or _infer_project(bugs)

    links, oracles, excluded = _link_and_oracles(cfg, bugs)
    admitted = [
        b for b in bugs
        if str(b.id) not in excluded
        and all(b.id in oracles[g] for g in cfg.granularities)
    ]

    version_by_bug = {b.id: select_snapshot(b, catalog) for b in admitted}
    needed = sorted({version_by_bug[b.id] for b in admitted})

    # Snapshots and indexes are built once per (granularity, version) and
    # shared read-only across workers.
    snapshots: dict[tuple[str, str], object] = {}
    indexes: dict[tuple[str, str], Index] = {}
    for g in cfg.granularities:
        for label in needed:
            entry = catalog.by_label(label)
            snap = checkout_snapshot(
                repos[g], entry.ref, granularity=g, project=project,
                version_label=label, release_date=entry.release_date,
            )
            if not snap.docs:
                for b in admitted:
                    if version_by_bug[b.id] == label:
                        excluded.setdefault(str(b.id), f"{g}: empty corpus at {label}")
                continue
            snapshots[(g, label)] = snap
            indexes[(g, label)] = Index.build(snap)
    admitted = [b for b in admitted if str(b.id) not in excluded]

    needs_history = any(cfg.technique_config(t).gamma > 0 for t in cfg.techniques)
    history = {
        g: (module_commit_times(repos[g]) if needs_history else {})
        for g in cfg.granularities
    }

    def past_for(bug: BugReport, g: str):
        out = []
        for other in bugs:
            if other.id == bug.id or other.resolved_at is None:
                continue
            if other.resolved_at < bug.reported_at and other.id in oracles[g]:
                out.append((other, oracles[g][other.id]))
        return tuple(out)

    tasks = []
    for g in cfg.granularities:
        for technique in cfg.techniques:
            tconfig = cfg.technique_config(technique)
            for bug in admitted:
                label = version_by_bug[bug.id]
                inp = LocalizeInput(
                    bug=bug,
                    snapshot=snapshots[(g, label)],
                    index=indexes[(g, label)],
                    past_bugs=past_for(bug, g),
                    history=history[g],
                )
                tasks.append((g, technique, bug.id, inp, tconfig))

    def run_task(task):
        g, technique, bug_id, inp, tconfig = task
        return g, technique, bug_id, localize(inp, tconfig, cfg.list_length)

    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]

    for g, technique, bug_id, ranked in sorted(results, key=lambda r: (r[0], r[1], str(r[2]))):
        rep.write_ranked_csv(
            os.path.join(cfg.output_dir, "ranked", g, technique, f"{bug_id}.csv"), ranked
        )
    for (g, label), snap in sorted(snapshots.items()):
        rep.write_loc_csv(
            os.path.join(cfg.output_dir, "loc", g, f"{_slug(label)}.csv"),
            {d.id: d.loc for d in snap.docs},
        )
    for g, by_bug in oracles.items():
        rep.write_json(
            os.path.join(cfg.output_dir, "oracles", f"{g}.json"),
            {str(b): sorted(o.modules) for b, o in sorted(by_bug.items(), key=lambda kv: str(kv[0]))},
        )
    manifest = {
        "project": project,
        "config": cfg.to_dict(),
        "admitted": sorted(str(b.id) for b in admitted),
        "excluded": dict(sorted(excluded.items())),
        "version_by_bug": {str(b): v for b, v in sorted(version_by_bug.items(), key=lambda kv: str(kv[0])) if str(b) not in excluded},
        "versions_used": needed,
    }
    rep.write_json(os.path.join(cfg.output_dir, "manifest.json"), manifest)
    if not admitted:
        click.echo("warning: no bugs admitted to evaluation", err=True)
    click.echo(
        f"localized {len(admitted)} bugs x {len(cfg.techniques)} techniques "
        f"x {len(cfg.granularities)} levels ({BACKEND} backend)"
    )


def _infer_project(bugs: list[BugReport]) -> str:
    keys = Counter(b.id.project_key for b in bugs)
    return keys.most_common(1)[0][0] if keys else "PROJECT"


@main.command(name="eval")
@_config_option
@click.option(
    "--results", "results_dirs", multiple=True, type=click.Path(exists=True, file_okay=False),
    help="Localization output dirs to aggregate (default: the config's output_dir).",
)
@_guarded
def eval_cmd(config_path: str, results_dirs: tuple[str, ...]):
    """Summarize ranked lists: per-project metrics plus level comparison."""
    cfg = load_config(config_path)
    dirs = list(results_dirs) or [cfg.output_dir]
    summaries = []
    techniques = cfg.techniques
    for run_dir in dirs:
        manifest_path = os.path.join(run_dir, "manifest.json")
        if not os.path.exists(manifest_path):
            raise ConfigError(f"no manifest.json under {run_dir}; run localize first")
        with open(manifest_path) as fh:
            manifest = json.load(fh)
        project = manifest["project"]
        admitted = manifest["admitted"]
        version_by_bug = manifest["version_by_bug"]
        run_granularities = manifest["config"]["granularities"]
        run_techniques = manifest["config"]["techniques"]
        for g in run_granularities:
            oracle_path = os.path.join(run_dir, "oracles", f"{g}.json")
            with open(oracle_path) as fh:
                oracle_raw = json.load(fh)
            loc_cache: dict[str, dict[str, int]] = {}
            for technique in run_techniques:
                results = []
                for bug_text in admitted:
                    bug_id = parse_bug_id(bug_text)
                    ranked_path = os.path.join(run_dir, "ranked", g, technique, f"{bug_text}.csv")
                    if not os.path.exists(ranked_path):
                        continue
                    label = version_by_bug[bug_text]
                    if label not in loc_cache:
                        loc_cache[label] = rep.read_loc_csv(
                            os.path.join(run_dir, "loc", g, f"{_slug(label)}.csv")
                        )
                    ranked = RankedList(bug_id, tuple(rep.read_ranked_csv(ranked_path)))
                    oracle = OracleSet(bug_id, g, frozenset(oracle_raw[bug_text]))
                    results.append(
                        BugResult(bug_id, ranked, oracle, loc_cache[label])
                    )
                if results:
                    summaries.append(
                        summarize_project(results, project, technique, g, _eval_ks(cfg))
                    )
    if not summaries:
        raise EmptyResults("no ranked lists found to evaluate")
    out_dir = os.path.join(cfg.output_dir, "eval")
    rep.write_summary_csv(os.path.join(out_dir, "summary.csv"), summaries)
    md = rep.comparison_markdown(summaries, techniques, comparison_k=1000)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "comparison.md"), "w") as fh:
        fh.write(md)
    click.echo(f"wrote {os.path.join(out_dir, 'summary.csv')} and comparison.md")


def _eval_ks(cfg: RunConfig) -> tuple[int, ...]:
    return tuple(sorted(set(cfg.k_values) | {100, 500, 1000, 5000}))


if __name__ == "__main__":
    main()
