import glob
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # oracles / repofixtures

from repofixtures import build_five_commit_repo  # noqa: E402

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
CORPUS_DIR = os.path.join(DATA_DIR, "java_corpus")


@pytest.fixture(scope="session")
def corpus_files() -> list[str]:
    files = sorted(glob.glob(os.path.join(CORPUS_DIR, "*.java")))
    assert len(files) >= 100, "vendored corpus went missing"
    return files


@pytest.fixture(scope="session")
def five_commit_repo(tmp_path_factory) -> tuple[str, dict[str, str]]:
    path = str(tmp_path_factory.mktemp("fixture-repo") / "origin")
    shas = build_five_commit_repo(path)
    return path, shas


def pytest_runtest_logreport(report):
    # One visible line per acceptance criterion, independent of -v.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {name}: {outcome}", flush=True)
