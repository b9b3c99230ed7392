"""Scoring backend selection.

The compiled extension is preferred; the pure-Python module is the
fallback when the extension was not built or METHODLOC_PURE_PYTHON is set.
Both expose the same functions and produce bitwise-identical scores.
"""

from __future__ import annotations

import os

from . import _ranker_py

if os.environ.get("METHODLOC_PURE_PYTHON"):
    _impl = _ranker_py
    BACKEND = "python"
else:
    try:
        from . import _ranker as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _ranker_py
        BACKEND = "python"

accumulate_scores = _impl.accumulate_scores
