"""Method-granularity IR bug localization toolkit.

Pipeline: transform a Java project's Git history into a method-file
history, link resolved bugs to fixing commits for ground truth, run the
technique presets at file and method granularity, and evaluate accuracy
(MAP/MRR), effort (top-k LOC) and paired statistics.
"""

__version__ = "0.1.0"

from .model import (
    BugId,
    BugReport,
    ModuleDoc,
    OracleSet,
    RankedList,
    Snapshot,
    count_loc,
    parse_bug_id,
)

__all__ = [
    "BugId",
    "BugReport",
    "ModuleDoc",
    "OracleSet",
    "RankedList",
    "Snapshot",
    "__version__",
    "count_loc",
    "parse_bug_id",
]
