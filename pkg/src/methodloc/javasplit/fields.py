"""Structural document fields for field-based retrieval.

Every indexable Java document carries four text fields: declared type
names, declared method/constructor names, all identifier tokens, and
comment text. Files that fail to parse still get identifiers (plain
alphanumeric runs) so they remain searchable.
"""

from __future__ import annotations

import re

from ..model import DOC_FIELDS
from .lexer import COMMENT, WORD, ParseError, lex
from .splitter import split_compilation_unit

_JAVA_RESERVED = frozenset(
    """abstract assert boolean break byte case catch char class const
    continue default do double else enum extends final finally float for
    goto if implements import instanceof int interface long native new
    package private protected public return short static strictfp super
    switch synchronized this throw throws transient try void volatile
    while true false null""".split()
)

_ALNUM_RUN = re.compile(r"[A-Za-z0-9_$]+")


def extract_fields(source: str) -> dict[str, str]:
    """Map the DOC_FIELDS names to whitespace-joined token text."""
    try:
        tokens = lex(source)
    except ParseError:
        return {
            "class_names": "",
            "method_names": "",
            "identifiers": " ".join(_ALNUM_RUN.findall(source)),
            "comments": "",
        }

    identifiers: list[str] = []
    comments: list[str] = []
    class_names: list[str] = []
    words = [t for t in tokens if t.kind != COMMENT]
    for t in tokens:
        if t.kind == COMMENT:
            comments.append(t.text(source))
    for i, t in enumerate(words):
        if t.kind != WORD:
            continue
        text = t.text(source)
        if text in ("class", "interface", "enum"):
            if i + 1 < len(words) and words[i + 1].kind == WORD:
                class_names.append(words[i + 1].text(source))
        if text not in _JAVA_RESERVED:
            identifiers.append(text)

    try:
        units = split_compilation_unit(source)
        method_names = [u.method_name for u in units]
    except ParseError:
        method_names = []

    fields = {
        "class_names": " ".join(class_names),
        "method_names": " ".join(method_names),
        "identifiers": " ".join(identifiers),
        "comments": " ".join(comments),
    }
    assert set(fields) == set(DOC_FIELDS)
    return fields
