"""Tokenization shared by the query and document sides of retrieval.

The pipeline: split text on non-alphanumerics into compound tokens, split
each compound at camelCase and letter/digit boundaries, lowercase, drop
stopwords, Java keywords and single characters, stem, and emit the stemmed
compound followed by its stemmed subtokens (subtokens only when the
compound actually splits). Both spellings of an identifier are therefore
searchable: ``updateHmac`` yields ``updatehmac``, ``updat``, ``hmac``.

Any change to the rules or the word lists below must bump
TOKENIZER_VERSION; index caches are keyed on it.
"""

from __future__ import annotations

import math
import re
from collections import Counter

from .porter import stem

TOKENIZER_VERSION = "1"

# Lucene's classic English stopword list.
STOPWORDS = frozenset(
    """a an and are as at be but by for if in into is it no not of on or
    such that the their then there these they this to was will with""".split()
)

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const
    continue default do double else enum extends final finally float for
    goto if implements import instanceof int interface long native new
    package private protected public return short static strictfp super
    switch synchronized this throw throws transient try void volatile
    while true false null""".split()
)

_COMPOUND_RE = re.compile(r"[A-Za-z0-9]+")
_SUBTOKEN_RE = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+|[0-9]+")


def _admit(lowered: str) -> bool:
    return len(lowered) > 1 and lowered not in STOPWORDS and lowered not in JAVA_KEYWORDS


def tokenize(text: str) -> list[str]:
    """Turn free text or source code into the list of index terms."""
    out: list[str] = []
    for match in _COMPOUND_RE.finditer(text):
        compound = match.group()
        lowered = compound.lower()
        if _admit(lowered):
            out.append(stem(lowered))
        parts = _SUBTOKEN_RE.findall(compound)
        if len(parts) > 1:
            for part in parts:
                low = part.lower()
                if _admit(low):
                    out.append(stem(low))
    return out


def stream_cosine(a: list[str], b: list[str]) -> float:
    """Cosine between two token streams under log-scaled term frequency.

    Used for bug-report-to-bug-report similarity, where there is no
    document collection to take idf from; both vectors get weight
    1 + ln(tf) and are L2-normalized.
    """
    if not a or not b:
        return 0.0
    wa = {t: 1.0 + math.log(f) for t, f in Counter(a).items()}
    wb = {t: 1.0 + math.log(f) for t, f in Counter(b).items()}
    dot = sum(w * wb[t] for t, w in wa.items() if t in wb)
    if dot == 0.0:
        return 0.0
    na = math.sqrt(sum(w * w for w in wa.values()))
    nb = math.sqrt(sum(w * w for w in wb.values()))
    return dot / (na * nb)
