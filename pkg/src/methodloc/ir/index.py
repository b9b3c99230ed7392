"""Per-field TF-IDF index over one snapshot, plus the base similarities.

Weighting is the BugLocator-lineage variant: tf = 1 + ln(f) for f > 0,
idf = ln(N / df), document vectors L2-normalized per field, queries
weighted and normalized the same way against the corpus idf. Postings are
stored CSR-style per field so scoring a query against every document is a
single kernel call.

The revised-VSM score multiplies the content cosine by a size boost
g(d) = 1 / (1 + e^(-n(d))) where n(d) min-max normalizes the document's
raw token count over the snapshot; when every document has the same size,
n is 0 everywhere and the boost cancels out of the ranking.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..model import DOC_FIELDS, Snapshot
from . import kernels
from .text import TOKENIZER_VERSION, tokenize

CONTENT_FIELD = "content"
ALL_FIELDS = (CONTENT_FIELD,) + DOC_FIELDS

QUERY_FIELDS = ("summary", "description")


class EmptyCorpus(ValueError):
    """An index cannot be built over zero documents."""


class UnknownDoc(KeyError):
    """Document id is not part of the index."""


@dataclass
class _FieldIndex:
    terms: list[str]  # tid -> term, sorted
    vocab: dict[str, int]
    idf: np.ndarray
    indptr: np.ndarray  # int64 [n_terms + 1]
    doc_pos: np.ndarray  # int32, ascending within each term
    weights: np.ndarray  # float64, normalized tf-idf components


def _doc_field_text(doc, field: str) -> str:
    if field == CONTENT_FIELD:
        return doc.content
    return doc.fields.get(field, "")


class Index:
    """Immutable once built; shareable across worker threads."""

    def __init__(
        self,
        snapshot_key: str,
        doc_ids: list[str],
        fields: dict[str, _FieldIndex],
        raw_counts: np.ndarray,
        tokenizer_version: str = TOKENIZER_VERSION,
    ):
        self.snapshot_key = snapshot_key
        self.doc_ids = doc_ids
        self._pos = {d: i for i, d in enumerate(doc_ids)}
        self.fields = fields
        self.raw_counts = raw_counts
        self.tokenizer_version = tokenizer_version
        self.n_docs = len(doc_ids)
        self._size_boost = _size_boost(raw_counts)

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, snapshot: Snapshot, fields: tuple[str, ...] = ALL_FIELDS) -> "Index":
        if not snapshot.docs:
            raise EmptyCorpus(f"{snapshot.project}@{snapshot.version_label} has no documents")
        docs = sorted(snapshot.docs, key=lambda d: d.id)
        doc_ids = [d.id for d in docs]
        n = len(docs)
        built: dict[str, _FieldIndex] = {}
        raw_counts = np.zeros(n, dtype=np.int64)
        for field in fields:
            counts: list[Counter] = []
            df: Counter = Counter()
            for i, doc in enumerate(docs):
                c = Counter(tokenize(_doc_field_text(doc, field)))
                counts.append(c)
                df.update(c.keys())
                if field == CONTENT_FIELD:
                    raw_counts[i] = sum(c.values())
            terms = sorted(df)
            vocab = {t: j for j, t in enumerate(terms)}
            idf = np.array([math.log(n / df[t]) for t in terms], dtype=np.float64)
            postings: list[list[tuple[int, float]]] = [[] for _ in terms]
            for i, c in enumerate(counts):
                if not c:
                    continue
                tids = []
                vals = []
                for t, f in c.items():
                    j = vocab[t]
                    w = (1.0 + math.log(f)) * idf[j]
                    tids.append(j)
                    vals.append(w)
                norm = math.sqrt(sum(v * v for v in vals))
                if norm > 0.0:
                    for j, v in zip(tids, vals):
                        if v != 0.0:
                            postings[j].append((i, v / norm))
            indptr = np.zeros(len(terms) + 1, dtype=np.int64)
            flat_pos: list[int] = []
            flat_w: list[float] = []
            for j, row in enumerate(postings):
                row.sort()
                indptr[j + 1] = indptr[j] + len(row)
                for pos, w in row:
                    flat_pos.append(pos)
                    flat_w.append(w)
            built[field] = _FieldIndex(
                terms=terms,
                vocab=vocab,
                idf=idf,
                indptr=indptr,
                doc_pos=np.array(flat_pos, dtype=np.int32),
                weights=np.array(flat_w, dtype=np.float64),
            )
        key = f"{snapshot.project}@{snapshot.version_label}@{snapshot.granularity}"
        return cls(key, doc_ids, built, raw_counts)

    # -- lookups -------------------------------------------------------------

    def position(self, doc_id: str) -> int:
        try:
            return self._pos[doc_id]
        except KeyError:
            raise UnknownDoc(doc_id) from None

    def cache_key(self) -> str:
        payload = json.dumps(
            [self.snapshot_key, self.tokenizer_version, sorted(self.fields)],
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:32]

    # -- scoring -------------------------------------------------------------

    def _query_vector(self, tokens: list[str], field: str):
        fi = self.fields[field]
        items = []
        for t, f in Counter(tokens).items():
            j = fi.vocab.get(t)
            if j is None:
                continue
            w = (1.0 + math.log(f)) * fi.idf[j]
            if w != 0.0:
                items.append((j, w))
        if not items:
            return None
        items.sort()
        tids = np.array([j for j, _ in items], dtype=np.int64)
        ws = np.array([w for _, w in items], dtype=np.float64)
        norm = math.sqrt(float(ws @ ws))
        return tids, ws / norm

    def score_all(self, tokens: list[str], field: str) -> np.ndarray:
        """Cosine of the query against every document, one kernel pass."""
        q = self._query_vector(tokens, field)
        if q is None:
            return np.zeros(self.n_docs, dtype=np.float64)
        fi = self.fields[field]
        scores = kernels.accumulate_scores(
            q[0], q[1], fi.indptr, fi.doc_pos, fi.weights, self.n_docs
        )
        return np.clip(scores, 0.0, 1.0)

    def cosine_similarity(self, tokens: list[str], doc_id: str, field: str) -> float:
        """Single-document cosine via binary search into the postings."""
        pos = self.position(doc_id)
        q = self._query_vector(tokens, field)
        if q is None:
            return 0.0
        fi = self.fields[field]
        total = 0.0
        for j, w in zip(q[0], q[1]):
            lo, hi = fi.indptr[j], fi.indptr[j + 1]
            k = lo + np.searchsorted(fi.doc_pos[lo:hi], pos)
            if k < hi and fi.doc_pos[k] == pos:
                total += w * fi.weights[k]
        return min(max(total, 0.0), 1.0)

    def rvsm_all(self, tokens: list[str]) -> np.ndarray:
        return self._size_boost * self.score_all(tokens, CONTENT_FIELD)

    def rvsm_score(self, tokens: list[str], doc_id: str) -> float:
        pos = self.position(doc_id)
        return float(self._size_boost[pos]) * self.cosine_similarity(
            tokens, doc_id, CONTENT_FIELD
        )

    def structured_all(self, query_fields: dict[str, list[str]]) -> np.ndarray:
        """Sum of the 8 query-field x doc-field cosines for every document."""
        total = np.zeros(self.n_docs, dtype=np.float64)
        for qf in QUERY_FIELDS:
            tokens = query_fields.get(qf, [])
            for df in DOC_FIELDS:
                total += self.score_all(tokens, df)
        return total

    def structured_similarity(self, query_fields: dict[str, list[str]], doc_id: str) -> float:
        total = 0.0
        for qf in QUERY_FIELDS:
            tokens = query_fields.get(qf, [])
            for df in DOC_FIELDS:
                total += self.cosine_similarity(tokens, doc_id, df)
        return total

    # -- persistence -----------------------------------------------------------

    def dump(self, path: str) -> None:
        """Write the index as one .npz: arrays plus a JSON header."""
        arrays: dict[str, np.ndarray] = {"raw_counts": self.raw_counts}
        header = {
            "snapshot_key": self.snapshot_key,
            "tokenizer_version": self.tokenizer_version,
            "doc_ids": self.doc_ids,
            "fields": {},
        }
        for name, fi in self.fields.items():
            header["fields"][name] = fi.terms
            arrays[f"{name}__idf"] = fi.idf
            arrays[f"{name}__indptr"] = fi.indptr
            arrays[f"{name}__doc_pos"] = fi.doc_pos
            arrays[f"{name}__weights"] = fi.weights
        arrays["header"] = np.frombuffer(
            json.dumps(header, separators=(",", ":")).encode(), dtype=np.uint8
        )
        with open(path, "wb") as fh:
            np.savez_compressed(fh, **arrays)

    @classmethod
    def load(cls, path: str) -> "Index":
        with np.load(path) as data:
            header = json.loads(bytes(data["header"]).decode())
            fields = {}
            for name, terms in header["fields"].items():
                fields[name] = _FieldIndex(
                    terms=terms,
                    vocab={t: j for j, t in enumerate(terms)},
                    idf=data[f"{name}__idf"],
                    indptr=data[f"{name}__indptr"],
                    doc_pos=data[f"{name}__doc_pos"],
                    weights=data[f"{name}__weights"],
                )
            return cls(
                header["snapshot_key"],
                header["doc_ids"],
                fields,
                data["raw_counts"],
                header["tokenizer_version"],
            )


def _size_boost(raw_counts: np.ndarray) -> np.ndarray:
    lo = raw_counts.min() if len(raw_counts) else 0
    hi = raw_counts.max() if len(raw_counts) else 0
    if hi == lo:
        n = np.zeros(len(raw_counts), dtype=np.float64)
    else:
        n = (raw_counts - lo) / float(hi - lo)
    return 1.0 / (1.0 + np.exp(-n))


def query_tokens(summary: str, description: str) -> dict[str, list[str]]:
    """Tokenized query fields for structured retrieval."""
    return {"summary": tokenize(summary), "description": tokenize(description)}


def minmax01(values: np.ndarray) -> np.ndarray:
    """Min-max normalization; a constant vector maps to all zeros."""
    lo = float(values.min()) if len(values) else 0.0
    hi = float(values.max()) if len(values) else 0.0
    if hi == lo:
        return np.zeros(len(values), dtype=np.float64)
    return (values - lo) / (hi - lo)
