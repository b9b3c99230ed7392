"""Pure-Python twin of the compiled scoring kernel.

Same contract and, by construction, the same floating-point result: both
backends add each term's contribution to a document in query-term order,
so the IEEE operation sequence per document is identical.
"""

from __future__ import annotations

import numpy as np


def accumulate_scores(query_terms, query_weights, indptr, doc_pos, weights, n_docs):
    scores = np.zeros(n_docs, dtype=np.float64)
    for t, qw in zip(query_terms, query_weights):
        lo, hi = indptr[t], indptr[t + 1]
        scores[doc_pos[lo:hi]] += qw * weights[lo:hi]
    return scores
