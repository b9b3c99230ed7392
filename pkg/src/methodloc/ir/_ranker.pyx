# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernel: term-at-a-time accumulation over postings.

Given a query as (term ids, weights) and a field's postings in CSR layout
(indptr over term ids, document positions, per-posting weights), produce a
dense score per document. This one loop dominates localization runtime:
it runs once per query field pair over every posting of every query term.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def accumulate_scores(
    cnp.int64_t[::1] query_terms,
    cnp.float64_t[::1] query_weights,
    cnp.int64_t[::1] indptr,
    cnp.int32_t[::1] doc_pos,
    cnp.float64_t[::1] weights,
    Py_ssize_t n_docs,
):
    """Dense ``scores[d] = sum_t q_w[t] * w[t, d]`` over the query terms."""
    out = np.zeros(n_docs, dtype=np.float64)
    cdef cnp.float64_t[::1] scores = out
    cdef Py_ssize_t i, j, lo, hi
    cdef cnp.int64_t t
    cdef cnp.float64_t qw
    for i in range(query_terms.shape[0]):
        t = query_terms[i]
        qw = query_weights[i]
        lo = indptr[t]
        hi = indptr[t + 1]
        for j in range(lo, hi):
            scores[doc_pos[j]] += qw * weights[j]
    return out
