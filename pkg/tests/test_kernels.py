"""Backend equivalence: the compiled kernel and the pure-Python fallback
must produce bitwise-identical scores on arbitrary postings."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from methodloc.ir import _ranker_py, kernels


def _random_csr(rng, n_terms, n_docs, density=0.3):
    indptr = [0]
    doc_pos = []
    weights = []
    for _ in range(n_terms):
        docs = sorted(rng.choice(n_docs, size=rng.binomial(n_docs, density), replace=False))
        doc_pos.extend(docs)
        weights.extend(rng.random(len(docs)))
        indptr.append(len(doc_pos))
    return (
        np.array(indptr, dtype=np.int64),
        np.array(doc_pos, dtype=np.int32),
        np.array(weights, dtype=np.float64),
    )


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_backends_bitwise_equal_on_random_postings(seed):
    rng = np.random.default_rng(seed)
    n_terms, n_docs = 40, 25
    indptr, doc_pos, weights = _random_csr(rng, n_terms, n_docs)
    q_terms = np.array(sorted(rng.choice(n_terms, size=10, replace=False)), dtype=np.int64)
    q_weights = rng.random(10)
    a = kernels.accumulate_scores(q_terms, q_weights, indptr, doc_pos, weights, n_docs)
    b = _ranker_py.accumulate_scores(q_terms, q_weights, indptr, doc_pos, weights, n_docs)
    assert (a == b).all()


def test_empty_query_gives_zeros():
    indptr = np.zeros(1, dtype=np.int64)
    out = kernels.accumulate_scores(
        np.array([], dtype=np.int64), np.array([], dtype=np.float64),
        indptr, np.array([], dtype=np.int32), np.array([], dtype=np.float64), 4,
    )
    assert out.tolist() == [0.0] * 4


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_backends_agree_under_hypothesis_seeds(seed):
    rng = np.random.default_rng(seed)
    n_terms = int(rng.integers(1, 12))
    n_docs = int(rng.integers(1, 12))
    indptr, doc_pos, weights = _random_csr(rng, n_terms, n_docs, density=0.5)
    k = int(rng.integers(0, n_terms + 1))
    q_terms = np.array(sorted(rng.choice(n_terms, size=k, replace=False)), dtype=np.int64)
    q_weights = rng.random(k)
    a = kernels.accumulate_scores(q_terms, q_weights, indptr, doc_pos, weights, n_docs)
    b = _ranker_py.accumulate_scores(q_terms, q_weights, indptr, doc_pos, weights, n_docs)
    assert (a == b).all()
