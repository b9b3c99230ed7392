#!/usr/bin/env python3
"""Benchmark the compiled scoring kernel against the pure-Python fallback.

Builds a synthetic postings structure shaped like a real snapshot index
(Zipf-distributed document frequencies) and times repeated query scoring
through both backends. The two must also agree bitwise on every run.

Usage:
    python3 benchmarks/bench_ranker.py [--docs 200000] [--terms 50000]
                                       [--queries 200] [--query-len 25]
"""

import argparse
import time

import numpy as np

from methodloc.ir import _ranker_py, kernels


def build_postings(rng, n_terms: int, n_docs: int):
    ranks = np.arange(1, n_terms + 1, dtype=np.float64)
    df = np.maximum(1, (n_docs * 0.3 / ranks**0.9).astype(np.int64))
    df = np.minimum(df, n_docs)
    indptr = np.zeros(n_terms + 1, dtype=np.int64)
    indptr[1:] = np.cumsum(df)
    doc_pos = np.empty(indptr[-1], dtype=np.int32)
    for t in range(n_terms):
        doc_pos[indptr[t] : indptr[t + 1]] = np.sort(
            rng.choice(n_docs, size=df[t], replace=False)
        ).astype(np.int32)
    weights = rng.random(indptr[-1])
    return indptr, doc_pos, weights


def run(backend, name, queries, indptr, doc_pos, weights, n_docs):
    start = time.perf_counter()
    checksum = 0.0
    for q_terms, q_weights in queries:
        scores = backend.accumulate_scores(q_terms, q_weights, indptr, doc_pos, weights, n_docs)
        checksum += float(scores[0])
    elapsed = time.perf_counter() - start
    return elapsed, checksum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--docs", type=int, default=200_000)
    ap.add_argument("--terms", type=int, default=50_000)
    ap.add_argument("--queries", type=int, default=200)
    ap.add_argument("--query-len", type=int, default=25)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"building postings: {args.docs} docs, {args.terms} terms ...")
    indptr, doc_pos, weights = build_postings(rng, args.terms, args.docs)
    print(f"  {len(doc_pos):,} postings")

    queries = []
    for _ in range(args.queries):
        terms = np.sort(rng.choice(args.terms, size=args.query_len, replace=False)).astype(np.int64)
        queries.append((terms, rng.random(args.query_len)))

    backends = [(_ranker_py, "python fallback")]
    if kernels.BACKEND == "cython":
        backends.append((kernels, "cython kernel"))
    else:
        print("note: compiled extension not available; timing fallback only")

    results = {}
    for impl, name in backends:
        elapsed, checksum = run(impl, name, queries, indptr, doc_pos, weights, args.docs)
        per_query = elapsed / args.queries * 1e3
        results[name] = (elapsed, checksum)
        print(f"{name:18s} {elapsed:8.3f}s total   {per_query:8.3f} ms/query")

    if len(results) == 2:
        py, cy = results["python fallback"], results["cython kernel"]
        assert abs(py[1] - cy[1]) == 0.0, "backends disagree"
        print(f"speedup: {py[0] / cy[0]:.2f}x (results bitwise identical)")


if __name__ == "__main__":
    main()
