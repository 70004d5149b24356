"""Benchmark the collapsed Gibbs sweep: compiled kernel vs pure-Python twin.

Usage: python benchmarks/bench_gibbs.py [--docs 400] [--doc-len 60] [--k 20]
                                        [--iters 50] [--vocab 500]

Both backends draw from the same splitmix64 stream, so besides timing, the
script verifies the outputs are bitwise identical.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from portrait_engine.kernels import available_backends


def make_problem(n_docs: int, doc_len: int, vocab: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    doc_ids = np.repeat(np.arange(n_docs, dtype=np.int32), doc_len)
    word_ids = rng.integers(0, vocab, n_docs * doc_len).astype(np.int32)
    return doc_ids, word_ids


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=400)
    parser.add_argument("--doc-len", type=int, default=60)
    parser.add_argument("--vocab", type=int, default=500)
    parser.add_argument("--k", type=int, default=20)
    parser.add_argument("--iters", type=int, default=50)
    args = parser.parse_args()

    doc_ids, word_ids = make_problem(args.docs, args.doc_len, args.vocab)
    n_tokens = len(doc_ids)
    backends = available_backends()
    print(f"problem: {args.docs} docs x {args.doc_len} tokens, vocab {args.vocab}, "
          f"k={args.k}, {args.iters} sweeps ({n_tokens * args.iters:,} token updates)")

    results = {}
    timings = {}
    for name in sorted(backends):
        fn = backends[name]
        t0 = time.perf_counter()
        results[name] = fn(doc_ids, word_ids, args.docs, args.vocab, args.k,
                           50.0 / args.k, 0.01, args.iters, 12345)
        timings[name] = time.perf_counter() - t0
        rate = n_tokens * args.iters / timings[name]
        print(f"  {name:>7}: {timings[name]:8.3f}s  ({rate / 1e6:6.2f} M token-updates/s)")

    if len(results) == 2:
        pure, compiled = results["pure"], results["cython"]
        identical = all(np.array_equal(a, b) for a, b in zip(pure, compiled))
        print(f"outputs bitwise identical: {identical}")
        print(f"speedup: {timings['pure'] / timings['cython']:.1f}x")
    else:
        print("compiled kernel unavailable; only the pure backend was timed")


if __name__ == "__main__":
    main()
