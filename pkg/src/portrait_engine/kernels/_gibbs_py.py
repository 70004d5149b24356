"""Pure-Python collapsed Gibbs sweep for LDA.

Reference implementation for the compiled kernel: every arithmetic operation
happens in the same order on the same IEEE-754 doubles, driven by the same
splitmix64 stream, so the two backends agree bit for bit.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


class SplitMix64:
    """Deterministic 64-bit generator; doubles take the top 53 bits."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_uint64() >> 11) * _INV_2_53


def gibbs_train(doc_ids, word_ids, n_docs, n_words, k, alpha, beta, iterations, seed):
    """Run `iterations` full sweeps of collapsed Gibbs sampling.

    doc_ids / word_ids are per-token int arrays. Returns (z, doc_topic,
    topic_word) count arrays from the final sweep.
    """
    n_tokens = len(doc_ids)
    if len(word_ids) != n_tokens:
        raise ValueError("doc_ids and word_ids must have equal length")
    docs = [int(d) for d in doc_ids]
    words = [int(w) for w in word_ids]

    rng = SplitMix64(seed)
    z = [0] * n_tokens
    n_dk = [0] * (n_docs * k)
    n_kw = [0] * (k * n_words)
    n_k = [0] * k

    for i in range(n_tokens):
        t = int(rng.next_double() * k)
        if t >= k:
            t = k - 1
        z[i] = t
        n_dk[docs[i] * k + t] += 1
        n_kw[t * n_words + words[i]] += 1
        n_k[t] += 1

    beta_sum = beta * n_words
    probs = [0.0] * k
    for _ in range(iterations):
        for i in range(n_tokens):
            d = docs[i]
            w = words[i]
            t = z[i]
            n_dk[d * k + t] -= 1
            n_kw[t * n_words + w] -= 1
            n_k[t] -= 1

            total = 0.0
            for j in range(k):
                p = (n_kw[j * n_words + w] + beta) / (n_k[j] + beta_sum) * (
                    n_dk[d * k + j] + alpha
                )
                total += p
                probs[j] = total

            u = rng.next_double() * total
            t = 0
            while t < k - 1 and probs[t] <= u:
                t += 1

            z[i] = t
            n_dk[d * k + t] += 1
            n_kw[t * n_words + w] += 1
            n_k[t] += 1

    return (
        np.asarray(z, dtype=np.int32),
        np.asarray(n_dk, dtype=np.int64).reshape(n_docs, k),
        np.asarray(n_kw, dtype=np.int64).reshape(k, n_words),
    )
