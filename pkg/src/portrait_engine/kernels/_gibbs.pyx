# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled collapsed Gibbs sweep for LDA.

Mirrors kernels._gibbs_py operation for operation (same splitmix64 stream,
same floating-point evaluation order) so results are bitwise identical.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t

cnp.import_array()

cdef double _INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _next_uint64(uint64_t* state) nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _next_double(uint64_t* state) nogil:
    return <double>(_next_uint64(state) >> 11) * _INV_2_53


def gibbs_train(doc_ids, word_ids, int n_docs, int n_words, int k,
                double alpha, double beta, int iterations, seed):
    """Run `iterations` full sweeps; returns (z, doc_topic, topic_word)."""
    cdef cnp.ndarray[int32_t, ndim=1] docs = np.ascontiguousarray(doc_ids, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] words = np.ascontiguousarray(word_ids, dtype=np.int32)
    cdef Py_ssize_t n_tokens = docs.shape[0]
    if words.shape[0] != n_tokens:
        raise ValueError("doc_ids and word_ids must have equal length")

    cdef cnp.ndarray[int32_t, ndim=1] z = np.zeros(n_tokens, dtype=np.int32)
    cdef cnp.ndarray[int64_t, ndim=1] n_dk = np.zeros(n_docs * k, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] n_kw = np.zeros(k * n_words, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] n_k = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] probs = np.zeros(k, dtype=np.float64)

    cdef int32_t[::1] docs_v = docs
    cdef int32_t[::1] words_v = words
    cdef int32_t[::1] z_v = z
    cdef int64_t[::1] n_dk_v = n_dk
    cdef int64_t[::1] n_kw_v = n_kw
    cdef int64_t[::1] n_k_v = n_k
    cdef double[::1] probs_v = probs

    cdef uint64_t state = <uint64_t>(int(seed) & ((1 << 64) - 1))
    cdef double beta_sum = beta * n_words
    cdef Py_ssize_t i
    cdef int it, j, t, d, w
    cdef double total, p, u

    with nogil:
        for i in range(n_tokens):
            t = <int>(_next_double(&state) * k)
            if t >= k:
                t = k - 1
            z_v[i] = t
            n_dk_v[docs_v[i] * k + t] += 1
            n_kw_v[t * n_words + words_v[i]] += 1
            n_k_v[t] += 1

        for it in range(iterations):
            for i in range(n_tokens):
                d = docs_v[i]
                w = words_v[i]
                t = z_v[i]
                n_dk_v[d * k + t] -= 1
                n_kw_v[t * n_words + w] -= 1
                n_k_v[t] -= 1

                total = 0.0
                for j in range(k):
                    p = (n_kw_v[j * n_words + w] + beta) / (n_k_v[j] + beta_sum) * (
                        n_dk_v[d * k + j] + alpha
                    )
                    total += p
                    probs_v[j] = total

                u = _next_double(&state) * total
                t = 0
                while t < k - 1 and probs_v[t] <= u:
                    t += 1

                z_v[i] = t
                n_dk_v[d * k + t] += 1
                n_kw_v[t * n_words + w] += 1
                n_k_v[t] += 1

    return z, n_dk.reshape(n_docs, k), n_kw.reshape(k, n_words)
