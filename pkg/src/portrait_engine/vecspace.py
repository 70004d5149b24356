"""Sparse term-weight vectors, TF-IDF weighting, and cosine similarity.

TF is the raw count and IDF is ln(N/df); terms never seen in the reference
corpus get IDF 0 and therefore drop out of every vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping


@dataclass(frozen=True)
class SparseVector:
    """Immutable term->weight mapping with a cached Euclidean norm.
    Zero-weight entries are never stored."""

    weights: Mapping[str, float]
    norm: float

    @classmethod
    def from_weights(cls, weights: Mapping[str, float]) -> "SparseVector":
        clean = {t: float(w) for t, w in weights.items() if w != 0.0}
        for term, w in clean.items():
            if w < 0.0:
                raise ValueError(f"negative weight for term {term!r}")
        norm = math.sqrt(sum(w * w for w in clean.values()))
        return cls(clean, norm)

    def dot(self, other: "SparseVector") -> float:
        # summed in sorted term order so the result is symmetric and
        # independent of dict construction order
        a, b = self.weights, other.weights
        if len(b) < len(a):
            a, b = b, a
        return sum(a[t] * b[t] for t in sorted(t for t in a if t in b))

    def __len__(self) -> int:
        return len(self.weights)

    def __bool__(self) -> bool:
        return bool(self.weights)


ZERO_VECTOR = SparseVector({}, 0.0)


@dataclass(frozen=True)
class IdfTable:
    """Document counts backing IDF: N documents, per-term document frequency."""

    doc_count: int
    doc_freq: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.doc_count < 1:
            raise ValueError("doc_count must be >= 1")
        for term, df in self.doc_freq.items():
            if not 1 <= df <= self.doc_count:
                raise ValueError(f"df out of range for term {term!r}: {df}")

    @classmethod
    def from_documents(cls, documents: Iterable[Iterable[str]]) -> "IdfTable":
        doc_freq: dict[str, int] = {}
        n = 0
        for doc in documents:
            n += 1
            for term in set(doc):
                doc_freq[term] = doc_freq.get(term, 0) + 1
        if n == 0:
            raise ValueError("IdfTable requires at least one document")
        return cls(n, doc_freq)


def idf(table: IdfTable, term: str) -> float:
    """ln(N/df). Unseen terms are treated as ubiquitous (df = N, idf 0)."""
    df = table.doc_freq.get(term)
    if df is None:
        return 0.0
    return math.log(table.doc_count / df)


def tfidf_vector(token_counts: Mapping[str, int], table: IdfTable) -> SparseVector:
    """Weight each term by count * idf; zero weights are dropped."""
    weights = {}
    for term, count in token_counts.items():
        w = count * idf(table, term)
        if w != 0.0:
            weights[term] = w
    return SparseVector.from_weights(weights)


def cosine(u: SparseVector, v: SparseVector) -> float:
    """dot(u, v) / (|u| |v|); 0 when either vector is zero. Weights are
    nonnegative, so the result lies in [0, 1]."""
    if u.norm == 0.0 or v.norm == 0.0:
        return 0.0
    value = u.dot(v) / (u.norm * v.norm)
    # guard against rounding drift just above 1
    return min(value, 1.0) if value > 0.0 else max(value, 0.0)
