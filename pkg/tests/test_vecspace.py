from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from portrait_engine.vecspace import (
    IdfTable,
    SparseVector,
    ZERO_VECTOR,
    cosine,
    idf,
    tfidf_vector,
)

# --- idf -----------------------------------------------------------------------


def test_idf_ubiquitous_term_is_zero():
    table = IdfTable(10, {"el": 10})
    assert idf(table, "el") == 0.0


def test_idf_rare_term():
    table = IdfTable(100, {"raro": 1})
    assert idf(table, "raro") == pytest.approx(math.log(100), abs=1e-12)


def test_idf_unseen_term_is_zero():
    assert idf(IdfTable(10, {"a": 1}), "nunca") == 0.0


def test_idf_table_validates():
    with pytest.raises(ValueError):
        IdfTable(0, {})
    with pytest.raises(ValueError):
        IdfTable(5, {"x": 6})
    with pytest.raises(ValueError):
        IdfTable(5, {"x": 0})


def test_idf_table_from_documents():
    table = IdfTable.from_documents([{"a", "b"}, {"a"}, {"c"}])
    assert table.doc_count == 3
    assert table.doc_freq == {"a": 2, "b": 1, "c": 1}


# --- tfidf ----------------------------------------------------------------------


def test_tfidf_empty_counts():
    vec = tfidf_vector({}, IdfTable(10, {"a": 5}))
    assert vec.weights == {} and vec.norm == 0.0


def test_tfidf_worked_example():
    vec = tfidf_vector({"a": 2}, IdfTable(10, {"a": 5}))
    assert vec.weights["a"] == pytest.approx(2 * math.log(2), abs=1e-12)


def test_tfidf_drops_df_equals_n():
    vec = tfidf_vector({"a": 3, "b": 1}, IdfTable(10, {"a": 10, "b": 2}))
    assert "a" not in vec.weights and "b" in vec.weights


def test_sparse_vector_norm_invariant():
    vec = SparseVector.from_weights({"a": 3.0, "b": 4.0})
    assert vec.norm == pytest.approx(5.0, rel=1e-9)
    assert vec.norm**2 == pytest.approx(sum(w * w for w in vec.weights.values()), rel=1e-9)


def test_sparse_vector_rejects_negative():
    with pytest.raises(ValueError):
        SparseVector.from_weights({"a": -1.0})


# --- cosine -----------------------------------------------------------------------


def test_cosine_identity():
    u = SparseVector.from_weights({"a": 2.0, "b": 1.0})
    assert cosine(u, u) == pytest.approx(1.0, abs=1e-12)


def test_cosine_disjoint_supports():
    u = SparseVector.from_weights({"a": 1.0})
    v = SparseVector.from_weights({"b": 1.0})
    assert cosine(u, v) == 0.0


def test_cosine_worked_example():
    u = SparseVector.from_weights({"a": 1.0, "b": 1.0})
    v = SparseVector.from_weights({"a": 1.0})
    assert cosine(u, v) == pytest.approx(0.7071068, abs=1e-7)


def test_cosine_zero_vector():
    assert cosine(ZERO_VECTOR, SparseVector.from_weights({"a": 1.0})) == 0.0


_weights = st.dictionaries(
    st.sampled_from("abcdefgh"),
    st.floats(min_value=0.01, max_value=100.0),
    max_size=6,
)


@given(_weights, _weights)
def test_cosine_symmetric_and_bounded(wa, wb):
    u, v = SparseVector.from_weights(wa), SparseVector.from_weights(wb)
    assert cosine(u, v) == cosine(v, u)
    assert 0.0 <= cosine(u, v) <= 1.0


@given(_weights, _weights, st.floats(min_value=0.01, max_value=50.0))
def test_cosine_scale_invariant(wa, wb, scale):
    u, v = SparseVector.from_weights(wa), SparseVector.from_weights(wb)
    scaled = SparseVector.from_weights({t: w * scale for t, w in wa.items()})
    assert cosine(scaled, v) == pytest.approx(cosine(u, v), abs=1e-9)


# --- brute-force oracle -------------------------------------------------------------


def brute_force_tfidf(documents: list[dict]) -> list[dict]:
    """Independent two-pass implementation: first pass counts document
    frequencies, second pass weighs every document."""
    df: dict[str, int] = {}
    for doc in documents:
        for term in doc:
            df[term] = df.get(term, 0) + 1
    n = len(documents)
    out = []
    for doc in documents:
        weights = {}
        for term, count in doc.items():
            w = count * math.log(n / df[term])
            if w != 0.0:
                weights[term] = w
        out.append(weights)
    return out


def brute_force_cosine(wa: dict, wb: dict) -> float:
    dot = sum(wa[t] * wb[t] for t in sorted(set(wa) & set(wb)))
    na = math.sqrt(sum(w * w for w in wa.values()))
    nb = math.sqrt(sum(w * w for w in wb.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def test_tfidf_matches_brute_force_two_pass():
    rng = random.Random(7)
    vocab = [f"t{i}" for i in range(60)]
    documents = [
        {t: rng.randint(1, 5) for t in rng.sample(vocab, rng.randint(1, 12))}
        for _ in range(40)
    ]
    table = IdfTable.from_documents(set(d) for d in documents)
    expected = brute_force_tfidf(documents)
    vectors = [tfidf_vector(doc, table) for doc in documents]
    for vec, exp in zip(vectors, expected):
        assert set(vec.weights) == set(exp)
        for term, w in exp.items():
            assert vec.weights[term] == pytest.approx(w, abs=1e-12)
    for i in range(0, len(vectors), 7):
        for j in range(i, len(vectors), 5):
            assert cosine(vectors[i], vectors[j]) == pytest.approx(
                brute_force_cosine(expected[i], expected[j]), abs=1e-12
            )
