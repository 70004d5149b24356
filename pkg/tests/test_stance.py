from __future__ import annotations

import logging
import math

import pytest
from hypothesis import given, strategies as st

from portrait_engine.corpus import UserDocument, tokenize
from portrait_engine.stance import (
    IssueConfig,
    StanceProfile,
    build_stance_vectors,
    issue_idf_table,
    user_stance,
    user_vector,
    view_gap,
)
from portrait_engine.vecspace import IdfTable
from tests.conftest import make_post, make_user

ISSUE = IssueConfig.from_dict(
    {
        "issue": "vida",
        "stances": [
            {"name": "pro_choice", "keywords": ["#prochoice", "#libre", "eleccion"]},
            {"name": "pro_life", "keywords": ["#provida", "#sialavida", "vida"]},
        ],
        "general_keywords": ["aborto"],
    }
)


def test_issue_config_requires_two_stances():
    with pytest.raises(ValueError):
        IssueConfig("x", (("only", frozenset({"a"})),))


def test_issue_config_rejects_overlapping_keywords():
    with pytest.raises(ValueError):
        IssueConfig(
            "x",
            (
                ("a", frozenset({"#k", "#shared"})),
                ("b", frozenset({"#shared"})),
            ),
        )


def test_issue_config_normalizes_keywords():
    cfg = IssueConfig.from_dict(
        {
            "issue": "x",
            "stances": [
                {"name": "a", "keywords": ["#Sí"]},
                {"name": "b", "keywords": ["No"]},
            ],
        }
    )
    assert cfg.stances[0][1] == frozenset({"#si"})
    assert cfg.stances[1][1] == frozenset({"no"})


def test_stance_vectors_zero_when_no_matches(caplog):
    docs = [make_user("u", ["nada que ver aqui"])]
    table = IdfTable(1, {"nada": 1})
    with caplog.at_level(logging.WARNING):
        vectors = build_stance_vectors(docs, ISSUE, table)
    assert all(v.vector.norm == 0.0 for v in vectors)
    assert any("matched no posts" in r.message for r in caplog.records)


def test_stance_vector_pools_matching_post_tokens():
    docs = [make_user("u", ["#provida siempre", "otra cosa"])]
    table = issue_idf_table(docs, ISSUE, scope="all")
    vectors = {v.stance_name: v.vector for v in build_stance_vectors(docs, ISSUE, table)}
    assert set(vectors["pro_life"].weights) <= {"#provida", "siempre"}
    assert "#provida" in vectors["pro_life"].weights
    assert vectors["pro_choice"].norm == 0.0


def test_stance_vectors_match_pool_then_weight_oracle():
    docs = [
        make_user("u1", ["#prochoice eleccion cuerpo", "gatos y perros"]),
        make_user("u2", ["#provida vida futuro", "#prochoice decidir"]),
        make_user("u3", ["cocina sana"]),
    ]
    table = issue_idf_table(docs, ISSUE)
    vectors = {v.stance_name: v.vector for v in build_stance_vectors(docs, ISSUE, table)}

    # independent pooling: collect matching posts by hand, count terms, weight
    from collections import Counter

    for name, keywords in ISSUE.stances:
        pooled = Counter()
        for doc in docs:
            for post in doc.posts:
                toks = tokenize(post.text)
                if any(t.surface in keywords for t in toks):
                    pooled.update(
                        t.surface for t in toks if t.kind.value in ("word", "hashtag")
                    )
        expected = {
            term: cnt * math.log(table.doc_count / table.doc_freq[term])
            for term, cnt in pooled.items()
            if table.doc_freq.get(term, table.doc_count) != table.doc_count
        }
        assert set(vectors[name].weights) == {t for t, w in expected.items() if w != 0}
        for term, w in expected.items():
            if w != 0:
                assert vectors[name].weights[term] == pytest.approx(w, abs=1e-12)


def test_user_stance_identity_with_pool():
    # one user IS the entire pro_life pool, so cosine with that vector is 1
    docs = [
        make_user("a", ["#provida vida esperanza"]),
        make_user("b", ["#prochoice eleccion"]),
    ]
    table = issue_idf_table(docs, ISSUE)
    vectors = build_stance_vectors(docs, ISSUE, table)
    profile = user_stance(docs[0], vectors, table)
    assert profile.similarities["pro_life"] == pytest.approx(1.0, abs=1e-12)
    assert profile.similarities["pro_choice"] == 0.0
    assert profile.tendency == pytest.approx(-1.0, abs=1e-12)


def test_user_stance_disjoint_vocabulary_all_zero():
    docs = [
        make_user("a", ["#provida vida"]),
        make_user("b", ["#prochoice eleccion"]),
        make_user("c", ["cocina rica hoy"]),
    ]
    table = issue_idf_table(docs, ISSUE, scope="all")
    vectors = build_stance_vectors(docs, ISSUE, table)
    profile = user_stance(docs[2], vectors, table)
    assert profile.similarities == {"pro_choice": 0.0, "pro_life": 0.0}
    assert profile.tendency == 0.0


def test_user_stance_three_vs_one_keyword_tendency_positive():
    docs = [
        make_user("seed_choice", ["#prochoice eleccion decidir"]),
        make_user("seed_life", ["#provida vida rezar"]),
        make_user("mixed", ["#prochoice hoy", "eleccion ya", "#libre manana", "vida una"]),
    ]
    table = issue_idf_table(docs, ISSUE)
    vectors = build_stance_vectors(docs, ISSUE, table)
    profile = user_stance(docs[2], vectors, table)
    assert profile.tendency > 0.0


def test_user_stance_empty_user_is_zero():
    empty = UserDocument.from_posts("nobody", [])
    docs = [make_user("a", ["#provida vida"]), make_user("b", ["#prochoice eleccion"])]
    table = issue_idf_table(docs, ISSUE)
    vectors = build_stance_vectors(docs, ISSUE, table)
    profile = user_stance(empty, vectors, table)
    assert all(s == 0.0 for s in profile.similarities.values())


def test_retweets_change_nothing():
    base = [make_post("p1", "u", "#provida vida", ts=10)]
    with_rt = base + [make_post("p2", "u", "#prochoice eleccion decidir", ts=20, rt=True)]
    docs_base = [UserDocument.from_posts("u", base), make_user("o", ["#prochoice eleccion"])]
    docs_rt = [UserDocument.from_posts("u", with_rt), make_user("o", ["#prochoice eleccion"])]

    table_base = issue_idf_table(docs_base, ISSUE)
    table_rt = issue_idf_table(docs_rt, ISSUE)
    assert table_base == table_rt  # retweets never enter the reference corpus

    vec_base = build_stance_vectors(docs_base, ISSUE, table_base)
    vec_rt = build_stance_vectors(docs_rt, ISSUE, table_rt)
    assert [(v.stance_name, v.vector.weights) for v in vec_base] == [
        (v.stance_name, v.vector.weights) for v in vec_rt
    ]
    assert user_stance(docs_base[0], vec_base, table_base) == user_stance(
        docs_rt[0], vec_rt, table_rt
    )


# --- view gap -------------------------------------------------------------------


def _profile(uid, choice, life):
    return StanceProfile(uid, {"pro_choice": choice, "pro_life": life}, choice - life)


def test_view_gap_identity():
    a = _profile("a", 0.4, 0.2)
    assert view_gap(a, a) == 0.0


def test_view_gap_orthogonal_extremes():
    assert view_gap(_profile("a", 1, 0), _profile("b", 0, 1)) == pytest.approx(
        math.sqrt(2), abs=1e-12
    )


def test_view_gap_three_four_five():
    a = _profile("a", 0.3, 0.1)
    b = _profile("b", 0.34, 0.13)
    assert view_gap(a, b) == pytest.approx(0.05, abs=1e-12)


def test_view_gap_mismatched_stances():
    a = _profile("a", 0.3, 0.1)
    b = StanceProfile("b", {"pro_choice": 0.3, "otra": 0.1}, 0.2)
    with pytest.raises(ValueError):
        view_gap(a, b)


_sim = st.floats(min_value=0.0, max_value=1.0)


@given(_sim, _sim, _sim, _sim, _sim, _sim)
def test_view_gap_metric_properties(a1, a2, b1, b2, c1, c2):
    a, b, c = _profile("a", a1, a2), _profile("b", b1, b2), _profile("c", c1, c2)
    assert view_gap(a, b) == view_gap(b, a)
    assert view_gap(a, a) == 0.0
    assert view_gap(a, c) <= view_gap(a, b) + view_gap(b, c) + 1e-12
    assert view_gap(a, b) <= math.sqrt(2) + 1e-12
    assert abs(a.tendency) <= 1.0 + 1e-12


def test_tendency_sign_flips_when_stance_pair_swapped():
    docs = [
        make_user("a", ["#provida vida", "eleccion tambien"]),
        make_user("b", ["#prochoice eleccion"]),
    ]
    table = issue_idf_table(docs, ISSUE)
    vectors = build_stance_vectors(docs, ISSUE, table)
    forward = user_stance(docs[0], vectors, table)
    reverse = user_stance(docs[0], list(reversed(vectors)), table)
    assert forward.tendency == -reverse.tendency != 0.0
