from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from portrait_engine.corpus import UserDocument
from portrait_engine.preferences import (
    PreferenceProfile,
    ScoreWeights,
    TopicCandidate,
    build_preferences,
    score_candidate,
)
from tests.conftest import make_post, make_user

W = ScoreWeights()


# --- score_candidate -------------------------------------------------------------


def test_score_fresh_item():
    for alpha in (0.0, 0.3, 1.0):
        w = ScoreWeights(alpha=(alpha, alpha, alpha))
        assert score_candidate(1, 100, 100, 1, w) == pytest.approx(
            alpha * math.log(2) + (1 - alpha), abs=1e-12
        )


def test_score_decay_vanishes_for_ancient_items():
    w = ScoreWeights(alpha=(0.5, 0.65, 0.8), tau_seconds=60.0)
    old = score_candidate(10, 0, 10_000_000, 2, w)
    assert old == pytest.approx(0.65 * math.log(11), abs=1e-9)


def test_score_worked_example():
    w = ScoreWeights(alpha=(0.5, 0.65, 0.8), tau_seconds=7 * 86400.0)
    got = score_candidate(10, 0, 7 * 86400, 1, w)
    assert got == pytest.approx(0.5 * math.log(11) + 0.5 * math.exp(-1), abs=1e-12)


def test_score_rejects_future_last_used():
    with pytest.raises(ValueError):
        score_candidate(1, 200, 100, 1, W)
    with pytest.raises(ValueError):
        score_candidate(0, 0, 100, 1, W)


@given(
    st.integers(min_value=1, max_value=1000),
    st.integers(min_value=1, max_value=1000),
    st.integers(min_value=0, max_value=10_000),
    st.integers(min_value=1, max_value=3),
)
def test_score_monotone_in_count(c1, c2, age, n):
    lo, hi = sorted((c1, c2))
    assert score_candidate(lo, 0, age, n, W) <= score_candidate(hi, 0, age, n, W)


@given(
    st.integers(min_value=1, max_value=1000),
    st.integers(min_value=0, max_value=10_000),
    st.integers(min_value=0, max_value=10_000),
    st.integers(min_value=1, max_value=3),
)
def test_score_monotone_in_recency(count, age1, age2, n):
    now = 20_000
    older, newer = now - max(age1, age2), now - min(age1, age2)
    assert score_candidate(count, older, now, n, W) <= score_candidate(
        count, newer, now, n, W
    )


# --- build_preferences -------------------------------------------------------------


def test_repeated_hashtag_is_top_topic():
    user = make_user("u", ["#d3js rocks", "more #d3js today", "#d3js again"])
    profile = build_preferences(user, k=5)
    assert profile.topics[0].gram == "#d3js"
    assert profile.topics[0].kind == "hashtag"


def test_tie_break_lexicographic():
    # "bb" and "aa" in separate posts with equal timestamps: same count, same
    # recency, so the lexicographically smaller gram wins
    posts = [
        make_post("p1", "u", "bb", ts=500),
        make_post("p2", "u", "aa", ts=500),
    ]
    profile = build_preferences(UserDocument.from_posts("u", posts), k=1)
    assert profile.topics[0].gram == "aa"


def test_empty_user_is_valid():
    profile = build_preferences(UserDocument.from_posts("u", []), k=3)
    assert profile.topics == []
    assert profile.as_vector.norm == 0.0


def test_stopword_grams_excluded():
    user = make_user("u", ["la casa de playa", "la casa grande"])
    profile = build_preferences(user, k=20, stopwords=frozenset({"la", "de"}))
    grams = profile.grams
    assert "la" not in grams
    assert "la casa" not in grams  # leading stopword
    assert "casa de playa" in grams  # interior stopword allowed
    assert "casa" in grams or "la casa" not in grams


def test_mentions_and_hashtags_ranked_as_own_kinds():
    user = make_user("u", ["@ana hola", "@ana otra", "#tag hola"])
    profile = build_preferences(user, k=10)
    kinds = {t.gram: t.kind for t in profile.topics}
    assert kinds["@ana"] == "mention"
    assert kinds["#tag"] == "hashtag"
    assert kinds["hola"] == "word"


def test_subgram_suppression():
    # "book club" always appears together: the unigrams add nothing
    user = make_user("u", ["book club tonight", "book club again", "book club forever"])
    profile = build_preferences(user, k=10)
    grams = profile.grams
    assert "book club" in grams
    assert "book" not in grams and "club" not in grams


def test_subgram_kept_when_unigram_stands_alone():
    texts = ["book club now"] + ["book"] * 9
    profile = build_preferences(make_user("u", texts), k=20)
    grams = profile.grams
    assert "book" in grams  # 10 uses vs 1 inside the bigram: keeps its place
    assert "book club" in grams


def test_profile_limited_to_k_and_sorted():
    texts = [f"palabra{i} " * (i + 1) for i in range(12)]
    profile = build_preferences(make_user("u", texts), k=4)
    assert len(profile.topics) == 4
    scores = [t.score for t in profile.topics]
    assert scores == sorted(scores, reverse=True)


def test_matches_brute_force_oracle():
    user = make_user(
        "u",
        [
            "cafe con leche",
            "cafe solo",
            "#cafe siempre @barista",
            "pan con palta",
            "palta pan palta",
            "la vida misma",
        ],
    )
    k = 10
    profile = build_preferences(user, k)

    # brute force: enumerate every candidate, score, sort, truncate
    from collections import defaultdict

    from portrait_engine.corpus import iter_ngrams, tokenize

    now = user.posts[-1].timestamp
    seen: dict = defaultdict(lambda: [0, 0])
    for post in user.posts:
        toks = tokenize(post.text)
        for n in (1, 2, 3):
            for gram, _ in iter_ngrams(toks, n):
                if n == 1 and gram.startswith("#"):
                    kind = "hashtag"
                elif n == 1 and gram.startswith("@"):
                    kind = "mention"
                else:
                    kind = "word"
                entry = seen[(kind, n, gram)]
                entry[0] += 1
                entry[1] = max(entry[1], post.timestamp)
    scored = []
    for (kind, n, gram), (count, last) in seen.items():
        s = W.alpha[n - 1] * math.log1p(count) + (1 - W.alpha[n - 1]) * math.exp(
            -(now - last) / W.tau_seconds
        )
        scored.append((gram, kind, n, count, s))
    # apply the same suppression rule
    unigram_counts = {g: c for g, kd, n, c, s in scored if n == 1 and kd == "word"}
    drop = set()
    for g, kd, n, c, s in scored:
        if n >= 2:
            for word in g.split():
                if word in unigram_counts and c >= 0.8 * unigram_counts[word]:
                    drop.add(word)
    scored = [t for t in scored if not (t[2] == 1 and t[1] == "word" and t[0] in drop)]
    scored.sort(key=lambda t: (-t[4], -t[3], t[0]))
    expected = [(g, kd) for g, kd, n, c, s in scored[:k]]

    assert [(t.gram, t.kind) for t in profile.topics] == expected
    for topic, (_, _, _, _, s) in zip(profile.topics, scored):
        assert topic.score == pytest.approx(s, abs=1e-12)


def test_determinism():
    texts = ["uno dos tres", "#uno @dos", "tres tres uno"]
    a = build_preferences(make_user("u", texts), k=8)
    b = build_preferences(make_user("u", texts), k=8)
    assert a == b


def test_as_vector_support_is_topic_grams():
    user = make_user("u", ["hola mundo", "hola otra vez"])
    profile = build_preferences(user, k=3)
    assert set(profile.as_vector.weights) <= set(profile.grams)
    for topic in profile.topics:
        assert profile.as_vector.weights[topic.gram] == topic.score
        assert topic.score >= 0.0 and math.isfinite(topic.score)


def test_roundtrip_serialization():
    user = make_user("u", ["hola mundo", "#tag @ana", "hola"])
    profile = build_preferences(user, k=5)
    again = PreferenceProfile.from_dict(profile.to_dict())
    assert again == profile
