"""Per-user characterizing topics: mentions, hashtags and word n-grams rated
by a blend of frequency and recency.

Each n length and each kind is ranked on its own shortlist before the lists
are merged, re-sorted, and cut to the top k. The frequency weight grows with
n because longer grams are rarer; all constants live in ScoreWeights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from portrait_engine.corpus import TokenKind, UserDocument, iter_ngrams, tokenize
from portrait_engine.vecspace import SparseVector

SUBGRAM_SUPPRESS_RATIO = 0.8


@dataclass(frozen=True)
class ScoreWeights:
    """alpha[n-1] weights the log-frequency term for n-grams of length n;
    the remainder weights the exponential recency decay with time constant
    tau_seconds."""

    alpha: tuple[float, float, float] = (0.5, 0.65, 0.8)
    tau_seconds: float = 30 * 86400.0

    def __post_init__(self):
        if len(self.alpha) != 3 or not all(0.0 <= a <= 1.0 for a in self.alpha):
            raise ValueError("alpha must be three weights in [0, 1]")
        if self.tau_seconds <= 0:
            raise ValueError("tau_seconds must be positive")


@dataclass(frozen=True)
class TopicCandidate:
    gram: str
    kind: str  # "mention" | "hashtag" | "word"
    n: int
    count: int
    last_used: int
    score: float
    display: str = ""

    def to_dict(self) -> dict:
        return {
            "gram": self.gram,
            "kind": self.kind,
            "n": self.n,
            "count": self.count,
            "last_used": self.last_used,
            "score": self.score,
            "display": self.display or self.gram,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TopicCandidate":
        return cls(
            data["gram"],
            data["kind"],
            data["n"],
            data["count"],
            data["last_used"],
            data["score"],
            data.get("display", ""),
        )


@dataclass
class PreferenceProfile:
    author_id: str
    topics: list[TopicCandidate] = field(default_factory=list)

    @property
    def as_vector(self) -> SparseVector:
        return SparseVector.from_weights({t.gram: t.score for t in self.topics})

    @property
    def grams(self) -> list[str]:
        return [t.gram for t in self.topics]

    def to_dict(self) -> dict:
        return {
            "author_id": self.author_id,
            "topics": [t.to_dict() for t in self.topics],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PreferenceProfile":
        return cls(
            data["author_id"],
            [TopicCandidate.from_dict(t) for t in data["topics"]],
        )


def score_candidate(
    count: int, last_used: int, now: int, n: int, weights: ScoreWeights
) -> float:
    """alpha_n * log(1 + count) + (1 - alpha_n) * exp(-(now - last_used)/tau)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if now < last_used:
        raise ValueError("now must not precede last_used")
    alpha = weights.alpha[n - 1]
    recency = math.exp(-(now - last_used) / weights.tau_seconds)
    return alpha * math.log1p(count) + (1.0 - alpha) * recency


def _is_stopword_gram(gram: str, n: int, stopwords: frozenset[str]) -> bool:
    if not stopwords:
        return False
    if n == 1:
        return gram in stopwords
    words = gram.split(" ")
    return words[0] in stopwords or words[-1] in stopwords


_RANK_KEY = lambda t: (-t.score, -t.count, t.gram)  # noqa: E731


def build_preferences(
    user: UserDocument,
    k: int,
    weights: ScoreWeights | None = None,
    stopwords: frozenset[str] = frozenset(),
    now: int | None = None,
    shortlist: int | None = None,
) -> PreferenceProfile:
    """Rank word n-grams (n=1..3), mentions, and hashtags on separate
    shortlists, merge, suppress unigrams shadowed by a longer gram, and keep
    the top k. `now` defaults to the user's latest post timestamp."""
    if k < 1:
        raise ValueError("k must be >= 1")
    weights = weights or ScoreWeights()
    shortlist = shortlist or k
    if now is None:
        now = user.posts[-1].timestamp if user.posts else 0

    # (kind, n, gram) -> [count, last_used, display]
    stats: dict[tuple[str, int, str], list] = {}
    for post in user.posts:
        tokens = tokenize(post.text)
        for n in (1, 2, 3):
            for gram, display in iter_ngrams(tokens, n):
                if n == 1:
                    if gram.startswith("#"):
                        kind = TokenKind.HASHTAG.value
                    elif gram.startswith("@"):
                        kind = TokenKind.MENTION.value
                    else:
                        kind = TokenKind.WORD.value
                else:
                    kind = TokenKind.WORD.value
                if kind == TokenKind.WORD.value and _is_stopword_gram(gram, n, stopwords):
                    continue
                entry = stats.setdefault((kind, n, gram), [0, 0, display])
                entry[0] += 1
                if post.timestamp > entry[1]:
                    entry[1] = post.timestamp

    candidates: dict[tuple[str, int], list[TopicCandidate]] = {}
    for (kind, n, gram), (count, last_used, display) in stats.items():
        cand = TopicCandidate(
            gram=gram,
            kind=kind,
            n=n,
            count=count,
            last_used=last_used,
            score=score_candidate(count, last_used, now, n, weights),
            display=display,
        )
        candidates.setdefault((kind, n), []).append(cand)

    merged: list[TopicCandidate] = []
    for group in candidates.values():
        group.sort(key=_RANK_KEY)
        merged.extend(group[:shortlist])

    merged = _suppress_subgrams(merged)
    merged.sort(key=_RANK_KEY)
    return PreferenceProfile(user.author_id, merged[:k])


def _suppress_subgrams(candidates: list[TopicCandidate]) -> list[TopicCandidate]:
    """Drop a word unigram when a shortlisted bigram/trigram contains it and
    occurs nearly as often (count ratio >= SUBGRAM_SUPPRESS_RATIO)."""
    unigram_counts = {
        c.gram: c.count
        for c in candidates
        if c.n == 1 and c.kind == TokenKind.WORD.value
    }
    suppressed: set[str] = set()
    for cand in candidates:
        if cand.n < 2:
            continue
        for word in cand.gram.split(" "):
            count = unigram_counts.get(word)
            if count is not None and cand.count >= SUBGRAM_SUPPRESS_RATIO * count:
                suppressed.add(word)
    return [
        c
        for c in candidates
        if not (
            c.n == 1 and c.kind == TokenKind.WORD.value and c.gram in suppressed
        )
    ]
