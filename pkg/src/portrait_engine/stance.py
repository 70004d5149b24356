"""Stance vectors for a configured sensitive issue, per-user stance profiles,
view gaps, and tendencies.

Each stance is described by a keyword set; all non-retweet posts containing at
least one of those keywords are pooled and TF-IDF weighted into the stance
vector. A user's stance is the vector of cosine similarities between their own
(retweet-free) TF-IDF vector and every stance vector; the view gap between two
users is the Euclidean distance between those similarity vectors.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from portrait_engine.corpus import (
    Post,
    Token,
    TokenKind,
    UserDocument,
    strip_accents,
    tokenize,
)
from portrait_engine.vecspace import IdfTable, SparseVector, cosine, tfidf_vector

logger = logging.getLogger(__name__)

# token kinds that enter stance / user vectors: content terms, not interactions
_VECTOR_KINDS = (TokenKind.WORD, TokenKind.HASHTAG)


@dataclass(frozen=True)
class IssueConfig:
    issue_name: str
    stances: tuple[tuple[str, frozenset[str]], ...]
    general_keywords: frozenset[str] = frozenset()

    def __post_init__(self):
        if len(self.stances) < 2:
            raise ValueError("an issue needs at least two stances")
        seen: set[str] = set()
        for name, keywords in self.stances:
            overlap = seen & keywords
            if overlap:
                raise ValueError(f"stance keyword sets overlap: {sorted(overlap)}")
            seen |= keywords

    @property
    def stance_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.stances)

    @property
    def all_keywords(self) -> frozenset[str]:
        merged = set(self.general_keywords)
        for _, keywords in self.stances:
            merged |= keywords
        return frozenset(merged)

    @classmethod
    def from_dict(cls, data: dict) -> "IssueConfig":
        stances = tuple(
            (s["name"], frozenset(_normalize_keyword(k) for k in s["keywords"]))
            for s in data["stances"]
        )
        general = frozenset(
            _normalize_keyword(k) for k in data.get("general_keywords", [])
        )
        return cls(data["issue"], stances, general)

    @classmethod
    def load(cls, path: str | Path) -> "IssueConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class StanceVector:
    stance_name: str
    vector: SparseVector


@dataclass(frozen=True)
class StanceProfile:
    author_id: str
    similarities: Mapping[str, float]
    tendency: float

    def to_dict(self) -> dict:
        return {
            "author_id": self.author_id,
            "similarities": dict(self.similarities),
            "tendency": self.tendency,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StanceProfile":
        return cls(data["author_id"], dict(data["similarities"]), data["tendency"])


def _normalize_keyword(keyword: str) -> str:
    return strip_accents(keyword.lower())


def _post_matches(tokens: Sequence[Token], keywords: frozenset[str]) -> bool:
    return any(tok.surface in keywords for tok in tokens)


def _vector_counts(tokens: Iterable[Token]) -> Counter:
    return Counter(tok.surface for tok in tokens if tok.kind in _VECTOR_KINDS)


def _own_posts(doc: UserDocument) -> list[Post]:
    return [p for p in doc.posts if not p.is_retweet]


def issue_idf_table(
    corpus: Sequence[UserDocument], config: IssueConfig, scope: str = "issue"
) -> IdfTable:
    """IDF reference corpus: one document per non-retweet post. scope="issue"
    restricts it to posts matching any issue keyword; scope="all" uses every
    post."""
    if scope not in ("issue", "all"):
        raise ValueError(f"unknown idf scope {scope!r}")
    keywords = config.all_keywords
    documents = []
    for doc in corpus:
        for post in _own_posts(doc):
            tokens = tokenize(post.text)
            if scope == "all" or _post_matches(tokens, keywords):
                documents.append(set(_vector_counts(tokens)))
    if not documents:
        raise ValueError("no posts available to build the idf table")
    return IdfTable.from_documents(documents)


def build_stance_vectors(
    corpus: Sequence[UserDocument], config: IssueConfig, idf_table: IdfTable
) -> list[StanceVector]:
    """Pool each stance's keyword-matching posts (retweets excluded) and
    TF-IDF weight the pooled counts. A stance with no matching posts gets a
    zero vector and a warning."""
    vectors = []
    for stance_name, keywords in config.stances:
        pooled: Counter = Counter()
        matched = 0
        for doc in corpus:
            for post in _own_posts(doc):
                tokens = tokenize(post.text)
                if _post_matches(tokens, keywords):
                    pooled.update(_vector_counts(tokens))
                    matched += 1
        if matched == 0:
            logger.warning("stance %r matched no posts; vector is zero", stance_name)
        vectors.append(StanceVector(stance_name, tfidf_vector(pooled, idf_table)))
    return vectors


def user_vector(doc: UserDocument, idf_table: IdfTable) -> SparseVector:
    """TF-IDF vector over all of the user's own (non-retweet) posts."""
    counts: Counter = Counter()
    for post in _own_posts(doc):
        counts.update(_vector_counts(tokenize(post.text)))
    return tfidf_vector(counts, idf_table)


def user_stance(
    doc: UserDocument, stance_vectors: Sequence[StanceVector], idf_table: IdfTable
) -> StanceProfile:
    """Cosine similarity against every stance vector; tendency is the
    similarity difference for the first configured stance pair."""
    if not stance_vectors:
        raise ValueError("at least one stance vector required")
    uvec = user_vector(doc, idf_table)
    similarities = {sv.stance_name: cosine(uvec, sv.vector) for sv in stance_vectors}
    names = [sv.stance_name for sv in stance_vectors]
    tendency = similarities[names[0]] - similarities[names[1]] if len(names) >= 2 else 0.0
    return StanceProfile(doc.author_id, similarities, tendency)


def view_gap(a: StanceProfile, b: StanceProfile) -> float:
    """Euclidean distance between two users' similarity vectors."""
    if set(a.similarities) != set(b.similarities):
        raise ValueError("profiles cover different stance sets")
    return math.sqrt(
        sum((a.similarities[s] - b.similarities[s]) ** 2 for s in a.similarities)
    )
