"""Rank candidate posts for a user: topical relevance to their preference
vector blended with the view gap to each candidate's author.

combined = lambda * relevance + (1 - lambda) * min(gap / sqrt(k), 1) where k
is the number of configured stances, so both terms live on [0, 1] and lambda
is directly interpretable. lambda=1 reproduces the preferences-only baseline.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from portrait_engine.corpus import Post, iter_ngrams, post_gram_set, tokenize
from portrait_engine.preferences import PreferenceProfile
from portrait_engine.stance import StanceProfile, view_gap
from portrait_engine.vecspace import IdfTable, cosine, tfidf_vector


@dataclass(frozen=True)
class Recommendation:
    post: Post
    relevance: float
    gap: float
    combined: float
    matched_topics: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "post": {
                "id": self.post.id,
                "author_id": self.post.author_id,
                "timestamp": self.post.timestamp,
                "text": self.post.text,
                "is_retweet": self.post.is_retweet,
            },
            "relevance": self.relevance,
            "gap": self.gap,
            "combined": self.combined,
            "matched_topics": list(self.matched_topics),
        }


def post_gram_counts(post: Post) -> Counter:
    """Counts of every gram (n=1..3) a post contains."""
    tokens = tokenize(post.text)
    counts: Counter = Counter()
    for n in (1, 2, 3):
        counts.update(gram for gram, _ in iter_ngrams(tokens, n))
    return counts


def pool_idf_table(posts: Sequence[Post]) -> IdfTable:
    """Gram-level IDF over a candidate pool, one document per post."""
    if not posts:
        raise ValueError("cannot build an idf table from an empty pool")
    return IdfTable.from_documents(post_gram_set(p) for p in posts)


def relevance(target: PreferenceProfile, candidate: Post, idf_table: IdfTable) -> float:
    """Cosine similarity between the preference vector and the candidate's
    TF-IDF gram vector."""
    return cosine(target.as_vector, tfidf_vector(post_gram_counts(candidate), idf_table))


def recommend(
    target: PreferenceProfile,
    target_stance: StanceProfile,
    pool: Sequence[tuple[Post, StanceProfile]],
    lam: float,
    m: int,
    idf_table: IdfTable | None = None,
) -> list[Recommendation]:
    """Top-m candidates by the blended score. Posts authored by the target and
    duplicate post ids are filtered; ties break by relevance, then recency,
    then post id."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    if m < 1:
        raise ValueError("m must be >= 1")
    candidates = []
    seen_ids: set[str] = set()
    for post, author_stance in pool:
        if post.author_id == target.author_id or post.id in seen_ids:
            continue
        seen_ids.add(post.id)
        candidates.append((post, author_stance))
    if not candidates:
        return []
    if idf_table is None:
        idf_table = pool_idf_table([post for post, _ in candidates])

    gap_bound = math.sqrt(len(target_stance.similarities))
    target_grams = set(target.grams)
    scored = []
    for post, author_stance in candidates:
        rel = relevance(target, post, idf_table)
        gap = view_gap(target_stance, author_stance)
        combined = lam * rel + (1.0 - lam) * min(gap / gap_bound, 1.0)
        matched = tuple(sorted(target_grams & post_gram_set(post)))
        scored.append(Recommendation(post, rel, gap, combined, matched))

    scored.sort(
        key=lambda r: (-r.combined, -r.relevance, -r.post.timestamp, r.post.id)
    )
    return scored[:m]


def restrict_pool_to_grams(
    pool: Sequence[tuple[Post, StanceProfile]], grams: set[str]
) -> list[tuple[Post, StanceProfile]]:
    """Keep candidates sharing at least one gram with `grams`; used for the
    per-post related-content lookup behind the speech balloon."""
    return [(p, s) for p, s in pool if post_gram_set(p) & grams]
