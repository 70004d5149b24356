"""Corpus handling: posts, tokenization, n-grams, stopwords, and cohort selection.

Posts arrive as newline-delimited JSON records and are grouped into one
document per author. Tokenization lowercases everything, strips accents for
matching (the accented lowercase form is kept for display), keeps the leading
'#' / '@' markers, and tags URLs so that downstream n-gram extraction never
crosses them.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from portrait_engine.util import linear_quantile

logger = logging.getLogger(__name__)

MAX_TEXT_BYTES = 560


class TokenKind(str, Enum):
    WORD = "word"
    HASHTAG = "hashtag"
    MENTION = "mention"
    URL = "url"


# Alternation order matters: URLs swallow '#' fragments and '@' userinfo.
_TOKEN_RE = re.compile(
    r"(?P<url>https?://\S+|www\.\S+)"
    r"|(?P<mention>@\w+)"
    r"|(?P<hashtag>#\w+)"
    r"|(?P<word>[^\W_]+)",
    re.UNICODE,
)


def strip_accents(text: str) -> str:
    return "".join(
        ch for ch in unicodedata.normalize("NFD", text) if not unicodedata.combining(ch)
    )


@dataclass(frozen=True)
class Token:
    """One token. Equality and hashing use the normalized surface only;
    `display` keeps the accented lowercase form for rendering."""

    surface: str
    kind: TokenKind
    display: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.display:
            object.__setattr__(self, "display", self.surface)


@dataclass(frozen=True)
class Post:
    id: str
    author_id: str
    timestamp: int
    text: str
    is_retweet: bool = False

    def validate(self) -> None:
        if not self.id:
            raise ValueError("post id must be nonempty")
        if self.timestamp <= 0:
            raise ValueError(f"post {self.id}: timestamp must be > 0")
        if len(self.text.encode("utf-8")) > MAX_TEXT_BYTES:
            raise ValueError(f"post {self.id}: text exceeds {MAX_TEXT_BYTES} bytes")


@dataclass
class UserDocument:
    author_id: str
    posts: list[Post]
    token_counts: Counter
    follower_count: int = 0
    friend_count: int = 0

    @classmethod
    def from_posts(
        cls,
        author_id: str,
        posts: Iterable[Post],
        follower_count: int = 0,
        friend_count: int = 0,
    ) -> "UserDocument":
        ordered = sorted(posts, key=lambda p: (p.timestamp, p.id))
        counts: Counter = Counter()
        for post in ordered:
            counts.update(tokenize(post.text))
        return cls(author_id, ordered, counts, follower_count, friend_count)


@dataclass(frozen=True)
class CohortFilter:
    max_followers: float
    max_friends: float
    min_posts: int = 1

    def __post_init__(self):
        if self.min_posts < 1:
            raise ValueError("min_posts must be >= 1")


def tokenize(text: str) -> list[Token]:
    """Lowercased tokens in original order; punctuation is dropped except the
    leading '#' / '@' markers, URLs become single url-kind tokens."""
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        kind = TokenKind(m.lastgroup)
        display = m.group().lower()
        surface = display if kind is TokenKind.URL else strip_accents(display)
        tokens.append(Token(surface, kind, display))
    return tokens


def word_runs(tokens: Sequence[Token]) -> Iterator[list[Token]]:
    """Maximal runs of consecutive word-kind tokens. Mentions, hashtags and
    URLs terminate a run."""
    run: list[Token] = []
    for tok in tokens:
        if tok.kind is TokenKind.WORD:
            run.append(tok)
        elif run:
            yield run
            run = []
    if run:
        yield run


def iter_ngrams(tokens: Sequence[Token], n: int) -> Iterator[tuple[str, str]]:
    """Yield (gram, display) per occurrence. Unigrams cover every non-URL
    token; longer grams are built inside word runs only."""
    if n not in (1, 2, 3):
        raise ValueError(f"n must be in 1..3, got {n}")
    if n == 1:
        for tok in tokens:
            if tok.kind is not TokenKind.URL:
                yield tok.surface, tok.display
        return
    for run in word_runs(tokens):
        for i in range(len(run) - n + 1):
            window = run[i : i + n]
            yield (
                " ".join(t.surface for t in window),
                " ".join(t.display for t in window),
            )


def extract_ngrams(tokens: Sequence[Token], n: int) -> list[tuple[str, int]]:
    """Aggregated n-gram counts, ordered by count descending then gram."""
    counts = Counter(gram for gram, _ in iter_ngrams(tokens, n))
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def post_gram_set(post: Post) -> set[str]:
    """All grams (n=1..3) a post contains; the containment side of
    topic <-> post links and of matched-topic reporting."""
    tokens = tokenize(post.text)
    grams: set[str] = set()
    for n in (1, 2, 3):
        grams.update(gram for gram, _ in iter_ngrams(tokens, n))
    return grams


def top_stopwords(corpus: Iterable[UserDocument], k: int) -> set[str]:
    """The k word-kind terms with the highest corpus-wide frequency;
    ties broken lexicographically."""
    if k < 0:
        raise ValueError("k must be >= 0")
    totals: Counter = Counter()
    for doc in corpus:
        for tok, cnt in doc.token_counts.items():
            if tok.kind is TokenKind.WORD:
                totals[tok.surface] += cnt
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return {term for term, _ in ranked[:k]}


def outlier_fence(values: Sequence[float]) -> tuple[float, float, float]:
    """Boxplot quartiles and the upper outlier fence q3 + 1.5*(q3 - q1)."""
    if not values:
        raise ValueError("outlier_fence requires at least one value")
    q1 = linear_quantile(values, 0.25)
    q3 = linear_quantile(values, 0.75)
    return q1, q3, q3 + 1.5 * (q3 - q1)


def select_cohort(
    corpus: Sequence[UserDocument], cohort_filter: CohortFilter
) -> list[UserDocument]:
    """Keep users within the connectivity limits and with enough posts.
    Bounds are inclusive; input order is preserved."""
    return [
        doc
        for doc in corpus
        if doc.follower_count <= cohort_filter.max_followers
        and doc.friend_count <= cohort_filter.max_friends
        and len(doc.posts) >= cohort_filter.min_posts
    ]


def connectivity_fences(corpus: Sequence[UserDocument]) -> tuple[float, float]:
    """Upper outlier fences for follower and friend counts."""
    _, _, max_followers = outlier_fence([d.follower_count for d in corpus])
    _, _, max_friends = outlier_fence([d.friend_count for d in corpus])
    return max_followers, max_friends


# --- ingestion -------------------------------------------------------------

_REQUIRED_FIELDS = ("id", "author_id", "timestamp", "text")


def parse_post_record(record: dict) -> Post:
    for key in _REQUIRED_FIELDS:
        if key not in record:
            raise ValueError(f"record missing field {key!r}")
    post = Post(
        id=str(record["id"]),
        author_id=str(record["author_id"]),
        timestamp=int(record["timestamp"]),
        text=str(record["text"]),
        is_retweet=bool(record.get("is_retweet", False)),
    )
    post.validate()
    return post


def read_post_records(path: str | Path, skip_invalid: bool = False):
    """Yield (Post, follower_count, friend_count) from a JSONL crawl file."""
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                post = parse_post_record(record)
                if post.id in seen:
                    raise ValueError(f"duplicate post id {post.id!r}")
                seen.add(post.id)
            except ValueError as exc:
                if skip_invalid:
                    logger.warning("skipping line %d: %s", lineno, exc)
                    continue
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            yield (
                post,
                int(record.get("follower_count", 0)),
                int(record.get("friend_count", 0)),
            )


def build_user_documents(
    records: Iterable[tuple[Post, int, int]]
) -> list[UserDocument]:
    """Group posts by author. Connectivity counts are taken from the author's
    most recent record."""
    by_author: dict[str, list[Post]] = {}
    connectivity: dict[str, tuple[int, int, int]] = {}
    for post, followers, friends in records:
        by_author.setdefault(post.author_id, []).append(post)
        current = connectivity.get(post.author_id)
        if current is None or post.timestamp >= current[0]:
            connectivity[post.author_id] = (post.timestamp, followers, friends)
    docs = []
    for author_id in sorted(by_author):
        _, followers, friends = connectivity[author_id]
        docs.append(
            UserDocument.from_posts(author_id, by_author[author_id], followers, friends)
        )
    return docs
