"""Regenerate the bundled synthetic corpus.

20 users, 25 posts each. Users dam01..dam10 are planted on the pro_dam
stance, users riv11..riv20 on anti_dam. Every user also posts about shared
neutral topics (cycling, baking, vinyl, football, coffee) so preference
profiles and recommendations have something to work with, and each user
retweets opposite-stance content once or twice - retweets must not leak into
stance math.

The script verifies the planted separation before writing: every
opposite-stance pair must have a larger view gap than every same-stance pair.

Usage: python fixtures/generate.py
"""

from __future__ import annotations

import itertools
import json
import random
from pathlib import Path

HERE = Path(__file__).parent
BASE_TS = 1_750_000_000  # fixed epoch anchor; exact date irrelevant
DAY = 86_400

ISSUE = {
    "issue": "riverton_dam",
    "stances": [
        {
            "name": "pro_dam",
            "keywords": ["#builddamnow", "#damjobs", "#yestodam", "damworks"],
        },
        {
            "name": "anti_dam",
            "keywords": ["#stopthedam", "#savetheriver", "#wildwater", "riverkeepers"],
        },
    ],
    "general_keywords": ["dam", "river", "reservoir"],
}

PRO_WORDS = ["turbines", "megawatts", "jobs", "growth", "irrigation", "concrete"]
ANTI_WORDS = ["salmon", "wetlands", "heritage", "floodplain", "kayakers", "ecosystem"]
PRO_TAGS = ISSUE["stances"][0]["keywords"][:3]
ANTI_TAGS = ISSUE["stances"][1]["keywords"][:3]

FILLER = ["the", "a", "to", "in", "my", "of", "and", "on"]

NEUTRAL_TOPICS = {
    "cycling": (["bike lane", "morning commute", "fix the flat"], "#bikelife"),
    "baking": (["sourdough crumb", "overnight proof", "rye starter"], "#sourdough"),
    "vinyl": (["vinyl record", "record fair", "b side"], "#nowspinning"),
    "football": (["derby match", "late goal", "midfield press"], "#matchday"),
    "coffee": (["espresso roast", "single origin", "flat white"], "#coffeetime"),
    "cinema": (["film club", "double feature", "final reel"], "#cineclub"),
}

MENTION_POOL = ["@riverfm", "@cityhall", "@mariapaz", "@el_vecino", "@nortecafe"]


def _stance_text(rng, tags, words, general):
    parts = [rng.choice(tags)]
    parts += rng.sample(words, 3)
    if rng.random() < 0.5:
        parts.append(rng.choice(general))
    rng.shuffle(parts)
    return " ".join(parts)


def _neutral_text(rng, topics):
    name = rng.choice(topics)
    phrases, tag = NEUTRAL_TOPICS[name]
    words = rng.choice(phrases).split() + [rng.choice(FILLER), rng.choice(FILLER)]
    if rng.random() < 0.45:
        words.append(tag)
    if rng.random() < 0.25:
        words.append(rng.choice(MENTION_POOL))
    if rng.random() < 0.08:
        words.append("https://example.com/reads")
    rng.shuffle(words)
    return " ".join(words)


def generate() -> list[dict]:
    rng = random.Random(20260101)
    records = []
    general = ISSUE["general_keywords"]
    for u in range(20):
        pro = u < 10
        user = f"dam{u + 1:02d}" if pro else f"riv{u + 1:02d}"
        own_tags, own_words = (PRO_TAGS, PRO_WORDS) if pro else (ANTI_TAGS, ANTI_WORDS)
        other_tags, other_words = (ANTI_TAGS, ANTI_WORDS) if pro else (PRO_TAGS, PRO_WORDS)
        topics = rng.sample(sorted(NEUTRAL_TOPICS), 3)
        followers = rng.randint(80, 800)
        friends = rng.randint(80, 800)

        kinds = ["stance"] * 7 + ["neutral"] * 16 + ["rt"] * 2
        rng.shuffle(kinds)
        for i, kind in enumerate(kinds):
            ts = BASE_TS + u * 137 + i * (DAY // 2) + rng.randint(0, 3600)
            if kind == "stance":
                text = _stance_text(rng, own_tags, own_words, general)
                is_rt = False
            elif kind == "neutral":
                text = _neutral_text(rng, topics)
                is_rt = False
            else:
                quoted = _stance_text(rng, other_tags, other_words, general)
                text = f"rt @{rng.choice(['dam03', 'riv15', 'riv18', 'dam07'])}: {quoted}"
                is_rt = True
            records.append(
                {
                    "id": f"{user}-p{i + 1:03d}",
                    "author_id": user,
                    "timestamp": ts,
                    "text": text,
                    "is_retweet": is_rt,
                    "follower_count": followers,
                    "friend_count": friends,
                }
            )
    return records


def verify(records: list[dict]) -> None:
    from portrait_engine.corpus import Post, build_user_documents
    from portrait_engine.stance import (
        IssueConfig,
        build_stance_vectors,
        issue_idf_table,
        user_stance,
        view_gap,
    )

    issue = IssueConfig.from_dict(ISSUE)
    docs = build_user_documents(
        (
            Post(r["id"], r["author_id"], r["timestamp"], r["text"], r["is_retweet"]),
            r["follower_count"],
            r["friend_count"],
        )
        for r in records
    )
    idf = issue_idf_table(docs, issue)
    vectors = build_stance_vectors(docs, issue, idf)
    profiles = {d.author_id: user_stance(d, vectors, idf) for d in docs}
    same, cross = [], []
    for a, b in itertools.combinations(sorted(profiles), 2):
        gap = view_gap(profiles[a], profiles[b])
        (same if a[:3] == b[:3] else cross).append(gap)
    assert max(same) < min(cross), (
        f"planted stances not separated: max same {max(same):.4f} "
        f">= min cross {min(cross):.4f}"
    )
    print(f"separation ok: same gaps <= {max(same):.4f} < cross gaps >= {min(cross):.4f}")


def main() -> None:
    records = generate()
    assert len(records) == 500
    verify(records)
    corpus_path = HERE / "synthetic_corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    with open(HERE / "issue.json", "w", encoding="utf-8") as fh:
        json.dump(ISSUE, fh, indent=2)
        fh.write("\n")
    engine_config = {
        "lambda": 0.75,
        "top_k_topics": 12,
        "stopword_count": 8,
        "recommend_top": 20,
        "balloon_recs": 3,
        "canvas": [1200.0, 800.0],
        "vogel_c": 8.0,
        "layout_seed": 42,
        "lda_k": 12,
        "lda_iterations": 150,
        "lda_seed": 7,
        "contribution_threshold": 0.05,
        "assignments": {
            "dam01": {"mode": "baseline", "ui": "baseline"},
            "riv11": {"mode": "treatment", "ui": "organic"},
        },
    }
    with open(HERE / "config.json", "w", encoding="utf-8") as fh:
        json.dump(engine_config, fh, indent=2)
        fh.write("\n")
    print(f"wrote {corpus_path}")


if __name__ == "__main__":
    main()
