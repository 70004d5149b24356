"""Pipeline orchestration shared by the CLI and the HTTP service: each stage
reads its inputs from the store and writes one artifact back.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from portrait_engine import corpus as corpus_mod
from portrait_engine import recommender as rec_mod
from portrait_engine import stance as stance_mod
from portrait_engine import topicmodel
from portrait_engine.config import EngineConfig
from portrait_engine.corpus import CohortFilter, TokenKind, tokenize
from portrait_engine.layout import build_layout
from portrait_engine.preferences import build_preferences
from portrait_engine.store import Store

logger = logging.getLogger(__name__)


def run_ingest(
    input_path: str | Path,
    store: Store,
    min_posts: int = 1,
    use_fences: bool = False,
    skip_invalid: bool = False,
) -> int:
    """Read a JSONL crawl, optionally keep only the regular-user cohort, and
    write the normalized corpus. Returns the number of users stored."""
    records = list(corpus_mod.read_post_records(input_path, skip_invalid=skip_invalid))
    docs = corpus_mod.build_user_documents(records)
    if use_fences and docs:
        max_followers, max_friends = corpus_mod.connectivity_fences(docs)
        cohort = corpus_mod.select_cohort(
            docs, CohortFilter(max_followers, max_friends, min_posts)
        )
    elif min_posts > 1:
        cohort = [d for d in docs if len(d.posts) >= min_posts]
    else:
        cohort = docs
    keep = {d.author_id for d in cohort}
    kept_records = [r for r in records if r[0].author_id in keep]
    store.write_corpus(kept_records)
    logger.info("ingested %d users (%d posts)", len(cohort), len(kept_records))
    return len(cohort)


def run_stance(store: Store, issue_path: str | Path, out: Path | None = None) -> Path:
    """Build stance vectors and a stance profile for every stored user."""
    config = store.load_config()
    issue = stance_mod.IssueConfig.load(issue_path)
    docs = store.load_user_documents()
    idf_table = stance_mod.issue_idf_table(docs, issue, scope=config.idf_scope)
    vectors = stance_mod.build_stance_vectors(docs, issue, idf_table)
    profiles = [stance_mod.user_stance(doc, vectors, idf_table) for doc in docs]
    return store.write_stances(
        issue.issue_name, [(v.stance_name, v.vector) for v in vectors], profiles, out
    )


def run_prefs(store: Store, user_id: str | None = None, k: int | None = None) -> list[Path]:
    """Build preference profiles; user_id=None means every user."""
    config = store.load_config()
    docs = store.load_user_documents()
    stopwords = frozenset(corpus_mod.top_stopwords(docs, config.stopword_count))
    now = max((p.timestamp for d in docs for p in d.posts), default=0)
    weights = config.score_weights()
    k = k or config.top_k_topics
    selected = [d for d in docs if user_id is None or d.author_id == user_id]
    if user_id is not None and not selected:
        raise KeyError(f"unknown user {user_id!r}")
    written = []
    for doc in selected:
        profile = build_preferences(doc, k, weights, stopwords, now=now)
        written.append(store.write_preferences(profile))
    return written


def run_layout(store: Store, user_id: str | None = None, seed: int | None = None) -> list[Path]:
    """Compute portrait layouts from stored preferences; user_id=None means
    every user with a preference profile."""
    config = store.load_config()
    params = config.layout_params()
    seed = config.layout_seed if seed is None else seed
    docs = {d.author_id: d for d in store.load_user_documents()}
    targets = [user_id] if user_id is not None else sorted(docs)
    written = []
    for uid in targets:
        if uid not in docs:
            raise KeyError(f"unknown user {uid!r}")
        profile = store.read_preferences(uid)
        layout = build_layout(profile, docs[uid].posts, params, seed=seed)
        written.append(store.write_layout(uid, layout.to_json()))
    return written


def candidate_pool(store: Store) -> list:
    """(post, author stance profile) for every original (non-retweet) post
    whose author has a stance profile."""
    profiles = store.stance_profiles()
    return [
        (post, profiles[post.author_id])
        for post in store.read_posts()
        if not post.is_retweet and post.author_id in profiles
    ]


def recommend_for_user(
    store: Store,
    user_id: str,
    lam: float | None = None,
    top: int | None = None,
    post_id: str | None = None,
) -> list[dict]:
    """Rank recommendations for a user; with post_id, restrict candidates to
    posts sharing a topic with that post (speech-balloon context)."""
    config = store.load_config()
    profile = store.read_preferences(user_id)
    profiles = store.stance_profiles()
    if user_id not in profiles:
        raise KeyError(f"no stance profile for {user_id!r}")
    pool = candidate_pool(store)
    if lam is None:
        lam = config.lambda_for(user_id)
    if post_id is not None:
        by_id = {p.id: p for p in store.read_posts()}
        if post_id not in by_id:
            raise KeyError(f"unknown post {post_id!r}")
        anchor_grams = corpus_mod.post_gram_set(by_id[post_id]) & set(profile.grams)
        pool = rec_mod.restrict_pool_to_grams(pool, anchor_grams)
        top = top or config.balloon_recs
    else:
        top = top or config.recommend_top
    if not pool:
        return []
    recs = rec_mod.recommend(profile, profiles[user_id], pool, lam, top)
    return [r.to_dict() for r in recs]


def run_topics(
    store: Store,
    k: int | None = None,
    iterations: int | None = None,
    seed: int | None = None,
    tau: float | None = None,
    alpha: float | None = None,
    beta: float | None = None,
) -> dict[str, Path]:
    """Train the topic model over user documents, build and filter the topic
    graph, and report the most intermediary topics."""
    config = store.load_config()
    k = k or config.lda_k
    iterations = iterations or config.lda_iterations
    seed = config.lda_seed if seed is None else seed
    tau = config.contribution_threshold if tau is None else tau
    alpha = config.lda_alpha if alpha is None else alpha
    beta = config.lda_beta if beta is None else beta

    docs = store.load_user_documents()
    stopwords = corpus_mod.top_stopwords(docs, config.stopword_count)
    token_docs = []
    labels = []
    for doc in docs:
        terms = [
            tok.surface
            for post in doc.posts
            for tok in tokenize(post.text)
            if tok.kind in (TokenKind.WORD, TokenKind.HASHTAG)
            and tok.surface not in stopwords
        ]
        if terms:
            token_docs.append(terms)
            labels.append(doc.author_id)
    model = topicmodel.lda_train(
        token_docs, k, alpha=alpha, beta=beta, iterations=iterations, seed=seed,
        doc_labels=labels,
    )
    graph = topicmodel.build_topic_graph(model, tau)
    if graph.edges:
        filtered = topicmodel.upper_decile_filter(graph)
        filtered.centrality = topicmodel.betweenness(filtered)
    else:
        filtered = graph
    report = topicmodel.intermediary_report(model, filtered) if filtered.edges else []

    topics_dir = store.root / "topics"
    model_path = topics_dir / "model.json"
    graph_path = topics_dir / "graph.json"
    report_path = topics_dir / "report.json"
    model_doc = {
        "k": model.k,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.rng_seed,
        "vocabulary": model.vocabulary,
        "doc_labels": model.doc_labels,
        "phi": model.phi.tolist(),
        "theta": model.theta.tolist(),
    }
    model_path.write_text(json.dumps(model_doc), encoding="utf-8")
    graph_doc = {
        "nodes": filtered.nodes,
        "edges": [
            {"source": a, "target": b, "weight": w}
            for (a, b), w in sorted(filtered.edges.items())
        ],
        "centrality": {str(n): c for n, c in sorted(filtered.centrality.items())},
    }
    graph_path.write_text(json.dumps(graph_doc, indent=2), encoding="utf-8")
    report_path.write_text(json.dumps(report, indent=2), encoding="utf-8")
    return {"model": model_path, "graph": graph_path, "report": report_path}
