"""LDA topic inference over user documents plus the downstream graph
analytics: descriptive term scoring, the topic co-contribution graph, its
upper-decile edge filter, and betweenness centrality for intermediary topics.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from portrait_engine import kernels
from portrait_engine.util import linear_quantile


@dataclass
class LdaModel:
    k: int
    phi: np.ndarray  # (k, V) topic->term probabilities
    theta: np.ndarray  # (D, k) document->topic probabilities
    alpha: float
    beta: float
    rng_seed: int
    vocabulary: list[str]
    doc_labels: list[str]
    doc_topic_counts: np.ndarray  # (D, k) final-sweep assignment counts
    topic_term_counts: np.ndarray  # (k, V)

    def term_index(self, term: str) -> int:
        try:
            return self._term_to_index[term]
        except AttributeError:
            self._term_to_index = {t: i for i, t in enumerate(self.vocabulary)}
            return self._term_to_index[term]


@dataclass
class TopicGraph:
    nodes: list[int]
    edges: dict[tuple[int, int], float]  # canonical (a < b) -> weight in (0, 1]
    centrality: dict[int, float] = field(default_factory=dict)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {node: [] for node in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for neighbours in adj.values():
            neighbours.sort()
        return adj


def lda_train(
    docs: Sequence[Sequence[str]],
    k: int,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 200,
    seed: int = 42,
    doc_labels: Sequence[str] | None = None,
) -> LdaModel:
    """Collapsed Gibbs sampling; deterministic given the seed. phi and theta
    are estimated from final-sweep counts with alpha/beta smoothing."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not docs:
        raise ValueError("docs must be nonempty")
    if alpha is None:
        alpha = 50.0 / k

    vocabulary = sorted({term for doc in docs for term in doc})
    if not vocabulary:
        raise ValueError("empty vocabulary")
    term_index = {t: i for i, t in enumerate(vocabulary)}

    doc_ids: list[int] = []
    word_ids: list[int] = []
    for d, doc in enumerate(docs):
        for term in doc:
            doc_ids.append(d)
            word_ids.append(term_index[term])

    _, n_dk, n_kw = kernels.gibbs_train(
        np.asarray(doc_ids, dtype=np.int32),
        np.asarray(word_ids, dtype=np.int32),
        len(docs),
        len(vocabulary),
        k,
        float(alpha),
        float(beta),
        int(iterations),
        int(seed),
    )

    phi = (n_kw + beta) / (n_kw.sum(axis=1, keepdims=True) + beta * len(vocabulary))
    theta = (n_dk + alpha) / (n_dk.sum(axis=1, keepdims=True) + alpha * k)
    labels = list(doc_labels) if doc_labels is not None else [str(i) for i in range(len(docs))]
    return LdaModel(
        k=k,
        phi=phi,
        theta=theta,
        alpha=float(alpha),
        beta=float(beta),
        rng_seed=int(seed),
        vocabulary=vocabulary,
        doc_labels=labels,
        doc_topic_counts=n_dk,
        topic_term_counts=n_kw,
    )


def term_score(model: LdaModel, topic: int, term: str) -> float:
    """phi[t,w] * log(phi[t,w] / geometric mean over topics of phi[.,w]).
    Uniform-across-topics terms score 0; smoothing keeps phi positive."""
    w = model.term_index(term)
    column = model.phi[:, w]
    log_gmean = float(np.mean(np.log(column)))
    p = float(column[topic])
    return p * (math.log(p) - log_gmean)


def top_terms(model: LdaModel, topic: int, n: int = 6) -> list[tuple[str, float]]:
    """Best-scoring descriptive terms for a topic."""
    log_phi = np.log(model.phi)
    scores = model.phi[topic] * (log_phi[topic] - log_phi.mean(axis=0))
    order = np.argsort(-scores)[:n]
    return [(model.vocabulary[i], float(scores[i])) for i in order]


def build_topic_graph(model: LdaModel, contribution_threshold: float) -> TopicGraph:
    """A topic contributes to a document when theta >= threshold; every pair
    of topics contributing to the same document induces an edge, weighted by
    the fraction of documents inducing it."""
    if not 0.0 < contribution_threshold < 1.0:
        raise ValueError("contribution threshold must be in (0, 1)")
    n_docs = model.theta.shape[0]
    pair_counts: dict[tuple[int, int], int] = {}
    for d in range(n_docs):
        contributing = np.nonzero(model.theta[d] >= contribution_threshold)[0]
        for i in range(len(contributing)):
            for j in range(i + 1, len(contributing)):
                pair = (int(contributing[i]), int(contributing[j]))
                pair_counts[pair] = pair_counts.get(pair, 0) + 1
    edges = {pair: count / n_docs for pair, count in pair_counts.items()}
    return TopicGraph(nodes=list(range(model.k)), edges=edges)


def upper_decile_filter(graph: TopicGraph) -> TopicGraph:
    """Keep edges whose weight reaches the interpolated 90th percentile and
    drop nodes left without edges."""
    if not graph.edges:
        raise ValueError("graph has no edges")
    threshold = linear_quantile(list(graph.edges.values()), 0.9)
    kept = {pair: w for pair, w in graph.edges.items() if w >= threshold}
    nodes = sorted({node for pair in kept for node in pair})
    return TopicGraph(nodes=nodes, edges=kept)


def betweenness(graph: TopicGraph | Mapping[int, Sequence[int]]) -> dict[int, float]:
    """Unweighted undirected betweenness (Brandes accumulation); each
    unordered pair is counted once, disconnected pairs contribute 0.

    Dependencies are accumulated as exact rationals (path counts are
    integers, so every contribution is a ratio of integers); the result is
    rounded to float only at the end. Graphs here are small, so exactness
    costs nothing and the output is independent of accumulation order.
    """
    adj = graph.adjacency() if isinstance(graph, TopicGraph) else {
        node: sorted(neighbours) for node, neighbours in graph.items()
    }
    centrality = {node: Fraction(0) for node in adj}
    for source in adj:
        stack: list = []
        predecessors: dict = {node: [] for node in adj}
        sigma = {node: 0 for node in adj}
        dist = {node: -1 for node in adj}
        sigma[source] = 1
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    predecessors[w].append(v)
        delta = {node: Fraction(0) for node in adj}
        while stack:
            w = stack.pop()
            for v in predecessors[w]:
                delta[v] += Fraction(sigma[v], sigma[w]) * (1 + delta[w])
            if w != source:
                centrality[w] += delta[w]
    # undirected: every pair was visited from both endpoints
    return {node: float(value / 2) for node, value in centrality.items()}


def intermediary_report(
    model: LdaModel, graph: TopicGraph, top_topics: int = 5, terms_per_topic: int = 6
) -> list[dict]:
    """Top topics by betweenness with their best descriptive terms."""
    centrality = graph.centrality or betweenness(graph)
    ranked = sorted(centrality.items(), key=lambda kv: (-kv[1], kv[0]))
    report = []
    for topic, score in ranked[:top_topics]:
        report.append(
            {
                "topic": topic,
                "betweenness": score,
                "terms": [
                    {"term": term, "score": value}
                    for term, value in top_terms(model, topic, terms_per_topic)
                ],
            }
        )
    return report
