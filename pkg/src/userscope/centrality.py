"""Centrality measures on the influence-direction retweet graph.

Callers hand in the graph already pointing the way influence flows (the
reverse of raw retweet edges); nothing here re-inverts. Betweenness is
exact Brandes accumulation over single-source shortest-path DAGs with
endpoints excluded. Eigenvector centrality is power iteration on the
in-edge structure with a +1 self-shift (x <- x + A^T x) so periodic graphs
still converge; the shift leaves the dominant eigenvector unchanged.
"""
from __future__ import annotations

import statistics
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse

from .graph import RetweetGraph
from .records import UserId

__all__ = [
    "EigenvectorResult",
    "GroupSummary",
    "betweenness",
    "eigenvector_centrality",
    "degree_scores",
    "group_centrality_summary",
]


def betweenness(graph: RetweetGraph) -> dict[UserId, float]:
    """Exact directed unweighted betweenness, endpoints excluded.

    Per-source computations are independent; sources are processed and
    summed in fixed node order so results are deterministic.
    """
    adjacency = graph.adjacency()
    n = graph.node_count
    score = [0.0] * n
    for s in range(n):
        # single-source shortest paths (BFS)
        dist = [-1] * n
        sigma = [0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1
        order: list[int] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        # dependency accumulation in reverse BFS order
        delta = [0.0] * n
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    return {graph.id_of(i): score[i] for i in range(n)}


@dataclass
class EigenvectorResult:
    """Outcome of the power iteration.

    When the iteration does not converge within max_iter the scores carry
    the last iterate and `converged` is False; `residual` is the final
    successive-iterate max-abs difference either way. Nodes whose score is
    indistinguishable from zero (disconnected components under no damping)
    are listed in zero_nodes.
    """

    scores: dict[UserId, float]
    converged: bool
    iterations: int
    residual: float
    zero_nodes: frozenset[UserId]


def eigenvector_centrality(
    graph: RetweetGraph, tol: float = 1e-8, max_iter: int = 1000
) -> EigenvectorResult:
    """Power iteration with uniform start and per-iteration L2 normalization.

    A node's score accumulates from the nodes pointing at it. Convergence is
    declared when the successive-iterate max-abs difference drops below tol.
    """
    n = graph.node_count
    if n == 0:
        return EigenvectorResult({}, True, 0, 0.0, frozenset())
    rows, cols = [], []
    for u, nbrs in enumerate(graph.adjacency()):
        for v in nbrs:
            rows.append(u)
            cols.append(v)
    A = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    x = np.full(n, 1.0 / np.sqrt(n))
    residual = np.inf
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        x_new = x + A.T @ x
        x_new /= np.linalg.norm(x_new)
        residual = float(np.max(np.abs(x_new - x)))
        x = x_new
        if residual < tol:
            converged = True
            break
    zero = frozenset(graph.id_of(i) for i in range(n) if x[i] < tol)
    scores = {graph.id_of(i): float(x[i]) for i in range(n)}
    return EigenvectorResult(scores, converged, iterations, residual, zero)


def degree_scores(graph: RetweetGraph) -> tuple[dict[UserId, int], dict[UserId, int]]:
    """(in_degree, out_degree) maps over all nodes."""
    indeg = {u: graph.in_degree(u) for u in graph.nodes()}
    outdeg = {u: graph.out_degree(u) for u in graph.nodes()}
    return indeg, outdeg


@dataclass
class GroupSummary:
    n: int
    median: float | None
    mean: float | None

    @property
    def empty(self) -> bool:
        return self.n == 0


def group_centrality_summary(
    scores: Mapping[str, Mapping[UserId, float]],
    groups: Mapping[str, Iterable[UserId]],
) -> dict[tuple[str, str], GroupSummary]:
    """Median and mean per (group, metric); exact medians, midpoint on even
    counts. Empty groups yield flagged rows rather than errors."""
    if not groups:
        raise ValueError("no groups given")
    table: dict[tuple[str, str], GroupSummary] = {}
    for group_name, members in groups.items():
        member_list = list(members)
        for metric, per_node in scores.items():
            values = [per_node[u] for u in member_list if u in per_node]
            if not values:
                table[(group_name, metric)] = GroupSummary(0, None, None)
                continue
            table[(group_name, metric)] = GroupSummary(
                n=len(values),
                median=float(statistics.median(values)),
                mean=float(sum(values) / len(values)),
            )
    return table
