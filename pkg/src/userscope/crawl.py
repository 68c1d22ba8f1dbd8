"""Simulated crawling of a directed graph that only exposes out-edges.

A GraphOracle hides a ground-truth RetweetGraph behind the two operations a
timeline crawler actually has: fetching a user's out-edges and drawing a
uniformly random user id. The sampler runs a random walk over the
undirected graph it discovers in real time, occasionally jumping to a
random node: at node v the next step is a jump with probability
w / (w + d(v)), where w is the jump weight and d(v) is v's degree in the
discovered undirected graph at visit time. Visits reweighted by
1 / (d(v) + w) give an asymptotically unbiased estimate of the out-degree
distribution; unbiased in-degree estimation is not possible from this
interface and is out of scope.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import RetweetGraph
from .records import UserId

__all__ = [
    "GraphOracle",
    "WalkStep",
    "WalkTrace",
    "DegreeDistributionEstimate",
    "SyntheticModelError",
    "generate_synthetic_graph",
    "durw_sample",
    "estimate_outdegree_distribution",
    "merge_traces",
    "write_trace_jsonl",
    "read_trace_jsonl",
]


class SyntheticModelError(ValueError):
    """Invalid generator model or parameters."""


class GraphOracle:
    """Crawl interface over a hidden ground-truth graph.

    Crawlers must touch nothing but `out_edges` and `uniform_random_node`;
    in-edges are never exposed. Both operations bump `query_count`. The
    random source is supplied by the caller so the oracle itself stays
    read-only and supports concurrent walkers.
    """

    def __init__(self, graph: RetweetGraph):
        self._graph = graph
        self._nodes = graph.nodes()
        self.query_count = 0

    def out_edges(self, node: UserId) -> tuple[UserId, ...]:
        self.query_count += 1
        return self._graph.out_neighbors(node)

    def uniform_random_node(self, rng: random.Random) -> UserId:
        self.query_count += 1
        return self._nodes[rng.randrange(len(self._nodes))]

    # ---- scoring access (not part of the crawl surface) -------------------

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def ground_truth(self) -> RetweetGraph:
        return self._graph

    def true_outdegree_distribution(self) -> dict[int, float]:
        """Exact out-degree mass function of the hidden graph."""
        counts: dict[int, int] = {}
        for node in self._nodes:
            k = self._graph.out_degree(node)
            counts[k] = counts.get(k, 0) + 1
        n = len(self._nodes)
        return {k: c / n for k, c in sorted(counts.items())}


def generate_synthetic_graph(
    model: str,
    n: int,
    *,
    seed: int,
    p: float | None = None,
    m: int | None = None,
    out_degrees: Sequence[int] | None = None,
) -> GraphOracle:
    """Deterministic synthetic directed graph wrapped in an oracle.

    Models:
      uniform        every ordered pair (u, v), u != v, is an edge with
                     probability p.
      preferential   nodes arrive one at a time and send m out-edges to
                     existing nodes with probability proportional to
                     in-degree + 1.
      configuration  node u receives exactly out_degrees[u] out-edges with
                     uniformly chosen distinct targets, so the generated
                     out-degree sequence equals the requested one.
    """
    if n < 1:
        raise SyntheticModelError(f"n must be >= 1, got {n}")
    if model == "uniform":
        if p is None or not 0.0 <= p <= 1.0:
            raise SyntheticModelError(f"uniform model needs p in [0, 1], got {p}")
        rng = np.random.default_rng(seed)
        mask = rng.random((n, n)) < p
        np.fill_diagonal(mask, False)
        edges = [(int(s), int(d), 1) for s, d in np.argwhere(mask)]
    elif model == "preferential":
        if m is None or m < 1:
            raise SyntheticModelError(f"preferential model needs m >= 1, got {m}")
        rng_py = random.Random(seed)
        indeg = [1] * n  # +1 smoothing so isolated nodes stay reachable
        edge_set: set[tuple[int, int]] = set()
        for u in range(1, n):
            k = min(m, u)
            targets: set[int] = set()
            while len(targets) < k:
                pool = list(range(u))
                weights = [indeg[t] for t in pool]
                t = rng_py.choices(pool, weights=weights, k=1)[0]
                targets.add(t)
            for t in targets:
                edge_set.add((u, t))
                indeg[t] += 1
        edges = [(s, d, 1) for s, d in sorted(edge_set)]
    elif model == "configuration":
        if out_degrees is None or len(out_degrees) != n:
            raise SyntheticModelError("configuration model needs out_degrees of length n")
        if any(d < 0 or d > n - 1 for d in out_degrees):
            raise SyntheticModelError("out_degrees entries must be in [0, n-1]")
        rng_py = random.Random(seed)
        edges = []
        for u, d in enumerate(out_degrees):
            # sample d targets uniformly without replacement, skipping u
            picks = rng_py.sample(range(n - 1), d)
            for t in picks:
                target = t if t < u else t + 1
                edges.append((u, target, 1))
    else:
        raise SyntheticModelError(f"unknown model {model!r}")
    return GraphOracle(RetweetGraph(range(n), edges))


@dataclass(frozen=True)
class WalkStep:
    node: UserId
    degree_at_visit: int
    was_jump: bool


@dataclass
class WalkTrace:
    """One crawler run: per-visit records plus the discovered undirected edges."""

    steps: list[WalkStep]
    discovered_edges: set[tuple[UserId, UserId]] = field(default_factory=set)
    jump_weight: float = 1.0
    budget: int = 0

    def __len__(self) -> int:
        return len(self.steps)

    def jump_fraction(self) -> float:
        return sum(1 for s in self.steps if s.was_jump) / len(self.steps)


def durw_sample(oracle: GraphOracle, jump_weight: float, budget: int, seed: int) -> WalkTrace:
    """Random walk with uniform jumps over the discovered undirected graph.

    Each visited node has its out-edges fetched exactly once and folded into
    the discovered graph as undirected edges; d(v) is recorded after that
    fold, so it grows as the crawl uncovers more of the graph. The first
    step is always a jump, revisits are allowed, and every visit consumes
    one unit of budget.
    """
    if jump_weight <= 0:
        raise ValueError(f"jump_weight must be positive, got {jump_weight}")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget} (empty trace)")
    rng = random.Random(seed)
    adjacency: dict[UserId, set[UserId]] = {}
    fetched: set[UserId] = set()
    steps: list[WalkStep] = []
    edges: set[tuple[UserId, UserId]] = set()

    node = oracle.uniform_random_node(rng)
    was_jump = True
    while len(steps) < budget:
        if node not in fetched:
            fetched.add(node)
            adjacency.setdefault(node, set())
            for nbr in oracle.out_edges(node):
                if nbr == node:
                    continue
                adjacency.setdefault(nbr, set())
                adjacency[node].add(nbr)
                adjacency[nbr].add(node)
                edges.add((min(node, nbr), max(node, nbr)))
        d = len(adjacency.get(node, ()))
        steps.append(WalkStep(node, d, was_jump))
        if len(steps) == budget:
            break
        if rng.random() < jump_weight / (jump_weight + d):
            node = oracle.uniform_random_node(rng)
            was_jump = True
        else:
            neighbors = sorted(adjacency[node])
            node = neighbors[rng.randrange(len(neighbors))]
            was_jump = False
    return WalkTrace(steps=steps, discovered_edges=edges, jump_weight=jump_weight, budget=budget)


def merge_traces(traces: Iterable[WalkTrace]) -> WalkTrace:
    """Concatenate traces from parallel walkers sharing one jump weight."""
    traces = list(traces)
    if not traces:
        raise ValueError("no traces to merge")
    weights = {t.jump_weight for t in traces}
    if len(weights) != 1:
        raise ValueError(f"traces disagree on jump weight: {sorted(weights)}")
    merged = WalkTrace(steps=[], jump_weight=traces[0].jump_weight)
    for t in traces:
        merged.steps.extend(t.steps)
        merged.discovered_edges.update(t.discovered_edges)
        merged.budget += t.budget
    return merged


@dataclass
class DegreeDistributionEstimate:
    """Estimated out-degree mass function; masses are >= 0 and sum to 1."""

    mass: dict[int, float]

    @property
    def total_mass(self) -> float:
        return sum(self.mass.values())

    def l1_distance(self, other: dict[int, float]) -> float:
        keys = set(self.mass) | set(other)
        return sum(abs(self.mass.get(k, 0.0) - other.get(k, 0.0)) for k in keys)


def estimate_outdegree_distribution(trace: WalkTrace, oracle: GraphOracle) -> DegreeDistributionEstimate:
    """Importance-reweighted out-degree distribution from a walk trace.

    The walk's stationary mass at v is proportional to d(v) + w, so each
    visit contributes 1 / (d_visit + w); masses are grouped by the visited
    node's out-degree and normalized to 1.
    """
    if not trace.steps:
        raise ValueError("trace is empty")
    outdeg_cache: dict[UserId, int] = {}
    weights: dict[int, float] = {}
    total = 0.0
    for step in trace.steps:
        if step.node not in outdeg_cache:
            outdeg_cache[step.node] = len(oracle.out_edges(step.node))
        k = outdeg_cache[step.node]
        w = 1.0 / (step.degree_at_visit + trace.jump_weight)
        weights[k] = weights.get(k, 0.0) + w
        total += w
    return DegreeDistributionEstimate({k: v / total for k, v in sorted(weights.items())})


def write_trace_jsonl(trace: WalkTrace, path: Path | str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, step in enumerate(trace.steps):
            fh.write(
                json.dumps(
                    {
                        "step": i,
                        "node": step.node,
                        "degree_at_visit": step.degree_at_visit,
                        "was_jump": step.was_jump,
                    }
                )
                + "\n"
            )


def read_trace_jsonl(path: Path | str, jump_weight: float) -> WalkTrace:
    steps = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            steps.append(WalkStep(obj["node"], obj["degree_at_visit"], obj["was_jump"]))
    return WalkTrace(steps=steps, jump_weight=jump_weight, budget=len(steps))
