"""In-memory directed retweet graph.

Edge u -> v means "u retweeted v". Node ids are dense-remapped to [0, n)
internally for array-backed adjacency; the external id mapping is kept on
the instance and persisted alongside snapshots. Construction is
single-writer; a built graph is immutable and safe to share across
parallel readers.
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Iterator

from .records import IngestReport, RecordError, UserId, parse_tweet, parse_user

__all__ = [
    "RetweetGraph",
    "UnknownNodeError",
    "build_retweet_graph",
    "invert",
    "degree",
    "neighborhood",
    "save_snapshot",
    "load_snapshot",
]


class UnknownNodeError(KeyError):
    """An operation referenced a node that is not registered in the graph."""


class RetweetGraph:
    """Directed sparse graph with per-edge retweet multiplicity.

    Repeat retweets raise the stored multiplicity but the edge set itself
    has no duplicates; diffusion and centrality treat every edge as weight 1.
    Self-edges are rejected at construction.
    """

    __slots__ = ("_ids", "_index", "_adj", "_radj", "_mult")

    def __init__(
        self,
        nodes: Iterable[UserId],
        edges: Iterable[tuple[UserId, UserId, int]] = (),
    ) -> None:
        self._ids: list[UserId] = sorted(set(nodes))
        self._index: dict[UserId, int] = {u: i for i, u in enumerate(self._ids)}
        n = len(self._ids)
        adj: list[set[int]] = [set() for _ in range(n)]
        radj: list[set[int]] = [set() for _ in range(n)]
        mult: dict[tuple[int, int], int] = {}
        for src, dst, m in edges:
            if src == dst:
                raise ValueError(f"self-edge rejected: {src}")
            if src not in self._index or dst not in self._index:
                raise UnknownNodeError(f"edge endpoint not registered: ({src}, {dst})")
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m}")
            si, di = self._index[src], self._index[dst]
            if di in adj[si]:
                raise ValueError(f"duplicate edge rejected: ({src}, {dst})")
            adj[si].add(di)
            radj[di].add(si)
            mult[(si, di)] = m
        self._adj: list[tuple[int, ...]] = [tuple(sorted(s)) for s in adj]
        self._radj: list[tuple[int, ...]] = [tuple(sorted(s)) for s in radj]
        self._mult = mult

    # ---- queries ----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._ids)

    @property
    def edge_count(self) -> int:
        return len(self._mult)

    def nodes(self) -> tuple[UserId, ...]:
        return tuple(self._ids)

    def has_node(self, node: UserId) -> bool:
        return node in self._index

    def index_of(self, node: UserId) -> int:
        """Dense internal index of an external id."""
        try:
            return self._index[node]
        except KeyError:
            raise UnknownNodeError(node) from None

    def id_of(self, index: int) -> UserId:
        return self._ids[index]

    def out_neighbors(self, node: UserId) -> tuple[UserId, ...]:
        return tuple(self._ids[i] for i in self._adj[self.index_of(node)])

    def in_neighbors(self, node: UserId) -> tuple[UserId, ...]:
        return tuple(self._ids[i] for i in self._radj[self.index_of(node)])

    def out_degree(self, node: UserId) -> int:
        return len(self._adj[self.index_of(node)])

    def in_degree(self, node: UserId) -> int:
        return len(self._radj[self.index_of(node)])

    def multiplicity(self, src: UserId, dst: UserId) -> int:
        return self._mult.get((self.index_of(src), self.index_of(dst)), 0)

    def edges(self) -> Iterator[tuple[UserId, UserId, int]]:
        """Yield (src, dst, multiplicity) sorted by (src, dst)."""
        for si, row in enumerate(self._adj):
            for di in row:
                yield self._ids[si], self._ids[di], self._mult[(si, di)]

    # Internal index views used by the numeric modules; do not mutate.
    def adjacency(self) -> list[tuple[int, ...]]:
        return self._adj

    def reverse_adjacency(self) -> list[tuple[int, ...]]:
        return self._radj

    def invert(self) -> "RetweetGraph":
        """Graph with every edge reversed (influence direction)."""
        inv = RetweetGraph.__new__(RetweetGraph)
        inv._ids = self._ids
        inv._index = self._index
        inv._adj = self._radj
        inv._radj = self._adj
        inv._mult = {(d, s): m for (s, d), m in self._mult.items()}
        return inv

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RetweetGraph):
            return NotImplemented
        return (
            self._ids == other._ids
            and self._adj == other._adj
            and self._mult == other._mult
        )

    def __hash__(self) -> int:  # immutable, but identity hashing is enough
        return id(self)

    def __repr__(self) -> str:
        return f"RetweetGraph(nodes={self.node_count}, edges={self.edge_count})"


def build_retweet_graph(tweets: Iterable, users: Iterable) -> tuple[RetweetGraph, IngestReport]:
    """Build the retweet graph from raw users/tweets rows.

    Rows may be already-parsed UserRecord/TweetRecord instances or raw JSON
    objects; malformed rows are rejected into the report and never abort the
    stream. Retweeted users missing from the user stream are materialized as
    profile-less nodes and listed in the report. Deterministic for identical
    input order.
    """
    report = IngestReport()
    known: set[UserId] = set()
    for row in users:
        report.rows_read += 1
        if isinstance(row, RecordError):
            report.reject(row.reason)
            continue
        try:
            user = row if hasattr(row, "statuses_count") else parse_user(row)
        except RecordError as exc:
            report.reject(exc.reason)
            continue
        if user.id in known:
            report.reject("duplicate_user")
            continue
        known.add(user.id)

    edge_mult: dict[tuple[UserId, UserId], int] = {}
    materialized: set[UserId] = set()
    for row in tweets:
        report.rows_read += 1
        if isinstance(row, RecordError):
            report.reject(row.reason)
            continue
        try:
            tweet = row if hasattr(row, "retweeted_user_id") else parse_tweet(row)
        except RecordError as exc:
            report.reject(exc.reason)
            continue
        if tweet.user_id not in known:
            report.reject("unknown_tweet_user")
            continue
        target = tweet.retweeted_user_id
        if target is None:
            continue
        if target == tweet.user_id:
            report.reject("self_retweet")
            continue
        if target not in known and target not in materialized:
            materialized.add(target)
        key = (tweet.user_id, target)
        edge_mult[key] = edge_mult.get(key, 0) + 1

    report.materialized_users = frozenset(materialized)
    graph = RetweetGraph(
        known | materialized,
        ((s, d, m) for (s, d), m in edge_mult.items()),
    )
    return graph, report


def invert(graph: RetweetGraph) -> RetweetGraph:
    """Reverse every edge; invert(invert(g)) == g."""
    return graph.invert()


def degree(graph: RetweetGraph, node: UserId, direction: str) -> int:
    """Count of distinct neighbors of `node` in the requested direction."""
    if direction == "out":
        return graph.out_degree(node)
    if direction == "in":
        return graph.in_degree(node)
    raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")


def neighborhood(graph: RetweetGraph, seeds: Iterable[UserId], radius: int = 1) -> frozenset[UserId]:
    """Union of out-neighbors of the seeds in the raw graph, minus the seeds.

    Only radius 1 is supported; that is the set of accounts the seed group
    retweeted.
    """
    if radius != 1:
        raise ValueError("only radius 1 is supported")
    seed_set = frozenset(seeds)
    out: set[UserId] = set()
    for s in seed_set:
        out.update(graph.out_neighbors(s))
    return frozenset(out - seed_set)


def save_snapshot(graph: RetweetGraph, edges_path: Path | str, idmap_path: Path | str) -> None:
    """Persist as an edge-list CSV (src,dst,multiplicity) plus an id-map CSV."""
    with open(edges_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src", "dst", "multiplicity"])
        for src, dst, m in graph.edges():
            writer.writerow([src, dst, m])
    with open(idmap_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "user_id"])
        for i, uid in enumerate(graph.nodes()):
            writer.writerow([i, uid])


def load_snapshot(edges_path: Path | str, idmap_path: Path | str) -> RetweetGraph:
    with open(idmap_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        nodes = [int(row["user_id"]) for row in reader]
    with open(edges_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        edges = [(int(r["src"]), int(r["dst"]), int(r["multiplicity"])) for r in reader]
    return RetweetGraph(nodes, edges)
