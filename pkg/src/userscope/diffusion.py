"""Belief diffusion over the retweet graph and stratified sample selection.

The transition matrix T is row-stochastic: row u spreads weight uniformly
over u itself plus every account u retweeted, so each user is equally
influenced by every user they retweet (and keeps a self-loop). Beliefs are
seeded to 1 for lexicon-flagged users and iterated p(t) = T p(t-1); after
t steps each user carries a proximity score in [0, 1] that drives the
four-stratum sampling of the annotation pool.
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy import sparse

from .graph import RetweetGraph, UnknownNodeError
from .records import UserId

__all__ = [
    "BeliefVector",
    "StrataAssignment",
    "STRATUM_BOUNDARIES",
    "build_transition_matrix",
    "seed_beliefs",
    "diffuse",
    "stratify",
    "stratified_sample",
    "write_beliefs_csv",
    "read_beliefs_csv",
]

# Half-open belief intervals [0,.25), [.25,.5), [.5,.75) and closed [.75,1].
STRATUM_BOUNDARIES = (0.25, 0.5, 0.75)


@dataclass
class BeliefVector:
    """Per-user belief p_i in [0, 1], indexed by the graph's dense order."""

    values: np.ndarray
    step: int = 0

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class StrataAssignment:
    """Stratum in {1, 2, 3, 4} per user; a pure function of the belief."""

    user_ids: np.ndarray
    strata: np.ndarray

    def members(self, stratum: int) -> np.ndarray:
        return self.user_ids[self.strata == stratum]


def build_transition_matrix(graph: RetweetGraph, *, invert_edges: bool = False) -> sparse.csr_matrix:
    """Row-stochastic matrix over the graph's dense node order.

    Row u assigns 1 / (outdeg(u) + 1) to u itself and to each account u
    retweeted; users with no retweets get the identity row. `invert_edges`
    builds the transposed reading (rows average over the accounts that
    retweeted u instead) for comparison runs.
    """
    adjacency = graph.reverse_adjacency() if invert_edges else graph.adjacency()
    n = graph.node_count
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for u, row in enumerate(adjacency):
        entries = sorted(set(row) | {u})
        weight = 1.0 / len(entries)
        indices.extend(entries)
        data.extend([weight] * len(entries))
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data), np.asarray(indices), np.asarray(indptr)), shape=(n, n)
    )


def seed_beliefs(graph: RetweetGraph, lexicon_hits: Iterable[UserId]) -> BeliefVector:
    """Belief 1 for every flagged user, 0 for everyone else, at step 0."""
    values = np.zeros(graph.node_count)
    for uid in lexicon_hits:
        if not graph.has_node(uid):
            raise UnknownNodeError(uid)
        values[graph.index_of(uid)] = 1.0
    return BeliefVector(values, step=0)


def diffuse(T: sparse.csr_matrix, p0: BeliefVector, t: int = 2) -> BeliefVector:
    """Apply t sparse matrix-vector products: returns T^t p0."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if T.shape[1] != len(p0.values):
        raise ValueError(f"dimension mismatch: T is {T.shape}, p0 has {len(p0.values)}")
    values = p0.values
    for _ in range(t):
        values = T @ values
    return BeliefVector(values, step=p0.step + t)


def stratify(
    graph: RetweetGraph,
    beliefs: BeliefVector,
    boundaries: tuple[float, float, float] = STRATUM_BOUNDARIES,
) -> StrataAssignment:
    """Assign each user to one of four belief strata."""
    values = beliefs.values
    if len(values) != graph.node_count:
        raise ValueError("belief vector does not match the graph")
    if np.any(values < 0.0) or np.any(values > 1.0):
        raise ValueError("beliefs outside [0, 1]")
    strata = np.digitize(values, boundaries) + 1
    return StrataAssignment(np.asarray(graph.nodes()), strata)


def stratified_sample(assignment: StrataAssignment, cap: int = 1500, seed: int = 0) -> frozenset[UserId]:
    """Up to `cap` users drawn uniformly without replacement per stratum.

    Deterministic for a fixed seed: strata are processed in order and
    members are sorted before sampling.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    rng = random.Random(seed)
    chosen: set[UserId] = set()
    for stratum in (1, 2, 3, 4):
        members = sorted(int(u) for u in assignment.members(stratum))
        k = min(cap, len(members))
        chosen.update(rng.sample(members, k))
    return frozenset(chosen)


def write_beliefs_csv(path: Path | str, assignment: StrataAssignment, beliefs: BeliefVector) -> None:
    """Belief export: one "user_id,belief,stratum" row per user."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user_id", "belief", "stratum"])
        for uid, p, s in zip(assignment.user_ids, beliefs.values, assignment.strata):
            writer.writerow([int(uid), repr(float(p)), int(s)])


def read_beliefs_csv(path: Path | str) -> tuple[StrataAssignment, BeliefVector]:
    ids: list[int] = []
    values: list[float] = []
    strata: list[int] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            ids.append(int(row["user_id"]))
            values.append(float(row["belief"]))
            strata.append(int(row["stratum"]))
    return (
        StrataAssignment(np.asarray(ids), np.asarray(strata)),
        BeliefVector(np.asarray(values)),
    )
