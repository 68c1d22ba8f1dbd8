"""Statistical layer for the group comparisons: bootstrap confidence
intervals, two-sided Mann-Whitney U tests, Gaussian KDEs, the four-group
report and the suspension table.

Bootstrap percentile intervals are used instead of normal-approximation
intervals because the per-day rate features are heavily skewed. The
Mann-Whitney test is exact (full permutation enumeration) when both
samples have at most 8 observations and otherwise uses the normal
approximation with tie correction; no continuity correction is applied so
identical samples score exactly p = 1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import derive_seed
from .graph import RetweetGraph, neighborhood
from .records import UserId

__all__ = [
    "mean_ci",
    "mann_whitney_u",
    "kde",
    "FeatureSummary",
    "GroupReport",
    "build_group_report",
    "SuspensionRow",
    "SuspensionTable",
    "suspension_table",
]

EXACT_TEST_MAX_N = 8


def mean_ci(
    values: Sequence[float],
    level: float = 0.95,
    resamples: int = 2000,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Bootstrap percentile interval for the mean: (mean, lo, hi).

    Deterministic under a fixed seed. A single observation yields the
    degenerate interval at that value.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("mean_ci needs at least one value")
    mean = float(arr.mean())
    if arr.size == 1 or np.all(arr == arr[0]):
        return mean, mean, mean
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, arr.size, size=(resamples, arr.size))
    boot_means = arr[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(boot_means, [alpha, 1.0 - alpha])
    return mean, float(lo), float(hi)


def _u_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    u = 0.0
    for x in a:
        for y in b:
            if x > y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided Mann-Whitney U p-value.

    Both samples at most EXACT_TEST_MAX_N long: the exact null distribution
    of U is enumerated over every split of the pooled values. Larger
    samples: normal approximation with tie correction.
    """
    a = list(map(float, a))
    b = list(map(float, b))
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(a), len(b)
    u_obs = _u_statistic(a, b)
    mu = n1 * n2 / 2.0

    if n1 <= EXACT_TEST_MAX_N and n2 <= EXACT_TEST_MAX_N:
        pooled = a + b
        indices = range(n1 + n2)
        extreme = 0
        total = 0
        threshold = abs(u_obs - mu) - 1e-12
        for combo in itertools.combinations(indices, n1):
            chosen = set(combo)
            ga = [pooled[i] for i in chosen]
            gb = [pooled[i] for i in indices if i not in chosen]
            total += 1
            if abs(_u_statistic(ga, gb) - mu) >= threshold:
                extreme += 1
        return extreme / total

    pooled = np.asarray(a + b)
    n = n1 + n2
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_counts**3 - tie_counts)) / (n * (n - 1))
    sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if sigma_sq <= 0:
        return 1.0  # every pooled value identical
    z = (u_obs - mu) / math.sqrt(sigma_sq)
    return min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))


def kde(
    values: Sequence[float], bandwidth: float | str = "auto"
) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian kernel density estimate on a 512-point grid.

    The grid spans min - 3h to max + 3h and the returned curve is
    renormalized by its trapezoid integral so it integrates to 1 even for
    mass that would fall outside the 3h margin. Auto bandwidth is
    Silverman's rule of thumb.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("kde needs at least one value")
    if bandwidth == "auto":
        sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        q75, q25 = np.percentile(arr, [75, 25])
        iqr = float(q75 - q25)
        spread_candidates = [s for s in (sd, iqr / 1.34) if s > 0]
        spread = min(spread_candidates) if spread_candidates else 1.0
        h = 0.9 * spread * arr.size ** (-1.0 / 5.0)
    else:
        h = float(bandwidth)
    if h <= 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    grid = np.linspace(arr.min() - 3 * h, arr.max() + 3 * h, 512)
    z = (grid[:, None] - arr[None, :]) / h
    density = np.exp(-0.5 * z**2).sum(axis=1) / (arr.size * h * math.sqrt(2 * math.pi))
    density /= np.trapezoid(density, grid)
    return grid, density


@dataclass
class FeatureSummary:
    n: int
    mean: float | None
    ci_lo: float | None
    ci_hi: float | None
    median: float | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "ci_lo": self.ci_lo,
            "ci_hi": self.ci_hi,
            "median": self.median,
        }


GROUP_NAMES = ("hateful", "normal", "hateful_neighborhood", "normal_neighborhood")


@dataclass
class GroupReport:
    """Per-group feature summaries plus the between-group p-values.

    p_values[feature] holds "hateful_vs_normal" and "neighborhoods"
    (hateful 1-neighborhood against normal 1-neighborhood).
    """

    groups: dict[str, dict[str, FeatureSummary]]
    p_values: dict[str, dict[str, float | None]]
    group_sizes: dict[str, int]
    empty_groups: tuple[str, ...]
    metadata: dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "groups": {
                g: {f: s.to_dict() for f, s in feats.items()}
                for g, feats in self.groups.items()
            },
            "p_values": self.p_values,
            "group_sizes": self.group_sizes,
            "empty_groups": list(self.empty_groups),
            "metadata": self.metadata,
        }


def _summarize(values: list[float], seed: int, level: float, resamples: int) -> FeatureSummary:
    if not values:
        return FeatureSummary(0, None, None, None, None)
    mean, lo, hi = mean_ci(values, level=level, resamples=resamples, seed=seed)
    return FeatureSummary(len(values), mean, lo, hi, float(np.median(values)))


def build_group_report(
    features: Mapping[UserId, Mapping[str, float | None]],
    labels: Mapping[UserId, str],
    graph: RetweetGraph,
    *,
    seed: int = 0,
    level: float = 0.95,
    resamples: int = 2000,
) -> GroupReport:
    """Assemble the four comparison groups and summarize every feature.

    Groups: labeled hateful users, labeled normal users, and the
    1-neighborhoods of each on the raw retweet graph with all labeled users
    excluded. Users missing a feature are excluded from that feature's
    summary, not counted as zero. Deterministic given (features, labels,
    seed).
    """
    hateful = sorted(u for u, lab in labels.items() if lab == "hateful")
    normal = sorted(u for u, lab in labels.items() if lab == "not_hateful")
    labeled = set(labels)
    in_graph = [u for u in hateful if graph.has_node(u)]
    hateful_nb = sorted(neighborhood(graph, in_graph) - labeled)
    in_graph = [u for u in normal if graph.has_node(u)]
    normal_nb = sorted(neighborhood(graph, in_graph) - labeled)

    groups: dict[str, list[UserId]] = {
        "hateful": hateful,
        "normal": normal,
        "hateful_neighborhood": hateful_nb,
        "normal_neighborhood": normal_nb,
    }
    feature_names = sorted({name for row in features.values() for name in row})

    summaries: dict[str, dict[str, FeatureSummary]] = {}
    per_group_values: dict[tuple[str, str], list[float]] = {}
    for group_name, members in groups.items():
        summaries[group_name] = {}
        for fname in feature_names:
            values = [
                float(features[u][fname])
                for u in members
                if u in features and features[u].get(fname) is not None
            ]
            per_group_values[(group_name, fname)] = values
            summaries[group_name][fname] = _summarize(
                values, derive_seed(seed, group_name, fname), level, resamples
            )

    p_values: dict[str, dict[str, float | None]] = {}
    for fname in feature_names:
        entry: dict[str, float | None] = {}
        va, vb = per_group_values[("hateful", fname)], per_group_values[("normal", fname)]
        entry["hateful_vs_normal"] = mann_whitney_u(va, vb) if va and vb else None
        va = per_group_values[("hateful_neighborhood", fname)]
        vb = per_group_values[("normal_neighborhood", fname)]
        entry["neighborhoods"] = mann_whitney_u(va, vb) if va and vb else None
        p_values[fname] = entry

    return GroupReport(
        groups=summaries,
        p_values=p_values,
        group_sizes={g: len(m) for g, m in groups.items()},
        empty_groups=tuple(g for g, m in groups.items() if not m),
        metadata={
            "test": "mann_whitney_u_two_sided",
            "ci": f"bootstrap_percentile_{level}",
            "resamples": resamples,
            "seed": seed,
        },
    )


@dataclass(frozen=True)
class SuspensionRow:
    group: str
    suspended: int
    size: int

    @property
    def percentage(self) -> Decimal:
        if self.size == 0:
            return Decimal("0.00")
        pct = Decimal(self.suspended) * 100 / Decimal(self.size)
        return pct.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)

    def formatted(self) -> str:
        return f"{self.percentage}% ({self.suspended})"


@dataclass(frozen=True)
class SuspensionTable:
    rows: tuple[SuspensionRow, ...]

    def row(self, group: str) -> SuspensionRow:
        for r in self.rows:
            if r.group == group:
                return r
        raise KeyError(group)

    def to_dict(self) -> dict:
        return {
            r.group: {
                "suspended": r.suspended,
                "size": r.size,
                "percentage": str(r.percentage),
                "cell": r.formatted(),
            }
            for r in self.rows
        }


def suspension_table(
    labels: Mapping[UserId, str],
    all_users: Iterable[UserId],
    suspended: Iterable[UserId],
) -> SuspensionTable:
    """Suspended share per group: hateful, normal, and everyone unannotated."""
    all_set = set(all_users)
    suspended_set = set(suspended)
    if not suspended_set <= all_set:
        raise ValueError("suspended users must be a subset of all users")
    hateful = {u for u, lab in labels.items() if lab == "hateful"}
    normal = {u for u, lab in labels.items() if lab == "not_hateful"}
    others = all_set - hateful - normal
    rows = tuple(
        SuspensionRow(name, len(members & suspended_set), len(members))
        for name, members in (("hateful", hateful), ("normal", normal), ("others", others))
    )
    return SuspensionTable(rows)
