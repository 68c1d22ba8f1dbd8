"""Per-user activity features normalized by account age.

Per-day rates divide the profile counters by the exact fractional number of
days since account creation at a frozen snapshot date; the snapshot is a
required input so feature runs are reproducible. Fields that cannot be
computed (one tweet, zero followees) are carried as explicit missing
values, never zeros, and group statistics later exclude them.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from datetime import datetime
from pathlib import Path
from typing import Mapping, Sequence

from .records import TweetRecord, UserId, UserRecord

__all__ = ["FeatureVector", "compute_features", "write_features_csv", "read_features_csv"]

# The crawl keeps at most this many timeline entries per user (newest first).
MAX_TWEETS_PER_USER = 200

_SECONDS_PER_DAY = 86400.0


@dataclass
class FeatureVector:
    user_id: UserId
    statuses_per_day: float
    followers_per_day: float
    followees_per_day: float
    favorites: int
    favorites_per_day: float
    avg_interval_s: float | None
    followers_per_followee: float | None
    created_at_days: float  # fractional days since the Unix epoch, for KDEs

    def as_row(self) -> dict[str, float | int | None]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def compute_features(
    user: UserRecord, tweets: Sequence[TweetRecord], snapshot_date: datetime
) -> FeatureVector:
    """Activity features for one user at the snapshot date.

    Only the newest MAX_TWEETS_PER_USER tweets are consumed. avg_interval_s
    is the mean gap in seconds between consecutive tweets sorted by time;
    with fewer than two tweets it is missing. followers_per_followee is
    missing when the user follows nobody.
    """
    if any(t.user_id != user.id for t in tweets):
        raise ValueError(f"tweets contain rows for other users than {user.id}")
    if snapshot_date <= user.created_at:
        raise ValueError(
            f"snapshot {snapshot_date.isoformat()} is not after account creation "
            f"{user.created_at.isoformat()}"
        )
    age_days = (snapshot_date - user.created_at).total_seconds() / _SECONDS_PER_DAY

    kept = sorted(tweets, key=lambda t: (t.created_at, t.id), reverse=True)[:MAX_TWEETS_PER_USER]
    times = sorted(t.created_at for t in kept)
    if len(times) >= 2:
        gaps = [(b - a).total_seconds() for a, b in zip(times, times[1:])]
        avg_interval = sum(gaps) / len(gaps)
    else:
        avg_interval = None

    followees = user.followees_count
    ratio = user.followers_count / followees if followees > 0 else None

    return FeatureVector(
        user_id=user.id,
        statuses_per_day=user.statuses_count / age_days,
        followers_per_day=user.followers_count / age_days,
        followees_per_day=user.followees_count / age_days,
        favorites=user.favorites_count,
        favorites_per_day=user.favorites_count / age_days,
        avg_interval_s=avg_interval,
        followers_per_followee=ratio,
        created_at_days=user.created_at.timestamp() / _SECONDS_PER_DAY,
    )


def write_features_csv(path: Path | str, rows: Sequence[Mapping[str, object]]) -> None:
    """One row per user; missing values become empty cells."""
    if not rows:
        raise ValueError("no feature rows to write")
    columns = list(rows[0].keys())
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row[c] is None else row[c] for c in columns])


def read_features_csv(path: Path | str) -> list[dict[str, float | None]]:
    out: list[dict[str, float | None]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            parsed: dict[str, float | None] = {}
            for key, raw in row.items():
                parsed[key] = None if raw == "" else float(raw)
            out.append(parsed)
    return out
