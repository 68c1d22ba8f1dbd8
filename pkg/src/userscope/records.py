"""Ingested profile and timeline records plus the JSONL readers that feed them.

users.jsonl: one object per line with id, created_at (ISO-8601 UTC),
statuses_count, followers_count, followees_count, favorites_count and an
optional suspended flag. tweets.jsonl: id, user_id, created_at, text,
optional retweeted_user_id, hashtags, urls.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterator

UserId = int


class RecordError(ValueError):
    """A row that cannot be turned into a record. Carries a short reason code."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


@dataclass(frozen=True)
class UserRecord:
    id: UserId
    created_at: datetime
    statuses_count: int
    followers_count: int
    followees_count: int
    favorites_count: int
    suspended: bool | None = None


@dataclass(frozen=True)
class TweetRecord:
    id: int
    user_id: UserId
    created_at: datetime
    text: str
    retweeted_user_id: UserId | None = None
    hashtags: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()


def _parse_timestamp(raw: Any) -> datetime:
    if not isinstance(raw, str):
        raise RecordError("bad_timestamp", repr(raw))
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise RecordError("bad_timestamp", raw) from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_id(raw: Any, reason: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
        raise RecordError(reason, repr(raw))
    return raw


def _parse_count(raw: Any, name: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
        raise RecordError("bad_count", f"{name}={raw!r}")
    return raw


def parse_user(obj: Any) -> UserRecord:
    """Validate one users.jsonl object. Raises RecordError on malformed rows."""
    if not isinstance(obj, dict):
        raise RecordError("not_an_object", repr(obj)[:60])
    try:
        return UserRecord(
            id=_parse_id(obj["id"], "bad_user_id"),
            created_at=_parse_timestamp(obj["created_at"]),
            statuses_count=_parse_count(obj["statuses_count"], "statuses_count"),
            followers_count=_parse_count(obj["followers_count"], "followers_count"),
            followees_count=_parse_count(obj["followees_count"], "followees_count"),
            favorites_count=_parse_count(obj["favorites_count"], "favorites_count"),
            suspended=bool(obj["suspended"]) if "suspended" in obj else None,
        )
    except KeyError as exc:
        raise RecordError("missing_field", str(exc)) from exc


def parse_tweet(obj: Any) -> TweetRecord:
    """Validate one tweets.jsonl object. Raises RecordError on malformed rows."""
    if not isinstance(obj, dict):
        raise RecordError("not_an_object", repr(obj)[:60])
    try:
        retweeted = obj.get("retweeted_user_id")
        hashtags = obj.get("hashtags", [])
        urls = obj.get("urls", [])
        if not isinstance(hashtags, list) or not all(isinstance(h, str) for h in hashtags):
            raise RecordError("bad_hashtags", repr(hashtags)[:60])
        if not isinstance(urls, list) or not all(isinstance(u, str) for u in urls):
            raise RecordError("bad_urls", repr(urls)[:60])
        text = obj["text"]
        if not isinstance(text, str):
            raise RecordError("bad_text", repr(text)[:60])
        return TweetRecord(
            id=_parse_id(obj["id"], "bad_tweet_id"),
            user_id=_parse_id(obj["user_id"], "bad_user_id"),
            created_at=_parse_timestamp(obj["created_at"]),
            text=text,
            retweeted_user_id=None if retweeted is None else _parse_id(retweeted, "bad_retweeted_user_id"),
            hashtags=tuple(hashtags),
            urls=tuple(urls),
        )
    except KeyError as exc:
        raise RecordError("missing_field", str(exc)) from exc


def iter_jsonl(path: Path | str) -> Iterator[Any]:
    """Yield one parsed JSON object per non-blank line.

    Unparseable lines yield a RecordError instance instead of raising, so
    the caller can count rejects without aborting the stream.
    """
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                yield RecordError("bad_json", line[:60])


def read_users(path: Path | str) -> list[UserRecord]:
    """Strict reader: raises on the first malformed row."""
    users = []
    for obj in iter_jsonl(path):
        if isinstance(obj, RecordError):
            raise obj
        users.append(parse_user(obj))
    return users


def read_tweets(path: Path | str) -> list[TweetRecord]:
    """Strict reader: raises on the first malformed row."""
    tweets = []
    for obj in iter_jsonl(path):
        if isinstance(obj, RecordError):
            raise obj
        tweets.append(parse_tweet(obj))
    return tweets


@dataclass
class IngestReport:
    """Bookkeeping for one ingest pass: rows_read = accepted + rejected."""

    rows_read: int = 0
    rows_rejected: int = 0
    reject_reasons: dict[str, int] = field(default_factory=dict)
    materialized_users: frozenset[UserId] = frozenset()

    @property
    def rows_accepted(self) -> int:
        return self.rows_read - self.rows_rejected

    def reject(self, reason: str) -> None:
        self.rows_rejected += 1
        self.reject_reasons[reason] = self.reject_reasons.get(reason, 0) + 1

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_rejected": self.rows_rejected,
            "reject_reasons": dict(sorted(self.reject_reasons.items())),
            "materialized_users": sorted(self.materialized_users),
        }
