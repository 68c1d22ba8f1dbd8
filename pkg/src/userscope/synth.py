"""Synthetic offline dataset with a planted high-activity flagged group.

Generates users.jsonl / tweets.jsonl pairs shaped like the real ingest
format, plus a ground_truth.json naming the planted users so harnesses can
script annotation sessions. Planted users tweet roughly twice as often,
favorite more, follow more accounts per day, were created more recently,
seed-phrase their timelines, retweet densely among themselves and are
retweeted by part of the background population, which lifts their group
medians for the centrality metrics on the influence-direction graph.
"""
from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

__all__ = ["generate_dataset", "SNAPSHOT_DATE"]

SNAPSHOT_DATE = datetime(2017, 10, 1, tzinfo=timezone.utc)

_NEUTRAL_WORDS = (
    "today morning coffee weather news game music team city road travel "
    "book photo dinner friends weekend match show park train lunch"
).split()
_POSITIVE_WORDS = "good great love happy wonderful nice best proud beautiful".split()
_NEGATIVE_WORDS = "bad terrible hate awful angry disgusting wrong sick liar corrupt".split()
_PROFANITY = "shit fuck damn crap bitch".split()
_SEED_PHRASES = ("white genocide", "holohoax", "racial treason", "race traitor")
_COMMON_TAGS = ("MAGA", "Syria", "Iraq", "news", "sports")
_PLANTED_TAGS = ("WhiteGenocide", "MAGA")


def _iso(ts: datetime) -> str:
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


def generate_dataset(
    out_dir: Path | str,
    n_users: int = 300,
    seed: int = 7,
    planted_fraction: float = 0.1,
    tweets_per_user: int = 24,
) -> dict:
    """Write users.jsonl, tweets.jsonl and ground_truth.json under out_dir.

    Returns the ground-truth dict (planted users, celebrity pool, snapshot
    date) that is also written to disk.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    ids = [1000 + i for i in range(n_users)]
    n_planted = max(1, int(n_users * planted_fraction))
    planted = set(ids[:n_planted])
    n_celebs = max(2, n_users // 30)
    celebrities = set(ids[-n_celebs:])
    background = [u for u in ids if u not in planted and u not in celebrities]

    users = []
    for uid in ids:
        if uid in planted:
            # recent accounts, high activity
            age_days = rng.uniform(120, 600)
            statuses_rate = rng.uniform(4.0, 7.0)
            followees_rate = rng.uniform(1.2, 2.5)
            followers_rate = rng.uniform(0.3, 0.8)
            favorites_rate = rng.uniform(3.0, 6.0)
        elif uid in celebrities:
            age_days = rng.uniform(1500, 3000)
            statuses_rate = rng.uniform(1.0, 3.0)
            followees_rate = rng.uniform(0.05, 0.2)
            followers_rate = rng.uniform(20.0, 60.0)
            favorites_rate = rng.uniform(0.2, 1.0)
        else:
            age_days = rng.uniform(600, 2800)
            statuses_rate = rng.uniform(0.8, 2.8)
            followees_rate = rng.uniform(0.2, 0.9)
            followers_rate = rng.uniform(0.3, 1.2)
            favorites_rate = rng.uniform(0.5, 2.0)
        created = SNAPSHOT_DATE - timedelta(days=age_days)
        suspended = False
        if uid in planted and rng.random() < 0.12:
            suspended = True
        elif uid not in planted and rng.random() < 0.004:
            suspended = True
        users.append(
            {
                "id": uid,
                "created_at": _iso(created),
                "statuses_count": int(statuses_rate * age_days),
                "followers_count": int(followers_rate * age_days),
                "followees_count": int(followees_rate * age_days),
                "favorites_count": int(favorites_rate * age_days),
                "suspended": suspended,
            }
        )

    def retweet_target(uid: int) -> int | None:
        roll = rng.random()
        if uid in planted:
            # dense core plus reach into the background
            if roll < 0.45:
                pool = [u for u in planted if u != uid]
            elif roll < 0.65:
                pool = list(celebrities)
            else:
                pool = background
        elif uid in celebrities:
            if roll < 0.3:
                pool = [u for u in celebrities if u != uid]
            else:
                return None
        else:
            if roll < 0.35:
                pool = list(celebrities)
            elif roll < 0.55:
                pool = sorted(planted)
            elif roll < 0.75:
                pool = [u for u in background if u != uid]
            else:
                return None
        return rng.choice(pool)

    def tweet_text(uid: int) -> str:
        words = rng.sample(_NEUTRAL_WORDS, k=rng.randint(4, 8))
        if uid in planted:
            if rng.random() < 0.5:
                words.extend(rng.sample(_NEGATIVE_WORDS, k=2))
            if rng.random() < 0.4:
                words.append(rng.choice(_PROFANITY))
            if rng.random() < 0.3:
                words.append(rng.choice(_SEED_PHRASES))
        else:
            if rng.random() < 0.5:
                words.extend(rng.sample(_POSITIVE_WORDS, k=2))
            if rng.random() < 0.08:
                words.append(rng.choice(_NEGATIVE_WORDS))
        return " ".join(words) + "."

    tweets = []
    tweet_id = 500000
    for uid in ids:
        # planted users tweet in shorter intervals
        count = tweets_per_user + (rng.randint(4, 10) if uid in planted else rng.randint(-4, 4))
        gap_minutes = rng.uniform(20, 90) if uid in planted else rng.uniform(120, 600)
        cursor = SNAPSHOT_DATE - timedelta(minutes=rng.uniform(10, 200))
        for _ in range(count):
            hashtags = []
            if uid in planted:
                if rng.random() < 0.25:
                    hashtags.append(rng.choice(_PLANTED_TAGS))
            elif rng.random() < 0.3:
                hashtags.append(rng.choice(_COMMON_TAGS))
            urls = ["http://example.com/a"] if rng.random() < 0.1 else []
            row = {
                "id": tweet_id,
                "user_id": uid,
                "created_at": _iso(cursor),
                "text": tweet_text(uid),
                "hashtags": hashtags,
                "urls": urls,
            }
            target = retweet_target(uid)
            if target is not None:
                row["retweeted_user_id"] = target
            tweets.append(row)
            tweet_id += 1
            cursor -= timedelta(minutes=gap_minutes * rng.uniform(0.5, 1.5))

    with open(out_dir / "users.jsonl", "w", encoding="utf-8") as fh:
        for row in users:
            fh.write(json.dumps(row) + "\n")
    with open(out_dir / "tweets.jsonl", "w", encoding="utf-8") as fh:
        for row in tweets:
            fh.write(json.dumps(row) + "\n")

    truth = {
        "planted": sorted(planted),
        "celebrities": sorted(celebrities),
        "snapshot_date": _iso(SNAPSHOT_DATE),
        "seed": seed,
    }
    (out_dir / "ground_truth.json").write_text(json.dumps(truth, indent=2), encoding="utf-8")
    return truth
