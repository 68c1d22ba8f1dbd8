"""Lexicon-driven text analytics over user timelines.

Everything here is file-driven and pure: phrase lexicons (hate seed list,
profanity list), category lexicon sets scored by relative token occurrence,
and a valence lexicon for sentence-level sentiment with negation handling.
The category and valence resources bundled under lexdata/ are self-contained
stand-ins for the third-party tools they mirror; no numeric parity with
those tools is claimed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .records import TweetRecord

__all__ = [
    "URL_TOKEN",
    "Lexicon",
    "CategoryLexiconSet",
    "ValenceLexicon",
    "ContentProfile",
    "tokenize",
    "split_sentences",
    "match_lexicon",
    "matched_positions",
    "category_scores",
    "sentence_sentiment",
    "profanity_rate",
    "hashtag_frequencies",
    "content_profile",
    "default_lexicon_dir",
]

URL_TOKEN = "<url>"

_URL_RE = re.compile(r"https?://\S+|www\.\S+", re.IGNORECASE)
_TOKEN_RE = re.compile(r"[#@]?[^\W_]+", re.UNICODE)
_SENTENCE_SPLIT_RE = re.compile(r"[.!?\n]+")


def tokenize(text: str) -> list[str]:
    """Lowercased tokens: split on non-alphanumerics, keep # and @ prefixes,
    collapse each URL into a single sentinel token."""
    tokens: list[str] = []
    pos = 0
    for m in _URL_RE.finditer(text):
        tokens.extend(t.lower() for t in _TOKEN_RE.findall(text[pos : m.start()]))
        tokens.append(URL_TOKEN)
        pos = m.end()
    tokens.extend(t.lower() for t in _TOKEN_RE.findall(text[pos:]))
    return tokens


def split_sentences(text: str) -> list[str]:
    """Sentences split on ., !, ? and newlines; blanks dropped."""
    return [s.strip() for s in _SENTENCE_SPLIT_RE.split(text) if s.strip()]


@dataclass(frozen=True)
class Lexicon:
    """A named list of lowercase words or short phrases (at most 5 tokens)."""

    name: str
    entries: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        seen = set()
        for entry in self.entries:
            if not entry or any(not tok for tok in entry):
                raise ValueError(f"lexicon {self.name!r} has an empty entry")
            if len(entry) > 5:
                raise ValueError(f"lexicon {self.name!r} entry too long: {' '.join(entry)}")
            if entry in seen:
                raise ValueError(f"lexicon {self.name!r} has duplicate entry: {' '.join(entry)}")
            seen.add(entry)

    @classmethod
    def from_phrases(cls, name: str, phrases: Iterable[str]) -> "Lexicon":
        entries = []
        for phrase in phrases:
            toks = tuple(tokenize(phrase))
            if toks:
                entries.append(toks)
        return cls(name, tuple(entries))

    @classmethod
    def from_file(cls, path: Path | str, name: str | None = None) -> "Lexicon":
        """One entry per line, UTF-8, '#'-prefixed comment lines skipped."""
        path = Path(path)
        phrases = []
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            phrases.append(line)
        return cls.from_phrases(name or path.stem, phrases)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CategoryLexiconSet:
    categories: Mapping[str, Lexicon]

    def __post_init__(self) -> None:
        for name, lex in self.categories.items():
            if len(lex) == 0:
                raise ValueError(f"category {name!r} has no entries")

    @classmethod
    def from_directory(cls, directory: Path | str) -> "CategoryLexiconSet":
        """Load every categories/<name>.txt file in the directory."""
        directory = Path(directory)
        cats = {}
        for path in sorted(directory.glob("*.txt")):
            cats[path.stem] = Lexicon.from_file(path)
        if not cats:
            raise ValueError(f"no category files found in {directory}")
        return cls(cats)


@dataclass(frozen=True)
class ValenceLexicon:
    """token -> valence in [-1, 1], plus negation tokens and optional
    per-token subjectivity weights in [0, 1]."""

    valence: Mapping[str, float]
    negations: frozenset[str]
    subjectivity: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for tok, v in self.valence.items():
            if not -1.0 <= v <= 1.0:
                raise ValueError(f"valence out of range for {tok!r}: {v}")
        for tok, s in self.subjectivity.items():
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"subjectivity out of range for {tok!r}: {s}")

    @classmethod
    def from_files(cls, valence_path: Path | str, negations_path: Path | str) -> "ValenceLexicon":
        """valence file: "token<TAB>valence<TAB>subjectivity" rows; negations
        file: one token per line."""
        valence: dict[str, float] = {}
        subjectivity: dict[str, float] = {}
        for line in Path(valence_path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"bad valence row: {line!r}")
            token = parts[0].lower()
            valence[token] = float(parts[1])
            if len(parts) >= 3:
                subjectivity[token] = float(parts[2])
        negations = frozenset(
            line.strip().lower()
            for line in Path(negations_path).read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        )
        return cls(valence, negations, subjectivity)


def match_lexicon(tokens: Sequence[str], lexicon: Lexicon) -> list[str]:
    """Whole-token matches of every lexicon entry, one result per occurrence.

    Multi-word phrases match consecutive token runs; results are reported in
    scan order as the entries' space-joined text.
    """
    matches: list[str] = []
    n = len(tokens)
    for pos in range(n):
        for entry in lexicon.entries:
            if pos + len(entry) <= n and tuple(tokens[pos : pos + len(entry)]) == entry:
                matches.append(" ".join(entry))
    return matches


def matched_positions(tokens: Sequence[str], lexicon: Lexicon) -> set[int]:
    """Token positions covered by at least one lexicon match."""
    covered: set[int] = set()
    n = len(tokens)
    for pos in range(n):
        for entry in lexicon.entries:
            if pos + len(entry) <= n and tuple(tokens[pos : pos + len(entry)]) == entry:
                covered.update(range(pos, pos + len(entry)))
    return covered


def category_scores(tweets: Sequence[TweetRecord], categories: CategoryLexiconSet) -> dict[str, float]:
    """Relative occurrence per category: matched tokens over total tokens.

    A token counts as matched for a category when it is covered by any of
    that category's entries, so scores stay in [0, 1] even when phrases
    overlap. An empty token corpus scores every category 0.
    """
    if not tweets:
        raise ValueError("tweet list is empty")
    token_lists = [tokenize(t.text) for t in tweets]
    total = sum(len(toks) for toks in token_lists)
    scores = {name: 0.0 for name in categories.categories}
    if total == 0:
        return scores
    for name, lex in categories.categories.items():
        matched = sum(len(matched_positions(toks, lex)) for toks in token_lists)
        scores[name] = matched / total
    return scores


def sentence_sentiment(sentence: str, vl: ValenceLexicon, negation_window: int = 3) -> tuple[float, float]:
    """(sentiment, subjectivity) for one sentence.

    Sentiment is the mean valence over matched tokens, sign-flipped for a
    token preceded by a negation token within `negation_window` positions;
    subjectivity is the mean subjectivity weight over the same tokens. No
    matched tokens gives (0, 0).
    """
    tokens = tokenize(sentence)
    valences: list[float] = []
    weights: list[float] = []
    for i, tok in enumerate(tokens):
        if tok not in vl.valence:
            continue
        v = vl.valence[tok]
        window = tokens[max(0, i - negation_window) : i]
        if any(t in vl.negations for t in window):
            v = -v
        valences.append(v)
        weights.append(vl.subjectivity.get(tok, 0.0))
    if not valences:
        return 0.0, 0.0
    return sum(valences) / len(valences), sum(weights) / len(weights)


def profanity_rate(
    tweets: Sequence[TweetRecord], badwords: Lexicon, mode: str = "tokens_per_tweet"
) -> float:
    """Profane tokens per tweet, or with mode="share_of_tweets" the fraction
    of tweets containing at least one profane token."""
    if not tweets:
        raise ValueError("tweet list is empty")
    if mode not in ("tokens_per_tweet", "share_of_tweets"):
        raise ValueError(f"unknown profanity mode {mode!r}")
    per_tweet = [len(matched_positions(tokenize(t.text), badwords)) for t in tweets]
    if mode == "share_of_tweets":
        return sum(1 for c in per_tweet if c > 0) / len(tweets)
    return sum(per_tweet) / len(tweets)


def hashtag_frequencies(tweets: Sequence[TweetRecord], top_k: int) -> list[tuple[str, int]]:
    """Top hashtags by case-insensitive count, ties broken lexicographically."""
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    counts: dict[str, int] = {}
    for t in tweets:
        for tag in t.hashtags:
            norm = tag.lower().lstrip("#")
            if norm:
                counts[norm] = counts.get(norm, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ordered[:top_k]


@dataclass
class ContentProfile:
    """Per-user content summary derived from the collected timeline."""

    category_occurrence: dict[str, float]
    sentiment: float
    subjectivity: float
    profanity_per_tweet: float
    hashtag_counts: dict[str, int]
    url_per_tweet: float
    hashtag_per_tweet: float


def content_profile(
    tweets: Sequence[TweetRecord],
    categories: CategoryLexiconSet,
    valence: ValenceLexicon,
    badwords: Lexicon,
    *,
    negation_window: int = 3,
    profanity_mode: str = "tokens_per_tweet",
) -> ContentProfile:
    """Full content profile for one user's tweets.

    Sentiment and subjectivity are means over every non-empty sentence in
    the timeline (a sentence with no lexicon hits contributes 0 to both).
    """
    if not tweets:
        raise ValueError("tweet list is empty")
    sentences = [s for t in tweets for s in split_sentences(t.text)]
    if sentences:
        scored = [sentence_sentiment(s, valence, negation_window) for s in sentences]
        sentiment = sum(v for v, _ in scored) / len(scored)
        subjectivity = sum(w for _, w in scored) / len(scored)
    else:
        sentiment, subjectivity = 0.0, 0.0
    counts: dict[str, int] = {}
    for t in tweets:
        for tag in t.hashtags:
            norm = tag.lower().lstrip("#")
            if norm:
                counts[norm] = counts.get(norm, 0) + 1
    return ContentProfile(
        category_occurrence=category_scores(tweets, categories),
        sentiment=sentiment,
        subjectivity=subjectivity,
        profanity_per_tweet=profanity_rate(tweets, badwords, profanity_mode),
        hashtag_counts=counts,
        url_per_tweet=sum(len(t.urls) for t in tweets) / len(tweets),
        hashtag_per_tweet=sum(len(t.hashtags) for t in tweets) / len(tweets),
    )


def default_lexicon_dir() -> Path:
    """Location of the bundled lexicon files."""
    return Path(str(resources.files("userscope").joinpath("lexdata")))
