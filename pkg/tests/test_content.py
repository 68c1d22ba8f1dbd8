from datetime import datetime, timezone

import pytest

from userscope.content import (
    URL_TOKEN,
    CategoryLexiconSet,
    Lexicon,
    ValenceLexicon,
    category_scores,
    content_profile,
    default_lexicon_dir,
    hashtag_frequencies,
    match_lexicon,
    matched_positions,
    profanity_rate,
    sentence_sentiment,
    split_sentences,
    tokenize,
)
from userscope.records import TweetRecord

TS = datetime(2017, 5, 1, tzinfo=timezone.utc)


def tweet(text, tid=1, hashtags=(), urls=()):
    return TweetRecord(
        id=tid, user_id=1, created_at=TS, text=text, hashtags=tuple(hashtags), urls=tuple(urls)
    )


class TestTokenize:
    def test_basic_sentence(self):
        assert tokenize("Who convinced Muslim girls?") == ["who", "convinced", "muslim", "girls"]

    def test_empty_string(self):
        assert tokenize("") == []

    def test_hashtag_and_url(self):
        assert tokenize("#MAGA http://x.co") == ["#maga", URL_TOKEN]

    def test_mention_prefix_kept(self):
        assert tokenize("@Alice said hi") == ["@alice", "said", "hi"]

    def test_unicode_words(self):
        assert tokenize("Café périphérique") == ["café", "périphérique"]

    def test_punctuation_splits(self):
        assert tokenize("it's a test-case") == ["it", "s", "a", "test", "case"]


class TestSentenceSplit:
    def test_splits_on_terminators_and_newlines(self):
        assert split_sentences("One. Two! Three?\nFour") == ["One", "Two", "Three", "Four"]

    def test_blank_segments_dropped(self):
        assert split_sentences("...!!!") == []


class TestLexicon:
    def test_match_single_word(self):
        lex = Lexicon.from_phrases("hate", ["holohoax"])
        assert match_lexicon(tokenize("the holohoax never happened"), lex) == ["holohoax"]

    def test_match_multiword_phrase(self):
        lex = Lexicon.from_phrases("hate", ["racial treason"])
        assert match_lexicon(tokenize("racial treason is real"), lex) == ["racial treason"]

    def test_whole_token_rule(self):
        lex = Lexicon.from_phrases("hate", ["holohoax"])
        assert match_lexicon(tokenize("holo hoax"), lex) == []

    def test_each_occurrence_reported(self):
        lex = Lexicon.from_phrases("x", ["bad"])
        assert match_lexicon(tokenize("bad bad bad"), lex) == ["bad", "bad", "bad"]

    def test_case_insensitive(self):
        lex = Lexicon.from_phrases("x", ["White Genocide"])
        assert match_lexicon(tokenize("WHITE genocide trending"), lex) == ["white genocide"]

    def test_duplicate_entry_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            Lexicon("x", (("a",), ("a",)))

    def test_long_phrase_rejected(self):
        with pytest.raises(ValueError, match="too long"):
            Lexicon("x", (("a", "b", "c", "d", "e", "f"),))

    def test_file_loader_skips_comments(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("# comment\nalpha\n\nbeta gamma\n", encoding="utf-8")
        lex = Lexicon.from_file(path)
        assert lex.entries == (("alpha",), ("beta", "gamma"))


class TestCategoryScores:
    def make_set(self, **cats):
        return CategoryLexiconSet(
            {name: Lexicon.from_phrases(name, words) for name, words in cats.items()}
        )

    def test_two_of_ten_tokens(self):
        cats = self.make_set(anger=["furious", "rage"])
        tweets = [tweet("furious rage one two three four five six seven eight")]
        assert category_scores(tweets, cats)["anger"] == pytest.approx(0.2)

    def test_no_matches_gives_zeros(self):
        cats = self.make_set(anger=["furious"], love=["adore"])
        scores = category_scores([tweet("nothing to see here")], cats)
        assert scores == {"anger": 0.0, "love": 0.0}

    def test_matches_brute_force_scan(self):
        cats = self.make_set(anger=["furious", "rage"], love=["love", "adore"])
        corpus = [
            tweet("i love rage rooms", 1),
            tweet("furious and furious again", 2),
            tweet("adore this love", 3),
        ]
        scores = category_scores(corpus, cats)
        # independent oracle: exhaustive per-token scan
        all_tokens = [tok for t in corpus for tok in tokenize(t.text)]
        for name, words in (("anger", {"furious", "rage"}), ("love", {"love", "adore"})):
            expected = sum(1 for tok in all_tokens if tok in words) / len(all_tokens)
            assert scores[name] == pytest.approx(expected)

    def test_scores_bounded_by_one_with_overlapping_phrases(self):
        cats = self.make_set(x=["racial", "racial treason", "treason"])
        scores = category_scores([tweet("racial treason")], cats)
        assert scores["x"] == pytest.approx(1.0)

    def test_empty_tweet_list_rejected(self):
        cats = self.make_set(x=["a"])
        with pytest.raises(ValueError):
            category_scores([], cats)

    def test_disjoint_lexicons_sum_at_most_one(self):
        cats = self.make_set(a=["alpha"], b=["beta"], c=["gamma"])
        scores = category_scores([tweet("alpha beta gamma pad pad pad")], cats)
        assert sum(scores.values()) <= 1.0 + 1e-12


class TestSentiment:
    VL = ValenceLexicon(
        valence={"good": 0.5, "bad": -0.5, "great": 0.8},
        negations=frozenset({"not", "never"}),
        subjectivity={"good": 0.6, "bad": 0.7, "great": 0.75},
    )

    def test_single_token(self):
        sentiment, subjectivity = sentence_sentiment("good", self.VL)
        assert sentiment == pytest.approx(0.5)
        assert subjectivity == pytest.approx(0.6)

    def test_negation_flips_sign(self):
        sentiment, _ = sentence_sentiment("not good", self.VL)
        assert sentiment == pytest.approx(-0.5)

    def test_negation_window_is_three_tokens(self):
        inside, _ = sentence_sentiment("not at all good", self.VL)
        assert inside == pytest.approx(-0.5)
        outside, _ = sentence_sentiment("not one bit of good", self.VL)
        assert outside == pytest.approx(0.5)

    def test_empty_sentence(self):
        assert sentence_sentiment("", self.VL) == (0.0, 0.0)

    def test_mean_over_matches(self):
        sentiment, subjectivity = sentence_sentiment("good and bad", self.VL)
        assert sentiment == pytest.approx(0.0)
        assert subjectivity == pytest.approx((0.6 + 0.7) / 2)

    def test_antisymmetric_under_valence_negation(self):
        flipped = ValenceLexicon(
            valence={tok: -v for tok, v in self.VL.valence.items()},
            negations=self.VL.negations,
            subjectivity=self.VL.subjectivity,
        )
        for text in ("good", "not good", "great and bad", "never great but good"):
            s1, _ = sentence_sentiment(text, self.VL)
            s2, _ = sentence_sentiment(text, flipped)
            assert s2 == pytest.approx(-s1)


class TestProfanity:
    BAD = Lexicon.from_phrases("badwords", ["shit", "damn"])

    def test_two_tokens_over_four_tweets(self):
        tweets = [tweet("shit happens"), tweet("damn"), tweet("fine"), tweet("ok")]
        assert profanity_rate(tweets, self.BAD) == pytest.approx(0.5)

    def test_clean_corpus(self):
        assert profanity_rate([tweet("all clean")], self.BAD) == 0.0

    def test_matches_per_tweet_brute_force(self):
        corpus = [tweet("shit shit damn"), tweet("so damn fine"), tweet("ok")]
        expected = sum(
            sum(1 for tok in tokenize(t.text) if tok in {"shit", "damn"}) for t in corpus
        ) / len(corpus)
        assert profanity_rate(corpus, self.BAD) == pytest.approx(expected)

    def test_share_of_tweets_mode(self):
        corpus = [tweet("shit shit"), tweet("clean"), tweet("damn")]
        assert profanity_rate(corpus, self.BAD, mode="share_of_tweets") == pytest.approx(2 / 3)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            profanity_rate([tweet("x")], self.BAD, mode="nope")


class TestHashtags:
    def test_case_fold_and_order(self):
        tweets = [tweet("a", hashtags=["#MAGA"]), tweet("b", hashtags=["#maga"]), tweet("c", hashtags=["#Syria"])]
        assert hashtag_frequencies(tweets, 10) == [("maga", 2), ("syria", 1)]

    def test_no_hashtags(self):
        assert hashtag_frequencies([tweet("a")], 5) == []

    def test_ties_break_lexicographically(self):
        tweets = [tweet("a", hashtags=["zeta", "alpha"])]
        assert hashtag_frequencies(tweets, 5) == [("alpha", 1), ("zeta", 1)]

    def test_matches_hand_count_on_fixture(self):
        tweets = [
            tweet("a", hashtags=["news", "Sports"]),
            tweet("b", hashtags=["NEWS"]),
            tweet("c", hashtags=["news", "sports", "iraq"]),
        ]
        assert hashtag_frequencies(tweets, 2) == [("news", 3), ("sports", 2)]

    def test_top_k_must_be_positive(self):
        with pytest.raises(ValueError):
            hashtag_frequencies([tweet("a")], 0)


class TestContentProfile:
    def test_full_profile_fields(self):
        lexdir = default_lexicon_dir()
        cats = CategoryLexiconSet.from_directory(lexdir / "categories")
        valence = ValenceLexicon.from_files(lexdir / "valence.tsv", lexdir / "negations.txt")
        badwords = Lexicon.from_file(lexdir / "badwords.txt")
        tweets = [
            tweet("I love this great day. Not bad at all!", hashtags=["sun"], urls=["http://a"]),
            tweet("damn shit happens", hashtags=["rain", "SUN"]),
        ]
        profile = content_profile(tweets, cats, valence, badwords)
        assert -1.0 <= profile.sentiment <= 1.0
        assert 0.0 <= profile.subjectivity <= 1.0
        assert profile.profanity_per_tweet == pytest.approx(1.0)  # damn + shit over 2 tweets
        assert profile.url_per_tweet == pytest.approx(0.5)
        assert profile.hashtag_per_tweet == pytest.approx(1.5)
        assert profile.hashtag_counts == {"sun": 2, "rain": 1}
        assert set(profile.category_occurrence) == set(cats.categories)
        assert all(0.0 <= v <= 1.0 for v in profile.category_occurrence.values())

    def test_bundled_lexicons_have_required_categories(self):
        cats = CategoryLexiconSet.from_directory(default_lexicon_dir() / "categories")
        required = {
            "hate", "anger", "shame", "terrorism", "violence", "sadness",
            "positive_emotion", "negative_emotion", "suffering", "work", "love", "swearing",
        }
        assert required <= set(cats.categories)

    def test_purity_same_input_same_output(self):
        lexdir = default_lexicon_dir()
        cats = CategoryLexiconSet.from_directory(lexdir / "categories")
        valence = ValenceLexicon.from_files(lexdir / "valence.tsv", lexdir / "negations.txt")
        badwords = Lexicon.from_file(lexdir / "badwords.txt")
        tweets = [tweet("I hate terrible awful days. never good!")]
        a = content_profile(tweets, cats, valence, badwords)
        b = content_profile(tweets, cats, valence, badwords)
        assert a == b


class TestMatchedPositions:
    def test_overlap_counted_once(self):
        lex = Lexicon.from_phrases("x", ["a b", "b c"])
        assert matched_positions(["a", "b", "c"], lex) == {0, 1, 2}
