import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from userscope.graph import (
    RetweetGraph,
    UnknownNodeError,
    build_retweet_graph,
    degree,
    invert,
    load_snapshot,
    neighborhood,
    save_snapshot,
)
from userscope.records import iter_jsonl

from conftest import random_digraph


def _user(uid, **overrides):
    row = {
        "id": uid,
        "created_at": "2015-01-01T00:00:00Z",
        "statuses_count": 10,
        "followers_count": 5,
        "followees_count": 5,
        "favorites_count": 1,
    }
    row.update(overrides)
    return row


def _tweet(tid, uid, retweeted=None, **overrides):
    row = {
        "id": tid,
        "user_id": uid,
        "created_at": "2017-01-01T00:00:00Z",
        "text": "hello world",
        "hashtags": [],
        "urls": [],
    }
    if retweeted is not None:
        row["retweeted_user_id"] = retweeted
    row.update(overrides)
    return row


class TestBuild:
    def test_duplicate_retweet_collapses_with_multiplicity(self):
        users = [_user(1), _user(2)]
        tweets = [_tweet(10, 1, retweeted=2), _tweet(11, 1, retweeted=2)]
        graph, report = build_retweet_graph(tweets, users)
        assert graph.edge_count == 1
        assert graph.multiplicity(1, 2) == 2
        assert report.rows_rejected == 0

    def test_self_retweet_is_dropped_and_counted(self):
        graph, report = build_retweet_graph([_tweet(10, 1, retweeted=1)], [_user(1)])
        assert graph.edge_count == 0
        assert report.reject_reasons == {"self_retweet": 1}

    def test_fixture_stream_three_users_four_retweets(self):
        # hand enumeration: 1->2 twice, 2->3 once, 3->1 once => 3 distinct edges
        users = [_user(1), _user(2), _user(3)]
        tweets = [
            _tweet(10, 1, retweeted=2),
            _tweet(11, 1, retweeted=2),
            _tweet(12, 2, retweeted=3),
            _tweet(13, 3, retweeted=1),
        ]
        graph, report = build_retweet_graph(tweets, users)
        assert graph.node_count == 3
        assert graph.edge_count == 3
        assert set(graph.edges()) == {(1, 2, 2), (2, 3, 1), (3, 1, 1)}
        assert report.rows_read == 7
        assert report.rows_accepted == 7

    def test_malformed_rows_never_abort_the_stream(self):
        users = [_user(1), {"id": "oops"}, _user(2)]
        tweets = [_tweet(10, 1, retweeted=2), {"id": 11}, _tweet(12, 2, retweeted=1)]
        graph, report = build_retweet_graph(tweets, users)
        assert graph.edge_count == 2
        assert report.rows_rejected == 2
        assert report.reject_reasons["missing_field"] >= 1

    def test_unknown_retweeted_user_is_materialized_and_flagged(self):
        graph, report = build_retweet_graph([_tweet(10, 1, retweeted=99)], [_user(1)])
        assert graph.has_node(99)
        assert report.materialized_users == frozenset({99})

    def test_tweet_from_unknown_user_is_rejected(self):
        graph, report = build_retweet_graph([_tweet(10, 42, retweeted=1)], [_user(1)])
        assert report.reject_reasons == {"unknown_tweet_user": 1}
        assert graph.edge_count == 0

    def test_jsonl_roundtrip(self, tmp_path):
        users_path = tmp_path / "users.jsonl"
        tweets_path = tmp_path / "tweets.jsonl"
        users_path.write_text("\n".join(json.dumps(_user(u)) for u in (1, 2)) + "\nnot json\n")
        tweets_path.write_text(json.dumps(_tweet(10, 1, retweeted=2)) + "\n")
        graph, report = build_retweet_graph(iter_jsonl(tweets_path), iter_jsonl(users_path))
        assert graph.edge_count == 1
        assert report.reject_reasons == {"bad_json": 1}

    def test_rebuild_from_serialized_output_is_identical(self, tmp_path, tiny_graph):
        edges, idmap = tmp_path / "e.csv", tmp_path / "i.csv"
        save_snapshot(tiny_graph, edges, idmap)
        reloaded = load_snapshot(edges, idmap)
        assert reloaded == tiny_graph
        # and the round trip is stable
        edges2, idmap2 = tmp_path / "e2.csv", tmp_path / "i2.csv"
        save_snapshot(reloaded, edges2, idmap2)
        assert edges.read_text() == edges2.read_text()
        assert idmap.read_text() == idmap2.read_text()


class TestInvert:
    def test_single_edge_reversal(self):
        g = RetweetGraph([1, 2], [(1, 2, 1)])
        assert set(invert(g).edges()) == {(2, 1, 1)}

    def test_empty_graph(self):
        g = RetweetGraph([], [])
        assert invert(g).edge_count == 0

    def test_inverse_matches_brute_force_on_random_graph(self):
        g = random_digraph(20, 0.2, seed=3)
        expected = {(v, u, m) for u, v, m in g.edges()}
        assert set(invert(g).edges()) == expected

    def test_double_inversion_is_identity(self):
        g = random_digraph(15, 0.3, seed=5)
        assert invert(invert(g)) == g

    @given(st.integers(min_value=0, max_value=40), st.integers())
    @settings(max_examples=25, deadline=None)
    def test_edge_count_preserved(self, n, seed):
        g = random_digraph(n, 0.25, seed=seed)
        assert invert(g).edge_count == g.edge_count


class TestDegree:
    def test_star_center_in_degree(self):
        g = RetweetGraph(range(6), [(i, 0, 1) for i in range(1, 6)])
        assert degree(g, 0, "in") == 5
        assert degree(g, 0, "out") == 0

    def test_isolated_node(self):
        g = RetweetGraph([7], [])
        assert degree(g, 7, "in") == 0
        assert degree(g, 7, "out") == 0

    def test_unknown_node_raises(self, tiny_graph):
        with pytest.raises(UnknownNodeError):
            degree(tiny_graph, 99, "in")

    def test_degrees_match_adjacency_scan(self):
        g = random_digraph(25, 0.2, seed=11)
        edges = list(g.edges())
        for node in g.nodes():
            assert degree(g, node, "out") == sum(1 for s, _, _ in edges if s == node)
            assert degree(g, node, "in") == sum(1 for _, d, _ in edges if d == node)


class TestNeighborhood:
    def test_single_seed(self):
        g = RetweetGraph([1, 2, 3], [(1, 2, 1), (1, 3, 1)])
        assert neighborhood(g, {1}) == {2, 3}

    def test_seed_exclusion(self):
        g = RetweetGraph([1, 2, 3], [(1, 2, 1), (2, 3, 1)])
        assert neighborhood(g, {1, 2}) == {3}

    def test_matches_bfs_depth_one(self):
        g = random_digraph(50, 0.08, seed=9)
        rng = random.Random(1)
        seeds = set(rng.sample(range(50), 5))
        expected = set()
        for s in seeds:
            for src, dst, _ in g.edges():
                if src == s:
                    expected.add(dst)
        assert neighborhood(g, seeds) == expected - seeds

    @given(st.integers(min_value=1, max_value=30), st.integers(), st.integers(min_value=1, max_value=5))
    @settings(max_examples=25, deadline=None)
    def test_never_contains_seeds(self, n, seed, k):
        g = random_digraph(n, 0.3, seed=seed)
        rng = random.Random(seed)
        seeds = set(rng.sample(range(n), min(k, n)))
        assert neighborhood(g, seeds) & seeds == frozenset()


class TestConstructionInvariants:
    def test_self_edge_rejected(self):
        with pytest.raises(ValueError, match="self-edge"):
            RetweetGraph([1], [(1, 1, 1)])

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            RetweetGraph([1, 2], [(1, 2, 1), (1, 2, 1)])

    def test_unregistered_endpoint_rejected(self):
        with pytest.raises(UnknownNodeError):
            RetweetGraph([1], [(1, 2, 1)])
