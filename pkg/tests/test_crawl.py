import random

import numpy as np
import pytest

from userscope.crawl import (
    GraphOracle,
    SyntheticModelError,
    durw_sample,
    estimate_outdegree_distribution,
    generate_synthetic_graph,
    merge_traces,
    read_trace_jsonl,
    write_trace_jsonl,
)
from userscope.graph import RetweetGraph


def make_calibration_oracle(n=2000, seed=42):
    rng = np.random.default_rng(123)
    out_degrees = tuple(int(d) for d in rng.choice([2, 3], size=n, p=[0.8, 0.2]))
    oracle = generate_synthetic_graph("configuration", n, seed=seed, out_degrees=out_degrees)
    return oracle, out_degrees


class TestGenerator:
    def test_uniform_p_zero_gives_isolated_nodes(self):
        oracle = generate_synthetic_graph("uniform", 10, seed=1, p=0.0)
        assert oracle.ground_truth.edge_count == 0

    def test_uniform_p_one_gives_complete_digraph(self):
        oracle = generate_synthetic_graph("uniform", 2, seed=1, p=1.0)
        assert set(oracle.ground_truth.edges()) == {(0, 1, 1), (1, 0, 1)}

    def test_configuration_outdegrees_equal_requested_sequence(self):
        rng = np.random.default_rng(0)
        seq = tuple(int(d) for d in rng.integers(0, 6, size=1000))
        oracle = generate_synthetic_graph("configuration", 1000, seed=7, out_degrees=seq)
        g = oracle.ground_truth
        assert tuple(g.out_degree(u) for u in range(1000)) == seq

    def test_deterministic_for_fixed_seed(self):
        a = generate_synthetic_graph("preferential", 50, seed=3, m=2)
        b = generate_synthetic_graph("preferential", 50, seed=3, m=2)
        assert a.ground_truth == b.ground_truth

    def test_invalid_params_raise_config_error(self):
        with pytest.raises(SyntheticModelError):
            generate_synthetic_graph("uniform", 10, seed=1, p=2.0)
        with pytest.raises(SyntheticModelError):
            generate_synthetic_graph("configuration", 3, seed=1, out_degrees=(5, 0, 0))
        with pytest.raises(SyntheticModelError):
            generate_synthetic_graph("mystery", 3, seed=1)
        with pytest.raises(SyntheticModelError):
            generate_synthetic_graph("uniform", 0, seed=1, p=0.5)


class TestWalk:
    def test_isolated_nodes_make_every_step_a_jump(self):
        oracle = generate_synthetic_graph("uniform", 10, seed=1, p=0.0)
        trace = durw_sample(oracle, 1.0, 200, seed=9)
        assert all(step.was_jump for step in trace.steps)
        assert all(step.degree_at_visit == 0 for step in trace.steps)

    def test_giant_jump_weight_forces_jumps(self):
        oracle = generate_synthetic_graph("uniform", 30, seed=2, p=0.3)
        trace = durw_sample(oracle, 1e12, 10_000, seed=1)
        assert trace.jump_fraction() >= 0.999

    def test_two_node_mutual_edge_visits_are_symmetric(self):
        g = RetweetGraph([0, 1], [(0, 1, 1), (1, 0, 1)])
        trace = durw_sample(GraphOracle(g), 1.0, 10_000, seed=5)
        counts = {0: 0, 1: 0}
        for step in trace.steps:
            counts[step.node] += 1
        assert abs(counts[0] - counts[1]) / len(trace) <= 0.02

    def test_first_step_is_a_jump_and_budget_is_respected(self):
        oracle = generate_synthetic_graph("uniform", 20, seed=3, p=0.2)
        trace = durw_sample(oracle, 2.0, 57, seed=0)
        assert trace.steps[0].was_jump
        assert len(trace) == 57

    def test_zero_budget_is_an_error(self):
        oracle = generate_synthetic_graph("uniform", 5, seed=1, p=0.1)
        with pytest.raises(ValueError, match="empty trace"):
            durw_sample(oracle, 1.0, 0, seed=0)
        with pytest.raises(ValueError, match="positive"):
            durw_sample(oracle, 0.0, 10, seed=0)

    def test_walk_only_touches_the_crawl_surface(self):
        class Blinder:
            """Proxy exposing only the two allowed oracle operations."""

            def __init__(self, oracle):
                self._oracle = oracle

            def out_edges(self, node):
                return self._oracle.out_edges(node)

            def uniform_random_node(self, rng):
                return self._oracle.uniform_random_node(rng)

        oracle = generate_synthetic_graph("uniform", 40, seed=4, p=0.15)
        trace = durw_sample(Blinder(oracle), 5.0, 300, seed=2)
        assert len(trace) == 300

    def test_degree_at_visit_reflects_discovered_graph(self):
        # 0 -> {1, 2}: visiting 0 first folds two undirected edges in
        g = RetweetGraph([0, 1, 2], [(0, 1, 1), (0, 2, 1)])

        class FixedStart(GraphOracle):
            def uniform_random_node(self, rng):
                self.query_count += 1
                return 0

        trace = durw_sample(FixedStart(g), 1.0, 1, seed=0)
        assert trace.steps[0].node == 0
        assert trace.steps[0].degree_at_visit == 2

    def test_revisits_are_allowed(self):
        g = RetweetGraph([0, 1], [(0, 1, 1), (1, 0, 1)])
        trace = durw_sample(GraphOracle(g), 0.001, 100, seed=3)
        seen = [s.node for s in trace.steps]
        assert len(set(seen)) < len(seen)


class TestEstimator:
    def test_regular_graph_is_exact_for_any_trace(self):
        # directed 3-out ring: every node has out-degree exactly 3
        n = 60
        edges = [(u, (u + k) % n, 1) for u in range(n) for k in (1, 2, 3)]
        oracle = GraphOracle(RetweetGraph(range(n), edges))
        for seed in (0, 1, 2):
            trace = durw_sample(oracle, 7.0, 50, seed=seed)
            est = estimate_outdegree_distribution(trace, oracle)
            assert est.mass == {3: 1.0}

    def test_length_one_trace_at_degree_zero_node(self):
        oracle = generate_synthetic_graph("uniform", 4, seed=1, p=0.0)
        trace = durw_sample(oracle, 1.0, 1, seed=0)
        est = estimate_outdegree_distribution(trace, oracle)
        assert est.mass == {0: 1.0}

    def test_masses_nonnegative_and_sum_to_one(self):
        oracle, _ = make_calibration_oracle(n=500)
        for seed in range(5):
            trace = durw_sample(oracle, 10.0, 200, seed=seed)
            est = estimate_outdegree_distribution(trace, oracle)
            assert all(v >= 0 for v in est.mass.values())
            assert est.total_mass == pytest.approx(1.0, abs=1e-9)

    def test_calibration_configuration_model(self):
        # frozen fixture: n=2000, budget=400, w=10, walk seeds 0..9
        oracle, _ = make_calibration_oracle()
        truth = oracle.true_outdegree_distribution()
        l1s = []
        for seed in range(10):
            trace = durw_sample(oracle, 10.0, 400, seed=seed)
            est = estimate_outdegree_distribution(trace, oracle)
            l1s.append(est.l1_distance(truth))
        assert float(np.mean(l1s)) <= 0.05

    def test_mean_l1_error_decreases_with_budget(self):
        oracle, _ = make_calibration_oracle()
        truth = oracle.true_outdegree_distribution()
        means = []
        for budget in (100, 400, 1600):
            l1s = [
                estimate_outdegree_distribution(
                    durw_sample(oracle, 10.0, budget, seed=s), oracle
                ).l1_distance(truth)
                for s in range(12)
            ]
            means.append(float(np.mean(l1s)))
        assert means[0] > means[1] > means[2]

    def test_empty_trace_rejected(self):
        oracle = generate_synthetic_graph("uniform", 4, seed=1, p=0.0)
        from userscope.crawl import WalkTrace

        with pytest.raises(ValueError):
            estimate_outdegree_distribution(WalkTrace(steps=[], jump_weight=1.0), oracle)


class TestTraceUtilities:
    def test_merge_concatenates_parallel_walkers(self):
        oracle = generate_synthetic_graph("uniform", 50, seed=6, p=0.1)
        traces = [durw_sample(oracle, 3.0, 40, seed=s) for s in range(4)]
        merged = merge_traces(traces)
        assert len(merged) == 160
        assert merged.budget == 160
        est = estimate_outdegree_distribution(merged, oracle)
        assert est.total_mass == pytest.approx(1.0, abs=1e-9)

    def test_merge_rejects_mismatched_weights(self):
        oracle = generate_synthetic_graph("uniform", 10, seed=6, p=0.1)
        a = durw_sample(oracle, 3.0, 5, seed=0)
        b = durw_sample(oracle, 4.0, 5, seed=1)
        with pytest.raises(ValueError, match="jump weight"):
            merge_traces([a, b])

    def test_jsonl_roundtrip(self, tmp_path):
        oracle = generate_synthetic_graph("uniform", 20, seed=2, p=0.2)
        trace = durw_sample(oracle, 2.0, 30, seed=1)
        path = tmp_path / "trace.jsonl"
        write_trace_jsonl(trace, path)
        loaded = read_trace_jsonl(path, jump_weight=2.0)
        assert loaded.steps == trace.steps

    def test_query_counter_increments(self):
        oracle = generate_synthetic_graph("uniform", 10, seed=1, p=0.3)
        before = oracle.query_count
        durw_sample(oracle, 1.0, 20, seed=0)
        assert oracle.query_count > before
