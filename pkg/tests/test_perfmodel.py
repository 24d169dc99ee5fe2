"""
Tests for the tuples-read formulas, the loop-tree evaluator, the tree
builders and the runtime trends they produce.
"""

import itertools
import json
import math
import unittest
import logging
from unittest.mock import patch

from hypothesis import given, settings, strategies as st

from src.config import get_settings
from src.machine import MachineConfig, default_config, default_plan
from src.models import (
    HashPlan,
    MalformedTreeError,
    Strategy,
    UnsupportedStrategyError,
)
from src.perfmodel import (
    Construct,
    CostInputs,
    LoopNode,
    best_plan,
    build_loop_tree,
    compare_plans,
    compare_strategies,
    covered_buckets,
    cyclic_breakeven_M,
    cyclic_cost,
    cyclic_min_cost,
    cyclic_self_join_reads,
    estimate,
    evaluate_runtime,
    implied_comparisons,
    implied_dram_tuples,
    intermediate_size,
    intermediate_volume,
    linear_breakeven_M,
    optimal_H,
    shape_for,
    solve_breakeven_M,
    tuples_read_linear,
)
from src.perfmodel.loop_tree import compute, dram_read

# Disable logging during tests
logging.disable(logging.CRITICAL)

F = 6e11


class TestFormulas(unittest.TestCase):
    """Test the closed-form read costs."""

    def test_linear_cost(self):
        inp = CostInputs(100, 200, 300, M=10)
        self.assertEqual(tuples_read_linear(inp), 100 + 200 + 100 * 300 / 10)

    def test_linear_breakeven(self):
        """Test three 6e11-tuple relations need M above about 1.003e9."""
        M = linear_breakeven_M(CostInputs(F, F, F, M=1), 3.6e14)
        self.assertAlmostEqual(M / 1.003e9, 1.0, delta=0.01)
        self.assertAlmostEqual(
            tuples_read_linear(CostInputs(F, F, F, M=M)) / 3.6e14, 1.0, places=9
        )

    def test_root_solve_matches_closed_form(self):
        closed = linear_breakeven_M(CostInputs(F, F, F, M=1), 3.6e14)
        solved = solve_breakeven_M(
            lambda M: tuples_read_linear(CostInputs(F, F, F, M=M)), 3.6e14
        )
        self.assertAlmostEqual(solved / closed, 1.0, places=6)

    def test_cyclic_self_join_breakeven(self):
        """Test the cyclic self-join beats 1.8e14 reads with a few million tuples."""
        M = solve_breakeven_M(lambda M: cyclic_self_join_reads(F, M), 1.8e14)
        self.assertGreaterEqual(M, 6.5e6)
        self.assertLessEqual(M, 7.0e6)

    def test_cyclic_breakeven(self):
        inp = CostInputs(F, F, F, M=1)
        M = cyclic_breakeven_M(inp, 1.8e14)
        self.assertAlmostEqual(
            cyclic_min_cost(CostInputs(F, F, F, M=M)) / 1.8e14, 1.0, places=9
        )

    def test_breakeven_out_of_reach(self):
        with self.assertRaises(ValueError):
            linear_breakeven_M(CostInputs(10, 10, 10, M=1), 15)
        with self.assertRaises(ValueError):
            solve_breakeven_M(lambda M: 100.0, 50.0)

    def test_intermediate_size(self):
        self.assertEqual(intermediate_size(6e11, 6e11, 2e9), 1.8e14)
        self.assertIsInstance(intermediate_size(10, 20, 4), int)
        self.assertAlmostEqual(intermediate_size(10, 10, 3), 100 / 3)
        with self.assertRaises(ValueError):
            intermediate_size(10, 10, 0)

    def test_optimal_H_matches_sweep(self):
        """Test a brute-force H sweep lands within one of the closed form."""
        for sizes in ((1e6, 1e6, 1e6), (4e6, 1e6, 1e6), (1e6, 2e6, 5e6)):
            with self.subTest(sizes=sizes):
                inp = CostInputs(*sizes, M=1e4)
                best = min(range(1, 200), key=lambda H: cyclic_cost(inp, H))
                self.assertLessEqual(abs(best - optimal_H(inp)), 1)

    @given(
        st.floats(1e3, 1e7),
        st.floats(1e3, 1e7),
        st.floats(1e2, 1e5),
        st.floats(1.0, 300.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_optimal_H_matches_brute_force(self, s, t, M, target):
        """Test the best integer H is the floor or ceiling of the closed form."""
        # choose |R| so that the optimum lands at ``target``
        inp = CostInputs(target**2 * M * s / t, s, t, M=M)
        H_star = optimal_H(inp)
        self.assertAlmostEqual(H_star / target, 1.0, places=9)
        best = min(range(1, int(3 * H_star) + 3), key=lambda H: cyclic_cost(inp, H))
        self.assertLessEqual(abs(best - H_star), 1)

    @given(st.floats(1, 1e9), st.floats(0, 1e9), st.floats(1, 1e9), st.floats(1, 1e7))
    @settings(max_examples=100, deadline=None)
    def test_linear_reread_term_is_symmetric(self, r, s, t, M):
        """Test the |R||T|/M re-read term is unchanged when R and T swap."""
        forward = tuples_read_linear(CostInputs(r, s, t, M=M)) - r - s
        backward = tuples_read_linear(CostInputs(t, s, r, M=M)) - t - s
        # both sides carry the rounding of sums as large as |R|+|S|+|T|
        tolerance = 1e-9 * (r + s + t)
        self.assertTrue(math.isclose(forward, backward, abs_tol=tolerance))
        self.assertTrue(math.isclose(forward, r * t / M, abs_tol=tolerance))

    @given(
        st.floats(1e3, 1e9),
        st.floats(1e3, 1e9),
        st.floats(1e3, 1e9),
        st.floats(1e2, 1e7),
    )
    @settings(max_examples=100, deadline=None)
    def test_cyclic_min_cost_prefers_smallest_R(self, x, y, z, M):
        costs = {
            sizes: cyclic_min_cost(CostInputs(*sizes, M=M))
            for sizes in itertools.permutations((x, y, z))
        }
        # S and T enter only through their product
        for (r, s, t), cost in costs.items():
            self.assertTrue(math.isclose(cost, costs[(r, t, s)], rel_tol=1e-12))
        smallest = min(x, y, z)
        floor = min(cost for sizes, cost in costs.items() if sizes[0] == smallest)
        for cost in costs.values():
            self.assertLessEqual(floor, cost * (1 + 1e-12))

    def test_min_cost_is_cost_at_optimum(self):
        inp = CostInputs(4e6, 1e6, 1e6, M=1e4)
        self.assertAlmostEqual(
            cyclic_cost(inp, optimal_H(inp)) / cyclic_min_cost(inp), 1.0, places=9
        )

    def test_cyclic_cost_with_G(self):
        inp = CostInputs(1000, 200, 300, M=100, G=5)
        self.assertEqual(cyclic_cost(inp, H=2), 1000 + 2 * 200 + 5 * 300)
        with self.assertRaises(ValueError):
            cyclic_cost(CostInputs(1000, 200, 300, M=100, G=2), H=2)

    def test_self_join_reads(self):
        self.assertAlmostEqual(cyclic_self_join_reads(1e6, 1e4), 1.1e7)

    def test_invalid_inputs(self):
        with self.assertRaises(ValueError):
            tuples_read_linear(CostInputs(1, 1, 1, M=0))
        with self.assertRaises(ValueError):
            optimal_H(CostInputs(1, 0, 1, M=1))
        with self.assertRaises(ValueError):
            CostInputs(-1, 1, 1, M=1).validate()

    @given(
        st.floats(1e3, 1e9),
        st.floats(1e3, 1e9),
        st.floats(1e3, 1e9),
        st.floats(1e2, 1e7),
    )
    @settings(max_examples=100, deadline=None)
    def test_min_cost_is_a_lower_bound(self, r, s, t, M):
        inp = CostInputs(r, s, t, M=M)
        floor = cyclic_min_cost(inp)
        for H in (0.5, 1.0, 3.0, 100.0):
            self.assertGreaterEqual(cyclic_cost(inp, H) * (1 + 1e-9), floor)


class TestEvaluator(unittest.TestCase):
    """Test evaluation against hand-computed cycle counts."""

    def setUp(self):
        # 8 bytes/cycle DRAM, 4 bytes/cycle SSD, 10-cycle DRAM latency and
        # 3-cycle compute latency
        self.cfg = MachineConfig(
            U=4,
            L=4,
            dram_bw=8e9,
            ssd_bw=4e9,
            net_latency_cycles=2,
            pcu_latency_cycles=1,
            dram_latency_ns=10.0,
            dram_granule_bytes=8,
        )

    def read(self, **kwargs):
        # 100 tuples of 8 bytes: 100 steady cycles + 10 latency
        return dram_read("r", 100, 8, **kwargs)

    def comp(self, **kwargs):
        # 40 trips of 8 comparisons over 4 lanes: 80 steady + 3 latency
        return compute("c", 40, 8, **kwargs)

    def test_sequential(self):
        tree = LoopNode("root", children=[self.read(), self.comp()])
        result = evaluate_runtime(tree, self.cfg)
        self.assertAlmostEqual(result.cycles, 193.0)
        self.assertAlmostEqual(result.seconds, 193e-9)
        self.assertEqual(list(result.breakdown), ["r", "c"])
        self.assertAlmostEqual(result.breakdown["r"], 110.0)
        self.assertAlmostEqual(result.breakdown["c"], 83.0)
        self.assertEqual(result.bottleneck, "r")

    def test_sequential_trips(self):
        tree = LoopNode("root", trips=3, children=[self.read(), self.comp()])
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 579.0)

    def test_pipeline(self):
        """Test a pipeline fills once and then pays its slowest stage."""
        tree = LoopNode(
            "p",
            trips=5,
            construct=Construct.PIPELINE,
            children=[self.read(), self.comp()],
        )
        # (100 + 80) + 4 * 110 steady, 10 + 3 latency
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 633.0)

    def test_fractional_pipeline(self):
        tree = LoopNode(
            "p",
            trips=0.5,
            construct=Construct.PIPELINE,
            children=[self.read(), self.comp()],
        )
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 96.5)

    def test_streaming(self):
        tree = LoopNode(
            "s",
            trips=2,
            construct=Construct.STREAMING,
            children=[self.read(), self.comp()],
        )
        result = evaluate_runtime(tree, self.cfg)
        # 2 * max(100, 80) steady, 2 * (10 + 3) latency
        self.assertAlmostEqual(result.cycles, 226.0)
        self.assertEqual(result.bottleneck, "r")

    def test_streaming_memory_stages_share_bandwidth(self):
        tree = LoopNode(
            "s",
            construct=Construct.STREAMING,
            children=[self.read(), dram_read("w", 50, 8), self.comp()],
        )
        # 100 + 50 memory steady beats 80 compute; latency 10 + 10 + 3
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 173.0)

    def test_parallel(self):
        tree = LoopNode(
            "q", trips=8, construct=Construct.PARALLEL, par=4, children=[self.comp()]
        )
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 163.0)

    def test_branch_probability(self):
        tree = LoopNode("root", children=[self.comp(branch_prob=0.5)])
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 41.5)

    def test_spill_uses_ssd(self):
        tree = LoopNode("root", children=[self.read(spill=True)])
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 210.0)

    def test_granule_floor(self):
        tree = LoopNode("root", children=[dram_read("tiny", 1, 8, requests=4)])
        # 4 requests of at least 8 bytes
        self.assertAlmostEqual(evaluate_runtime(tree, self.cfg).cycles, 14.0)

    def test_zero_trips(self):
        tree = LoopNode("root", children=[compute("c", 0, 8)])
        self.assertEqual(evaluate_runtime(tree, self.cfg).cycles, 0.0)

    def test_implied_counts(self):
        tree = LoopNode("root", trips=2, children=[self.read(), self.comp()])
        self.assertEqual(implied_dram_tuples(tree), 200)
        self.assertAlmostEqual(implied_comparisons(tree), 640.0)

    @given(
        st.sampled_from(list(Construct)),
        st.floats(0, 20),
        st.floats(0, 1e4),
        st.floats(0, 500),
        st.floats(0, 64),
        st.sampled_from(["trips", "read", "comp_trips", "comp_cost"]),
        st.floats(1, 10),
    )
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_costs_and_trips(
        self, construct, trips, tuples, comp_trips, cost, grown, factor
    ):
        """Test growing one trip count or leaf cost never lowers the estimate."""
        values = {
            "trips": trips,
            "read": tuples,
            "comp_trips": comp_trips,
            "comp_cost": cost,
        }

        def cycles(v: dict) -> float:
            tree = LoopNode(
                "root",
                trips=v["trips"],
                construct=construct,
                par=2,
                children=[
                    dram_read("r", v["read"], 8),
                    compute("c", v["comp_trips"], v["comp_cost"]),
                ],
            )
            return evaluate_runtime(tree, self.cfg).cycles

        larger = {**values, grown: values[grown] * factor}
        self.assertLessEqual(cycles(values), cycles(larger) * (1 + 1e-9) + 1e-9)

    @given(
        st.sampled_from(
            [
                Strategy.LINEAR3,
                Strategy.STAR3,
                Strategy.CASCADED_SELF,
                Strategy.CASCADED_STAR,
            ]
        ),
        st.floats(1e9, 1e11),
        st.floats(1.01, 10),
    )
    @settings(max_examples=50, deadline=None)
    def test_more_bandwidth_never_slower(self, strategy, bw, factor):
        cfg = default_config().with_overrides(dram_bw=bw)
        if strategy in (Strategy.STAR3, Strategy.CASCADED_STAR):
            sizes = (1000, 1e6, 1000)
        else:
            sizes = (1e6, 1e6, 1e6)
        shape = shape_for(*sizes, 1e3, cfg)
        plan = default_plan(strategy, *(int(size) for size in sizes), cfg)
        slow = estimate(strategy, shape, plan, cfg).cycles
        fast_cfg = cfg.with_overrides(dram_bw=bw * factor)
        fast = estimate(strategy, shape, plan, fast_cfg).cycles
        self.assertLessEqual(fast, slow * (1 + 1e-12))

    def test_malformed_trees(self):
        for tree in (
            LoopNode("neg", children=[compute("c", -1, 8)]),
            LoopNode("p", children=[self.comp(branch_prob=1.5)]),
            LoopNode("empty"),
            LoopNode(
                "q", construct=Construct.PARALLEL, par=0, children=[self.comp()]
            ),
        ):
            with self.subTest(label=tree.label):
                with self.assertRaises(MalformedTreeError):
                    evaluate_runtime(tree, self.cfg)


class TestBuilders(unittest.TestCase):
    """Test the loop trees of each strategy."""

    def setUp(self):
        self.cfg = default_config()

    def test_covered_buckets(self):
        self.assertEqual(covered_buckets(1, 10), 1.0)
        self.assertAlmostEqual(covered_buckets(16, 1e6), 16.0)
        self.assertAlmostEqual(covered_buckets(1e6, 10), 10.0, delta=1e-3)

    def test_breakdown_sums_to_cycles(self):
        cases = (
            (Strategy.LINEAR3, shape_for(1e7, 1e7, 1e7, 1e4, self.cfg)),
            (Strategy.CASCADED_SELF, shape_for(1e7, 1e7, 1e7, 1e4, self.cfg)),
            (Strategy.STAR3, shape_for(1e3, 1e6, 1e3, 100, self.cfg)),
            (Strategy.CASCADED_STAR, shape_for(1e3, 1e6, 1e3, 100, self.cfg)),
        )
        for strategy, shape in cases:
            with self.subTest(strategy=strategy.value):
                sizes = (int(shape.size_r), int(shape.size_s), int(shape.size_t))
                plan = default_plan(strategy, *sizes, self.cfg)
                result = estimate(strategy, shape, plan, self.cfg)
                self.assertGreater(result.cycles, 0)
                self.assertAlmostEqual(
                    sum(result.breakdown.values()) / result.cycles, 1.0, places=9
                )
                self.assertIn("join1", result.breakdown)
                if strategy.is_cascaded:
                    self.assertIn("join2", result.breakdown)

    def test_partition_phase(self):
        shape = shape_for(1e7, 1e7, 1e7, 1e4, self.cfg)
        plan = HashPlan(H_bkt=16, h_bkt=64, g_bkt=256)
        result = estimate(Strategy.LINEAR3, shape, plan, self.cfg)
        self.assertGreater(result.breakdown["partition"], 0)

        tiny = HashPlan(h_bkt=8, g_bkt=8)
        star_shape = shape_for(1e3, 1e6, 1e3, 100, self.cfg)
        star = estimate(Strategy.STAR3, star_shape, tiny, self.cfg)
        self.assertNotIn("partition", star.breakdown)

    def test_linear_volume(self):
        """Test the linear tree reads R and S once and T once per partition."""
        shape = shape_for(1e6, 1e6, 1e6, 1e6, self.cfg)
        plan = HashPlan(H_bkt=4, h_bkt=64, g_bkt=16)
        tree = build_loop_tree(Strategy.LINEAR3, shape, plan, self.cfg)
        self.assertEqual(implied_dram_tuples(tree), 6_000_000)

    def test_cascaded_volume(self):
        shape = shape_for(1e6, 1e6, 1e6, 1e6, self.cfg)
        plan = HashPlan(H_bkt=2, G_bkt=2, h_bkt=64, g_bkt=64)
        tree = build_loop_tree(Strategy.CASCADED_SELF, shape, plan, self.cfg)
        # R + S + T + |R join S| with |R join S| = 1e12 / 1e6
        self.assertEqual(implied_dram_tuples(tree), 4_000_000)

    def test_key_match_probability(self):
        """Test SC==TC holds with probability g/d when d dwarfs g."""
        for g, d in ((16, 1e6), (256, 1e6), (4096, 1e8)):
            with self.subTest(g=g, d=d):
                shape = shape_for(1e6, 1e6, 1e6, d, self.cfg)
                plan = HashPlan(H_bkt=1, h_bkt=64, g_bkt=g)
                tree = build_loop_tree(Strategy.LINEAR3, shape, plan, self.cfg)
                (branch,) = [
                    node for node, _ in tree.walk() if node.condition == "SC==TC"
                ]
                self.assertAlmostEqual(branch.branch_prob / (g / d), 1.0, places=9)

    def test_key_match_probability_with_few_values(self):
        """Test more buckets than values leaves a match nearly certain."""
        shape = shape_for(1e4, 1e4, 1e4, 10, self.cfg)
        plan = HashPlan(H_bkt=1, h_bkt=64, g_bkt=4096)
        tree = build_loop_tree(Strategy.LINEAR3, shape, plan, self.cfg)
        (prob,) = [node.branch_prob for node, _ in tree.walk() if node.condition]
        self.assertLessEqual(prob, 1.0)
        self.assertGreater(prob, 0.99)

    def test_cascaded_comparisons(self):
        """Test each binary join compares every probe with its bucket's builds."""
        R, S, T, d = 1e6, 2e6, 3e6, 1e6
        size_i = R * S / d
        cases = (
            (Strategy.CASCADED_SELF, HashPlan(H_bkt=2, G_bkt=4, h_bkt=64, g_bkt=64)),
            (Strategy.CASCADED_STAR, HashPlan(h_bkt=64, g_bkt=64)),
        )
        for strategy, plan in cases:
            with self.subTest(strategy=strategy.value):
                shape = shape_for(R, S, T, d, self.cfg)
                tree = build_loop_tree(strategy, shape, plan, self.cfg)
                H, G, h, g = plan.H_bkt, plan.G_bkt, plan.h_bkt, plan.g_bkt
                expected = R * S / (H * h) + size_i * T / (G * g)
                self.assertAlmostEqual(
                    implied_comparisons(tree) / expected, 1.0, places=9
                )

    def test_intermediate_width_setting(self):
        shape = CostInputs(1e6, 1e6, 1e6, M=2**20, d=1e3, size_i=1e9)
        cfg = self.cfg.with_overrides(dram_capacity_bytes=10**10)
        # 12-byte tuples need 1.2e10 bytes, 8-byte tuples fit
        self.assertTrue(intermediate_volume(shape, cfg)[1])
        with patch.object(get_settings().model, "intermediate_tuple_width", 8):
            self.assertFalse(intermediate_volume(shape, cfg)[1])
            plan = HashPlan(h_bkt=64, g_bkt=64)
            tree = build_loop_tree(Strategy.CASCADED_STAR, shape, plan, cfg)
        widths = {
            node.leaf.width
            for node, _ in tree.walk()
            if node.leaf is not None and node.label.endswith("_RS")
        }
        self.assertEqual(widths, {8})

    def test_spill_detection(self):
        shape = CostInputs(F, F, F, M=2**20, d=2e9)
        size_i, spill = intermediate_volume(shape, self.cfg)
        self.assertEqual(size_i, 1.8e14)
        self.assertTrue(spill)
        small = shape.with_sizes(size_i=1e6)
        self.assertFalse(intermediate_volume(small, self.cfg)[1])

    def test_spill_marks_intermediate_leaves(self):
        shape = shape_for(1e3, 1e6, 1e3, 1, self.cfg)
        plan = HashPlan(h_bkt=64, g_bkt=64)
        cfg = self.cfg.with_overrides(dram_capacity_bytes=10**6)
        tree = build_loop_tree(Strategy.CASCADED_STAR, shape, plan, cfg)
        spilled = [
            node.label
            for node, _ in tree.walk()
            if node.leaf is not None and node.leaf.spill
        ]
        self.assertEqual(sorted(spilled), ["store_RS", "stream_RS"])

    def test_serializable(self):
        shape = shape_for(1e6, 1e6, 1e6, 1e3, self.cfg)
        plan = HashPlan(H_bkt=2, h_bkt=64, g_bkt=64)
        tree = build_loop_tree(Strategy.LINEAR3, shape, plan, self.cfg)
        data = json.loads(json.dumps(tree.to_dict()))
        self.assertEqual(data["label"], "linear3")
        self.assertIn("join1", tree.render())
        self.assertIn("SC==TC", tree.render())

    def test_cyclic_has_no_tree(self):
        shape = shape_for(1e6, 1e6, 1e6, 1e3, self.cfg)
        plan = HashPlan(h_bkt=8, g_bkt=8)
        with self.assertRaises(UnsupportedStrategyError):
            build_loop_tree(Strategy.CYCLIC3, shape, plan, self.cfg)


class TestTrends(unittest.TestCase):
    """Test the model reproduces the expected runtime trends."""

    def setUp(self):
        self.cfg = default_config()

    def test_cascaded_join1_flat_in_H(self):
        """Test the first binary join is bandwidth bound whatever H is."""
        shape = shape_for(1e6, 1e6, 1e6, 1e3, self.cfg)
        join1 = []
        for H in (1, 2, 4, 8, 16, 32, 64):
            plan = HashPlan(H_bkt=H, G_bkt=1, h_bkt=64, g_bkt=64)
            result = estimate(Strategy.CASCADED_SELF, shape, plan, self.cfg)
            join1.append(result.breakdown["join1"])
        self.assertLess(max(join1) / min(join1), 1.001)

    def test_speedup_jumps_when_intermediate_spills(self):
        """Test the 3-way speedup jumps once |R join S| no longer fits in DRAM."""
        speedups = []
        spilled = []
        for k in range(8):
            n = int(1.2e7 * 1.1**k)
            shape = shape_for(n, n, n, 1e4, self.cfg)
            plan3 = default_plan(Strategy.LINEAR3, n, n, n, self.cfg)
            plan2 = default_plan(Strategy.CASCADED_SELF, n, n, n, self.cfg)
            comparison = compare_plans(shape, plan3, plan2, self.cfg)
            speedups.append(comparison.speedup)
            spilled.append(comparison.spilled)

        self.assertEqual(spilled, [False, False] + [True] * 6)
        ratios = [b / a for a, b in zip(speedups, speedups[1:])]
        self.assertEqual(ratios.index(max(ratios)), 1)
        self.assertGreater(ratios[1], 1.5)
        for i, ratio in enumerate(ratios):
            if i != 1:
                self.assertGreater(ratio, 0.8)
                self.assertLess(ratio, 1.25)

    def test_speedup_falls_with_bandwidth(self):
        shape = shape_for(1e6, 1e6, 1e6, 1e3, self.cfg)
        plan3 = HashPlan(H_bkt=64, h_bkt=64, g_bkt=1024)
        plan2 = HashPlan(H_bkt=1, G_bkt=4096, h_bkt=64, g_bkt=64)
        speedups = [
            compare_strategies(
                shape, plan3, plan2, self.cfg.with_overrides(dram_bw=bw)
            )
            for bw in (25e9, 49e9, 100e9)
        ]
        self.assertGreaterEqual(speedups[0], speedups[1])
        self.assertGreaterEqual(speedups[1], speedups[2])
        self.assertGreater(speedups[0], 2 * speedups[2])

    def test_fine_buckets_have_an_interior_optimum(self):
        """Test too few and too many g buckets are both slow."""
        shape = shape_for(1e5, 1e5, 1e5, 1e5, self.cfg)
        runtimes = []
        for k in range(17):
            plan = HashPlan(H_bkt=1, h_bkt=64, g_bkt=2**k)
            runtimes.append(estimate(Strategy.LINEAR3, shape, plan, self.cfg).cycles)
        best = runtimes.index(min(runtimes))
        self.assertTrue(0 < best < 16)
        self.assertGreater(runtimes[0], 10 * runtimes[best])
        self.assertGreater(runtimes[-1], 10 * runtimes[best])

    def test_star_speedup_depends_on_bandwidth(self):
        shape = shape_for(1000, 1e6, 1000, 100, self.cfg)
        plan3 = HashPlan(h_bkt=8, g_bkt=8)
        plan2 = HashPlan(h_bkt=64, g_bkt=64)
        slow = compare_strategies(shape, plan3, plan2, self.cfg, star=True)
        fast = compare_strategies(
            shape, plan3, plan2, self.cfg.with_overrides(dram_bw=1e13), star=True
        )
        self.assertGreater(slow, 1.0)
        self.assertLess(fast, 1.0)

    def test_best_plan_beats_searched_plans(self):
        shape = shape_for(1e6, 1e6, 1e6, 1e3, self.cfg)
        plan, result = best_plan(Strategy.LINEAR3, shape, self.cfg)
        for other in (
            HashPlan(H_bkt=1, h_bkt=64, g_bkt=1),
            HashPlan(H_bkt=1, h_bkt=64, g_bkt=16384),
            HashPlan(H_bkt=4, h_bkt=64, g_bkt=256),
        ):
            with self.subTest(plan=other.to_dict()):
                cycles = estimate(Strategy.LINEAR3, shape, other, self.cfg).cycles
                self.assertLessEqual(result.cycles, cycles)
        self.assertEqual(plan.h_bkt, 64)
        self.assertTrue(math.log2(plan.g_bkt).is_integer())


if __name__ == "__main__":
    unittest.main()
