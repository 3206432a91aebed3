import math
import unittest

import numpy as np
from hypothesis import given, settings

from dsoracle.errors import InvariantViolation, UnweightedRequiredError
from dsoracle.graph import Graph, lca, path_weight, shortest_path_tree
from dsoracle.oracles.exact import all_replacement_distances
from dsoracle.oracles.sssp_eps import (
    INTERNAL_DIVISOR,
    RecordKind,
    build_sssp_eps,
    candidate_levels,
    check_special_lemmas,
    classify_detour,
    compute_special_vertices,
    query_sssp_eps,
)
from graph_fixtures import A, B, C, R, binary_tree, connected_graphs, cycle, diamond, four_cycle, gnp, grid, path_graph, star


class TestSpecialVertices(unittest.TestCase):
    def test_candidate_levels(self):
        self.assertEqual(candidate_levels(9, 0.5), (1, 2, 3, 5, 7))
        self.assertEqual(candidate_levels(0, 0.5), ())

    def test_path_graph(self):
        n = 10
        t = shortest_path_tree(path_graph(n), 0)
        sv = compute_special_vertices(t, 0.5)
        self.assertEqual(sv.levels, (1, 2, 3, 5, 7))
        # subtree size at level l is n - l
        self.assertEqual(sv.special, frozenset({1, 2, 3, 5}))
        self.assertEqual(sv.nearest[9], 5)
        self.assertEqual(sv.nearest[4], 3)
        self.assertEqual(sv.nearest[1], -1)
        self.assertEqual(sv.claimed[5], (5, 6, 7, 8, 9))

    def test_star_leaves_are_special(self):
        t = shortest_path_tree(star(6), 0)
        sv = compute_special_vertices(t, 0.5)
        self.assertEqual(sv.levels, (1,))
        self.assertEqual(sv.special, frozenset(range(1, 6)))

    def test_nearest_is_proper_special_ancestor(self):
        t = shortest_path_tree(binary_tree(31), 0)
        sv = compute_special_vertices(t, 0.25)
        for v in range(t.n):
            s = sv.nearest[v]
            if s >= 0:
                self.assertIn(s, sv)
                self.assertTrue(t.is_ancestor(s, v) and s != v)
            self.assertEqual(sv.owner(v), v if v in sv else s)

    def test_rejects_epsilon_range(self):
        t = shortest_path_tree(path_graph(4), 0)
        for eps in (0.0, 1.0, -0.2):
            with self.assertRaises(ValueError):
                compute_special_vertices(t, eps)

    def test_lemma_violation_is_reported(self):
        t = shortest_path_tree(path_graph(40), 0)
        sv = compute_special_vertices(t, 0.5)
        broken = type(sv)(sv.epsilon, sv.height, sv.levels, frozenset({1}), tuple([-1, -1] + [1] * 38), {1: (1,)}, {1: 1})
        with self.assertRaises(InvariantViolation):
            check_special_lemmas(t, broken)

    @given(connected_graphs(min_n=2, max_n=40, extra=0.05))
    @settings(max_examples=40, deadline=None)
    def test_lemmas_hold_at_internal_accuracy(self, g):
        t = shortest_path_tree(g, 0)
        for eps in (0.25 / INTERNAL_DIVISOR, 0.5 / INTERNAL_DIVISOR, 0.5):
            compute_special_vertices(t, eps)

    def test_lemmas_on_long_paths(self):
        for n in (30, 100, 400):
            t = shortest_path_tree(path_graph(n), 0)
            for eps in (1 / 12, 1 / 24, 0.165):
                compute_special_vertices(t, eps)


class TestDetours(unittest.TestCase):
    def test_four_cycle_type_ii(self):
        g = four_cycle()
        t = shortest_path_tree(g, R)
        d = classify_detour(g, t, B, A, -1)
        self.assertEqual(d.kind, "II")
        self.assertEqual((d.a, d.b, d.inner, d.length), (R, B, (C,), 2))
        self.assertEqual(d.vertices(t, B), [R, C, B])

    def test_cut_vertex_unreachable(self):
        g = path_graph(3)
        t = shortest_path_tree(g, 0)
        self.assertEqual(classify_detour(g, t, 2, 1, -1).kind, "unreachable")

    def test_type_i_rejoins_above_previous_special(self):
        # tree 0-1-2-3-4 with a bypass 0-5-2 around vertex 1
        g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 2)])
        t = shortest_path_tree(g, 0)
        d = classify_detour(g, t, 4, 1, 3)
        self.assertEqual((d.kind, d.a, d.b), ("I", 0, 2))
        self.assertEqual(classify_detour(g, t, 4, 1, -1).kind, "II")

    def test_tree_records_all_unreachable(self):
        o = build_sssp_eps(binary_tree(31), 0, 0.5)
        kinds = {rec.kind for recs in o.records.values() for rec in recs.values()}
        self.assertLessEqual(kinds, {RecordKind.UNREACHABLE})
        for x in range(1, 31):
            for v in range(31):
                if v != x and lca(o.tree, v, x) == x:
                    self.assertTrue(math.isinf(o.distance(v, x)))


class TestSsspEpsOracle(unittest.TestCase):
    def test_rejects_weighted(self):
        with self.assertRaisesRegex(UnweightedRequiredError, "unweighted required"):
            build_sssp_eps(diamond(), R, 0.5)

    def test_rejects_epsilon(self):
        with self.assertRaises(ValueError):
            build_sssp_eps(four_cycle(), R, 0.0)

    def test_singleton(self):
        o = build_sssp_eps(Graph(1), 0, 0.5)
        self.assertEqual(o.special_vertices, frozenset())
        self.assertEqual(o.records, {})

    def test_six_cycle(self):
        o = build_sssp_eps(cycle(6), 0, 0.5)
        ans = query_sssp_eps(o, 3, 1)
        self.assertEqual(ans.distance, 3)
        self.assertEqual(ans.path.vertices, (0, 5, 4, 3))

    def test_unaffected_and_cut(self):
        o = build_sssp_eps(path_graph(5), 0, 0.5)
        self.assertEqual(o.query(2, 3).distance, 2)
        self.assertTrue(math.isinf(o.query(4, 2).distance))

    def _check_all(self, g: Graph, eps: float, r: int = 0):
        o = build_sssp_eps(g, r, eps)
        t = o.tree
        table = all_replacement_distances(g, r)
        worst = 1.0
        for x in range(g.n):
            if x == r:
                continue
            for v in range(g.n):
                if v == x:
                    continue
                exact = table[v, x]
                ans = o.query(v, x)
                self.assertEqual(o.distance(v, x), ans.distance)
                if np.isinf(exact):
                    self.assertTrue(math.isinf(ans.distance))
                    continue
                self.assertGreaterEqual(ans.distance, exact)
                self.assertLessEqual(ans.distance, (1 + eps) * exact, f"v={v} x={x}")
                verts = ans.path.vertices
                self.assertEqual((verts[0], verts[-1]), (r, v))
                self.assertNotIn(x, verts)
                self.assertEqual(path_weight(g, verts), ans.distance)
                if lca(t, v, x) != x:
                    self.assertEqual(ans.distance, t.dist[v])
                if exact:
                    worst = max(worst, ans.distance / exact)
        return worst

    def test_grid(self):
        self.assertLessEqual(self._check_all(grid(2, 20), 0.5), 1.5)

    def test_cycles_and_grids(self):
        for g in (cycle(9), cycle(24), grid(3, 8), grid(2, 12)):
            for eps in (0.25, 0.5):
                self._check_all(g, eps)

    def test_gnp(self):
        for seed in range(3):
            self._check_all(gnp(60, 0.08, seed), 0.5)
        self._check_all(gnp(60, 0.08, 11), 0.25)

    @given(connected_graphs(min_n=2, max_n=16, extra=0.15))
    @settings(max_examples=60, deadline=None)
    def test_stretch_on_random_graphs(self, g):
        self._check_all(g, 0.5)

    def test_pruned_records_reuse_a_valid_path(self):
        pruned = 0
        for g in (cycle(60), cycle(24), grid(2, 20), grid(4, 10)):
            o = build_sssp_eps(g, 0, 0.5)
            table = all_replacement_distances(g, 0)
            eps = o.internal_epsilon
            for w, recs in o.records.items():
                for x, rec in recs.items():
                    if rec.kind is not RecordKind.PRUNED_REF:
                        continue
                    pruned += 1
                    kept = recs[rec.target]
                    self.assertIs(kept.kind, RecordKind.TYPE_II_PATH)
                    lo, hi = kept.covers
                    self.assertTrue(lo <= o.tree.level[x] <= hi)
                    self.assertNotIn(x, kept.detour.vertices(o.tree, w))
                    self.assertLessEqual(kept.detour.length, (1 + eps) * table[w, x] + 1e-9)
        # every failure above the previous special vertex shares one detour around a cycle
        self.assertGreater(pruned, 0)

    def test_base_keeps_no_fail_trees(self):
        g = gnp(60, 0.08, 2)
        o = build_sssp_eps(g, 0, 0.5)
        self.assertTrue(all(not rec.o_fail for rec in o.base.records.values()))
        self.assertEqual(o.base.entries, sum(2 + len(rec.o_tree) for rec in o.base.records.values()))
        self.assertEqual(
            o.entries,
            o.base.entries
            + sum(rec.entries for recs in o.records.values() for rec in recs.values())
            + sum(len(trees) for trees in o.o_fail.values()),
        )
        self.assertTrue(all(not item["o_fail"] for item in o.to_payload()["base"]["records"]))

    def test_entries_scale_with_n_log_n(self):
        for eps in (0.25, 0.5):
            ratios = []
            for n in (128, 256, 512):
                o = build_sssp_eps(gnp(n, 10 / n, 7), 0, eps)
                ratios.append(o.entries * eps ** 3 / (n * math.log2(n)))
            self.assertLess(max(ratios) / min(ratios), 2.0, (eps, ratios))

    def test_stats(self):
        o = build_sssp_eps(grid(2, 20), 0, 0.5)
        stats = o.stats()
        self.assertEqual(stats["special"], len(o.special_vertices))
        self.assertGreater(stats["entries"], o.base.entries)
        self.assertEqual(o.internal_epsilon, 0.5 / INTERNAL_DIVISOR)


if __name__ == "__main__":
    unittest.main()
