import csv
import math
import tempfile
import unittest
from pathlib import Path

import numpy as np
from hypothesis import given, settings

from dsoracle.errors import QueryError
from dsoracle.graph import Graph, path_weight
from dsoracle.oracles.exact import (
    FaultDistances,
    all_replacement_distances,
    exact_replacement,
    fault_distance_matrix,
    nearest_in_set,
    write_replacement_csv,
)
from graph_fixtures import A, B, C, R, connected_graphs, four_cycle, naive_distances, path_graph, star


class TestExactReplacement(unittest.TestCase):
    def test_four_cycle(self):
        ans = exact_replacement(four_cycle(), R, B, A)
        self.assertEqual(ans.distance, 2)
        self.assertEqual(ans.path.vertices, (R, C, B))

    def test_irrelevant_failure(self):
        # tree 0-1-2 plus isolated vertex 3
        g = Graph(4, [(0, 1, 2), (1, 2, 3)])
        self.assertEqual(exact_replacement(g, 0, 2, 3).distance, 5)

    def test_cut_vertex(self):
        ans = exact_replacement(path_graph(3), 0, 2, 1)
        self.assertTrue(math.isinf(ans.distance))
        self.assertFalse(ans.reachable)
        self.assertIsNone(ans.path)

    def test_rejects_endpoint_failure(self):
        with self.assertRaises(QueryError):
            exact_replacement(four_cycle(), R, B, B)
        with self.assertRaises(QueryError):
            exact_replacement(four_cycle(), R, B, R)
        with self.assertRaises(QueryError):
            exact_replacement(four_cycle(), R, 9, A)


class TestReplacementTable(unittest.TestCase):
    def test_singleton(self):
        table = all_replacement_distances(Graph(1), 0)
        self.assertEqual(table.shape, (1, 1))
        self.assertTrue(np.isnan(table[0, 0]))

    def test_four_cycle(self):
        table = all_replacement_distances(four_cycle(), R)
        self.assertEqual(table[B, A], 2)
        self.assertEqual(table[B, C], 2)
        self.assertTrue(np.isnan(table[A, A]))
        self.assertTrue(np.isnan(table[A, R]))

    def test_star(self):
        table = all_replacement_distances(star(5), 0)
        self.assertEqual(table[1, 2], 1)

    def test_workers_agree(self):
        g = four_cycle()
        np.testing.assert_array_equal(all_replacement_distances(g, R), all_replacement_distances(g, R, workers=3))

    @given(connected_graphs(min_n=3, max_n=10, weighted=True))
    @settings(max_examples=30, deadline=None)
    def test_matches_naive_and_never_shrinks(self, g):
        table = all_replacement_distances(g, 0)
        base = naive_distances(g, 0)
        for x in range(1, g.n):
            masked = naive_distances(g, 0, avoid=x)
            for v in range(g.n):
                if v == x:
                    continue
                self.assertEqual(table[v, x], masked[v])
                self.assertGreaterEqual(table[v, x], base[v])
                ans = exact_replacement(g, 0, v, x)
                self.assertEqual(ans.distance, masked[v])
                if ans.reachable:
                    self.assertNotIn(x, ans.path.vertices)
                    self.assertEqual(path_weight(g, ans.path.vertices), ans.distance)

    def test_csv(self):
        table = all_replacement_distances(path_graph(3), 0)
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "table.csv"
            write_replacement_csv(table, out)
            with open(out) as fh:
                rows = list(csv.reader(fh))
        self.assertEqual(rows[0], ["v", "x", "distance"])
        self.assertIn(["2", "1", "inf"], rows)
        self.assertIn(["1", "2", "1"], rows)


class TestFaultMatrices(unittest.TestCase):
    def test_failed_row_is_isolated(self):
        m = fault_distance_matrix(four_cycle(), A)
        self.assertEqual(m[R, B], 2)
        self.assertTrue(math.isinf(m[R, A]))
        self.assertEqual(m[A, A], 0)

    def test_cache(self):
        dist = FaultDistances(four_cycle(), cache=False)
        self.assertIs(dist(None), dist(None))
        self.assertIsNot(dist(A), dist(A))
        cached = FaultDistances(four_cycle())
        self.assertIs(cached(A), cached(A))

    def test_nearest_in_set(self):
        row = np.array([0.0, 1.0, 2.0, 1.0])
        self.assertEqual(nearest_in_set(row, {C, A}), (1, A))
        self.assertEqual(nearest_in_set(row, set()), (math.inf, -1))
        self.assertEqual(nearest_in_set(np.array([0.0, math.inf]), {1}), (math.inf, -1))


if __name__ == "__main__":
    unittest.main()
