import math
import unittest

from dsoracle.errors import QueryError, UnweightedRequiredError
from dsoracle.graph import Graph, path_weight
from dsoracle.oracles.apasp import build_apasp, internal_epsilon, query_apasp, sampler_graph
from dsoracle.oracles.exact import fault_distance_matrix
from graph_fixtures import A, B, C, R, cycle, diamond, four_cycle, gnp, grid, path_graph


class TestApaspOracle(unittest.TestCase):
    def _check_all(self, g: Graph, k: int, eps: float, seed: int = 42):
        o = build_apasp(g, k, eps, seed)
        bound = (2 * k - 1) * (1 + eps)
        for x in range(g.n):
            exact = fault_distance_matrix(g, x)
            for u in range(g.n):
                for v in range(g.n):
                    if x in (u, v):
                        continue
                    ans = query_apasp(o, u, v, x)
                    self.assertLessEqual(ans.probes, 2 * k - 1)
                    self.assertEqual(o.distance(u, v, x), ans.distance)
                    d = exact[u, v]
                    if math.isinf(d):
                        self.assertTrue(math.isinf(ans.distance))
                        continue
                    self.assertGreaterEqual(ans.distance, d)
                    self.assertLessEqual(ans.distance, bound * d, f"u={u} v={v} x={x}")
                    verts = ans.path.vertices
                    self.assertEqual((verts[0], verts[-1]), (u, v))
                    self.assertNotIn(x, verts)
                    self.assertEqual(path_weight(g, verts), ans.distance)
        return o

    def test_four_cycle(self):
        self._check_all(four_cycle(), 2, 0.5)

    def test_small_families(self):
        for g in (cycle(8), grid(3, 4), path_graph(6)):
            self._check_all(g, 2, 0.5)

    def test_gnp_k2(self):
        for seed in range(2):
            self._check_all(gnp(24, 0.2, seed), 2, 0.5, seed)

    def test_gnp_k3(self):
        self._check_all(gnp(24, 0.2, 5), 3, 0.5, 5)

    def test_same_endpoint(self):
        o = build_apasp(four_cycle(), 2, 0.5)
        ans = o.query(B, B, A)
        self.assertEqual(ans.distance, 0)
        self.assertEqual(ans.path.vertices, (B,))

    def test_adjacent_endpoints(self):
        o = build_apasp(cycle(10), 2, 0.5)
        d = o.distance(0, 1, 5)
        self.assertGreaterEqual(d, 1)
        self.assertLessEqual(d, 3 * 1.5)

    def test_cut_vertex(self):
        o = build_apasp(path_graph(5), 2, 0.5)
        self.assertTrue(math.isinf(o.distance(0, 4, 2)))
        self.assertIsNone(o.query(0, 4, 2).path)

    def test_invalid_queries(self):
        o = build_apasp(four_cycle(), 2, 0.5)
        with self.assertRaises(QueryError):
            o.query(A, B, A)
        with self.assertRaises(QueryError):
            o.query(R, C, C)
        with self.assertRaises(QueryError):
            o.query(R, 9, A)

    def test_rejects_weighted_and_parameters(self):
        with self.assertRaisesRegex(UnweightedRequiredError, "unweighted required"):
            build_apasp(diamond(), 2, 0.5)
        with self.assertRaises(ValueError):
            build_apasp(four_cycle(), 1, 0.5)
        with self.assertRaises(ValueError):
            build_apasp(four_cycle(), 2, 0.0)

    def test_internal_epsilon(self):
        self.assertEqual(internal_epsilon(0.5, 2), 0.5 / 8)
        o = build_apasp(four_cycle(), 2, 0.5)
        self.assertEqual(o.internal_epsilon, 0.0625)

    def test_deterministic(self):
        g = gnp(30, 0.15, 2)
        self.assertEqual(build_apasp(g, 2, 0.5, 9).to_payload(), build_apasp(g, 2, 0.5, 9).to_payload())

    def test_sampler_graph(self):
        sg = sampler_graph(four_cycle(), {B, C})
        self.assertEqual(sg.n, 5)
        self.assertTrue(sg.has_edge(4, B) and sg.has_edge(4, C))
        self.assertFalse(sg.has_edge(4, R))

    def test_stats(self):
        o = build_apasp(gnp(30, 0.15, 4), 2, 0.5, 4)
        stats = o.stats()
        self.assertEqual(stats["A0"], 30)
        self.assertEqual(stats["A1"], len(o.hierarchy.members(1)))
        self.assertEqual(stats["entries"], o.entries)
        self.assertGreater(stats["clusters"], 0)


if __name__ == "__main__":
    unittest.main()
