import unittest

import networkx as nx

from dsoracle.utils.generate import from_networkx, generate_graph, to_networkx


class TestGenerate(unittest.TestCase):
    def test_families(self):
        self.assertEqual(generate_graph("cycle", n=6).m, 6)
        self.assertEqual(generate_graph("path", n=5).m, 4)
        g = generate_graph("grid", rows=2, cols=3)
        self.assertEqual((g.n, g.m), (6, 7))
        # row-major ids
        self.assertTrue(g.has_edge(0, 1) and g.has_edge(0, 3) and not g.has_edge(2, 3))
        star = generate_graph("star", n=5)
        self.assertEqual([len(star.neighbors(v)) for v in range(5)], [4, 1, 1, 1, 1])

    def test_gnp_is_seeded_and_connected(self):
        a = generate_graph("gnp", 1, n=50, p=0.2)
        b = generate_graph("gnp", 1, n=50, p=0.2)
        self.assertEqual(a, b)
        self.assertEqual(a.fingerprint(), b.fingerprint())
        self.assertTrue(a.unweighted)
        self.assertTrue(nx.is_connected(to_networkx(a)))
        self.assertNotEqual(generate_graph("gnp", 2, n=50, p=0.2), a)

    def test_gnp_weights(self):
        g = generate_graph("gnp", 3, n=40, p=0.2, weighted=True)
        weights = {w for _, _, w in g.edges}
        self.assertLessEqual(weights, set(range(1, 11)))
        self.assertFalse(g.unweighted)

    def test_networkx_round_trip(self):
        g = generate_graph("gnp", 4, n=20, p=0.3, weighted=True, max_weight=5)
        self.assertEqual(from_networkx(to_networkx(g), [w for _, _, w in g.edges]), g)

    def test_errors(self):
        with self.assertRaises(ValueError):
            generate_graph("hypercube", n=4)
        with self.assertRaises(ValueError):
            generate_graph("cycle", n=2)
        with self.assertRaises(ValueError):
            generate_graph("grid", rows=0, cols=3)
        with self.assertRaises(ValueError):
            generate_graph("gnp", n=10, p=1.5)
        with self.assertRaises(ValueError):
            generate_graph("gnp", n=10, p=0.0)
        with self.assertRaises(ValueError):
            generate_graph("gnp", n=200, p=0.001, retries=3)


if __name__ == "__main__":
    unittest.main()
