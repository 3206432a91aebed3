import json
import tempfile
import unittest
from pathlib import Path

from dsoracle.config import OracleConfig
from dsoracle.errors import ContainerError
from dsoracle.graph import Graph
from dsoracle.io.container import FORMAT_VERSION, dumps, load_container, loads, parse, save_container
from dsoracle.oracles import ApaspOracle, Sssp3Oracle, SsspEpsOracle, build_oracle
from graph_fixtures import cycle, diamond, gnp, grid


def _answers(oracle, g: Graph):
    out = []
    for x in range(g.n):
        for v in range(g.n):
            if v == x:
                continue
            if isinstance(oracle, ApaspOracle):
                for u in range(g.n):
                    if u != x:
                        ans = oracle.query(u, v, x)
                        out.append((ans.distance, ans.path, ans.probes))
            elif x != oracle.root:
                ans = oracle.query(v, x)
                out.append((ans.distance, ans.path))
    return out


class TestContainer(unittest.TestCase):
    CASES = [
        (gnp(30, 0.15, 3, weighted=True), OracleConfig(kind="sssp3", source=2)),
        (grid(2, 10), OracleConfig(kind="sssp-eps", epsilon=0.25)),
        (cycle(12), OracleConfig(kind="apasp", k=2, epsilon=0.5, seed=7)),
        (gnp(20, 0.2, 1), OracleConfig(kind="apasp", k=3, epsilon=0.5, seed=1)),
    ]

    def test_round_trip_answers_and_bytes(self):
        for g, cfg in self.CASES:
            with self.subTest(kind=cfg.kind):
                oracle = build_oracle(g, cfg)
                text = dumps(oracle)
                loaded = loads(text)
                self.assertIs(type(loaded), type(oracle))
                self.assertEqual(dumps(loaded), text)
                self.assertEqual(_answers(loaded, g), _answers(oracle, g))

    def test_rebuild_is_byte_identical(self):
        g = diamond()
        cfg = OracleConfig(kind="sssp3")
        self.assertEqual(dumps(build_oracle(g, cfg)), dumps(build_oracle(g, cfg)))

    def test_header(self):
        box = parse(dumps(build_oracle(diamond(), OracleConfig())))
        self.assertEqual(box.kind, "sssp3")
        self.assertEqual(box.params, {"source": 0})
        self.assertEqual(box.fingerprint, diamond().fingerprint())
        self.assertEqual(box.format_version, FORMAT_VERSION)

    def test_files(self):
        oracle = build_oracle(grid(2, 5), OracleConfig(kind="sssp-eps"))
        with tempfile.TemporaryDirectory() as tmp:
            path = save_container(oracle, Path(tmp) / "o.json")
            loaded = load_container(path, graph=grid(2, 5))
        self.assertIsInstance(loaded, SsspEpsOracle)

    def test_corrupted_graph(self):
        data = json.loads(dumps(build_oracle(diamond(), OracleConfig())))
        data["graph"]["edges"][0][2] = 7
        with self.assertRaisesRegex(ContainerError, "fingerprint"):
            loads(json.dumps(data))

    def test_other_graph(self):
        text = dumps(build_oracle(diamond(), OracleConfig()))
        with self.assertRaisesRegex(ContainerError, "fingerprint"):
            loads(text, graph=cycle(4))

    def test_version_mismatch(self):
        data = json.loads(dumps(build_oracle(diamond(), OracleConfig())))
        data["format_version"] = FORMAT_VERSION + 1
        with self.assertRaisesRegex(ContainerError, "version"):
            loads(json.dumps(data))

    def test_unknown_kind_and_garbage(self):
        data = json.loads(dumps(build_oracle(diamond(), OracleConfig())))
        data["kind"] = "sssp7"
        with self.assertRaises(ContainerError):
            loads(json.dumps(data))
        with self.assertRaises(ContainerError):
            loads("not json")
        with self.assertRaises(ContainerError):
            loads("[1, 2]")

    def test_malformed_payload(self):
        data = json.loads(dumps(build_oracle(diamond(), OracleConfig())))
        data["payload"] = {"records": [{"x": 1}]}
        with self.assertRaises(ContainerError):
            loads(json.dumps(data))
        self.assertIsInstance(loads(dumps(build_oracle(diamond(), OracleConfig()))), Sssp3Oracle)


if __name__ == "__main__":
    unittest.main()
