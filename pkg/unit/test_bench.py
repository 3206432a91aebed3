import csv
import io
import json
import tempfile
import unittest
from pathlib import Path

import matplotlib

matplotlib.use('Agg')  # Headless backend
import matplotlib.pyplot as plt

from dsoracle.config import OracleConfig
from dsoracle.utils.bench import (
    BENCH_HEADER,
    BenchCase,
    doubling_suite,
    format_csv,
    load_suite,
    plot_stretch_histogram,
    run_case,
    run_suite,
    write_histogram_csv,
)
from graph_fixtures import OUTPUT_DIR


class TestBench(unittest.TestCase):
    def test_empty_suite_is_header_only(self):
        self.assertEqual(format_csv(run_suite([])), ",".join(BENCH_HEADER) + "\n")

    def test_doubling_suite(self):
        cases = doubling_suite(16, 100, OracleConfig())
        self.assertEqual([c.n for c in cases], [16, 32, 64])
        self.assertEqual(doubling_suite(200, 100, OracleConfig()), [])

    def test_graph_params(self):
        case = BenchCase(41, OracleConfig(kind="sssp3"), degree=10)
        self.assertEqual(case.graph_params(), {"n": 41, "p": 0.25, "weighted": True})
        self.assertFalse(BenchCase(41, OracleConfig(kind="apasp")).graph_params()["weighted"])
        self.assertEqual(BenchCase(40, family="grid").graph_params(), {"rows": 2, "cols": 20})

    def test_load_suite(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "suite.json"
            path.write_text(json.dumps([{"n": 32, "kind": "apasp", "k": 3, "family": "cycle"}]))
            (case,) = load_suite(path)
            path.write_text(json.dumps({"n": 32}))
            with self.assertRaises(ValueError):
                load_suite(path)
        self.assertEqual((case.n, case.family, case.oracle.kind, case.oracle.k), (32, "cycle", "apasp", 3))

    def test_rows(self):
        cases = [
            BenchCase(32, OracleConfig(kind="sssp3"), degree=6),
            BenchCase(32, OracleConfig(kind="sssp-eps", epsilon=0.25), family="grid"),
        ]
        reports = run_suite(cases)
        rows = list(csv.DictReader(io.StringIO(format_csv(reports))))
        self.assertEqual([r["kind"] for r in rows], ["sssp3", "sssp-eps"])
        self.assertEqual(rows[1]["params"], "source=0;epsilon=0.25")
        self.assertLessEqual(float(rows[0]["max_stretch"]), 3.0)
        self.assertLessEqual(float(rows[1]["max_stretch"]), 1.25)
        self.assertTrue(all(r.ok for r in reports))

    def test_apasp_probes(self):
        report = run_case(BenchCase(24, OracleConfig(kind="apasp", k=2), degree=4, seed=3))
        self.assertTrue(report.ok, report.violations[:3])
        self.assertLessEqual(report.mean_probes, 4)
        self.assertLessEqual(report.max_probes, 3)

    def test_histogram_outputs(self):
        reports = run_suite([BenchCase(n, OracleConfig(kind="sssp3"), degree=6) for n in (32, 64)])
        csv_path = OUTPUT_DIR / 'bench_stretch.csv'
        write_histogram_csv(reports, csv_path)
        with open(csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
        self.assertEqual(rows[0], ["kind", "n", "stretch"])
        self.assertEqual(len(rows) - 1, sum(r.stretches().size for r in reports))

        png = plot_stretch_histogram(reports, OUTPUT_DIR / 'test_stretch_histogram.png')
        self.assertTrue(png.exists())
        print(f"✓ Saved: {png}")

    def test_entries_growth_plot(self):
        reports = run_suite(doubling_suite(32, 128, OracleConfig(kind="sssp3"), degree=6))
        sizes = [r.n for r in reports]
        entries = [r.entries for r in reports]
        self.assertTrue(all(e >= n - 1 for n, e in zip(sizes, entries)))

        fig, ax = plt.subplots(figsize=(8, 4))
        ax.plot(sizes, entries, 'o-', label='entries')
        ax.plot(sizes, [2 * n for n in sizes], 'r--', label='2n')
        ax.set_xlabel('n')
        ax.set_ylabel('stored entries')
        ax.set_title('sssp3 storage')
        ax.legend()
        ax.grid(True)
        plt.tight_layout()
        plt.savefig(OUTPUT_DIR / 'test_entries_growth.png', dpi=150)
        plt.close()
        print(f"✓ Saved: {OUTPUT_DIR / 'test_entries_growth.png'}")


if __name__ == "__main__":
    unittest.main()
