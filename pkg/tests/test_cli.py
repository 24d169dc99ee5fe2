"""
Tests for the mwjoin command line.
"""

import csv
import io
import json
import tempfile
import unittest
import logging
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from src.cli import EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, build_parser, main
from src.datagen import read_relation_csv
from src.pipeline import ExperimentSpec

# Disable logging during tests
logging.disable(logging.CRITICAL)


def invoke(*argv: str):
    """Run the CLI and return (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def table(text: str):
    """Split a ``# config:`` prefixed CSV into (config, rows)."""
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    config = json.loads(lines[0][len("# config: "):])
    return config, list(csv.DictReader(lines[1:]))


class TestParser(unittest.TestCase):

    def test_counts_accept_scientific_notation(self):
        args = build_parser().parse_args(["model", "--n", "1e6", "--d", "2e3"])
        self.assertEqual((args.n, args.d), (1_000_000, 2000))

    def test_comma_lists(self):
        args = build_parser().parse_args(
            ["compare", "--n", "1000,2e3", "--bandwidths", "25, 49"]
        )
        self.assertEqual(args.n, [1000, 2000])
        self.assertEqual(args.bandwidths, [25.0, 49.0])

    def test_subcommand_required(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                build_parser().parse_args([])


class TestExitCodes(unittest.TestCase):
    """Test usage errors map to the documented exit codes."""

    def test_unknown_axis(self):
        code, _, err = invoke("sweep", "--axis", "bogus", "--values", "1")
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("bogus", err)

    def test_malformed_values(self):
        code, _, _ = invoke("sweep", "--axis", "d", "--values", "1,x")
        self.assertEqual(code, EXIT_ERROR)

    def test_missing_subcommand(self):
        code, _, _ = invoke()
        self.assertEqual(code, EXIT_ERROR)

    def test_help(self):
        code, out, _ = invoke("--help")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("mwjoin", out)


class TestRun(unittest.TestCase):

    def test_all_strategies_agree(self):
        code, out, _ = invoke(
            "run", "--n", "500", "--d", "20", "--all", "--verify", "--workers", "1"
        )
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertTrue(report["aggregates_agree"])
        strategies = [result["strategy"] for result in report["results"]]
        self.assertEqual(
            strategies, ["linear3", "star3", "cascaded-self", "cascaded-star"]
        )
        self.assertTrue(all(result["verified"] for result in report["results"]))

    def test_single_strategy(self):
        code, out, _ = invoke("run", "--n", "300", "--d", "10", "--H-bkt", "2")
        self.assertEqual(code, EXIT_OK)
        result = json.loads(out)
        self.assertEqual(result["strategy"], "linear3")
        self.assertEqual(result["plan"]["H_bkt"], 2)
        self.assertIsNone(result["verified"])

    def test_csv_output(self):
        code, out, _ = invoke("run", "--n", "200", "--d", "5", "--format", "csv")
        self.assertEqual(code, EXIT_OK)
        rows = list(csv.reader(out.splitlines()))
        self.assertEqual(rows[0], ["strategy", "a_value", "count"])
        self.assertTrue(all(row[0] == "linear3" for row in rows[1:]))
        self.assertEqual(len(rows) - 1, 5)

    def test_output_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, _, _ = invoke(
                "run", "--shape", "cyclic", "--n", "300", "--d", "10", "--out", tmp
            )
            stats = json.loads((Path(tmp) / "cyclic3_stats.json").read_text())
            self.assertTrue((Path(tmp) / "cyclic3_aggregate.csv").exists())
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(stats["strategy"], "cyclic3")

    def test_infeasible_plan(self):
        code, _, err = invoke(
            "run", "--n", "100", "--strategy", "cascaded-self", "--g-bkt", "3"
        )
        self.assertEqual(code, EXIT_INFEASIBLE)
        self.assertIn("infeasible", err)

    def test_star_without_k(self):
        code, _, err = invoke("run", "--shape", "star", "--n", "100")
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("k", err)


class TestModel(unittest.TestCase):

    def test_json_report(self):
        code, out, _ = invoke(
            "model", "--n", "1e6", "--d", "1000", "--dram-bw", "25", "--show-tree"
        )
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertEqual(report["strategy"], "linear3")
        self.assertEqual(report["M"], 2**20)
        self.assertEqual(report["closed_form"]["intermediate_size"], 10**9)
        self.assertGreater(report["estimate"]["cycles"], 0)
        self.assertEqual(report["tree"]["label"], "linear3")

    def test_cyclic_has_no_estimate(self):
        code, out, _ = invoke("model", "--shape", "cyclic", "--n", "5000", "--d", "50")
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertIsNone(report["estimate"])
        self.assertIn("cyclic_cost_at_plan", report["closed_form"])

    def test_csv_report(self):
        code, out, _ = invoke("model", "--n", "1e5", "--d", "100", "--format", "csv")
        self.assertEqual(code, EXIT_OK)
        rows = dict(csv.reader(out.splitlines()[1:]))
        self.assertIn("tuples_read_linear", rows)
        self.assertIn("cycles", rows)
        self.assertIn("breakdown_join1", rows)


class TestSweep(unittest.TestCase):

    def test_g_bkt_sweep(self):
        code, out, _ = invoke(
            "sweep", "--n", "1e6", "--d", "1000", "--axis", "g_bkt",
            "--values", "16,256,4096",
        )
        self.assertEqual(code, EXIT_OK)
        config, rows = table(out)
        self.assertEqual(config["axis"], "g_bkt")
        self.assertEqual(config["strategy"], "linear3")
        self.assertEqual([float(row["g_bkt"]) for row in rows], [16, 256, 4096])
        self.assertTrue(all(float(row["cycles"]) > 0 for row in rows))
        self.assertIn("g_bkt=256", rows[1]["plan"])

    def test_empty_values(self):
        code, out, _ = invoke("sweep", "--axis", "d", "--values", "")
        self.assertEqual(code, EXIT_OK)
        _, rows = table(out)
        self.assertEqual(rows, [])
        self.assertTrue(out.splitlines()[1].startswith("d,cycles"))

    def test_engine_counters(self):
        code, out, _ = invoke(
            "sweep", "--n", "400", "--d", "20", "--axis", "H_bkt",
            "--values", "1,2", "--engine-counters",
        )
        self.assertEqual(code, EXIT_OK)
        _, rows = table(out)
        # R and S once, T once per partition of R
        reads = [int(row["dram_tuples_read"]) for row in rows]
        self.assertEqual(reads, [400 * 3, 400 * 4])

    def test_star_g_bkt_sweep(self):
        """Test the star grid keeps h_bkt * g_bkt equal to U along the sweep."""
        code, out, _ = invoke(
            "sweep", "--shape", "star", "--k", "1000", "--n", "1e5", "--d", "100",
            "--axis", "g_bkt", "--values", "1,8,64",
        )
        self.assertEqual(code, EXIT_OK)
        config, rows = table(out)
        self.assertEqual(config["strategy"], "star3")
        plans = [row["plan"] for row in rows]
        self.assertIn("h_bkt=64;g_bkt=1", plans[0])
        self.assertIn("h_bkt=8;g_bkt=8", plans[1])
        self.assertIn("h_bkt=1;g_bkt=64", plans[2])
        self.assertTrue(all(float(row["cycles"]) > 0 for row in rows))

    def test_star_g_bkt_must_divide_U(self):
        code, _, err = invoke(
            "sweep", "--shape", "star", "--k", "100", "--axis", "g_bkt",
            "--values", "3",
        )
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("divide", err)

    def test_axis_must_apply(self):
        code, _, err = invoke(
            "sweep", "--shape", "star", "--k", "100", "--axis", "H_bkt",
            "--values", "1",
        )
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("H_bkt", err)

    def test_json_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "sweep.json"
            code, _, _ = invoke(
                "sweep", "--axis", "dram_bw", "--values", "25,49",
                "--format", "json", "--out", str(path),
            )
            data = json.loads(path.read_text())
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(data["rows"]), 2)
        self.assertGreaterEqual(data["rows"][0]["cycles"], data["rows"][1]["cycles"])


class TestCompare(unittest.TestCase):

    def test_rows_per_point(self):
        code, out, _ = invoke(
            "compare", "--n", "1e5,1e6", "--d", "1000", "--bandwidths", "25,49"
        )
        self.assertEqual(code, EXIT_OK)
        config, rows = table(out)
        self.assertEqual(config["command"], "compare")
        self.assertEqual(len(rows), 4)
        for row in rows:
            self.assertGreater(float(row["speedup"]), 0)
            self.assertIn(row["spilled"], ("True", "False"))

    def test_star_needs_k(self):
        code, _, _ = invoke("compare", "--shape", "star")
        self.assertEqual(code, EXIT_ERROR)

    def test_star_dimensions_must_fit(self):
        code, _, _ = invoke("compare", "--shape", "star", "--k", str(2**20))
        self.assertEqual(code, EXIT_INFEASIBLE)


class TestGen(unittest.TestCase):

    def test_files_read_back(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, out, _ = invoke(
                "gen", "--n", "250", "--d", "12", "--seed", "3", "--out", tmp
            )
            back = [read_relation_csv(Path(tmp) / f"{n}.csv") for n in "RST"]
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(out.splitlines()), 3)
        expected = ExperimentSpec(n=250, d=12, seed=3).relations()
        for got, want in zip(back, expected):
            self.assertEqual(got.columns, want.columns)
            self.assertEqual(got.sorted_rows(), want.sorted_rows())


if __name__ == "__main__":
    unittest.main()
