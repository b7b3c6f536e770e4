import json
import subprocess
import unittest
from io import StringIO
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import mock

from hardy import main, modules
from hardy.exponents import Params, c_h, hardy_roots


class TestCli(unittest.TestCase):
    """
    Minimal test case that each of the CLI entry points can be called from terminal
    """

    def test_tool_gets_help(self):
        for tool in modules:
            name = tool.replace('_', '-')
            help_message = subprocess.check_output(["hardy", name, "-h"])
            self.assertTrue(f"usage: hardy {name}".encode() in help_message)


@mock.patch("sys.stderr", new=StringIO())
class TestCliRuns(unittest.TestCase):

    def setUp(self):
        self._tmp_dir = TemporaryDirectory()
        self.path = Path(self._tmp_dir.name)

    def tearDown(self):
        self._tmp_dir.cleanup()

    def run_cli(self, *argv):
        output = self.path / "report.json"
        with self.assertRaises(SystemExit) as ctx:
            main([*argv, "--output", str(output), "--no-timestamp"])
        report = json.loads(output.read_text()) if output.exists() else None
        return ctx.exception.code, report

    def test_exponents_report(self):
        code, report = self.run_cli("exponents", "--p", "2", "--N", "3", "--lam", "3/16", "--epsilon", "cstar")
        self.assertEqual(code, 0)
        self.assertEqual(report["schema_version"], "1.0")
        self.assertEqual(report["command"], "exponents")
        self.assertNotIn("timestamp", report)
        result = report["result"]
        self.assertAlmostEqual(result["c_h"], 0.25, places=14)
        self.assertAlmostEqual(result["c_star"], 0.25, places=14)
        self.assertAlmostEqual(result["alpha_lower"], -0.75, places=12)
        self.assertAlmostEqual(result["alpha_upper"], -0.25, places=12)
        self.assertTrue(result["degenerate"]["beta"])

    def test_missing_argument_is_a_usage_error(self):
        code, report = self.run_cli("exponents", "--N", "3")
        self.assertEqual(code, 64)
        self.assertEqual(report["error"]["error"], "UsageError")

    def test_unknown_flag_is_a_usage_error(self):
        with self.assertRaises(SystemExit) as ctx:
            main(["exponents", "--p", "2", "--N", "3", "--bogus"])
        self.assertEqual(ctx.exception.code, 64)

    def test_domain_error_exit_code(self):
        code, report = self.run_cli("exponents", "--p", "0.5", "--N", "3")
        self.assertEqual(code, 2)
        self.assertEqual(report["error"]["error"], "DomainError")

    def test_supercritical_strength(self):
        code, report = self.run_cli("exponents", "--p", "2", "--N", "3", "--lam", "0.3")
        self.assertEqual(code, 2)
        self.assertIn("exceeds", report["error"]["message"])

    def test_config_defaults_and_precedence(self):
        config = self.path / "hardy.toml"
        config.write_text('p = 2\nN = 3\nlam = "0.1"\n')
        code, report = self.run_cli("exponents", "--config", str(config), "--lam", "3/16")
        self.assertEqual(code, 0)
        self.assertEqual(report["config"]["p"], 2.0)
        self.assertEqual(report["config"]["lam"], "3/16")
        self.assertAlmostEqual(report["result"]["alpha_lower"], -0.75, places=12)

    def test_save_config(self):
        saved = self.path / "saved.toml"
        code, _ = self.run_cli("exponents", "--p", "3", "--N", "5", "--save-config", str(saved))
        self.assertEqual(code, 0)
        code, report = self.run_cli("exponents", "--config", str(saved))
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report["result"]["c_h"], 8 / 27, places=14)

    def test_classify_solution(self):
        code, report = self.run_cli(
            "classify", "--p", "2", "--N", "3", "--potential", "hardy:3/16", "--family", "alpha=alpha_lower",
        )
        self.assertEqual(code, 0)
        self.assertEqual(report["result"]["verdict"], "solution")

    def test_classify_csv(self):
        output = self.path / "evidence.csv"
        with self.assertRaises(SystemExit) as ctx:
            main([
                "classify", "--p", "2", "--N", "3", "--family", "alpha=-1/4",
                "--out", "csv", "--output", str(output), "--nodes", "64",
            ])
        self.assertEqual(ctx.exception.code, 0)
        header = output.read_text().splitlines()[0]
        self.assertEqual(header, "r,u,u',residual,scaled_residual")

    def test_table1_exact_row(self):
        code, report = self.run_cli("table1", "--p", "2", "--N", "3", "--epsilon", "0", "--quiet")
        self.assertEqual(code, 0)
        self.assertTrue(report["result"]["confirmed"])
        self.assertEqual(len(report["result"]["cells"]), 4)

    def test_verify_inequality_quad(self):
        code, report = self.run_cli("verify-inequality", "--quad", "2,1,1,1", "--q", "2")
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report["result"]["gap"], 0.5, places=14)

    def test_verify_inequality_suite(self):
        code, report = self.run_cli("verify-inequality", "--regime", "convex", "--samples", "2000", "--shards", "2")
        self.assertEqual(code, 0)
        self.assertTrue(report["result"]["passed"])

    def test_solve_bvp(self):
        code, report = self.run_cli(
            "solve-bvp", "--p", "2", "--N", "3", "--inner", "1", "--outer", "0.5", "--nodes", "64",
        )
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report["result"]["slope"], -1.0, places=6)

    def test_compare_boundary_order(self):
        code, report = self.run_cli(
            "compare", "--p", "2", "--N", "3", "--potential", "hardy:3/16",
            "--u", "alpha=-1/4,c=2", "--v", "alpha=-1/2",
        )
        self.assertEqual(code, 2)
        self.assertEqual(report["error"]["error"], "PreconditionViolated")

    def test_lambda_flag(self):
        code, report = self.run_cli("exponents", "--p", "2", "--N", "3", "--lambda", "0.1875")
        self.assertEqual(code, 0)
        self.assertEqual(report["config"]["lam"], "0.1875")
        self.assertAlmostEqual(report["result"]["alpha_lower"], -0.75, places=12)
        self.assertAlmostEqual(report["result"]["alpha_upper"], -0.25, places=12)
        code, report = self.run_cli("exponents", "--p", "2", "--N", "3", "--lambda", "0.3")
        self.assertEqual(code, 2)
        self.assertEqual(report["error"]["error"], "DomainError")

    def test_lambda_config_key(self):
        config = self.path / "hardy.toml"
        config.write_text('p = 2\nN = 3\nlambda = "3/16"\n')
        code, report = self.run_cli("exponents", "--config", str(config))
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report["result"]["alpha_lower"], -0.75, places=12)

    def test_table1_eps_list(self):
        code, report = self.run_cli("table1", "--p", "3", "--N", "5", "--eps-list", "0,mid,cstar", "--quiet")
        self.assertIn(code, (0, 3))
        cells = report["result"]["cells"]
        self.assertEqual(len({cell["epsilon"] for cell in cells}), 3)
        self.assertTrue(all("confirmed" in cell for cell in cells))

    def test_classify_from_exponent_flags(self):
        code, report = self.run_cli(
            "classify", "--p", "2", "--N", "3", "--potential", "hardy:0.1875",
            "--alpha", "-0.75", "--beta", "0", "--tau", "0",
        )
        self.assertEqual(code, 0)
        self.assertEqual(report["result"]["verdict"], "solution")

    def test_classify_needs_a_profile(self):
        code, report = self.run_cli("classify", "--p", "2", "--N", "3")
        self.assertEqual(code, 64)
        self.assertIn("--alpha", report["error"]["message"])

    def test_text_output(self):
        output = self.path / "report.txt"
        with self.assertRaises(SystemExit) as ctx:
            main([
                "exponents", "--p", "2", "--N", "3", "--lam", "3/16",
                "--out", "text", "--output", str(output), "--no-timestamp",
            ])
        self.assertEqual(ctx.exception.code, 0)
        lines = dict(line.split(": ", 1) for line in output.read_text().splitlines())
        self.assertEqual(lines["schema_version"], "1.0")
        self.assertEqual(lines["command"], "exponents")
        self.assertAlmostEqual(float(lines["result.alpha_lower"]), -0.75, places=12)

    def test_pl_check_horizon(self):
        code, report = self.run_cli(
            "pl-check", "--p", "2", "--N", "3", "--potential", "hardy:3/16",
            "--u", "alpha=-0.75", "--w", "alpha=-0.5", "--r0", "1", "--rmax", "1e4",
        )
        self.assertIn(code, (0, 3))
        self.assertEqual(report["result"]["horizon"], 1e4)
        code, report = self.run_cli(
            "pl-check", "--p", "2", "--N", "3", "--potential", "hardy:3/16",
            "--u", "alpha=-0.75", "--w", "alpha=-0.5", "--r0", "1", "--horizon", "1e3",
        )
        self.assertEqual(report["result"]["horizon"], 1e3)

    def test_verify_inequality_fixed_q(self):
        code, report = self.run_cli("verify-inequality", "--q", "3", "--samples", "1000", "--shards", "2")
        self.assertEqual(code, 0)
        suites = report["result"]["suites"]
        self.assertEqual([suite["regime"] for suite in suites], ["convex", "equality", "strict"])
        self.assertTrue(all(suite["q"] == 3.0 and suite["passed"] for suite in suites))

    def test_verify_inequality_regime_outside_q(self):
        code, report = self.run_cli("verify-inequality", "--regime", "concave", "--q", "3", "--samples", "100")
        self.assertEqual(code, 2)
        self.assertEqual(report["error"]["error"], "DomainError")

    def test_verify_superposition_pair_spec(self):
        params = Params(3, 5)
        lower, upper = hardy_roots(params, c_h(params) / 2)
        code, report = self.run_cli(
            "verify-superposition", "--p", "3", "--N", "5", "--potential", "hardy:mid",
            "--pair-spec", f"alpha=alpha_lower;alpha={float(lower + upper) / 2!r}", "--admissible",
        )
        self.assertEqual(code, 0)
        self.assertTrue(report["result"]["holds"])

    def test_malformed_pair_spec(self):
        code, report = self.run_cli(
            "verify-superposition", "--p", "3", "--N", "5", "--potential", "hardy:mid",
            "--pair-spec", "alpha=alpha_lower",
        )
        self.assertEqual(code, 64)
        self.assertEqual(report["error"]["error"], "UsageError")
