import json
import os
import tempfile
import unittest
from unittest.mock import patch

from click.testing import CliRunner

from qkinema.core.errors import ConsistencyError
from qkinema.main import cli
from qkinema.services.config_manager import ConfigManager
from qkinema.services.experiment_runner import ExperimentRunner


class TestCli(unittest.TestCase):

    def setUp(self):
        ConfigManager.reset()
        self.runner = CliRunner()

    def tearDown(self):
        ConfigManager.reset()

    def invoke(self, *args, **kwargs):
        return self.runner.invoke(cli, list(args), **kwargs)

    def report(self, result):
        return json.loads(result.stdout)

    def test_version(self):
        result = self.invoke("--version")
        self.assertEqual(result.exit_code, 0)
        self.assertIn("1.0.0", result.output)

    def test_example2(self):
        result = self.invoke("demo", "example2")
        self.assertEqual(result.exit_code, 0, result.output)
        report = self.report(result)
        self.assertTrue(report["ok"])
        for p in report["probabilities"]:
            self.assertAlmostEqual(p, 0.5, delta=1e-12)

    def test_classical(self):
        result = self.invoke("demo", "classical", "--size", "6", "--trials", "20")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self.report(result)["size"], 6)

    def test_nosignaling(self):
        result = self.invoke("verify", "nosignaling", "--dims", "3,2", "--trials", "4", "--measurements", "2", "--seed", "1")
        self.assertEqual(result.exit_code, 0, result.output)
        report = self.report(result)
        self.assertEqual(report["dims"], [3, 2])
        self.assertFalse(report["verdict"]["signaling"])

    def test_bad_dims_is_usage_error(self):
        result = self.invoke("verify", "nosignaling", "--dims", "2")
        self.assertEqual(result.exit_code, 1)

    def test_unknown_command_is_usage_error(self):
        self.assertEqual(self.invoke("teleport").exit_code, 1)

    def test_certify_purify(self):
        result = self.invoke("certify", "affine", "--map", "purify", "--trials", "50", "--seed", "0")
        self.assertEqual(result.exit_code, 0, result.output)
        report = self.report(result)
        self.assertEqual(report["verdict"], "witness_found")
        self.assertAlmostEqual(report["fixed_witness"]["deviation"], 0.15, delta=1e-10)

    def test_certify_channel(self):
        result = self.invoke("certify", "affine", "--map", "bitflip:0.3", "--dim", "3", "--trials", "30")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self.report(result)["verdict"], "certified_affine")

    def test_unknown_map_exits_one(self):
        result = self.invoke("certify", "affine", "--map", "bogus", "--trials", "5")
        self.assertEqual(result.exit_code, 1)
        self.assertIn("ValidationError", result.output)

    def test_eqm_signaling(self):
        result = self.invoke("simulate", "eqm-signaling", "--shots", "8", "--seed", "2")
        self.assertEqual(result.exit_code, 0, result.output)
        verdict = self.report(result)["verdict"]
        self.assertTrue(verdict["signaling"])
        self.assertAlmostEqual(verdict["evidence"]["values"]["Z"], 0.5, delta=1e-12)
        self.assertAlmostEqual(verdict["evidence"]["values"]["X"], 0.25, delta=1e-12)

    def test_seed_from_environment(self):
        explicit = self.invoke("simulate", "eqm-signaling", "--shots", "8", "--seed", "7")
        from_env = self.invoke("simulate", "eqm-signaling", "--shots", "8", env={"QKINEMA_SEED": "7"})
        self.assertEqual(from_env.exit_code, 0, from_env.output)
        self.assertEqual(
            self.report(explicit)["verdict"]["evidence"]["transcript"],
            self.report(from_env)["verdict"]["evidence"]["transcript"],
        )

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "example2.json")
            result = self.invoke("--output", path, "demo", "example2")
            self.assertEqual(result.exit_code, 0, result.output)
            with open(path, encoding="utf-8") as f:
                saved = json.load(f)
            self.assertEqual(saved["command"], "demo example2")
            self.assertTrue(saved["ok"])

    def test_failed_check_exits_two(self):
        with patch.object(ExperimentRunner, "run_example2", return_value={"ok": False}):
            self.assertEqual(self.invoke("demo", "example2").exit_code, 2)

    def test_consistency_error_exits_two(self):
        with patch.object(ExperimentRunner, "run_example2", side_effect=ConsistencyError("gap too large")):
            result = self.invoke("demo", "example2")
        self.assertEqual(result.exit_code, 2)
        self.assertIn("ConsistencyError", result.output)


if __name__ == "__main__":
    unittest.main()
