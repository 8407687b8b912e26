import unittest
from unittest.mock import patch

from config.settings import Config
from qkinema.core.errors import ValidationError
from qkinema.services.config_manager import ConfigManager


class TestConfig(unittest.TestCase):

    def test_defaults_are_valid(self):
        self.assertEqual(Config.validate_config(), [])

    def test_default_tolerances(self):
        tolerances = Config.get_tolerances()
        self.assertEqual(tolerances["AFFINITY_THRESHOLD"], 1e-8)
        self.assertEqual(tolerances["NO_SIGNALING_TOL"], 1e-9)
        self.assertEqual(tolerances["PROB_FLOOR"], 1e-12)
        self.assertEqual(tolerances["EQUIVALENCE_TOL"], 1e-9)
        self.assertEqual(tolerances["BARYCENTER_TOL"], 1e-9)
        self.assertEqual(tolerances["PROB_SUM_TOL"], 1e-9)

    def test_non_positive_tolerance(self):
        with patch.object(Config, "AFFINITY_THRESHOLD", 0.0):
            errors = Config.validate_config()
        self.assertTrue(any("AFFINITY_THRESHOLD" in e for e in errors))

    def test_bad_log_level(self):
        with patch.object(Config, "LOG_LEVEL", "LOUD"):
            self.assertIn("Unknown QKINEMA_LOG_LEVEL: LOUD", Config.validate_config())

    def test_system_summary(self):
        summary = Config.get_system_summary()
        self.assertEqual(summary["version"], Config.VERSION)
        self.assertIn("DEFAULT_TRIALS", summary["run_defaults"])


class TestConfigManager(unittest.TestCase):

    def setUp(self):
        ConfigManager.reset()

    def tearDown(self):
        ConfigManager.reset()

    def test_singleton(self):
        self.assertIs(ConfigManager(), ConfigManager())

    def test_values(self):
        manager = ConfigManager()
        self.assertEqual(manager.get("VERSION"), Config.VERSION)
        self.assertEqual(manager.get("MISSING", "fallback"), "fallback")
        self.assertEqual(manager.get_tolerances(), Config.get_tolerances())
        self.assertEqual(manager.get_run_defaults(), Config.get_run_defaults())

    def test_override_leaves_singleton_alone(self):
        manager = ConfigManager()
        merged = manager.override(DEFAULT_TRIALS=5, DEFAULT_SEED=None)
        self.assertEqual(merged["DEFAULT_TRIALS"], 5)
        self.assertEqual(merged["DEFAULT_SEED"], manager.get("DEFAULT_SEED"))
        self.assertEqual(manager.get("DEFAULT_TRIALS"), Config.DEFAULT_TRIALS)
        with self.assertRaises(KeyError):
            manager.override(NOT_A_SETTING=1)

    def test_invalid_configuration_fails_fast(self):
        with patch.object(Config, "TRACE_TOL", -1.0):
            with self.assertRaises(ValidationError):
                ConfigManager()


if __name__ == "__main__":
    unittest.main()
