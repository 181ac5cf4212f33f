"""
Tests for the configuration, error and logging helpers.
"""

import json
import logging
import os
import unittest
from unittest.mock import patch

from src.utils.config import DEFAULT_GIRTH_RETRIES, DEFAULT_MAX_ROUNDS, Config
from src.utils.errors import InequalityViolation, InputError, ParseError
from src.utils.logging_setup import JSONFormatter
from src.utils.rng import child_seeds, make_rng


class TestConfig(unittest.TestCase):
    """Test cases for environment-backed defaults."""

    def setUp(self):
        """Patch out .env discovery."""
        self.dotenv_patcher = patch("src.utils.config.load_dotenv")
        self.mock_load_dotenv = self.dotenv_patcher.start()

    def tearDown(self):
        """Stop patches."""
        self.dotenv_patcher.stop()

    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self):
        """Test defaults when no variables are set."""
        config = Config()
        self.assertEqual(config.log_level, "INFO")
        self.assertIsNone(config.log_file)
        self.assertFalse(config.verify)
        self.assertEqual(config.max_rounds, DEFAULT_MAX_ROUNDS)
        self.assertEqual(config.girth_retries, DEFAULT_GIRTH_RETRIES)
        self.assertEqual(config.default_seed, 0)
        self.assertGreaterEqual(config.threads, 1)

    @patch.dict(
        os.environ,
        {
            "LOG_LEVEL": "debug",
            "CLANROUTE_VERIFY": "yes",
            "CLANROUTE_THREADS": "3",
            "CLANROUTE_SEED": "42",
        },
        clear=True,
    )
    def test_environment_overrides(self):
        """Test values read from the environment."""
        config = Config()
        self.assertEqual(config.log_level, "DEBUG")
        self.assertTrue(config.verify)
        self.assertEqual(config.threads, 3)
        self.assertEqual(config.get_run_defaults()["seed"], 42)

    @patch.dict(os.environ, {"CLANROUTE_MAX_ROUNDS": "lots"}, clear=True)
    def test_unparsable_number_falls_back(self):
        """Test that a malformed integer is ignored with a warning."""
        with self.assertLogs("src.utils.config", level="WARNING"):
            config = Config()
        self.assertEqual(config.max_rounds, DEFAULT_MAX_ROUNDS)

    def test_env_file_is_loaded(self):
        """Test that an explicit env file is passed to dotenv."""
        Config("custom.env")
        self.mock_load_dotenv.assert_called_once_with("custom.env")


class TestErrors(unittest.TestCase):
    """Test cases for the error hierarchy."""

    def test_input_error_line(self):
        """Test the one-line rendering of input errors."""
        line = InputError('bad "value"\nhere').one_line()
        self.assertEqual(line, "error kind=input message=\"bad 'value' here\"")

    def test_parse_error_location(self):
        """Test that parse errors carry file and line."""
        error = ParseError("g.txt", 3, "edge line must be 'u v w'")
        self.assertIsInstance(error, InputError)
        self.assertEqual(error.line_no, 3)
        self.assertIn("g.txt:3", str(error))

    def test_violation_line(self):
        """Test the one-line rendering of violations."""
        error = InequalityViolation("distortion", 5.0, 4.0, "pair=[0, 1]")
        self.assertIsInstance(error, AssertionError)
        self.assertEqual(
            error.one_line(),
            'error kind=violation inequality=distortion lhs=5.0 rhs=4.0 detail="pair=[0, 1]"',
        )


class TestLoggingAndRandomness(unittest.TestCase):
    """Test cases for the JSON formatter and seeded streams."""

    def test_json_formatter(self):
        """Test that records are rendered as JSON objects."""
        record = logging.LogRecord("src.test", logging.INFO, __file__, 10, "n=%d", (5,), None)
        entry = json.loads(JSONFormatter().format(record))
        self.assertEqual(entry["level"], "INFO")
        self.assertEqual(entry["logger"], "src.test")
        self.assertEqual(entry["message"], "n=5")

    def test_rng_is_reproducible(self):
        """Test that equal seeds and paths give equal streams."""
        a = make_rng(7, 2).integers(0, 1 << 30, size=5)
        b = make_rng(7, 2).integers(0, 1 << 30, size=5)
        c = make_rng(7, 3).integers(0, 1 << 30, size=5)
        self.assertEqual(a.tolist(), b.tolist())
        self.assertNotEqual(a.tolist(), c.tolist())

    def test_child_seeds(self):
        """Test child seed derivation."""
        seeds = child_seeds(11, 4)
        self.assertEqual(len(set(seeds)), 4)
        self.assertEqual(seeds, child_seeds(11, 4))


if __name__ == "__main__":
    unittest.main()
