import os
import sys

import numpy as np
import pytest

# Make `app` and `src` importable when pytest runs from the repository root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from app import create_app  # noqa: E402
from src.config.config import TestingConfig  # noqa: E402
from src.models.spins import SpinLabel  # noqa: E402

ATOL = 1e-9


@pytest.fixture(scope="session")
def session_config():
    """Testing session: small bounds so the suites stay quick"""
    return TestingConfig().session_config.with_overrides(
        order=6,
        max_spin=SpinLabel(2),
        mq2_max_spin=SpinLabel(2),
        random_samples=5,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def app():
    return create_app("testing")


@pytest.fixture
def run_cli(app, capsys):
    """Run one command line; returns (exit code, stdout, stderr)"""

    def run(*argv):
        code = app.run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run
