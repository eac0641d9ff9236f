import os

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def real_dataset(env_name):
    """Path of an optional user-supplied dataset, or skip the test."""
    path = os.environ.get(env_name)
    if not path or not os.path.exists(path):
        pytest.skip(f"set {env_name} to a labeled CSV to run this check")
    return path


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion; printed at the end of the run."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number, ok, detail):
        lines.append((number, f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"))
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
