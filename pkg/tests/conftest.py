from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("boundcraft", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("boundcraft")


@pytest.fixture
def tmp_log(tmp_path):
    """Write text to a temporary rollout log and return its path."""

    def make(text: str, name: str = "log.csv"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return make


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
