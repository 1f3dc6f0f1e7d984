import os

import pytest
from hypothesis import HealthCheck, settings

# Property tests are derandomized so every run draws the same examples.
settings.register_profile(
    "pinned",
    derandomize=True,
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    print_blob=True,
)
settings.register_profile("quick", derandomize=True, max_examples=100, deadline=None)
settings.load_profile(os.environ.get("EIGENPROD_HYPOTHESIS", "pinned"))


_VERDICTS: list[str] = []


@pytest.fixture
def report_verdict():
    """Collects the one-line acceptance verdicts so they show up in the terminal summary."""
    return _VERDICTS.append


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
