import os

import pytest
from hypothesis import HealthCheck, settings

from relhom.corpus import all_corpora

settings.register_profile(
    "relhom", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "relhom"))


@pytest.fixture(scope="session")
def corpora():
    return all_corpora()


@pytest.fixture(scope="session")
def r3c(corpora):
    return corpora["R3"]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
