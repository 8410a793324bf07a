import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from lielab.constructions import build_matrix_lie  # noqa: E402
from lielab.exactcore import GF  # noqa: E402


@pytest.fixture(scope="session")
def F11():
    return GF(11)


@pytest.fixture(scope="session")
def sl2_11():
    return build_matrix_lie("sl", 2, GF(11))


@pytest.fixture(scope="session")
def sl3_11():
    return build_matrix_lie("sl", 3, GF(11))


@pytest.fixture(scope="session")
def sp4_11():
    return build_matrix_lie("sp", 4, GF(11))


@pytest.fixture(scope="session")
def sl4_11():
    return build_matrix_lie("sl", 4, GF(11))


@pytest.fixture(scope="session")
def sl2_5():
    return build_matrix_lie("sl", 2, GF(5))


@pytest.fixture(autouse=True)
def _clear_budget(monkeypatch):
    monkeypatch.delenv("LIELAB_BUDGET", raising=False)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        if n in mod.RESULTS:
            title, ok, detail = mod.RESULTS[n]
            terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        else:
            terminalreporter.write_line(f"criterion {n:2d} NOT RUN")
