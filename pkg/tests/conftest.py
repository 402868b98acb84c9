import time

import numpy as np
import pytest

from ssr_ent.demo import parity_catalyst, parity_initial, parity_target
from ssr_ent.fock import catalyst_layout, system_layout, wedge_layout

SEED = 20221015

_acceptance: dict[str, dict] = {}


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=SEED, help="seed for randomized tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    entry = _acceptance.setdefault(item.nodeid, {"number": number, "title": title})
    entry["passed"] = call.excinfo is None
    entry["seconds"] = call.duration


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for entry in sorted(_acceptance.values(), key=lambda e: e["number"]):
        status = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(
            f"[{status}] criterion {entry['number']}: {entry['title']} ({entry['seconds']:.2f}s)"
        )


@pytest.fixture
def rng(request):
    return np.random.default_rng(request.config.getoption("seed"))


@pytest.fixture
def layout():
    return system_layout()


@pytest.fixture
def joint_layout():
    return wedge_layout(system_layout(), catalyst_layout())


@pytest.fixture
def rho_even():
    return parity_initial()


@pytest.fixture
def sigma_odd():
    return parity_target()


@pytest.fixture
def tau_parity():
    return parity_catalyst()


@pytest.fixture
def stopwatch():
    class Watch:
        def __enter__(self):
            self.start = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.elapsed = time.perf_counter() - self.start

    return Watch
