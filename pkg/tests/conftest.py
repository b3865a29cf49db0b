import numpy as np
import pytest

from drgkit.drg import certify_distance_regular
from drgkit.families import gen_family
from drgkit.graph import DistanceOracle


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run tests marked slow (Her(4,2), minutes)")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and (rep.skipped or rep.failed)):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _CRITERIA[num] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {title}")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


class Fixture:
    """A generated graph with its certificate and dense distance oracle."""

    def __init__(self, spec: str):
        fam = gen_family(spec)
        self.spec = spec
        self.g = fam.graph
        self.meta = fam.metadata
        self.cert = certify_distance_regular(self.g)
        self.oracle = DistanceOracle(self.g)

    @property
    def dmat(self) -> np.ndarray:
        return self.oracle.matrix()


_CACHE: dict = {}


def fixture_graph(spec: str) -> Fixture:
    if spec not in _CACHE:
        _CACHE[spec] = Fixture(spec)
    return _CACHE[spec]


@pytest.fixture(scope="session")
def petersen():
    return fixture_graph("petersen")


@pytest.fixture(scope="session")
def q3():
    return fixture_graph("hypercube:3")


@pytest.fixture(scope="session")
def c6():
    return fixture_graph("cycle:6")


@pytest.fixture(scope="session")
def her32():
    return fixture_graph("hermitian:3,2")


# every distance-regular graph in the test corpus with n <= 2048
CORPUS = ["petersen", "hypercube:3", "hypercube:4", "cycle:6", "cycle:7", "hamming:3,3",
          "johnson:6,3", "johnson:5,2", "kneser:7,3", "hermitian:2,2", "hermitian:2,3",
          "hermitian:3,2"]
