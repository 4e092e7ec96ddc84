import random
from collections import defaultdict

import pytest

from symstab.covering import make_cyclic_cover, make_double_cover, standard_ell
from symstab.torsion import RatMod1, TorsionVector

_criteria: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _criteria[marker.args[0]].append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        verdict = "PASS" if all(_criteria[n]) else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {verdict} ({len(_criteria[n])} checks)")


def random_vector(rng: random.Random, rank: int, n: int) -> TorsionVector:
    return TorsionVector(tuple(RatMod1(rng.randrange(n), n) for _ in range(rank)))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def cov2():
    return make_double_cover(2, standard_ell(2))


@pytest.fixture(scope="session")
def cov2_skew():
    # a defining class that is not a basis vector
    return make_double_cover(2, TorsionVector.of("1/2", "1/2", 0, "1/2"))


@pytest.fixture(scope="session")
def cov3():
    return make_double_cover(3, TorsionVector.of(0, 0, "1/2", 0, 0, 0))


@pytest.fixture(scope="session")
def tri2():
    return make_cyclic_cover(2, TorsionVector.of("1/3", "2/3", 0, 0), 3)
