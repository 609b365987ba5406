import numpy as np
import pytest

from chebnet.parallel import concordant_nets
from chebnet.pipeline import construct, example_pair


@pytest.fixture(scope="session")
def pair91():
    return example_pair("9.1")


@pytest.fixture(scope="session")
def pair92():
    return example_pair("9.2", 1.0)


@pytest.fixture(scope="session")
def nets91(pair91):
    return concordant_nets(pair91)


@pytest.fixture(scope="session")
def nets92(pair92):
    return concordant_nets(pair92)


@pytest.fixture(scope="session")
def built(pair91, pair92, nets91, nets92):
    """Constructions per (example, net, level); level 0 is step 0.05 on 9x9,
    level 1 is step 0.025 on 17x17 over the same footprint."""
    cache = {}
    pps = {"9.1": (pair91, nets91), "9.2": (pair92, nets92)}

    def get(example, net="A", level=0):
        key = (example, net, level)
        if key not in cache:
            pp, nets = pps[example]
            n = 8 * 2**level + 1
            cache[key] = construct(example, net, n, 0.05 / 2**level, pp=pp, nets=nets)
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# acceptance lines, printed once at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
