import random
import sys

import pytest
from hypothesis import settings

from fictplay import PayoffMatrix, build_k

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def k2():
    return build_k(2)


@pytest.fixture(scope="session")
def k4():
    return build_k(4)


@pytest.fixture(scope="session")
def k6():
    return build_k(6)


def random_game(seed: int, n: int = 5, lo: int = -20, hi: int = 20) -> tuple[PayoffMatrix, PayoffMatrix]:
    rng = random.Random(seed)
    A = PayoffMatrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
    B = PayoffMatrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
    return A, B


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for k in sorted(verdicts):
            terminalreporter.write_line(verdicts[k])
