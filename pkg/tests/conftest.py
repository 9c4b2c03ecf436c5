import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kreinframes.frames import Frame
from kreinframes.kspace import KreinSpace

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SQ2 = np.sqrt(2.0)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_frame(rng, p, q, k, complex_=True):
    space = KreinSpace(p, q)
    X = random_complex(rng, k, p + q) if complex_ else rng.standard_normal((k, p + q))
    return Frame(space, X)


def random_signature(rng, max_n=6):
    while True:
        p, q = (int(v) for v in rng.integers(0, max_n + 1, size=2))
        if 1 <= p + q <= max_n:
            return p, q


def random_unitary(rng, d):
    Q, R = np.linalg.qr(random_complex(rng, d, d))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@pytest.fixture
def three_vec():
    """Family from the R^(2,1) motivating example."""
    return Frame(KreinSpace(2, 1), [[1, 0, 1 / SQ2], [0, 1, 1 / SQ2], [0, 0, 1]])


@pytest.fixture
def neutral():
    return Frame(KreinSpace(1, 1), [[1, 1]])


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("#")[1].split()[0])):
            terminalreporter.write_line(line)
