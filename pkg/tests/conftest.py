import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_hpd(rng, n, lo=0.5, hi=3.0, complex_=True):
    """Random HPD matrix with spectrum in [lo, hi]."""
    Z = rng.standard_normal((n, n))
    if complex_:
        Z = Z + 1j * rng.standard_normal((n, n))
    U, _ = np.linalg.qr(Z)
    w = np.sort(rng.uniform(lo, hi, n))
    return (U * w) @ U.conj().T


def random_hermitian(rng, n, complex_=True):
    Z = rng.standard_normal((n, n))
    if complex_:
        Z = Z + 1j * rng.standard_normal((n, n))
    return (Z + Z.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
