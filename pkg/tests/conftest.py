import sys
import numpy as np
import pytest

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def binary_entropy(p):
    """Independent oracle: h2(p) in bits via math.log2."""
    import math

    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def eta_xi_sq(omega, lam):
    """Oracle for (eta_+^2, xi_+^2) straight from their definitions."""
    import math

    delta = math.sqrt(omega**2 + 4 * lam**2)
    norm = 4 * lam**2 + (omega + delta) ** 2
    return 4 * lam**2 / norm, (omega + delta) ** 2 / norm


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS.values():
        terminalreporter.write_line(line)
