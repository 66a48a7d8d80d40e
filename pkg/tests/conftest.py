import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from condent.states import QuantumState, random_state

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
small_dims = st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=3)


def rand_state(dims, seed, labels=None, rank=None) -> QuantumState:
    return random_state(dims, rank, seed, labels)


def binary_entropy(x):
    if x <= 0 or x >= 1:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def concurrence(rho: np.ndarray) -> float:
    """Two-qubit concurrence (test oracle)."""
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    tilde = yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(rho @ tilde)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_oracle(rho: np.ndarray) -> float:
    """Closed-form two-qubit entanglement of formation from the concurrence."""
    c = concurrence(rho)
    return binary_entropy((1 + np.sqrt(max(0.0, 1 - c * c))) / 2)


@pytest.fixture
def bell():
    from condent.states import make_named_state

    return make_named_state("bell")


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(capsys, number: int, title: str, passed: bool, detail: str) -> None:
    """Print one pass/fail line for an acceptance criterion and keep it for the summary."""
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
