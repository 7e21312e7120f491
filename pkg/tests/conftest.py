"""Dense-matrix oracles shared by the test modules.

These build operators with Kronecker products, independently of the
bit-twiddling used in the package.
"""

import numpy as np
import pytest
from scipy.linalg import expm

X = np.array([[0.0, 1.0], [1.0, 0.0]])
I2 = np.eye(2)


def dense_B(n_bits):
    """-sum_n X_n with qubit n acting on bit n of the index."""
    dim = 1 << n_bits
    total = np.zeros((dim, dim))
    for n in range(n_bits):
        op = np.array([[1.0]])
        for k in reversed(range(n_bits)):
            op = np.kron(op, X if k == n else I2)
        total -= op
    return total


def dense_mixer_unitary(n_bits, beta):
    return expm(-1j * beta * dense_B(n_bits))


def dense_phase_unitary(c_values, gamma):
    return expm(-1j * gamma * np.diag(c_values))


def dense_F_along_B(state, values, beta):
    """F(exp(i beta B) psi) by dense exponentiation."""
    n_bits = int(np.log2(state.size))
    psi = expm(1j * beta * dense_B(n_bits)) @ state
    return float(np.real(np.vdot(psi, values * psi)))


def dense_f2b(values):
    """-[B,[B,H]] as a dense matrix."""
    n_bits = int(np.log2(values.size))
    b = dense_B(n_bits)
    h = np.diag(values)
    inner = b @ h - h @ b
    return -(b @ inner - inner @ b)


def random_state(rng, n_bits):
    psi = rng.standard_normal(1 << n_bits) + 1j * rng.standard_normal(1 << n_bits)
    return psi / np.linalg.norm(psi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance report: one line per criterion, printed after the run


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    lines = request.config._acceptance_lines

    def report(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
