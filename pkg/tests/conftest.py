import itertools

import numpy as np
import pytest

from adplab.reduction import ReducedConfig


def random_reduced(rng, n, u_lo=0.0, u_hi=1.0, signed=False):
    """Random admissible reduced configuration (alphas in the allowed band)."""
    t = rng.dirichlet(np.ones(n))
    alphas = 1.0 / (2 * n) + t / 2.0
    alphas = alphas / alphas.sum()
    us = rng.uniform(u_lo, u_hi, n)
    if signed:
        us = us * rng.choice([-1.0, 1.0], n)
    return ReducedConfig(alphas, us)


def naive_phi(alphas, us, p):
    """Direct 2^n loop with no algebraic rewriting."""
    alphas = np.asarray(alphas, dtype=float)
    us = np.asarray(us, dtype=float)
    total = 0.0
    for eps in itertools.product((-1.0, 1.0), repeat=len(us)):
        eps = np.array(eps)
        s = np.sum(alphas * (1.0 + eps * us) ** p / (1.0 + np.abs(us) ** p))
        total += s ** (1.0 / p)
    return total / 2.0 ** len(us)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def record_criterion(label, ok, detail):
    """Store one pass/fail line for the end-of-run acceptance summary."""
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
