import sys
import math

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def eig2x2(m):
    """Eigenvalues of a 2x2 Hermitian matrix from trace and determinant, descending."""
    tr = (m[0, 0] + m[1, 1]).real
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    d = math.sqrt(max(tr * tr / 4 - det, 0.0))
    return tr / 2 + d, tr / 2 - d


def shannon_bits(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = mod.pytest_terminal_summary_lines() if mod else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
