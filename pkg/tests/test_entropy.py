import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import eig2x2, shannon_bits
from qmeasure.entropy import (
    binary_entropy,
    invert_pair_entropy,
    pair_entropy,
    von_neumann_entropy,
)
from qmeasure.errors import DomainError
from qmeasure.hilbert import (
    X_PLUS,
    Z_PLUS,
    DensityMatrix,
    project,
    random_density_matrix,
    random_state,
    random_unitary,
)

# 1/2 |z+><z+| + 1/2 |x+><x+| eigenvalues from trace/determinant; see conftest.eig2x2
PAIR_HALF = shannon_bits(eig2x2(0.5 * np.diag([1.0, 0.0]) + 0.5 * np.full((2, 2), 0.5)))


def test_frozen_oracle_value():
    assert PAIR_HALF == pytest.approx(0.6008760366928562, abs=1e-15)


def test_pure_state_entropy_is_zero(rng):
    for dim in range(2, 9):
        assert von_neumann_entropy(project(random_state(dim, rng))) == pytest.approx(0.0, abs=1e-12)


def test_maximally_mixed_qubit():
    assert von_neumann_entropy(np.diag([0.5, 0.5])) == pytest.approx(1.0, abs=1e-15)


def test_two_thirds_one_third():
    assert von_neumann_entropy(np.diag([2 / 3, 1 / 3])) == pytest.approx(math.log2(3) - 2 / 3, abs=1e-12)
    assert von_neumann_entropy(np.diag([2 / 3, 1 / 3])) == pytest.approx(0.918296, abs=1e-6)


def test_entropy_bounds(rng):
    for _ in range(300):
        dim = int(rng.integers(2, 9))
        s = von_neumann_entropy(random_density_matrix(dim, rng))
        assert 0.0 <= s <= math.log2(dim) + 1e-9


def test_pair_entropy_examples():
    assert pair_entropy(0.0) == 1.0
    assert pair_entropy(1.0) == 0.0
    assert pair_entropy(0.5) == pytest.approx(PAIR_HALF, abs=1e-12)
    assert pair_entropy(0.5) == pytest.approx(0.600876, abs=1e-5)


@pytest.mark.parametrize("bad", [-0.1, 1.0000001, math.nan])
def test_pair_entropy_domain(bad):
    with pytest.raises(DomainError):
        pair_entropy(bad)
    with pytest.raises(DomainError):
        invert_pair_entropy(bad)


def test_pair_entropy_matches_closed_form():
    # the textbook two-term form with (1 +- sqrt p)/2
    for p in np.linspace(0, 1, 51)[1:-1]:
        a, b = (1 + math.sqrt(p)) / 2, (1 - math.sqrt(p)) / 2
        assert pair_entropy(p) == pytest.approx(-a * math.log2(a) - b * math.log2(b), abs=1e-14)


@given(st.floats(0, 1), st.floats(0, 1))
def test_pair_entropy_decreasing(p, q):
    if p < q:
        assert pair_entropy(p) >= pair_entropy(q)


def test_pair_entropy_strictly_decreasing_on_grid():
    vals = [pair_entropy(p) for p in np.linspace(0, 1, 1001)]
    assert np.all(np.diff(vals) < 0)


def test_invert_examples():
    assert invert_pair_entropy(1.0) == 0.0
    assert invert_pair_entropy(0.0) == 1.0
    assert invert_pair_entropy(0.600876) == pytest.approx(0.5, abs=1e-6)


def test_round_trip_random(rng):
    for p in rng.uniform(0, 1, 1000):
        assert abs(invert_pair_entropy(pair_entropy(p)) - p) <= 1e-9


@settings(max_examples=300)
@given(st.floats(0, 1))
def test_round_trip_hypothesis(p):
    assert invert_pair_entropy(pair_entropy(p)) == pytest.approx(p, abs=1e-9)


def test_binary_entropy_symmetric():
    for x in np.linspace(0, 1, 21):
        assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-14)


def test_oracle_equivalence_random_pairs(rng):
    for _ in range(1000):
        psi, phi = random_state(2, rng), random_state(2, rng)
        p = abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2
        m = 0.5 * np.outer(psi.amplitudes, psi.amplitudes.conj()) + 0.5 * np.outer(phi.amplitudes, phi.amplitudes.conj())
        assert pair_entropy(min(p, 1.0)) == pytest.approx(shannon_bits(eig2x2(m)), abs=1e-9)


def test_unitary_invariance(rng):
    for _ in range(200):
        dim = int(rng.integers(2, 9))
        rho = random_density_matrix(dim, rng)
        u = random_unitary(dim, rng)
        rotated = u @ rho.entries @ u.conj().T
        assert von_neumann_entropy(rotated) == pytest.approx(von_neumann_entropy(rho), abs=1e-9)


def test_concavity(rng):
    for _ in range(100):
        dim = int(rng.integers(2, 7))
        r1, r2 = random_density_matrix(dim, rng), random_density_matrix(dim, rng)
        s1, s2 = von_neumann_entropy(r1), von_neumann_entropy(r2)
        for t in np.arange(1, 10) / 10:
            mix = DensityMatrix(t * r1.entries + (1 - t) * r2.entries)
            assert von_neumann_entropy(mix) >= t * s1 + (1 - t) * s2 - 1e-9


def test_entropy_of_projector_pair():
    m = 0.5 * project(Z_PLUS).entries + 0.5 * project(X_PLUS).entries
    assert von_neumann_entropy(m) == pytest.approx(PAIR_HALF, abs=1e-12)
