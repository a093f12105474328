"""Exit criteria, one test per criterion at its pinned tolerance.

Each test records a one-line PASS/FAIL verdict; the lines are printed in the
terminal summary (``pytest tests/test_acceptance.py``).
"""

import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from qmeasure.experiments import run_three_measures_table
from qmeasure.hilbert import (
    X_PLUS,
    Z_MINUS,
    Z_PLUS,
    PureState,
    random_state,
    random_unitary,
    span_dimension,
    transition_probability,
)
from qmeasure.measures import (
    StateSet,
    cap_mixture_montecarlo,
    cap_mixture_quadrature,
    cap_quantized_measure,
    overlap_from_pair_measure,
    pair_measure,
    product_set,
    quantized_measure,
    state_set,
)
from qmeasure.entropy import von_neumann_entropy

SEED = 20170901
VERDICTS = []
ROOT = Path(__file__).resolve().parent.parent


def pytest_terminal_summary_lines():
    return list(VERDICTS)


def verdict(number, title, ok, observed, tol):
    VERDICTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} (worst={observed!r}, tol={tol!r})")
    assert ok, VERDICTS[-1]


def rng_for(criterion):
    return np.random.default_rng([SEED, criterion])


def test_01_single_state_measure_is_one():
    rng = rng_for(1)
    worst = 0.0
    for _ in range(100):
        dim = int(rng.integers(2, 9))
        worst = max(worst, abs(quantized_measure(StateSet((random_state(dim, rng),))) - 1.0))
        # same claim through the explicit mixture, not the singleton shortcut
        psi = random_state(dim, rng)
        worst = max(worst, abs(2 ** von_neumann_entropy(np.outer(psi.amplitudes, psi.amplitudes.conj())) - 1.0))
    verdict(1, "mu_q({psi}) = 1 for 100 random states, dims 2-8", worst <= 1e-12, worst, 1e-12)


def test_02_orthogonal_pair():
    dev = abs(quantized_measure(state_set(Z_PLUS, Z_MINUS)) - 2.0)
    verdict(2, "mu_q({z+, z-}) = 2", dev <= 1e-9, dev, 1e-9)


def test_03_pair_formula_matches_eigendecomposition():
    rng = rng_for(3)
    worst = 0.0
    for _ in range(1000):
        psi, phi = random_state(2, rng), random_state(2, rng)
        p = transition_probability(psi, phi)
        worst = max(worst, abs(pair_measure(p) - quantized_measure(state_set(psi, phi))))
    verdict(3, "pair_measure(p) = mu_q({psi, phi}) on 1000 random qubit pairs", worst <= 1e-9, worst, 1e-9)


def test_04_nonmonotonicity():
    pair = quantized_measure(state_set(Z_PLUS, Z_MINUS))
    triple = quantized_measure(state_set(Z_PLUS, Z_MINUS, X_PLUS))
    dev = abs(triple - 1.88988)
    ok = dev <= 1e-4 and triple < pair and abs(pair - 2.0) <= 1e-9
    verdict(4, f"mu_q(triple)={triple:.6f} < mu_q(pair)={pair:.6f}", ok, dev, 1e-4)


def test_05_bounds_and_subadditivity():
    rng = rng_for(5)
    tol = 1e-8
    violations = 0
    worst = -math.inf
    for _ in range(1000):
        dim, size = int(rng.integers(2, 7)), int(rng.integers(1, 11))
        u = StateSet(tuple(random_state(dim, rng) for _ in range(size)))
        mu = quantized_measure(u)
        d = span_dimension(list(u.states))
        scores = (1.0 - mu, mu - d, d - len(u))
        worst = max(worst, *scores)
        violations += any(s > tol for s in scores)
    for _ in range(1000):
        dim = int(rng.integers(2, 7))
        a = StateSet(tuple(random_state(dim, rng) for _ in range(int(rng.integers(1, 6)))))
        b = StateSet(tuple(random_state(dim, rng) for _ in range(int(rng.integers(1, 6)))))
        assert a.is_disjoint(b)
        score = quantized_measure(a.union(b)) - quantized_measure(a) - quantized_measure(b)
        worst = max(worst, score)
        violations += score > tol
    verdict(5, f"bounds + disjoint-union subadditivity, {violations} violations", violations == 0, worst, tol)


def test_06_context_additivity():
    rng = rng_for(6)
    worst = 0.0
    for dim in range(2, 9):
        for _ in range(50):
            w = random_unitary(dim, rng)
            basis = [PureState(w[:, i] / np.linalg.norm(w[:, i])) for i in range(dim)]
            for k in range(1, dim + 1):
                worst = max(worst, abs(quantized_measure(StateSet(tuple(basis[:k]))) - k))
    verdict(6, "|mu_q - k| on orthonormal subsets, 50 bases per dim 2-8", worst <= 1e-8, worst, 1e-8)


def test_07_full_sphere_mixture():
    n = 10**6
    quad = cap_mixture_quadrature(math.pi, 512, 512)
    mc = cap_mixture_montecarlo(math.pi, n, SEED)
    target = np.diag([0.5, 0.5])
    dq = float(np.max(np.abs(quad.entries - target)))
    dm = float(np.max(np.abs(mc.entries - target)))
    mc_tol = 3 * 0.5 / math.sqrt(n)
    mu_q = 2 ** von_neumann_entropy(quad)
    mu_mc = 2 ** von_neumann_entropy(mc)
    ok = dq <= 1e-6 and dm <= mc_tol and abs(mu_q - 2) <= 1e-9 and abs(mu_mc - 2) <= 1e-5
    verdict(7, f"full sphere: quadrature err {dq:.2e}, MC err {dm:.2e}, mu_q {mu_q:.9f}/{mu_mc:.6f}", ok, (dq, dm), (1e-6, mc_tol))


def test_08_cap_formula():
    worst = 0.0
    for theta0 in (math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi):
        worst = max(worst, abs(cap_quantized_measure(theta0) - cap_quantized_measure(theta0, "quadrature", n_theta=512, n_phi=512)))
    hemi = abs(cap_quantized_measure(math.pi / 2) - 1.75482)
    verdict(8, f"analytic vs quadrature caps; hemisphere off by {hemi:.1e}", worst <= 1e-5 and hemi <= 1e-4, worst, 1e-5)


def test_09_invertibility_round_trip():
    worst = max(abs(overlap_from_pair_measure(pair_measure(p)) - p) for p in np.linspace(0, 1, 1001))
    verdict(9, "p -> pair_measure -> overlap on 1001-point grid", worst <= 1e-9, worst, 1e-9)


def test_10_multiplicativity():
    rng = rng_for(10)
    worst = 0.0
    def random_set():
        dim, size = int(rng.integers(2, 5)), int(rng.integers(1, 5))
        return StateSet(tuple(random_state(dim, rng) for _ in range(size)))

    for _ in range(200):
        a, b = random_set(), random_set()
        worst = max(worst, abs(quantized_measure(product_set(a, b)) - quantized_measure(a) * quantized_measure(b)))
    verdict(10, "mu_q(A x B) = mu_q(A) mu_q(B), 200 pairs up to 4x4", worst <= 1e-8, worst, 1e-8)


def test_11_three_measures_table():
    res = run_three_measures_table()
    point, cap, union = res.rows[0], res.rows[1], res.rows[2]
    margin = union["mu_q_parts"] - union["mu_q"]
    ok = (
        (point["mu_d"], point["mu_c"], point["mu_q"]) == (1.0, 0.0, 1.0)
        and math.isinf(cap["mu_d"])
        and math.isfinite(cap["mu_c"])
        and 1.0 <= cap["mu_q"] <= 2.0
        and union["mu_d"] == union["mu_d_parts"]
        and union["mu_c"] == union["mu_c_parts"]
        and margin >= 0.4
        and res.passed
    )
    verdict(11, f"three-measures matrix; mu_q additivity gap {margin:.5f}", ok, margin, 0.4)


CLI_RUNS = [
    ["props", "--trials", "200", "--seed", "42"],
    ["cap", "--theta0", "1.0", "--method", "montecarlo", "--samples", "100000", "--seed", "7"],
    ["cap", "--theta0", "1.0", "--method", "quadrature"],
    ["experiment", "context-additivity", "--seed", "3", "--format", "json"],
    ["experiment", "property-suite", "--trials", "100", "--seed", "5", "--format", "csv"],
    ["experiment", "three-measures"],
    ["sweep-overlap", "--steps", "101", "--format", "json"],
    ["measure", "--states", str(ROOT / "data" / "pair_zx.json"), "--format", "json"],
]


def test_12_cli_determinism():
    mismatched = []
    for argv in CLI_RUNS:
        outs = [
            subprocess.run([sys.executable, "-m", "qmeasure", *argv], capture_output=True, check=False)
            for _ in range(2)
        ]
        if outs[0].returncode != 0 or outs[0].stdout != outs[1].stdout or not outs[0].stdout:
            mismatched.append(" ".join(argv))
    verdict(12, f"{len(CLI_RUNS)} seeded CLI invocations byte-identical across two runs", not mismatched, mismatched, 0)
