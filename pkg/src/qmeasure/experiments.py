"""Named, reproducible experiments.

Each ``run_*`` function returns an :class:`ExperimentResult` whose rows and
checks depend only on its parameters and seed. Wall-clock time is recorded in
``runtime_ms`` and is the only field that varies between identical runs.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import measures as M
from .entropy import pair_entropy
from .hilbert import (
    X_PLUS,
    Z_MINUS,
    Z_PLUS,
    PureState,
    apply_unitary,
    random_state,
    random_unitary,
    span_dimension,
    transition_probability,
)
from .measures import DEFAULT_SEED, StateSet, SphericalCap


@dataclass
class Check:
    description: str
    passed: bool
    observed: float
    expected: float
    tolerance: float
    # JSON replay of the worst offending input, only set on failure
    replay: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "description": self.description,
            "passed": self.passed,
            "observed": _num(self.observed),
            "expected": _num(self.expected),
            "tolerance": _num(self.tolerance),
            "replay": self.replay,
        }


@dataclass
class ExperimentResult:
    name: str
    rows: list[dict[str, Any]] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    parameters: dict[str, Any] = field(default_factory=dict)
    runtime_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        """Deterministic payload; ``runtime_ms`` is deliberately left out."""
        return {
            "name": self.name,
            "seed": self.seed,
            "parameters": self.parameters,
            "rows": [{k: _num(v) for k, v in r.items()} for r in self.rows],
            "checks": [c.as_dict() for c in self.checks],
        }


def _num(v):
    """Plain Python scalars for serialization; infinities become ``"inf"``."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return v


def _serialize_set(u: StateSet | list[PureState]) -> str:
    states = u.states if isinstance(u, StateSet) else u
    doc = {
        "dim": states[0].dim,
        "states": [[[float(a.real), float(a.imag)] for a in s.amplitudes] for s in states],
    }
    return json.dumps(doc)


def _timed(fn: Callable[..., ExperimentResult]):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.runtime_ms = int(round((time.perf_counter() - t0) * 1000))
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _check_le(desc, observed, bound, tol, replay="") -> Check:
    ok = bool(observed <= bound + tol)
    return Check(desc, ok, observed, bound, tol, "" if ok else replay)


def _check_close(desc, observed, expected, tol, replay="") -> Check:
    ok = bool(abs(observed - expected) <= tol)
    return Check(desc, ok, observed, expected, tol, "" if ok else replay)


@_timed
def run_three_measures_table() -> ExperimentResult:
    """Counting, solid-angle and quantized measures on a point, a cap and unions.

    The union rows carry the sum of the measures of the two parts next to the
    measure of the union, which is where additivity shows up or fails.
    """
    res = ExperimentResult("three-measures", seed=0)
    point = M.state_set(Z_PLUS)
    cap = SphericalCap(math.pi / 2)
    north, south = SphericalCap(math.pi / 2), SphericalCap(math.pi / 2, (0.0, 0.0, -1.0))
    a, b = M.state_set(Z_PLUS), M.state_set(X_PLUS)
    ab = a.union(b)

    def cap_q(c: SphericalCap) -> float:
        return M.cap_quantized_measure(c.theta0, axis=c.axis)

    def row(region, mu_d, mu_c, mu_q, parts=None):
        r = {"region": region, "mu_d": mu_d, "mu_c": mu_c, "mu_q": mu_q}
        for key, i in (("mu_d_parts", 0), ("mu_c_parts", 1), ("mu_q_parts", 2)):
            r[key] = "" if parts is None else parts[i]
        return r

    pt = (M.counting_measure(point), M.solid_angle_measure(point), M.quantized_measure(point))
    cp = (M.counting_measure(cap), M.solid_angle_measure(cap), cap_q(cap))
    un = (M.counting_measure(ab), M.solid_angle_measure(ab), M.quantized_measure(ab))
    un_parts = tuple(
        f(a) + f(b) for f in (M.counting_measure, M.solid_angle_measure, M.quantized_measure)
    )
    full = SphericalCap(math.pi)
    hs = (M.counting_measure(full), M.solid_angle_measure(full), cap_q(full))
    hs_parts = (
        M.counting_measure(north) + M.counting_measure(south),
        M.solid_angle_measure(north) + M.solid_angle_measure(south),
        cap_q(north) + cap_q(south),
    )
    res.rows = [
        row("point {z+}", *pt),
        row("cap theta0=pi/2", *cp),
        row("union {z+} + {x+}", *un, parts=un_parts),
        row("union north + south hemispheres", *hs, parts=hs_parts),
    ]
    c = res.checks
    c.append(_check_close("point: counting measure is 1", pt[0], 1.0, 0.0))
    c.append(_check_close("point: solid angle is 0", pt[1], 0.0, 0.0))
    c.append(_check_close("point: quantized measure is 1", pt[2], 1.0, 1e-12))
    c.append(Check("cap: counting measure is infinite", math.isinf(cp[0]), cp[0], math.inf, 0.0))
    c.append(_check_close("cap: solid angle is 2 pi", cp[1], 2 * math.pi, 1e-12))
    c.append(
        Check("cap: quantized measure in [1, 2]", 1.0 <= cp[2] <= 2.0, cp[2], 1.5, 0.5)
    )
    c.append(_check_close("cap: quantized measure is 2^H(1/4)", cp[2], 1.7547653506033232, 1e-9))
    c.append(_check_close("points: counting measure additive", un[0], un_parts[0], 0.0))
    c.append(_check_close("points: solid angle additive", un[1], un_parts[1], 0.0))
    c.append(_check_close("hemispheres: solid angle additive", hs[1], hs_parts[1], 1e-12))
    c.append(
        Check(
            "points: quantized measure fails additivity by >= 0.4",
            un_parts[2] - un[2] >= 0.4,
            un_parts[2] - un[2],
            0.4,
            0.0,
        )
    )
    c.append(
        Check(
            "hemispheres: quantized measure strictly subadditive",
            hs_parts[2] - hs[2] > 0.0,
            hs_parts[2] - hs[2],
            0.0,
            0.0,
        )
    )
    return res


@_timed
def run_overlap_sweep(steps: int = 101) -> ExperimentResult:
    """Pair entropy and pair measure on a uniform grid of transition probabilities."""
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    res = ExperimentResult("overlap-sweep", seed=0, parameters={"steps": steps})
    ps = np.linspace(0.0, 1.0, steps)
    mus = []
    for p in ps:
        s = pair_entropy(float(p))
        mu = 2.0**s
        mus.append(mu)
        res.rows.append({"p": float(p), "S": s, "mu": mu})
    diffs = np.diff(mus)
    res.checks.append(_check_close("mu(0) = 2", mus[0], 2.0, 1e-12))
    res.checks.append(_check_close("mu(1) = 1", mus[-1], 1.0, 1e-12))
    res.checks.append(_check_close("S(0) = 1", res.rows[0]["S"], 1.0, 1e-12))
    res.checks.append(_check_close("S(1) = 0", res.rows[-1]["S"], 0.0, 1e-12))
    worst = float(np.max(diffs))
    res.checks.append(
        Check("mu strictly decreasing in p", worst < 0.0, worst, 0.0, 0.0)
    )
    return res


@_timed
def run_nonmonotonicity_demo() -> ExperimentResult:
    """Adding |x+> to {|z+>, |z->} lowers the quantized measure."""
    res = ExperimentResult("nonmonotonicity", seed=0)
    pair = M.state_set(Z_PLUS, Z_MINUS)
    triple = M.state_set(Z_PLUS, Z_MINUS, X_PLUS)
    mu2 = M.quantized_measure(pair)
    mu3 = M.quantized_measure(triple)
    res.rows = [
        {"set": "{z+, z-}", "size": 2, "S": M.quantized_entropy(pair), "mu_q": mu2},
        {"set": "{z+, z-, x+}", "size": 3, "S": M.quantized_entropy(triple), "mu_q": mu3},
    ]
    res.checks.append(_check_close("mu_q(pair) = 2", mu2, 2.0, 1e-9))
    res.checks.append(_check_close("mu_q(triple) = 2^H(1/3)", mu3, 1.88988157484231, 1e-9))
    res.checks.append(
        Check("superset has smaller measure, margin >= 0.1", mu2 - mu3 >= 0.1, mu2 - mu3, 0.1, 0.0)
    )
    return res


@_timed
def run_context_additivity(
    dim: int = 4, trials: int = 50, seed: int = DEFAULT_SEED, epsilon: float = 0.1
) -> ExperimentResult:
    """Additivity of the quantized measure inside one orthonormal basis.

    For each random basis and each subset size k, the first k basis vectors
    must have measure k. Tilting the first vector by ``epsilon`` radians
    towards the second must push the measure strictly below k.
    """
    if dim < 2 or trials < 1:
        raise ValueError("need dim >= 2 and trials >= 1")
    res = ExperimentResult(
        "context-additivity",
        seed=seed,
        parameters={"dim": dim, "trials": trials, "epsilon": epsilon},
    )
    rng = np.random.default_rng(seed)
    max_dev = {k: 0.0 for k in range(1, dim + 1)}
    min_gap = {k: math.inf for k in range(2, dim + 1)}
    worst_dev_set = {}
    worst_gap_set = {}
    for _ in range(trials):
        u = random_unitary(dim, rng)
        basis = [PureState(u[:, i] / np.linalg.norm(u[:, i])) for i in range(dim)]
        tilted = PureState.from_vector(
            math.cos(epsilon) * basis[0].amplitudes + math.sin(epsilon) * basis[1].amplitudes
        )
        for k in range(1, dim + 1):
            sub = StateSet(tuple(basis[:k]))
            dev = abs(M.quantized_measure(sub) - k)
            if dev >= max_dev[k]:
                max_dev[k] = dev
                worst_dev_set[k] = sub
            if k >= 2:
                pert = StateSet((tilted,) + tuple(basis[1:k]))
                gap = k - M.quantized_measure(pert)
                if gap <= min_gap[k]:
                    min_gap[k] = gap
                    worst_gap_set[k] = pert
    for k in range(1, dim + 1):
        res.rows.append(
            {
                "k": k,
                "max_abs_dev": max_dev[k],
                "min_perturbed_gap": min_gap[k] if k >= 2 else "",
            }
        )
        res.checks.append(
            _check_le(
                f"orthonormal subsets of size {k}: |mu_q - k|",
                max_dev[k],
                0.0,
                1e-8,
                _serialize_set(worst_dev_set[k]),
            )
        )
        if k >= 2:
            ok = min_gap[k] > 0.0
            res.checks.append(
                Check(
                    f"tilted subsets of size {k}: mu_q < k",
                    ok,
                    min_gap[k],
                    0.0,
                    0.0,
                    "" if ok else _serialize_set(worst_gap_set[k]),
                )
            )
    return res


def _random_set(rng: np.random.Generator, dim: int, size: int) -> StateSet:
    return StateSet(tuple(random_state(dim, rng) for _ in range(size)))


def _random_orthonormal_set(rng: np.random.Generator, dim: int, size: int) -> StateSet:
    u = random_unitary(dim, rng)
    return StateSet(tuple(PureState(u[:, i] / np.linalg.norm(u[:, i])) for i in range(size)))


class _Worst:
    """Tracks the maximum of a violation score and the input that produced it."""

    def __init__(self):
        self.value = -math.inf
        self.replay = ""

    def update(self, value, replay_fn):
        if value > self.value:
            self.value = value
            self.replay = replay_fn()


def _bounds_check(rng, trials):
    lower, upper_span, span_card = _Worst(), _Worst(), _Worst()
    for _ in range(trials):
        dim = int(rng.integers(2, 7))
        size = int(rng.integers(1, 11))
        u = _random_set(rng, dim, size)
        mu = M.quantized_measure(u)
        d = span_dimension(list(u.states))
        lower.update(1.0 - mu, lambda: _serialize_set(u))
        upper_span.update(mu - d, lambda: _serialize_set(u))
        span_card.update(d - len(u), lambda: _serialize_set(u))
    return [
        _check_le("bounds: 1 - mu_q <= 0", lower.value, 0.0, 1e-9, lower.replay),
        _check_le("bounds: mu_q - dim span <= 0", upper_span.value, 0.0, 1e-9, upper_span.replay),
        _check_le("bounds: dim span - |U| <= 0", span_card.value, 0.0, 0.0, span_card.replay),
    ]


def _orthogonal_additivity_check(rng, trials):
    dev = _Worst()
    deficit = _Worst()
    for _ in range(trials):
        dim = int(rng.integers(2, 7))
        size = int(rng.integers(1, dim + 1))
        u = _random_orthonormal_set(rng, dim, size)
        dev.update(abs(M.quantized_measure(u) - len(u)), lambda: _serialize_set(u))
    for _ in range(trials):
        dim = int(rng.integers(2, 7))
        size = int(rng.integers(2, 11))
        u = _random_set(rng, dim, size)
        overlaps = [
            transition_probability(a, b) for i, a in enumerate(u.states) for b in u.states[i + 1 :]
        ]
        if max(overlaps) >= 0.01:
            # violation score: how far mu_q is above |U| - 1e-6
            deficit.update(M.quantized_measure(u) - (len(u) - 1e-6), lambda: _serialize_set(u))
    return [
        _check_le("orthonormal sets: |mu_q - |U||", dev.value, 0.0, 1e-8, dev.replay),
        _check_le(
            "overlapping sets: mu_q <= |U| - 1e-6", deficit.value, 0.0, 0.0, deficit.replay
        ),
    ]


def _pair_subadditivity_check(rng, trials):
    excess = _Worst()
    equality_overlap = _Worst()
    for _ in range(trials):
        psi, phi = random_state(2, rng), random_state(2, rng)
        u = StateSet((psi, phi))
        singles = M.quantized_measure(StateSet((psi,))) + M.quantized_measure(StateSet((phi,)))
        mu = M.quantized_measure(u)
        excess.update(mu - singles, lambda: _serialize_set([psi, phi]))
        if singles - mu <= 1e-9:
            equality_overlap.update(
                transition_probability(psi, phi), lambda: _serialize_set([psi, phi])
            )
    checks = [
        _check_le("pairs: mu_q({a,b}) - mu_q({a}) - mu_q({b})", excess.value, 0.0, 1e-9, excess.replay)
    ]
    # equality only for (numerically) orthogonal pairs; vacuous if never attained
    checks.append(
        _check_le(
            "pairs: equality only at orthogonality (overlap)",
            max(equality_overlap.value, 0.0),
            0.0,
            1e-8,
            equality_overlap.replay,
        )
    )
    return checks


def _disjoint_union_check(rng, trials):
    excess = _Worst()
    for _ in range(trials):
        dim = int(rng.integers(2, 7))
        a = _random_set(rng, dim, int(rng.integers(1, 6)))
        b = _random_set(rng, dim, int(rng.integers(1, 6)))
        if not a.is_disjoint(b):
            continue
        ab = a.union(b)
        excess.update(
            M.quantized_measure(ab) - M.quantized_measure(a) - M.quantized_measure(b),
            lambda: json.dumps({"A": json.loads(_serialize_set(a)), "B": json.loads(_serialize_set(b))}),
        )
    return [
        _check_le("disjoint unions: mu_q(A u B) - mu_q(A) - mu_q(B)", excess.value, 0.0, 1e-9, excess.replay)
    ]


def _unitary_invariance_check(rng, trials):
    dev = _Worst()
    for _ in range(trials):
        dim = int(rng.integers(2, 7))
        u = _random_set(rng, dim, int(rng.integers(1, 11)))
        w = random_unitary(dim, rng)
        rotated = StateSet(tuple(apply_unitary(w, s) for s in u.states))
        dev.update(abs(M.quantized_measure(rotated) - M.quantized_measure(u)), lambda: _serialize_set(u))
    return [_check_le("unitary invariance: |mu_q(WU) - mu_q(U)|", dev.value, 0.0, 1e-9, dev.replay)]


def _multiplicativity_check(rng, trials):
    dev = _Worst()
    for _ in range(trials):
        da, db = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        a = _random_set(rng, da, int(rng.integers(1, 5)))
        b = _random_set(rng, db, int(rng.integers(1, 5)))
        prod = M.product_set(a, b)
        dev.update(
            abs(M.quantized_measure(prod) - M.quantized_measure(a) * M.quantized_measure(b)),
            lambda: json.dumps({"A": json.loads(_serialize_set(a)), "B": json.loads(_serialize_set(b))}),
        )
    return [_check_le("products: |mu_q(A x B) - mu_q(A) mu_q(B)|", dev.value, 0.0, 1e-8, dev.replay)]


def _path_equivalence_check(rng, trials):
    dev = _Worst()
    for _ in range(trials):
        psi, phi = random_state(2, rng), random_state(2, rng)
        p = transition_probability(psi, phi)
        dev.update(
            abs(M.pair_measure(p) - M.quantized_measure(StateSet((psi, phi)))),
            lambda: _serialize_set([psi, phi]),
        )
    return [_check_le("pairs: |pair_measure(p) - mu_q({a,b})|", dev.value, 0.0, 1e-9, dev.replay)]


def _cap_convergence_check(seed):
    checks = []
    n = 10**6
    for theta0 in (math.pi / 2, math.pi):
        exact = M.cap_mixture_analytic(theta0).entries
        quad = M.cap_mixture_quadrature(theta0, 512, 512).entries
        mc = M.cap_mixture_montecarlo(theta0, n, seed).entries
        checks.append(
            _check_le(
                f"cap theta0={theta0:.6f}: quadrature 512x512 max entry error",
                float(np.max(np.abs(quad - exact))),
                0.0,
                1e-6,
            )
        )
        checks.append(
            _check_le(
                f"cap theta0={theta0:.6f}: Monte Carlo 1e6 max entry error",
                float(np.max(np.abs(mc - exact))),
                0.0,
                3 * 0.5 / math.sqrt(n),
                json.dumps({"theta0": theta0, "n_samples": n, "seed": seed}),
            )
        )
    return checks


@_timed
def run_property_suite(trials: int = 1000, seed: int = DEFAULT_SEED) -> ExperimentResult:
    """Every invariant of the measures, evaluated over seeded random inputs.

    Each family of checks gets its own child generator spawned from ``seed``.
    Checks report the worst observed violation score (<= 0 means no
    violation) against a bound of 0 at the stated tolerance.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    res = ExperimentResult("property-suite", seed=seed, parameters={"trials": trials})
    families = [
        ("bounds", lambda r: _bounds_check(r, trials)),
        ("orthogonal additivity", lambda r: _orthogonal_additivity_check(r, trials)),
        ("pair subadditivity", lambda r: _pair_subadditivity_check(r, trials)),
        ("disjoint-union subadditivity", lambda r: _disjoint_union_check(r, trials)),
        ("unitary invariance", lambda r: _unitary_invariance_check(r, trials)),
        ("multiplicativity", lambda r: _multiplicativity_check(r, max(1, trials // 5))),
        ("path equivalence", lambda r: _path_equivalence_check(r, trials)),
    ]
    children = np.random.SeedSequence(seed).spawn(len(families) + 1)
    for (family, fn), child in zip(families, children):
        for check in fn(np.random.default_rng(child)):
            res.checks.append(check)
            res.rows.append({"family": family, **_check_row(check)})
    nm = run_nonmonotonicity_demo()
    for check in nm.checks:
        res.checks.append(check)
        res.rows.append({"family": "non-monotonicity", **_check_row(check)})
    cap_seed = int(children[-1].generate_state(1)[0])
    for check in _cap_convergence_check(cap_seed):
        res.checks.append(check)
        res.rows.append({"family": "cap convergence", **_check_row(check)})
    return res


def _check_row(c: Check) -> dict[str, Any]:
    return {
        "check": c.description,
        "passed": c.passed,
        "observed": c.observed,
        "expected": c.expected,
        "tolerance": c.tolerance,
    }


EXPERIMENTS = {
    "three-measures": run_three_measures_table,
    "overlap-sweep": run_overlap_sweep,
    "nonmonotonicity": run_nonmonotonicity_demo,
    "context-additivity": run_context_additivity,
    "property-suite": run_property_suite,
}
