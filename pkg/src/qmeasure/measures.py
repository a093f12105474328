"""State-quantifying measures over finite state sets and Bloch-sphere caps.

Three measures are provided:

* ``counting_measure`` -- cardinality, infinite on any continuous region;
* ``solid_angle_measure`` -- the Liouville measure of the qubit ray sphere,
  zero on finite sets;
* ``quantized_measure`` -- ``2 ** S(rho_U)`` where ``rho_U`` is the uniform
  mixture over the set. It is 1 on every single state, bounded on regions and
  not additive.

Cap mixtures (uniform averages of ``|psi><psi|`` over a spherical cap) are
available in closed form, by midpoint quadrature and by Monte Carlo.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .entropy import invert_pair_entropy, pair_entropy, von_neumann_entropy
from .errors import DimensionMismatchError, DomainError, EmptySetError
from .hilbert import DensityMatrix, PureState, tensor_state, transition_probability

log = logging.getLogger(__name__)

DEDUP_TOL = 1e-9
AXIS_TOL = 1e-12
MC_CHUNK = 1 << 16
DEFAULT_SEED = 42

_Z_AXIS = (0.0, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class StateSet:
    """A finite set of rays in one Hilbert space.

    Members whose transition probability with an earlier member is at least
    ``1 - DEDUP_TOL`` are dropped. ``merged`` records each drop as
    ``(dropped_index, kept_index)`` in terms of the input order.
    """

    states: tuple[PureState, ...]
    labels: tuple[str, ...] | None = None
    merged: tuple[tuple[int, int], ...] = field(default=(), init=False)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise EmptySetError("a StateSet needs at least one state")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionMismatchError(f"states have different dimensions {sorted(dims)}")
        labels = self.labels
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(states):
                raise ValueError(f"{len(labels)} labels for {len(states)} states")
        kept, kept_idx, merged = [], [], []
        for i, s in enumerate(states):
            for k, j in zip(kept, kept_idx):
                if transition_probability(s, k) >= 1.0 - DEDUP_TOL:
                    merged.append((i, j))
                    break
            else:
                kept.append(s)
                kept_idx.append(i)
        for i, j in merged:
            name_i = labels[i] if labels else str(i)
            name_j = labels[j] if labels else str(j)
            log.info("state %s is the same ray as state %s; merged", name_i, name_j)
        object.__setattr__(self, "states", tuple(kept))
        if labels is not None:
            object.__setattr__(self, "labels", tuple(labels[i] for i in kept_idx))
        object.__setattr__(self, "merged", tuple(merged))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def union(self, other: StateSet) -> StateSet:
        return StateSet(self.states + other.states)

    def is_disjoint(self, other: StateSet) -> bool:
        """True if no ray of ``self`` coincides with a ray of ``other``."""
        return all(
            transition_probability(a, b) < 1.0 - DEDUP_TOL for a in self.states for b in other.states
        )


@dataclass(frozen=True)
class SphericalCap:
    """Region of the Bloch sphere within polar angle ``theta0`` of ``axis``."""

    theta0: float
    axis: tuple[float, float, float] = _Z_AXIS

    def __post_init__(self):
        _check_theta0(self.theta0)
        axis = tuple(float(a) for a in self.axis)
        if len(axis) != 3:
            raise ValueError("axis must be a 3-vector")
        if abs(math.sqrt(sum(a * a for a in axis)) - 1.0) > AXIS_TOL:
            raise DomainError(f"axis {axis} is not a unit vector")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "theta0", float(self.theta0))


def _check_theta0(theta0):
    if not (0.0 < theta0 <= math.pi):
        raise DomainError(f"theta0 must lie in (0, pi], got {theta0!r}")


def state_set(*states: PureState) -> StateSet:
    return StateSet(tuple(states))


def uniform_mixture(u: StateSet) -> DensityMatrix:
    """rho_U = (1/n) sum_i |psi_i><psi_i| over the members of ``u``."""
    v = np.column_stack([s.amplitudes for s in u.states])
    return DensityMatrix((v @ v.conj().T) / len(u))


def quantized_entropy(u: StateSet) -> float:
    """Von Neumann entropy (bits) of the uniform mixture over ``u``."""
    if len(u) == 1:
        return 0.0
    return von_neumann_entropy(uniform_mixture(u))


def quantized_measure(u: StateSet) -> float:
    """2 ** S(rho_U). Exactly 1 for a single ray."""
    return 2.0 ** quantized_entropy(u)


def pair_measure(p: float) -> float:
    """Quantized measure of two rays with transition probability ``p``."""
    return 2.0 ** pair_entropy(p)


def overlap_from_pair_measure(mu: float) -> float:
    """Transition probability of any pair of rays whose quantized measure is ``mu``."""
    if not (1.0 <= mu <= 2.0):
        raise DomainError(f"pair measure must lie in [1, 2], got {mu!r}")
    s = min(max(math.log2(mu), 0.0), 1.0)
    return invert_pair_entropy(s)


def counting_measure(region: StateSet | SphericalCap) -> float:
    """Number of rays; ``inf`` for a continuous cap."""
    if isinstance(region, SphericalCap):
        return math.inf
    return float(len(region))


def solid_angle_measure(
    region: StateSet | SphericalCap, normalize: bool = False, total: float = 1.0
) -> float:
    """Liouville measure on the qubit ray sphere, in steradians.

    A finite set of qubit rays has measure zero. With ``normalize`` the value
    is divided by 4 pi and scaled to ``total``.
    """
    if isinstance(region, SphericalCap):
        omega = 2.0 * math.pi * (1.0 - math.cos(region.theta0))
    else:
        if region.dim != 2:
            raise DimensionMismatchError("the solid-angle measure is defined on qubit rays only")
        omega = 0.0
    if normalize:
        return omega / (4.0 * math.pi) * total
    return omega


def bloch_state(theta: float, phi: float) -> PureState:
    """cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return PureState(np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)]))


def _frame(axis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = np.asarray(axis, dtype=float)
    helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - np.dot(helper, a) * a
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(a, e1)
    return e1, e2, a


def _rotate_cap_frame(rho_z: np.ndarray, axis) -> DensityMatrix:
    """Re-express a mixture computed about +z as one about ``axis``."""
    if tuple(axis) == _Z_AXIS:
        return DensityMatrix(rho_z)
    # Bloch components in the cap frame
    bx = 2.0 * rho_z[0, 1].real
    by = -2.0 * rho_z[0, 1].imag
    bz = (rho_z[0, 0] - rho_z[1, 1]).real
    e1, e2, a = _frame(axis)
    return density_from_bloch(bx * e1 + by * e2 + bz * a)


def density_from_bloch(r) -> DensityMatrix:
    """(I + r . sigma) / 2 for a Bloch vector with |r| <= 1."""
    x, y, z = (float(c) for c in r)
    return DensityMatrix(
        np.array([[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]], dtype=complex) / 2.0
    )


def cap_mixture_analytic(theta0: float, axis=_Z_AXIS) -> DensityMatrix:
    """Uniform mixture over a cap in closed form.

    The average Bloch vector of the cap points along the axis with length
    (1 + cos theta0)/2, so the eigenvalues are (1 +- r)/2.
    """
    _check_theta0(theta0)
    r = (1.0 + math.cos(theta0)) / 2.0
    return density_from_bloch(r * np.asarray(axis, dtype=float))


def cap_mixture_quadrature(
    theta0: float, n_theta: int = 512, n_phi: int = 512, axis=_Z_AXIS
) -> DensityMatrix:
    """Midpoint-rule average of |psi><psi| over a cap, weighted by sin(theta).

    The weights are normalized by their own sum (the discrete solid angle),
    which keeps the trace at 1 to rounding.
    """
    _check_theta0(theta0)
    if n_theta < 8 or n_phi < 8:
        raise DomainError(f"grid must be at least 8x8, got {n_theta}x{n_phi}")
    theta = (np.arange(n_theta) + 0.5) * (theta0 / n_theta)
    phi = (np.arange(n_phi) + 0.5) * (2.0 * math.pi / n_phi)
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    w = np.sin(theta)
    wsum = w.sum() * n_phi
    rho00 = np.sum(w * c * c) * n_phi / wsum
    rho11 = np.sum(w * s * s) * n_phi / wsum
    # <0|psi><psi|1> = c s e^{-i phi}
    rho01 = np.sum(np.outer(w * c * s, np.exp(-1j * phi))) / wsum
    rho = np.array([[rho00, rho01], [np.conj(rho01), rho11]], dtype=complex)
    return _rotate_cap_frame(rho, axis)


def cap_mixture_montecarlo(
    theta0: float, n_samples: int = 10**6, seed: int = DEFAULT_SEED, axis=_Z_AXIS
) -> DensityMatrix:
    """Average of |psi><psi| over area-uniform random points of a cap.

    cos(theta) is drawn uniformly from [cos theta0, 1] and phi uniformly from
    [0, 2 pi). Samples are drawn and summed in fixed chunks of ``MC_CHUNK``,
    so the result depends only on ``(theta0, n_samples, seed)``.
    """
    _check_theta0(theta0)
    if n_samples < 100:
        raise DomainError(f"need at least 100 samples, got {n_samples}")
    rng = np.random.default_rng(seed)
    lo = math.cos(theta0)
    acc00 = 0.0
    acc01 = 0.0 + 0.0j
    done = 0
    while done < n_samples:
        n = min(MC_CHUNK, n_samples - done)
        u = rng.uniform(lo, 1.0, n)
        phi = rng.uniform(0.0, 2.0 * math.pi, n)
        # cos^2(theta/2) = (1 + cos theta)/2, c*s = sin(theta)/2
        acc00 += np.sum((1.0 + u) / 2.0)
        acc01 += np.sum(np.sqrt(np.clip(1.0 - u * u, 0.0, None)) / 2.0 * np.exp(-1j * phi))
        done += n
    rho00 = acc00 / n_samples
    rho01 = acc01 / n_samples
    rho = np.array([[rho00, rho01], [np.conj(rho01), 1.0 - rho00]], dtype=complex)
    return _rotate_cap_frame(rho, axis)


CAP_METHODS = ("analytic", "quadrature", "montecarlo")


def cap_mixture(theta0: float, method: str = "analytic", **params) -> DensityMatrix:
    if method == "analytic":
        return cap_mixture_analytic(theta0, **params)
    if method == "quadrature":
        return cap_mixture_quadrature(theta0, **params)
    if method == "montecarlo":
        return cap_mixture_montecarlo(theta0, **params)
    raise ValueError(f"unknown method {method!r}; expected one of {CAP_METHODS}")


def cap_quantized_measure(theta0: float, method: str = "analytic", **params) -> float:
    """2 ** S of the cap mixture, in [1, 2]."""
    return 2.0 ** von_neumann_entropy(cap_mixture(theta0, method, **params))


def product_set(a: StateSet, b: StateSet) -> StateSet:
    """All tensor products a_i (x) b_j, with the index of ``a`` varying slowest."""
    return StateSet(tuple(tensor_state(x, y) for x in a.states for y in b.states))


def union(sets: Iterable[StateSet]) -> StateSet:
    states: list[PureState] = []
    for s in sets:
        states.extend(s.states)
    return StateSet(tuple(states))


def from_vectors(vectors: Sequence) -> StateSet:
    """StateSet from raw amplitude sequences (each must already be normalized)."""
    return StateSet(tuple(PureState(np.asarray(v, dtype=complex)) for v in vectors))
