"""Finite-dimensional Hilbert space primitives.

Pure states are unit vectors (rays up to global phase), density matrices are
validated Hermitian, positive semidefinite, unit-trace operators. Everything
here is an immutable value; the arrays held by these objects are marked
read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptySetError,
    HermiticityError,
    NormalizationError,
    PositivityError,
    TraceError,
)

NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-8
SPAN_TOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized amplitude vector.

    Args:
        amplitudes: complex amplitudes in the computational basis. Must have
            unit norm within ``NORM_TOL``; nothing is rescaled here.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError(f"amplitudes must be a nonempty 1-d array, got shape {amps.shape}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NormalizationError(f"squared norm is {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def basis(cls, dim: int, index: int) -> PureState:
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls(v)

    @classmethod
    def from_vector(cls, v) -> PureState:
        """Build a state by normalizing an arbitrary nonzero vector."""
        v = np.asarray(v, dtype=complex)
        n = np.linalg.norm(v)
        if n == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(v / n)

    def canonical(self) -> PureState:
        """Same ray with the first nonzero amplitude made real and positive."""
        a = self.amplitudes
        nz = np.flatnonzero(np.abs(a) > 1e-12)
        phase = a[nz[0]] / abs(a[nz[0]])
        return PureState(a / phase)

    def __repr__(self):
        return f"PureState(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def states(self) -> list[PureState]:
        return [PureState(self.eigenvectors[:, i]) for i in range(self.eigenvectors.shape[1])]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _decompose(m: np.ndarray) -> Spectrum:
    w, v = np.linalg.eigh(m)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    if w[-1] < -PSD_TOL:
        raise PositivityError(f"eigenvalue {w[-1]!r} is below -{PSD_TOL}")
    np.clip(w, 0.0, 1.0, out=w)
    w.setflags(write=False)
    v.setflags(write=False)
    return Spectrum(w, v)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density operator.

    Construction checks Hermiticity, unit trace and positivity. Eigenvalues in
    ``[-PSD_TOL, 0)`` are clamped to zero (and rounding above 1 to one)
    in the cached spectrum.
    """

    entries: np.ndarray
    spectrum: Spectrum = field(init=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        dev = np.max(np.abs(m - m.conj().T))
        if dev > HERMITIAN_TOL:
            raise HermiticityError(f"max |M - M^dagger| = {dev!r}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise TraceError(f"trace is {tr!r}, expected 1")
        m = 0.5 * (m + m.conj().T)
        object.__setattr__(self, "entries", _frozen(m))
        object.__setattr__(self, "spectrum", _decompose(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, eigenvalues={np.array2string(self.spectrum.eigenvalues, precision=6)})"


def _check_dims(*states: PureState):
    dims = {s.dim for s in states}
    if len(dims) > 1:
        raise DimensionMismatchError(f"states have different dimensions {sorted(dims)}")


def project(psi: PureState) -> DensityMatrix:
    """The rank-one projector |psi><psi|."""
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()))


def transition_probability(psi: PureState, phi: PureState) -> float:
    """|<psi|phi>|^2, clipped to [0, 1]."""
    _check_dims(psi, phi)
    p = abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2
    return float(min(max(p, 0.0), 1.0))


def eigendecompose(rho: DensityMatrix) -> Spectrum:
    """Spectrum of a density matrix, eigenvalues sorted descending.

    Degenerate eigenspaces come back in whatever orthonormal basis LAPACK
    picks; only the eigenvalues are used downstream.
    """
    return rho.spectrum


def tensor_state(a: PureState, b: PureState) -> PureState:
    """Kronecker product a (x) b; index of a varies slowest."""
    v = np.kron(a.amplitudes, b.amplitudes)
    # renormalize only to absorb rounding; inputs are already unit vectors
    return PureState(v / np.linalg.norm(v))


def span_dimension(states: Sequence[PureState], tol: float = SPAN_TOL) -> int:
    """Rank of the Gram matrix of ``states`` (singular values above ``tol``)."""
    if len(states) == 0:
        raise EmptySetError("span_dimension needs at least one state")
    _check_dims(*states)
    v = np.column_stack([s.amplitudes for s in states])
    gram = v.conj().T @ v
    sv = np.linalg.svd(gram, compute_uv=False)
    return int(np.sum(sv > tol))


def random_state(dim: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(v / np.linalg.norm(v))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix with phases fixed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density_matrix(dim: int, rng: np.random.Generator, k: int | None = None) -> DensityMatrix:
    """Uniform mixture of ``k`` random pure states (``k`` defaults to random in 1..dim^2)."""
    if k is None:
        k = int(rng.integers(1, dim * dim + 1))
    m = np.zeros((dim, dim), dtype=complex)
    for _ in range(k):
        a = random_state(dim, rng).amplitudes
        m += np.outer(a, a.conj())
    return DensityMatrix(m / k)


def apply_unitary(u: np.ndarray, psi: PureState) -> PureState:
    v = u @ psi.amplitudes
    return PureState(v / np.linalg.norm(v))


Z_PLUS = PureState(np.array([1.0, 0.0]))
Z_MINUS = PureState(np.array([0.0, 1.0]))
X_PLUS = PureState(np.array([1.0, 1.0]) / np.sqrt(2))
X_MINUS = PureState(np.array([1.0, -1.0]) / np.sqrt(2))
