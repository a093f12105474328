"""Von Neumann and binary entropies in bits, and the inverse of the pair entropy."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .hilbert import DensityMatrix

# eigenvalues at or below this count as exact zeros in -sum(l log l)
ZERO_EIGENVALUE = 1e-14
BISECTION_TOL = 1e-12


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    """S(rho) = -Tr rho log2 rho, from the eigenvalues of ``rho``.

    A bare array is validated as a :class:`DensityMatrix` first.
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    lam = rho.spectrum.eigenvalues
    lam = lam[lam > ZERO_EIGENVALUE]
    s = float(-np.sum(lam * np.log2(lam)))
    return min(max(s, 0.0), math.log2(rho.dim))


def binary_entropy(x: float) -> float:
    """Shannon entropy in bits of a two-outcome distribution (x, 1 - x)."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary_entropy needs x in [0, 1], got {x!r}")
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _check_unit_interval(name: str, v: float):
    if not (0.0 <= v <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {v!r}")


def pair_entropy(p: float) -> float:
    """Entropy of the equal mixture of two pure states with overlap ``p``.

    The mixture has eigenvalues (1 +- sqrt(p))/2, so this is the binary
    entropy of (1 - sqrt(p))/2. Strictly decreasing from 1 at p=0 to 0 at p=1.
    """
    _check_unit_interval("p", p)
    return binary_entropy((1.0 - math.sqrt(p)) / 2.0)


def invert_binary_entropy(s: float, tol: float = BISECTION_TOL) -> float:
    """The unique x in [0, 1/2] with binary_entropy(x) == s, by bisection."""
    _check_unit_interval("s", s)
    if s == 0.0:
        return 0.0
    if s == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < s:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def invert_pair_entropy(s: float) -> float:
    """Overlap p in [0, 1] whose pair entropy equals ``s``.

    Inverts the binary entropy on the lower branch, then p = (1 - 2x)^2.
    """
    x = invert_binary_entropy(s)
    return (1.0 - 2.0 * x) ** 2
