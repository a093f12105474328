"""Counting states with von Neumann entropy.

``quantized_measure(U) = 2 ** S(rho_U)`` assigns a "number of states" to a
finite set of pure states ``U`` through the entropy of their uniform mixture.
The classical counting and solid-angle measures are provided alongside for
comparison.
"""

from .entropy import (
    binary_entropy,
    invert_binary_entropy,
    invert_pair_entropy,
    pair_entropy,
    von_neumann_entropy,
)
from .errors import (
    DimensionMismatchError,
    DomainError,
    EmptySetError,
    NormalizationError,
    PositivityError,
    QMeasureError,
    StateSetParseError,
    StateValidationError,
)
from .hilbert import (
    X_MINUS,
    X_PLUS,
    Z_MINUS,
    Z_PLUS,
    DensityMatrix,
    PureState,
    Spectrum,
    eigendecompose,
    project,
    span_dimension,
    tensor_state,
    transition_probability,
)
from .measures import (
    SphericalCap,
    StateSet,
    bloch_state,
    cap_mixture_analytic,
    cap_mixture_montecarlo,
    cap_mixture_quadrature,
    cap_quantized_measure,
    counting_measure,
    overlap_from_pair_measure,
    pair_measure,
    product_set,
    quantized_measure,
    solid_angle_measure,
    state_set,
    uniform_mixture,
)

__version__ = "0.1.0"
