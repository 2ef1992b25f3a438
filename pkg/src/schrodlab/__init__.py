"""schrodlab: numerical laboratory for space-time estimates of the free
Schrodinger evolution and the paraboloid Fourier extension operator."""

__version__ = "0.1.0"

from .exponents import (  # noqa: F401
    INF,
    ExponentTriple,
    alpha_critical,
    predicted_exponents_1d,
    q_star,
)
from .fields import (  # noqa: F401
    FrequencyWindow,
    GridSpec,
    SampledField,
    SpaceTimeField,
    SpectralField,
    apply_multiplier,
    forward_transform,
    inverse_transform,
    littlewood_paley_project,
)
from .norms import MixedNormSpec, besov_norm, lebesgue_norm, mixed_norm, sobolev_norm  # noqa: F401
from .propagator import evolve_kernel, evolve_spectral, time_rescale  # noqa: F401
