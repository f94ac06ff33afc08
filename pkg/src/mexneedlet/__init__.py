"""Mexican needlets on the two-sphere and numerical checks of their properties."""

from ._accel import backend_name
from .errors import (
    DomainError,
    InsufficientRangeError,
    NeedletError,
    PreconditionError,
    ResourceLimitError,
    VariantError,
)
from .kernel import (
    FilterParams,
    KernelProfile,
    SeriesVariant,
    Summation,
    fourier_weight_transform,
    fourier_weight_transform_magnitude,
    kappa_direct,
    kappa_psf,
    needlet_profile,
    profile,
    truncation_degree,
)
from .special import (
    WeightParams,
    WeightVariant,
    eta,
    hermite_eval,
    legendre_eval,
    level_sum,
    weight_f,
)
from .sphere import (
    CubatureGrid,
    NeedletCoefficients,
    Pixelization,
    ZonalMixture,
    ZonalTerm,
    analyze,
    analyze_exact,
    build_cubature,
    build_partition,
    evaluate_needlet,
    geodesic_distance,
    zonal_inner_product,
)

__version__ = "0.1.0"

__all__ = [
    "CubatureGrid",
    "DomainError",
    "FilterParams",
    "InsufficientRangeError",
    "KernelProfile",
    "NeedletCoefficients",
    "NeedletError",
    "Pixelization",
    "PreconditionError",
    "ResourceLimitError",
    "SeriesVariant",
    "Summation",
    "VariantError",
    "WeightParams",
    "WeightVariant",
    "ZonalMixture",
    "ZonalTerm",
    "analyze",
    "analyze_exact",
    "backend_name",
    "build_cubature",
    "build_partition",
    "eta",
    "evaluate_needlet",
    "fourier_weight_transform",
    "fourier_weight_transform_magnitude",
    "geodesic_distance",
    "hermite_eval",
    "kappa_direct",
    "kappa_psf",
    "legendre_eval",
    "level_sum",
    "needlet_profile",
    "profile",
    "truncation_degree",
    "weight_f",
    "zonal_inner_product",
]
