"""Green's functions of transient lattice random walks.

Evaluates the simple-walk Green's function on Z^d (d >= 3) through its
modified-Bessel integral representation, and, by reflection identities, on
the half-lattice, on subspaces with m nonnegative coordinates, on the
orthant, and on strips of fixed width (d >= 4).  A finite electrical-network
lab and a Monte Carlo estimator provide formula-independent verification of
every closed form.
"""

from .bessel import ORDER_CAP, bessel_i_scaled, bessel_i_scaled_batch
from .domains import DomainSpec
from .errors import (
    CapabilityError,
    ConfigError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    SingularNetworkError,
    TransienceError,
    WalkGreenError,
)
from .lattice import (
    GreenEstimate,
    QuadratureConfig,
    green_full,
    green_full_origin,
    green_origin_gamma,
)
from .montecarlo import McEstimate, WalkConfig, estimate_green, estimate_green_folded, step
from .network import (
    KilledGreenMatrix,
    WeightedGraph,
    build_truncated,
    finite_box_half_green,
    half_box_green_direct,
    killed_green_matrix,
    killed_green_solve,
    reflect_fold,
    series_reduce,
)
from .reflections import (
    OriginDiagResult,
    green,
    green_half,
    green_half_killed,
    green_half_reflected,
    green_orthant,
    green_origin_diag,
    green_strip,
    green_subspace,
    reflect_first,
    reflect_signed,
    reflection_signs,
)

__version__ = "0.1.0"

__all__ = [
    "ORDER_CAP",
    "bessel_i_scaled",
    "bessel_i_scaled_batch",
    "DomainSpec",
    "GreenEstimate",
    "QuadratureConfig",
    "green_full",
    "green_full_origin",
    "green_origin_gamma",
    "green",
    "green_half",
    "green_half_killed",
    "green_half_reflected",
    "green_subspace",
    "green_orthant",
    "green_strip",
    "green_origin_diag",
    "OriginDiagResult",
    "reflect_first",
    "reflect_signed",
    "reflection_signs",
    "WeightedGraph",
    "KilledGreenMatrix",
    "killed_green_solve",
    "killed_green_matrix",
    "series_reduce",
    "build_truncated",
    "finite_box_half_green",
    "half_box_green_direct",
    "reflect_fold",
    "WalkConfig",
    "McEstimate",
    "estimate_green",
    "estimate_green_folded",
    "step",
    "WalkGreenError",
    "DomainError",
    "TransienceError",
    "CapabilityError",
    "ConvergenceError",
    "ConsistencyError",
    "SingularNetworkError",
    "ConfigError",
]
