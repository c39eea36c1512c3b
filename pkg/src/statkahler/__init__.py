"""Kaehler geometry of exponential families, group actions on them, and the
orbit method for nilpotent groups, all evaluated on finite quadrature rules."""

from . import (
    errors,
    expfam,
    fisher_geom,
    kahler_tm,
    l2_embed,
    lie_core,
    orbit_method,
    sample_space,
    transform_model,
)
from .errors import StatKahlerError
from .expfam import (
    ExponentialFamily,
    TangentCoord,
    categorical,
    gaussian_location,
    gaussian_location_scale,
    poisson_truncated,
)
from .kahler_tm import SplitTangent
from .lie_core import LieAlgebra, abelian, filiform4, heisenberg
from .sample_space import FiniteCounting, GaussHermite, Product, UniformGrid, build_space

__version__ = "0.1.0"

__all__ = [
    "errors", "expfam", "fisher_geom", "kahler_tm", "l2_embed", "lie_core", "orbit_method",
    "sample_space", "transform_model", "StatKahlerError", "ExponentialFamily", "TangentCoord",
    "categorical", "gaussian_location", "gaussian_location_scale", "poisson_truncated", "SplitTangent",
    "LieAlgebra", "abelian", "filiform4", "heisenberg", "FiniteCounting", "GaussHermite", "Product",
    "UniformGrid", "build_space",
]
