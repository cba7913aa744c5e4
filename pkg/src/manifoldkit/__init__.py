"""Riemannian computing on matrix manifolds and manifold-valued interpolation."""

from . import api, errors, kernels
from .api import ManifoldPoint, TangentVector
from .manifolds import (
    SPD,
    GeneralLinear,
    Grassmann,
    Metric,
    Orthogonal,
    Stiefel,
    get_manifold,
)

__version__ = "0.1.0"

__all__ = [
    "SPD",
    "GeneralLinear",
    "Grassmann",
    "ManifoldPoint",
    "Metric",
    "Orthogonal",
    "Stiefel",
    "TangentVector",
    "api",
    "errors",
    "get_manifold",
    "kernels",
]
