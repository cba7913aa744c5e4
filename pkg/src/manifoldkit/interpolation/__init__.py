"""Interpolation and extrapolation of manifold-valued data."""

from .extrapolate import (
    PodExtrapolation,
    SvdDerivative,
    extrapolate_geodesic,
    extrapolate_pod_basis,
    svd_derivative,
)
from .interpolate import (
    KarcherReport,
    interp_geodesic,
    interp_normal_coords,
    karcher_interpolate,
)
from .samples import SampleSet
from .weights import (
    LagrangeWeights1D,
    LinearWeights1D,
    RBFWeights,
    WeightScheme,
    make_scheme,
)

__all__ = [
    "KarcherReport",
    "LagrangeWeights1D",
    "LinearWeights1D",
    "PodExtrapolation",
    "RBFWeights",
    "SampleSet",
    "SvdDerivative",
    "WeightScheme",
    "extrapolate_geodesic",
    "extrapolate_pod_basis",
    "interp_geodesic",
    "interp_normal_coords",
    "karcher_interpolate",
    "make_scheme",
    "svd_derivative",
]
