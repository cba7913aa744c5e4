"""Parameter/point sample sets."""

import numpy as np

from ..api import ManifoldPoint
from ..errors import DimensionMismatch
from ..kernels import MEMBERSHIP_TOL
from .weights import as_params


class SampleSet:
    """Ordered pairs ``(mu_i, p_i)`` on a single manifold.

    Parameters
    ----------
    manifold : Manifold
        Owning manifold of every point.
    params : array_like
        ``k`` parameter vectors, as a ``k x d`` array (or length-``k`` vector
        for ``d = 1``).  Must be pairwise distinct.
    points : sequence of array_like or ManifoldPoint
        Representatives of the sample points.
    validate : bool
        Check the membership predicate of each point.
    """

    def __init__(self, manifold, params, points, validate=True, tol=MEMBERSHIP_TOL):
        self.manifold = manifold
        self.params = as_params(params)
        pts = []
        for x in points:
            if isinstance(x, ManifoldPoint):
                if x.manifold != manifold:
                    raise DimensionMismatch(f"sample lives on {x.manifold!r}, expected {manifold!r}")
                x = x.rep
            x = manifold._as_element(x, "sample point")
            if validate:
                manifold.check_point(x, tol)
            pts.append(x)
        self.points = pts
        k = len(pts)
        if k == 0:
            raise ValueError("a sample set needs at least one point")
        if self.params.shape[0] != k:
            raise DimensionMismatch(f"{self.params.shape[0]} parameters for {k} points")
        if np.unique(self.params, axis=0).shape[0] != k:
            raise ValueError("sample parameters must be pairwise distinct")
        self.params.setflags(write=False)

    def __len__(self):
        return len(self.points)

    @property
    def dim(self):
        """Parameter dimension ``d``."""
        return self.params.shape[1]

    def point(self, i):
        return ManifoldPoint(self.manifold, self.points[i], validate=False)

    def __repr__(self):
        return f"SampleSet({self.manifold!r}, k={len(self)}, d={self.dim})"
