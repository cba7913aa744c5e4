"""Common interface of the matrix manifolds.

A :class:`Manifold` works on plain arrays: points and tangent vectors are
given in extrinsic coordinates as ``numpy`` matrices.  The typed wrappers in
:mod:`manifoldkit.api` sit on top of this interface.
"""

import abc
import enum

import numpy as np

from ..errors import DimensionMismatch, DomainError, NotTangent, UnsupportedMetric
from ..kernels import MEMBERSHIP_TOL, as_matrix


class Metric(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    CANONICAL = "canonical"
    NATURAL = "natural"
    LEFT_INVARIANT = "left_invariant"


class Manifold(abc.ABC):
    """Abstract matrix manifold.

    Subclasses set ``id``, ``metrics`` (accepted metric tags, first entry is
    the default) and implement the residual, projection, inner product,
    exponential and logarithm methods.  ``dist`` defaults to the norm of the
    logarithm.
    """

    id: str = ""
    metrics: tuple = ()
    point_error = DomainError
    tangent_error = NotTangent

    def __init__(self, n, p=None):
        self.n = int(n)
        self.p = int(n if p is None else p)
        if self.n < 1 or self.p < 1 or self.p > self.n:
            raise DimensionMismatch(f"invalid dimensions n={n}, p={p}")

    @property
    def shape(self):
        return (self.n, self.p)

    @property
    def default_metric(self):
        return self.metrics[0]

    def __repr__(self):
        if self.p == self.n and self.id in ("GL", "On", "SPD"):
            return f"{type(self).__name__}({self.n})"
        return f"{type(self).__name__}({self.n}, {self.p})"

    def __eq__(self, other):
        return type(self) is type(other) and self.shape == other.shape

    def __hash__(self):
        return hash((type(self).__name__, self.shape))

    def resolve_metric(self, metric=None):
        if metric is None:
            return self.default_metric
        try:
            metric = Metric(metric)
        except ValueError:
            raise UnsupportedMetric(f"unknown metric tag {metric!r}") from None
        if metric not in self.metrics:
            accepted = ", ".join(m.value for m in self.metrics)
            raise UnsupportedMetric(
                f"{self.id} does not support metric {metric.value!r} (accepted: {accepted})"
            )
        return metric

    def _as_element(self, x, name="point"):
        x = as_matrix(x, name)
        if x.shape != self.shape:
            raise DimensionMismatch(f"{name} has shape {x.shape}, expected {self.shape}")
        return x

    # -- predicates -----------------------------------------------------------

    @abc.abstractmethod
    def point_residual(self, x):
        """Residual of the membership predicate; zero on the manifold."""

    @abc.abstractmethod
    def tangent_residual(self, x, v):
        """Residual of the tangency predicate at `x`; zero for tangent `v`."""

    def check_point(self, x, tol=MEMBERSHIP_TOL):
        x = self._as_element(x)
        res = self.point_residual(x)
        if not res <= tol:
            raise self.point_error(f"not a point on {self!r}: residual {res:.3e}")
        return x

    def check_tangent(self, x, v, tol=MEMBERSHIP_TOL):
        v = self._as_element(v, "tangent vector")
        res = self.tangent_residual(x, v)
        if not res <= tol * max(1.0, np.linalg.norm(v)):
            raise self.tangent_error(f"not a tangent vector of {self!r}: residual {res:.3e}")
        return v

    # -- geometry -------------------------------------------------------------

    @abc.abstractmethod
    def project(self, x, ambient):
        """Orthogonal projection of an ambient matrix onto the tangent space."""

    @abc.abstractmethod
    def inner(self, x, u, v, metric=None):
        pass

    def norm(self, x, v, metric=None):
        return float(np.sqrt(max(self.inner(x, v, v, metric), 0.0)))

    @abc.abstractmethod
    def exp(self, x, v, metric=None):
        pass

    @abc.abstractmethod
    def log(self, x, y, metric=None):
        pass

    def dist(self, x, y, metric=None):
        return self.norm(x, self.log(x, y, metric), metric)

    def geodesic(self, x, v, t, metric=None):
        return self.exp(x, t * np.asarray(v, dtype=float), metric)

    def same_point(self, x, y, tol=MEMBERSHIP_TOL):
        """Equality of points; overridden where points are equivalence classes."""
        return float(np.linalg.norm(np.asarray(x) - np.asarray(y))) <= tol

    def zero_vector(self, x):
        return np.zeros(self.shape)

    # -- sampling helpers used by tests and demos -----------------------------

    @abc.abstractmethod
    def random_point(self, rng):
        pass

    def random_tangent(self, x, rng, scale=1.0):
        """Random tangent vector at `x` with norm `scale` in the default metric."""
        v = self.project(x, rng.standard_normal(self.shape))
        nv = self.norm(x, v)
        return v if nv == 0.0 else scale * v / nv
