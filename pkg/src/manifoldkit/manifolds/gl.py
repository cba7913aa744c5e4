"""The general linear group GL(n).

Two geometries are offered: the flat one inherited from the ambient matrix
space (geodesics are straight lines) and the left-invariant one,
``<D1, D2>_A = trace((A^{-1} D1)^T (A^{-1} D2))``.  For the latter only the
exponential has a closed form in general; the logarithm is available when
``A^{-1} B`` is a normal matrix.
"""

import warnings

import numpy as np
import scipy.linalg

from ..errors import LeftManifold, NotNormal, SingularBase, SingularInput
from ..kernels import SINGULARITY_RTOL, as_square, exp_m, log_m
from .base import Manifold, Metric

#: relative tolerance of the normality predicate, scaled by ||A^{-1} B||^2
NORMALITY_RTOL = 1e-8


class ComponentWarning(UserWarning):
    """Straight line between matrices with determinants of opposite sign."""


def _rcond(a):
    s = np.linalg.svd(a, compute_uv=False)
    return 0.0 if s[0] == 0.0 else s[-1] / s[0]


def is_invertible(a):
    return _rcond(a) > SINGULARITY_RTOL


def _lu(a):
    a = as_square(a, "base point")
    if not is_invertible(a):
        raise SingularBase(f"base point is singular (rcond {_rcond(a):.3e})")
    return scipy.linalg.lu_factor(a)


def gl_exp_flat(a, delta):
    """Straight-line exponential ``a + delta``."""
    a = as_square(a, "base point")
    b = a + as_square(delta, "tangent vector")
    if not is_invertible(b):
        raise LeftManifold(f"a + delta is (near-)singular (rcond {_rcond(b):.3e})")
    return b


def gl_log_flat(a, b):
    """Straight-line logarithm ``b - a``.

    Issues a :class:`ComponentWarning` when `a` and `b` lie in different
    connected components; the difference is still returned.
    """
    a = as_square(a, "base point")
    b = as_square(b, "target point")
    if np.sign(np.linalg.det(a)) != np.sign(np.linalg.det(b)):
        warnings.warn(
            "points lie in different components of GL(n); the straight line "
            "between them leaves the group",
            ComponentWarning,
            stacklevel=2,
        )
    return b - a


def gl_inner_left_invariant(a, d1, d2):
    lu = _lu(a)
    v1 = scipy.linalg.lu_solve(lu, as_square(d1))
    v2 = v1 if d2 is d1 else scipy.linalg.lu_solve(lu, as_square(d2))
    return float(np.sum(v1 * v2))


def gl_geodesic_left_invariant(a, delta, t=1.0):
    """Left-invariant geodesic ``a exp(t V^T) exp(t (V - V^T))``, ``V = a^{-1} delta``."""
    a = as_square(a, "base point")
    v = scipy.linalg.lu_solve(_lu(a), as_square(delta, "tangent vector"))
    return a @ exp_m(t * v.T) @ exp_m(t * (v - v.T))


def gl_log_left_invariant_normal(a, b, rtol=NORMALITY_RTOL):
    """Left-invariant logarithm ``a log_m(a^{-1} b)`` for normal ``a^{-1} b``.

    Raises
    ------
    NotNormal
        If ``a^{-1} b`` is not normal; no closed form is known in that case.
    SpectrumOnBranchCut
        If the principal logarithm of ``a^{-1} b`` is undefined.
    """
    a = as_square(a, "base point")
    w = scipy.linalg.lu_solve(_lu(a), as_square(b, "target point"))
    res = np.linalg.norm(w @ w.T - w.T @ w)
    if res > rtol * np.linalg.norm(w) ** 2:
        raise NotNormal(
            f"a^-1 b is not normal (||W W^T - W^T W||_F = {res:.3e}); "
            "the general left-invariant logarithm is not supported"
        )
    return a @ log_m(w)


class GeneralLinear(Manifold):
    id = "GL"
    metrics = (Metric.EUCLIDEAN, Metric.LEFT_INVARIANT)
    point_error = SingularInput

    def __init__(self, n):
        super().__init__(n, n)

    def point_residual(self, x):
        return 0.0 if is_invertible(x) else float("inf")

    def tangent_residual(self, x, v):
        return 0.0

    def project(self, x, ambient):
        return np.array(ambient, dtype=float)

    def inner(self, x, u, v, metric=None):
        if self.resolve_metric(metric) is Metric.LEFT_INVARIANT:
            return gl_inner_left_invariant(x, u, v)
        return float(np.sum(np.asarray(u) * np.asarray(v)))

    def exp(self, x, v, metric=None):
        if self.resolve_metric(metric) is Metric.LEFT_INVARIANT:
            return gl_geodesic_left_invariant(x, v, 1.0)
        return gl_exp_flat(x, v)

    def log(self, x, y, metric=None):
        if self.resolve_metric(metric) is Metric.LEFT_INVARIANT:
            return gl_log_left_invariant_normal(x, y)
        return gl_log_flat(x, y)

    def dist(self, x, y, metric=None):
        if self.resolve_metric(metric) is Metric.EUCLIDEAN:
            return float(np.linalg.norm(np.asarray(y) - np.asarray(x)))
        return self.norm(x, self.log(x, y, metric), metric)

    def geodesic(self, x, v, t, metric=None):
        if self.resolve_metric(metric) is Metric.LEFT_INVARIANT:
            return gl_geodesic_left_invariant(x, v, t)
        return gl_exp_flat(x, t * np.asarray(v, dtype=float))

    def random_point(self, rng):
        return exp_m(0.5 * rng.standard_normal((self.n, self.n)) / np.sqrt(self.n))
