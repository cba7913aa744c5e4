"""The orthogonal group O(n) with its bi-invariant metric.

The metric is the restriction of the Frobenius inner product, so the
canonical and Euclidean tags denote the same geometry.  SO(n) is not a
separate type: the sign of the determinant labels the connected component.
"""

import numpy as np

from ..errors import ComponentMismatch, NotOrthonormal, NotTangent
from ..kernels import (
    MEMBERSHIP_TOL,
    as_square,
    exp_m,
    log_orthogonal,
    orthogonal_eigenangles,
    orthonormality_residual,
    skew,
)
from .base import Manifold, Metric


def component(q):
    """``+1`` for SO(n), ``-1`` for the other component."""
    return 1 if np.linalg.det(q) > 0 else -1


def _check_components(q, q2):
    if component(q) != component(q2):
        raise ComponentMismatch(
            "points lie in different connected components of O(n) "
            "(determinants of opposite sign)"
        )


def on_exp(q, delta, tol=MEMBERSHIP_TOL):
    """Exponential ``q exp_m(q^T delta)``.

    Raises
    ------
    NotTangent
        If ``q^T delta`` is not skew-symmetric within `tol`.
    """
    q = as_square(q, "base point")
    delta = as_square(delta, "tangent vector")
    w = q.T @ delta
    res = float(np.linalg.norm(w + w.T))
    if res > tol * max(1.0, np.linalg.norm(delta)):
        raise NotTangent(f"q^T delta is not skew (||W + W^T||_F = {res:.3e})")
    return q @ exp_m(skew(w))


def on_log(q, q2):
    """Logarithm ``q log_m(q^T q2)``.

    Raises
    ------
    ComponentMismatch
        If `q` and `q2` lie in different components.
    AntipodalSpectrum
        If ``q^T q2`` has an eigenvalue at (or numerically near) ``-1``.
    """
    q = as_square(q, "base point")
    q2 = as_square(q2, "target point")
    _check_components(q, q2)
    return q @ log_orthogonal(q.T @ q2)


def on_dist(q, q2):
    """Distance ``sqrt(sum theta_k^2)`` over the eigen-angles of ``q^T q2``."""
    q = as_square(q, "base point")
    q2 = as_square(q2, "target point")
    _check_components(q, q2)
    theta = orthogonal_eigenangles(q.T @ q2)
    return float(np.sqrt(np.sum(theta**2)))


class Orthogonal(Manifold):
    id = "On"
    metrics = (Metric.CANONICAL, Metric.EUCLIDEAN)
    point_error = NotOrthonormal

    def __init__(self, n):
        super().__init__(n, n)

    def point_residual(self, x):
        return orthonormality_residual(x)

    def tangent_residual(self, x, v):
        w = np.asarray(x).T @ np.asarray(v)
        return float(np.linalg.norm(w + w.T))

    def project(self, x, ambient):
        x = np.asarray(x, dtype=float)
        return x @ skew(x.T @ np.asarray(ambient, dtype=float))

    def inner(self, x, u, v, metric=None):
        self.resolve_metric(metric)
        return float(np.sum(np.asarray(u) * np.asarray(v)))

    def exp(self, x, v, metric=None):
        self.resolve_metric(metric)
        return on_exp(x, v)

    def log(self, x, y, metric=None):
        self.resolve_metric(metric)
        return on_log(x, y)

    def dist(self, x, y, metric=None):
        self.resolve_metric(metric)
        return on_dist(x, y)

    def random_point(self, rng):
        """Haar-distributed element of SO(n)."""
        z = rng.standard_normal((self.n, self.n))
        q, r = np.linalg.qr(z)
        q = q * np.sign(np.diag(r))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        return q
