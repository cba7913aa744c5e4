"""Symmetric positive definite matrices with the natural metric.

The natural (affine-invariant) metric is
``<D1, D2>_A = trace(A^{-1} D1 A^{-1} D2)``.  Congruences ``A -> X^T A X``
are isometries, and both the exponential and the logarithm are global.
"""

import numpy as np
import scipy.linalg

from ..errors import NotPositiveDefinite
from ..kernels import (
    DEFINITENESS_RTOL,
    MEMBERSHIP_TOL,
    _check_symmetric,
    as_square,
    exp_sym,
    log_spd,
    spd_sqrt_pair,
    sym,
    symmetry_residual,
)
from .base import Manifold, Metric


def spd_inner_natural(a, d1, d2):
    """``trace(a^{-1} d1 a^{-1} d2)`` with ``a^{-1}`` applied by Cholesky solves."""
    a = as_square(a, "base point")
    try:
        c = scipy.linalg.cho_factor(sym(a))
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("base point is not positive definite") from None
    x1 = scipy.linalg.cho_solve(c, as_square(d1))
    x2 = x1 if d2 is d1 else scipy.linalg.cho_solve(c, as_square(d2))
    return float(np.sum(x1 * x2.T))


def spd_exp(a, delta, tol=MEMBERSHIP_TOL):
    """Exponential ``a^{1/2} exp_m(a^{-1/2} delta a^{-1/2}) a^{1/2}``."""
    delta = as_square(delta, "tangent vector")
    _check_symmetric(delta, tol, "tangent vector")
    r, ri = spd_sqrt_pair(a, tol)
    return sym(r @ exp_sym(sym(ri @ delta @ ri)) @ r)


def spd_log(a, b, tol=MEMBERSHIP_TOL):
    """Logarithm ``a^{1/2} log_m(a^{-1/2} b a^{-1/2}) a^{1/2}``."""
    r, ri = spd_sqrt_pair(a, tol)
    b = as_square(b, "target point")
    return sym(r @ log_spd(sym(ri @ b @ ri), tol) @ r)


def spd_dist(a, b, tol=MEMBERSHIP_TOL):
    """Natural distance ``||log_m(a^{-1/2} b a^{-1/2})||_F``."""
    _, ri = spd_sqrt_pair(a, tol)
    b = as_square(b, "target point")
    return float(np.linalg.norm(log_spd(sym(ri @ b @ ri), tol)))


def spd_dist_log_euclidean(a, b, tol=MEMBERSHIP_TOL):
    """Log-Euclidean distance ``||log_m(a) - log_m(b)||_F``."""
    return float(np.linalg.norm(log_spd(a, tol) - log_spd(b, tol)))


class SPD(Manifold):
    id = "SPD"
    metrics = (Metric.NATURAL,)
    point_error = NotPositiveDefinite

    def __init__(self, n):
        super().__init__(n, n)

    def point_residual(self, x):
        x = np.asarray(x, dtype=float)
        res = symmetry_residual(x)
        lam = np.linalg.eigvalsh(sym(x))
        if lam[-1] <= 0.0 or lam[0] <= DEFINITENESS_RTOL * lam[-1]:
            return float("inf")
        return res

    def tangent_residual(self, x, v):
        return symmetry_residual(np.asarray(v, dtype=float))

    def project(self, x, ambient):
        return sym(np.asarray(ambient, dtype=float))

    def inner(self, x, u, v, metric=None):
        self.resolve_metric(metric)
        return spd_inner_natural(x, u, v)

    def exp(self, x, v, metric=None):
        self.resolve_metric(metric)
        return spd_exp(x, v)

    def log(self, x, y, metric=None):
        self.resolve_metric(metric)
        return spd_log(x, y)

    def dist(self, x, y, metric=None):
        self.resolve_metric(metric)
        return spd_dist(x, y)

    def random_point(self, rng):
        b = rng.standard_normal((self.n, self.n)) / np.sqrt(self.n)
        return exp_sym(sym(b))
