"""The Grassmann manifold Gr(n, p) of p-dimensional subspaces of R^n.

A point is carried by a Stiefel representative ``U``; every ``U R`` with
``R`` orthogonal denotes the same subspace.  Tangent vectors are horizontal
lifts, ``U^T Delta = 0``.  The canonical and Euclidean metrics coincide on
horizontal vectors, so the inner product is the Frobenius one.

Functions never modify the representative passed by the caller.  Points are
equal when their subspace distance vanishes, not when the matrices agree.
"""

from typing import NamedTuple

import numpy as np

from ..errors import DimensionMismatch, NotHorizontal, NotOrthonormal, RankDeficientOverlap
from ..kernels import MEMBERSHIP_TOL, as_matrix, orthonormality_residual, thin_svd
from .base import Manifold, Metric

#: smallest admissible singular value of ``U^T U2`` in :func:`gr_log`
OVERLAP_TOL = 1e-8


class PrincipalAngles(NamedTuple):
    theta: np.ndarray


def _pair(u, u2):
    u = as_matrix(u, "base point")
    u2 = as_matrix(u2, "target point")
    if u.shape != u2.shape:
        raise DimensionMismatch(f"shape mismatch {u.shape} vs {u2.shape}")
    return u, u2


def gr_project(u, ambient):
    """Horizontal projection ``(I - U U^T) T``."""
    u = as_matrix(u, "base point")
    t = as_matrix(ambient, "ambient matrix")
    return t - u @ (u.T @ t)


def gr_exp(u, delta, tol=MEMBERSHIP_TOL):
    """Exponential ``U V cos(S) V^T + Q sin(S) V^T`` from ``delta = Q S V^T``.

    Raises
    ------
    NotHorizontal
        If ``||U^T delta||_F`` exceeds `tol` (relative to ``||delta||``).
    """
    u, delta = _pair(u, delta)
    res = float(np.linalg.norm(u.T @ delta))
    if res > tol * max(1.0, np.linalg.norm(delta)):
        raise NotHorizontal(f"U^T Delta != 0 (residual {res:.3e})")
    q, s, v = thin_svd(delta)
    return (u @ v) * np.cos(s) @ v.T + q * np.sin(s) @ v.T


def gr_log(u, u2, overlap_tol=OVERLAP_TOL):
    """Logarithm through ``L = U2 M^{-1} - U`` with ``M = U^T U2``.

    ``Delta = Q arctan(S) V^T`` from the thin SVD ``L = Q S V^T``.

    Raises
    ------
    RankDeficientOverlap
        If the smallest singular value of ``M`` is below `overlap_tol`, i.e.
        some principal angle is (close to) pi/2.  :func:`gr_log_modified`
        handles that case.
    """
    u, u2 = _pair(u, u2)
    m = u.T @ u2
    smin = np.linalg.svd(m, compute_uv=False)[-1]
    if smin < overlap_tol:
        raise RankDeficientOverlap(
            f"U^T U2 is (nearly) singular (sigma_min = {smin:.3e}); a principal "
            "angle is close to pi/2, use gr_log_modified"
        )
    k = u2 - u @ m
    el = np.linalg.solve(m.T, k.T).T
    q, s, v = thin_svd(el)
    return q * np.arctan(s) @ v.T


def gr_log_modified(u, u2):
    """Logarithm after Procrustes alignment of the target representative.

    With ``U2^T U = Psi S R^T`` the representative ``U2* = U2 Psi R^T`` is
    closest to `u`.  ``Delta = Q arcsin(S) V^T`` from the thin SVD of
    ``U2* - U U^T U2*``, and ``gr_exp(u, Delta)`` reproduces ``U2*`` itself.
    Defined for every pair; at principal angles of exactly pi/2 the geodesic is
    not unique and the returned one depends on the SVD ordering.
    """
    us = procrustes_representative(u, u2)
    el = us - u @ (u.T @ us)
    q, s, v = thin_svd(el)
    return q * np.arcsin(np.clip(s, -1.0, 1.0)) @ v.T


def procrustes_representative(u, u2):
    """Representative of ``span(u2)`` closest to `u` in the Frobenius norm."""
    u, u2 = _pair(u, u2)
    psi, _, r = thin_svd(u2.T @ u)
    return u2 @ (psi @ r.T)


def principal_angles(u, u2):
    """Principal angles between ``span(u)`` and ``span(u2)``, ascending.

    Small angles are taken from the sines (singular values of
    ``(I - U U^T) U2``) and large ones from the cosines (singular values of
    ``U^T U2``); each formula is well conditioned in its range.
    """
    u, u2 = _pair(u, u2)
    m = u.T @ u2
    cos_ = np.clip(np.linalg.svd(m, compute_uv=False), -1.0, 1.0)
    sin_ = np.clip(np.sort(np.linalg.svd(u2 - u @ m, compute_uv=False)), -1.0, 1.0)
    from_sin = np.arcsin(sin_)
    from_cos = np.arccos(cos_)
    theta = np.where(from_sin < np.pi / 4, from_sin, from_cos)
    return PrincipalAngles(np.sort(theta))


def gr_dist(u, u2):
    """Subspace distance, the 2-norm of the principal angles."""
    return float(np.linalg.norm(principal_angles(u, u2).theta))


class Grassmann(Manifold):
    id = "Gr"
    metrics = (Metric.CANONICAL, Metric.EUCLIDEAN)
    point_error = NotOrthonormal
    tangent_error = NotHorizontal

    def point_residual(self, x):
        return orthonormality_residual(np.asarray(x, dtype=float))

    def tangent_residual(self, x, v):
        return float(np.linalg.norm(np.asarray(x).T @ np.asarray(v)))

    def project(self, x, ambient):
        return gr_project(x, ambient)

    def inner(self, x, u, v, metric=None):
        self.resolve_metric(metric)
        return float(np.sum(np.asarray(u) * np.asarray(v)))

    def exp(self, x, v, metric=None):
        self.resolve_metric(metric)
        return gr_exp(x, v)

    def log(self, x, y, metric=None):
        self.resolve_metric(metric)
        return gr_log_modified(x, y)

    def dist(self, x, y, metric=None):
        self.resolve_metric(metric)
        return gr_dist(x, y)

    def same_point(self, x, y, tol=MEMBERSHIP_TOL):
        return gr_dist(x, y) <= tol

    def random_point(self, rng):
        q, r = np.linalg.qr(rng.standard_normal(self.shape))
        return q * np.sign(np.diag(r))
