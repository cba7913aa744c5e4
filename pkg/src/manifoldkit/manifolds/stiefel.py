"""The Stiefel manifold St(n, p) of n x p matrices with orthonormal columns.

Tangent vectors at ``U`` decompose as ``Delta = U A + (I - U U^T) T`` with
``A`` skew.  Two metrics are supported:

* euclidean: ``trace(D1^T D2)``
* canonical: ``trace(D1^T (I - U U^T / 2) D2)``, which weighs the vertical
  block ``A`` by one half.

The canonical exponential is evaluated through a 2p x 2p skew matrix
exponential; the canonical logarithm is computed iteratively and converges
linearly for nearby points.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    DimensionMismatch,
    NoConvergence,
    NotOrthonormal,
    NotTangent,
    UnsupportedMetric,
)
from ..kernels import (
    MEMBERSHIP_TOL,
    as_matrix,
    exp_m,
    log_orthogonal,
    orthogonal_complete,
    orthonormality_residual,
    procrustes_rotation,
    skew,
    thin_qr,
)
from .base import Manifold, Metric

#: default convergence threshold of the canonical logarithm
LOG_TAU = 1e-11
#: default iteration cap of the canonical logarithm
LOG_MAX_ITER = 100


def _check_pair(u, delta, tol):
    u = as_matrix(u, "base point")
    delta = as_matrix(delta, "tangent vector")
    if delta.shape != u.shape:
        raise DimensionMismatch(f"tangent shape {delta.shape} != point shape {u.shape}")
    w = u.T @ delta
    res = float(np.linalg.norm(w + w.T))
    if res > tol * max(1.0, np.linalg.norm(delta)):
        raise NotTangent(f"U^T Delta is not skew (||W + W^T||_F = {res:.3e})")
    return u, delta


def st_project(u, ambient):
    """Tangent projection ``U skew(U^T T) + (I - U U^T) T``."""
    u = as_matrix(u, "base point")
    t = as_matrix(ambient, "ambient matrix")
    w = u.T @ t
    return u @ skew(w) + (t - u @ w)


def st_inner(u, d1, d2, metric=Metric.CANONICAL):
    """Inner product of two tangent vectors at `u`."""
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    val = float(np.sum(d1 * d2))
    if Metric(metric) is Metric.CANONICAL:
        u = np.asarray(u, dtype=float)
        val -= 0.5 * float(np.sum((u.T @ d1) * (u.T @ d2)))
    return val


class StiefelGeodesic:
    """Canonical geodesic ``t -> Exp_U(t Delta)`` with the setup done once.

    The QR factorization of the normal component and the eigendecomposition
    of the 2p x 2p skew block are computed on construction; each call then
    costs two small products and one ``n x 2p`` by ``2p x p`` product.
    """

    def __init__(self, u, delta, tol=MEMBERSHIP_TOL):
        u, delta = _check_pair(u, delta, tol)
        p = u.shape[1]
        a = skew(u.T @ delta)
        k = delta - u @ a
        k -= u @ (u.T @ k)
        q, r = thin_qr(k)
        x = np.block([[a, -r.T], [r, np.zeros((p, p))]])
        w, t = np.linalg.eigh(1j * x)
        self.u = u
        self.q = q
        self._w = w
        self._t = t
        self._th = t.conj().T[:, :p]
        self._p = p

    def __call__(self, t=1.0):
        e = ((self._t * np.exp(-1j * t * self._w)) @ self._th).real
        p = self._p
        return self.u @ e[:p] + self.q @ e[p:]


def st_exp_canonical(u, delta, tol=MEMBERSHIP_TOL):
    """Exponential of the canonical metric."""
    return StiefelGeodesic(u, delta, tol)(1.0)


def st_exp_euclidean(u, delta, tol=MEMBERSHIP_TOL):
    """Exponential of the Euclidean metric.

    Evaluates ``[U, Delta] exp_m([[A, -S], [I, A]]) [I; 0] exp_m(-A)`` with
    ``A = U^T Delta`` and ``S = Delta^T Delta``.
    """
    u, delta = _check_pair(u, delta, tol)
    p = u.shape[1]
    a = skew(u.T @ delta)
    s = delta.T @ delta
    blk = np.block([[a, -s], [np.eye(p), a]])
    e = exp_m(blk)[:, :p]
    return np.hstack([u, delta]) @ e @ exp_m(-a)


@dataclass
class StiefelLogReport:
    """Result of :func:`st_log_canonical`.

    Attributes
    ----------
    delta : ndarray
        Tangent vector at the base point.
    iterations : int
        Number of corrections applied to the orthogonal completion.
    final_residual : float
        Spectral norm of the lower right block of the last logarithm.
    history : list of float
        Residual after every iteration, starting with the initial one.
    """

    delta: np.ndarray
    iterations: int
    final_residual: float
    history: list = field(default_factory=list)


def st_log_canonical(u, u2, tau=LOG_TAU, max_iter=LOG_MAX_ITER, tol=MEMBERSHIP_TOL):
    """Logarithm of the canonical metric by iterative completion.

    ``[M; N]`` with ``M = U^T U2`` and ``Q N = U2 - U M`` is completed to an
    orthogonal ``V``; the lower right block of ``log_m(V)`` is then driven to
    zero by right multiplication of the completing columns with
    ``exp_m(-C)``.

    Parameters
    ----------
    u, u2 : ndarray
        Points on St(n, p).
    tau : float
        Threshold for ``||C||_2``.
    max_iter : int
        Iteration cap.

    Returns
    -------
    StiefelLogReport

    Raises
    ------
    NoConvergence
        If ``||C||_2 > tau`` after `max_iter` iterations.
    SpectrumOnBranchCut
        If some ``V_k`` has an eigenvalue at -1.
    """
    u = as_matrix(u, "base point")
    u2 = as_matrix(u2, "target point")
    if u.shape != u2.shape:
        raise DimensionMismatch(f"shape mismatch {u.shape} vs {u2.shape}")
    for name, x in (("base point", u), ("target point", u2)):
        res = orthonormality_residual(x)
        if res > tol:
            raise NotOrthonormal(f"{name} columns are not orthonormal (residual {res:.3e})")
    p = u.shape[1]
    m = u.T @ u2
    k = u2 - u @ m
    k -= u @ (u.T @ k)
    q, n_ = thin_qr(k)
    v = orthogonal_complete(np.vstack([m, n_]), tol=max(tol, 1e-6))
    # rotate the completion towards the identity so that log_m(V_0) is small
    v[:, p:] = v[:, p:] @ procrustes_rotation(np.eye(p), v[p:, p:])
    if np.linalg.det(v) < 0:
        v[:, -1] = -v[:, -1]

    history = []
    it = 0
    while True:
        lv = log_orthogonal(v)
        c = lv[p:, p:]
        res = float(np.linalg.norm(c, 2))
        history.append(res)
        if res <= tau:
            break
        if it >= max_iter:
            raise NoConvergence(
                f"Stiefel logarithm did not reach tau={tau:g} in {max_iter} "
                f"iterations (last residual {res:.3e})",
                max_iter=max_iter,
                history=history,
                last=u @ lv[:p, :p] + q @ lv[p:, :p],
            )
        v[:, p:] = v[:, p:] @ exp_m(-c)
        it += 1
    delta = u @ lv[:p, :p] + q @ lv[p:, :p]
    return StiefelLogReport(delta, it, res, history)


def st_dist_canonical(u, u2, tau=LOG_TAU, max_iter=LOG_MAX_ITER):
    """Canonical distance, the canonical norm of the logarithm."""
    delta = st_log_canonical(u, u2, tau, max_iter).delta
    return float(np.sqrt(max(st_inner(u, delta, delta, Metric.CANONICAL), 0.0)))


class Stiefel(Manifold):
    """St(n, p); the logarithm is only available for the canonical metric."""

    id = "St"
    metrics = (Metric.CANONICAL, Metric.EUCLIDEAN)
    point_error = NotOrthonormal

    def __init__(self, n, p=None, log_tau=LOG_TAU, log_max_iter=LOG_MAX_ITER):
        super().__init__(n, p)
        self.log_tau = float(log_tau)
        self.log_max_iter = int(log_max_iter)

    def point_residual(self, x):
        return orthonormality_residual(np.asarray(x, dtype=float))

    def tangent_residual(self, x, v):
        w = np.asarray(x).T @ np.asarray(v)
        return float(np.linalg.norm(w + w.T))

    def project(self, x, ambient):
        return st_project(x, ambient)

    def inner(self, x, u, v, metric=None):
        return st_inner(x, u, v, self.resolve_metric(metric))

    def exp(self, x, v, metric=None):
        if self.resolve_metric(metric) is Metric.EUCLIDEAN:
            return st_exp_euclidean(x, v)
        return st_exp_canonical(x, v)

    def _canonical_only(self, metric):
        if self.resolve_metric(metric) is not Metric.CANONICAL:
            raise UnsupportedMetric("the Stiefel logarithm is only available for the canonical metric")

    def log(self, x, y, metric=None):
        self._canonical_only(metric)
        return st_log_canonical(x, y, self.log_tau, self.log_max_iter).delta

    def dist(self, x, y, metric=None):
        self._canonical_only(metric)
        return st_dist_canonical(x, y, self.log_tau, self.log_max_iter)

    def geodesic(self, x, v, t, metric=None):
        if self.resolve_metric(metric) is Metric.EUCLIDEAN:
            return st_exp_euclidean(x, t * np.asarray(v, dtype=float))
        return StiefelGeodesic(x, v)(t)

    def random_point(self, rng):
        q, r = np.linalg.qr(rng.standard_normal(self.shape))
        return q * np.sign(np.diag(r))
