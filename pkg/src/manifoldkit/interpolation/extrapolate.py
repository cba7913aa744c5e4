"""Geodesic extrapolation and derivatives of the SVD.

A curve ``mu -> c(mu)`` on a manifold is extrapolated from ``c(mu_0)`` and
``c'(mu_0)`` along the geodesic with that starting point and velocity.  The
geodesic agrees with the curve to second order, so halving the step divides
the error by about four.

For POD bases the velocity comes from differentiating the thin SVD of a
parameter-dependent snapshot matrix ``S(mu) = U Sigma Z^T``.
"""

from dataclasses import dataclass

import numpy as np

from ..api import ManifoldPoint, TangentVector
from ..errors import DegenerateSpectrum, DimensionMismatch, SingularValueZero
from ..kernels import SINGULARITY_RTOL, as_matrix, thin_svd
from ..manifolds.stiefel import st_exp_canonical, st_project

#: relative singular value gap below which the SVD is not differentiated
GAP_RTOL = 1e-8


def extrapolate_geodesic(p0, v0, mu_star, metric=None):
    """``Exp_{p0}(mu* v0)``.

    Parameters
    ----------
    p0 : ManifoldPoint
    v0 : TangentVector or array_like
        Velocity at `p0`; plain arrays are checked for tangency.
    mu_star : float
    """
    m = p0.manifold
    if isinstance(v0, TangentVector):
        if v0.base is not p0 and not np.array_equal(v0.base.rep, p0.rep):
            v0 = TangentVector(p0, v0.rep)
        v = v0.rep
    else:
        v = m.check_tangent(p0.rep, v0)
    return ManifoldPoint(m, m.geodesic(p0.rep, v, float(mu_star), metric))


@dataclass
class SvdDerivative:
    """Thin SVD ``S = U diag(sigma) Z^T`` and its derivative.

    Attributes
    ----------
    u, sigma, z : SVD factors (truncated to the requested rank).
    sigma_dot : ndarray
        ``sigma_j' = u_j^T S' z_j``.
    z_dot : ndarray
        ``Z' = Z A`` with ``A`` skew.
    u_dot : ndarray
        ``U' = (S' Z + U (Sigma A - Sigma')) Sigma^{-1}``.
    a : ndarray
        The skew coefficient matrix ``A`` (full ``m x m``).
    """

    u: np.ndarray
    sigma: np.ndarray
    z: np.ndarray
    sigma_dot: np.ndarray
    z_dot: np.ndarray
    u_dot: np.ndarray
    a: np.ndarray


def svd_derivative(s, s_dot, rank=None, gap_rtol=GAP_RTOL):
    """Derivative of the thin SVD of ``S(mu)`` in the direction ``S'(mu)``.

    Parameters
    ----------
    s : array_like, shape (n, m) with n >= m
        Snapshot matrix at ``mu_0``.
    s_dot : array_like, shape (n, m)
        Its derivative with respect to ``mu``.
    rank : int, optional
        Only the leading `rank` singular triplets are differentiated and
        returned.  Their singular values must be nonzero and separated from
        all others; the trailing ones may coincide.
    gap_rtol : float
        Pairs with ``|sigma_i - sigma_j| < gap_rtol * sigma_1`` are degenerate.

    Raises
    ------
    SingularValueZero
        If a retained singular value vanishes.
    DegenerateSpectrum
        If a retained singular value is not simple; ``pair`` names the indices.
    """
    s = as_matrix(s, "snapshot matrix")
    s_dot = as_matrix(s_dot, "snapshot derivative")
    if s.shape != s_dot.shape:
        raise DimensionMismatch(f"shape mismatch {s.shape} vs {s_dot.shape}")
    n, m = s.shape
    if n < m:
        raise DimensionMismatch(f"need at least as many rows as columns, got {s.shape}")
    r = m if rank is None else int(rank)
    if not 1 <= r <= m:
        raise DimensionMismatch(f"rank must lie in [1, {m}], got {rank}")

    u, sig, z = thin_svd(s)
    scale = sig[0]
    for j in range(r):
        if sig[j] <= SINGULARITY_RTOL * scale or sig[j] == 0.0:
            raise SingularValueZero(f"singular value {j} is zero ({sig[j]:.3e})", index=j)
    for i in range(m):
        for j in range(min(i, r)):
            if sig[j] - sig[i] < gap_rtol * scale:
                raise DegenerateSpectrum(
                    f"singular values {j} and {i} are not separated "
                    f"({sig[j]:.15g} vs {sig[i]:.15g})",
                    pair=(j, i),
                )

    b = u.T @ s_dot @ z  # b_ij = (u^i)^T S' v^j
    sigma_dot = np.diag(b).copy()
    a = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            if i != j and (i < r or j < r):
                a[i, j] = (sig[j] * b[j, i] + sig[i] * b[i, j]) / (
                    (sig[j] + sig[i]) * (sig[j] - sig[i])
                )
    z_dot = z @ a
    ar = a[:, :r]
    u_dot = (s_dot @ z[:, :r] + u @ (sig[:, None] * ar) - u[:, :r] * sigma_dot[:r]) / sig[:r]
    return SvdDerivative(
        u=u[:, :r],
        sigma=sig[:r],
        z=z[:, :r],
        sigma_dot=sigma_dot[:r],
        z_dot=z_dot[:, :r],
        u_dot=u_dot,
        a=a,
    )


@dataclass
class PodExtrapolation:
    """Result of :func:`extrapolate_pod_basis`.

    Attributes
    ----------
    basis : ndarray
        Extrapolated orthonormal basis ``Exp_U(mu* U')``.
    u0, u_dot : ndarray
        Truncated basis and its (tangent-projected) velocity.
    tangency_repair : float
        Frobenius norm of the correction applied by the tangent projection.
    """

    basis: np.ndarray
    u0: np.ndarray
    u_dot: np.ndarray
    tangency_repair: float


def extrapolate_pod_basis(s, s_dot, r, mu_star, gap_rtol=GAP_RTOL):
    """Extrapolate the rank-`r` POD basis of ``S(mu_0 + mu*)`` on St(n, r).

    The truncated SVD velocity is projected onto the tangent space at the
    truncated basis before the canonical Stiefel exponential is applied.
    """
    d = svd_derivative(s, s_dot, rank=r, gap_rtol=gap_rtol)
    u_dot = st_project(d.u, d.u_dot)
    repair = float(np.linalg.norm(u_dot - d.u_dot))
    basis = st_exp_canonical(d.u, float(mu_star) * u_dot)
    return PodExtrapolation(basis, d.u, u_dot, repair)
