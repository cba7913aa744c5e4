"""Dense matrix primitives shared by every manifold module.

Matrices are plain 2-D ``numpy.ndarray`` objects of dtype float64.  The
functions here validate their inputs (finite entries, shapes, symmetry where
required) and raise the exceptions from :mod:`manifoldkit.errors`.

Notes
-----
``exp_m`` routes symmetric and skew-symmetric inputs through eigendecompositions
and everything else through scaling-and-squaring with a Pade core
(``scipy.linalg.expm``).  ``log_m`` uses the eigendecomposition for SPD input,
a real Schur / planar rotation path for orthogonal input (the result is exactly
skew), and inverse scaling-and-squaring (``scipy.linalg.logm``) otherwise.
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    AntipodalSpectrum,
    DecompositionFailed,
    DimensionMismatch,
    NonFiniteEntries,
    NotOrthonormal,
    NotPositiveDefinite,
    NotSymmetric,
    SingularInput,
    SpectrumOnBranchCut,
)

#: residual bound for membership / tangency checks
MEMBERSHIP_TOL = 1e-8
#: residual bound used by round-trip assertions
ROUNDTRIP_TOL = 1e-9
#: relative threshold below which a symmetric matrix is not positive definite
DEFINITENESS_RTOL = 1e-12
#: relative threshold below which a square matrix counts as singular
SINGULARITY_RTOL = 1e-12
#: eigen-angles of orthogonal matrices closer than this to pi are rejected
ANTIPODAL_MARGIN = 1e-6

_STRUCTURE_RTOL = 1e-12


class ThinQR(NamedTuple):
    q: np.ndarray
    r: np.ndarray


class ThinSVD(NamedTuple):
    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


class SymEig(NamedTuple):
    q: np.ndarray
    lam: np.ndarray


def as_matrix(x, name="matrix"):
    """Return `x` as a finite 2-D float array or raise."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntries(f"{name} contains NaN or Inf entries")
    return a


def as_square(x, name="matrix"):
    a = as_matrix(x, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


def sym(x):
    return 0.5 * (x + x.T)


def skew(x):
    return 0.5 * (x - x.T)


def symmetry_residual(x):
    return float(np.linalg.norm(x - x.T))


def _check_symmetric(x, tol, name="matrix"):
    res = symmetry_residual(x)
    if res > tol * max(1.0, np.linalg.norm(x)):
        raise NotSymmetric(f"{name} is not symmetric: ||x - x^T||_F = {res:.3e}")


def _is_symmetric(x):
    return symmetry_residual(x) <= _STRUCTURE_RTOL * np.linalg.norm(x)


def _is_skew(x):
    return float(np.linalg.norm(x + x.T)) <= _STRUCTURE_RTOL * np.linalg.norm(x)


def orthonormality_residual(x):
    """``||x^T x - I||_F`` for a matrix with orthonormal columns."""
    return float(np.linalg.norm(x.T @ x - np.eye(x.shape[1])))


# -- decompositions -----------------------------------------------------------


def thin_qr(x):
    """Thin QR with the sign convention ``diag(r) >= 0``."""
    x = as_matrix(x)
    try:
        q, r = np.linalg.qr(x, mode="reduced")
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailed(str(exc)) from exc
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return ThinQR(q * d, d[:, None] * r)


def thin_svd(x):
    """Thin SVD ``x = u @ diag(s) @ v.T`` with descending ``s``."""
    x = as_matrix(x)
    try:
        u, s, vt = np.linalg.svd(x, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailed(str(exc)) from exc
    return ThinSVD(u, s, vt.T)


def sym_eig(x, tol=MEMBERSHIP_TOL):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""
    x = as_square(x)
    _check_symmetric(x, tol)
    try:
        lam, q = np.linalg.eigh(sym(x))
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailed(str(exc)) from exc
    return SymEig(q[:, ::-1], lam[::-1])


# -- exponential / logarithm --------------------------------------------------


def _exp_skew(x):
    # i*x is Hermitian for real skew x: x = T diag(-i w) T^H
    w, t = np.linalg.eigh(1j * skew(x))
    e = (t * np.exp(-1j * w)) @ t.conj().T
    return e.real


def _apply_sym(x, func):
    lam, q = np.linalg.eigh(sym(x))
    return sym((q * func(lam)) @ q.T)


def exp_m(x):
    """Matrix exponential of a square matrix."""
    x = as_square(x)
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        return np.eye(x.shape[0])
    if _is_symmetric(x):
        return _apply_sym(x, np.exp)
    if _is_skew(x):
        return _exp_skew(x)
    return scipy.linalg.expm(x)


def _orthogonal_blocks(x):
    """Real Schur form of an orthogonal matrix as planar rotation angles.

    Returns ``(z, blocks)`` where ``blocks`` is a list of ``(index, size,
    angle)``; size-1 blocks carry angle 0 (eigenvalue +1) or pi (eigenvalue -1).
    """
    t, z = scipy.linalg.schur(x, output="real")
    n = x.shape[0]
    blocks = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            a = 0.5 * (t[i, i] + t[i + 1, i + 1])
            s = 0.5 * (t[i + 1, i] - t[i, i + 1])
            blocks.append((i, 2, float(np.arctan2(s, a))))
            i += 2
        else:
            blocks.append((i, 1, 0.0 if t[i, i] > 0 else float(np.pi)))
            i += 1
    return z, blocks


def orthogonal_eigenangles(x):
    """Angles ``theta_k`` in [-pi, pi] of the eigenvalues ``exp(i theta_k)``."""
    x = as_square(x)
    _, blocks = _orthogonal_blocks(x)
    angles = []
    for _, size, theta in blocks:
        angles.extend([theta, -theta] if size == 2 else [theta])
    return np.asarray(angles)


def log_orthogonal(x):
    """Logarithm of an orthogonal matrix via its real Schur form; exactly skew."""
    x = as_square(x)
    z, blocks = _orthogonal_blocks(x)
    n = x.shape[0]
    lt = np.zeros((n, n))
    for i, size, theta in blocks:
        if abs(theta) > np.pi - ANTIPODAL_MARGIN:
            raise AntipodalSpectrum(
                f"orthogonal matrix has eigenvalue -1 (angle {theta:.12g})",
                eigenvalue=-1.0,
            )
        if size == 2:
            lt[i, i + 1] = -theta
            lt[i + 1, i] = theta
    return skew(z @ lt @ z.T)


def log_m(x):
    """Principal matrix logarithm.

    Raises
    ------
    SpectrumOnBranchCut
        If an eigenvalue lies on the closed negative real axis.  For
        orthogonal input the subclass :class:`AntipodalSpectrum` is raised.
    """
    x = as_square(x)
    n = x.shape[0]
    if orthonormality_residual(x) <= 1e-10 * max(1, n):
        return log_orthogonal(x)
    if _is_symmetric(x):
        lam, q = np.linalg.eigh(sym(x))
        if lam[0] <= 0.0:
            raise SpectrumOnBranchCut(
                f"symmetric matrix has nonpositive eigenvalue {lam[0]:.6g}",
                eigenvalue=float(lam[0]),
            )
        return sym((q * np.log(lam)) @ q.T)
    eigs = np.linalg.eigvals(x)
    for lam in eigs:
        if abs(lam.imag) <= 1e-10 * max(1.0, abs(lam)) and lam.real <= 0.0:
            raise SpectrumOnBranchCut(
                f"eigenvalue {lam.real:.6g} lies on the branch cut (-inf, 0]",
                eigenvalue=float(lam.real),
            )
    out, _ = scipy.linalg.logm(x, disp=False)
    out = np.asarray(out)
    if np.iscomplexobj(out):
        if np.linalg.norm(out.imag) > 1e-8 * max(1.0, np.linalg.norm(out.real)):
            raise SpectrumOnBranchCut("principal logarithm is not real")
        out = out.real
    return out


def exp_sym(x, tol=MEMBERSHIP_TOL):
    """Exponential of a symmetric matrix; the result is SPD."""
    x = as_square(x)
    _check_symmetric(x, tol)
    return _apply_sym(x, np.exp)


def _spd_eig(a, tol):
    a = as_square(a)
    _check_symmetric(a, tol)
    lam, q = np.linalg.eigh(sym(a))
    if lam[-1] <= 0.0 or lam[0] <= DEFINITENESS_RTOL * lam[-1]:
        raise NotPositiveDefinite(
            f"matrix is not positive definite: min eigenvalue {lam[0]:.6g}",
            min_eigenvalue=float(lam[0]),
        )
    return lam, q


def log_spd(x, tol=MEMBERSHIP_TOL):
    """Logarithm of an SPD matrix; the result is symmetric."""
    lam, q = _spd_eig(x, tol)
    return sym((q * np.log(lam)) @ q.T)


def spd_sqrt(a, tol=MEMBERSHIP_TOL):
    """The unique SPD square root of an SPD matrix."""
    lam, q = _spd_eig(a, tol)
    return sym((q * np.sqrt(lam)) @ q.T)


def spd_sqrt_pair(a, tol=MEMBERSHIP_TOL):
    """``(a^{1/2}, a^{-1/2})`` from a single eigendecomposition."""
    lam, q = _spd_eig(a, tol)
    r = np.sqrt(lam)
    return sym((q * r) @ q.T), sym((q / r) @ q.T)


def polar_decompose(a):
    """Polar factors ``a = q @ p`` with ``q`` orthogonal and ``p`` SPD.

    The factors are assembled from an SVD ``a = w s v^T`` as ``q = w v^T`` and
    ``p = v s v^T``, which equals ``(a^T a)^{1/2}`` without squaring the
    condition number.
    """
    a = as_square(a)
    w, s, v = thin_svd(a)
    if s[0] == 0.0 or s[-1] <= SINGULARITY_RTOL * s[0]:
        raise SingularInput(
            f"matrix is (numerically) singular: sigma_min/sigma_max = "
            f"{(s[-1] / s[0]) if s[0] else 0.0:.3e}"
        )
    return w @ v.T, sym((v * s) @ v.T)


def procrustes_rotation(a, b):
    """Orthogonal ``r`` minimizing ``||a - b r||_F``."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    u, _, v = thin_svd(b.T @ a)
    return u @ v.T


def orthogonal_complete(block, tol=MEMBERSHIP_TOL):
    """Extend an ``m x p`` orthonormal block to a square orthogonal matrix.

    The first ``p`` columns of the result equal `block`.  The completing
    columns come from a full QR factorization, with signs chosen so that the
    trailing diagonal entries are nonnegative.
    """
    block = as_matrix(block, "block")
    m, p = block.shape
    if p > m:
        raise DimensionMismatch(f"block has more columns than rows: {block.shape}")
    res = orthonormality_residual(block)
    if res > tol:
        raise NotOrthonormal(f"block columns are not orthonormal (residual {res:.3e})")
    try:
        q, _ = np.linalg.qr(block, mode="complete")
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailed(str(exc)) from exc
    comp = q[:, p:]
    d = np.sign(np.diag(comp[p:, :]))
    d[d == 0] = 1.0
    return np.hstack([block, comp * d])
