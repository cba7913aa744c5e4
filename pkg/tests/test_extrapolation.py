import numpy as np
import pytest
from conftest import random_orthonormal

from manifoldkit.api import ManifoldPoint, TangentVector
from manifoldkit.errors import DegenerateSpectrum, DimensionMismatch, SingularValueZero
from manifoldkit.interpolation import extrapolate_geodesic, extrapolate_pod_basis, svd_derivative
from manifoldkit.manifolds import Grassmann, Stiefel
from manifoldkit.manifolds.grassmann import gr_dist, gr_exp, gr_project
from manifoldkit.manifolds.stiefel import st_exp_canonical, st_log_canonical, st_project


def separated_matrix(rng, n, m, sigmas=None):
    """``Q1 diag(sigmas) Q2^T`` with a well separated spectrum."""
    if sigmas is None:
        sigmas = np.arange(m, 0, -1) * 2.0 + rng.uniform(0, 0.5, size=m)
    return random_orthonormal(rng, n, m) * sigmas @ random_orthonormal(rng, m, m).T


def aligned_svd(s, ref_u, ref_z):
    k = ref_u.shape[1]
    u, sig, zt = np.linalg.svd(s, full_matrices=False)
    u, sig, z = u[:, :k], sig[:k], zt.T[:, :k]
    signs = np.sign(np.sum(u * ref_u, axis=0))
    return u * signs, sig, z * signs


def fd_oracle(s0, s1, h=1e-5):
    u0, sig0, z0 = aligned_svd(s0, *np.linalg.svd(s0, full_matrices=False)[::2])
    up, sp, zp = aligned_svd(s0 + h * s1, u0, z0)
    um, sm, zm = aligned_svd(s0 - h * s1, u0, z0)
    return (up - um) / (2 * h), (sp - sm) / (2 * h), (zp - zm) / (2 * h)


def test_svd_derivative_diagonal():
    d = svd_derivative(np.diag([2.0, 1.0]), np.diag([1.0, -1.0]))
    np.testing.assert_allclose(d.sigma_dot, [1.0, -1.0])
    np.testing.assert_allclose(np.abs(d.u_dot), 0, atol=1e-15)
    np.testing.assert_allclose(np.abs(d.z_dot), 0, atol=1e-15)
    np.testing.assert_allclose(d.a, 0, atol=1e-15)


def test_svd_derivative_zero_direction(rng):
    s = separated_matrix(rng, 6, 3)
    d = svd_derivative(s, np.zeros_like(s))
    for f in (d.sigma_dot, d.u_dot, d.z_dot, d.a):
        np.testing.assert_allclose(f, 0, atol=1e-14)


def test_svd_derivative_fd(rng):
    s0 = separated_matrix(rng, 8, 4)
    s1 = rng.standard_normal((8, 4))
    d = svd_derivative(s0, s1)
    fu, fs, fz = fd_oracle(s0, s1)
    # align the analytic factors with the oracle's sign convention
    signs = np.sign(np.sum(d.u * np.linalg.svd(s0, full_matrices=False)[0], axis=0))
    np.testing.assert_allclose(d.u_dot * signs, fu, atol=1e-6)
    np.testing.assert_allclose(d.z_dot * signs, fz, atol=1e-6)
    np.testing.assert_allclose(d.sigma_dot, fs, atol=1e-6)
    w = d.u.T @ d.u_dot
    assert np.linalg.norm(w + w.T) <= 1e-10
    np.testing.assert_allclose(d.a, -d.a.T, atol=1e-15)


def test_svd_derivative_truncated(rng):
    s0 = separated_matrix(rng, 10, 5, sigmas=np.array([5.0, 3.0, 1.0, 1.0, 0.0]))
    s1 = rng.standard_normal((10, 5))
    d = svd_derivative(s0, s1, rank=2)
    assert d.u_dot.shape == (10, 2)
    h = 1e-5
    up = aligned_svd(s0 + h * s1, d.u, d.z)[0]
    um = aligned_svd(s0 - h * s1, d.u, d.z)[0]
    np.testing.assert_allclose(d.u_dot, (up - um) / (2 * h), atol=1e-6)


def test_svd_derivative_errors(rng):
    s = separated_matrix(rng, 6, 3, sigmas=np.array([2.0, 1.0, 1.0]))
    with pytest.raises(DegenerateSpectrum) as info:
        svd_derivative(s, np.zeros_like(s))
    assert info.value.pair == (1, 2)
    s = separated_matrix(rng, 6, 3, sigmas=np.array([2.0, 1.0, 0.0]))
    with pytest.raises(SingularValueZero) as info:
        svd_derivative(s, np.zeros_like(s))
    assert info.value.index == 2
    with pytest.raises(DimensionMismatch):
        svd_derivative(np.ones((2, 3)), np.ones((2, 3)))


def test_pod_extrapolation(rng):
    s0 = separated_matrix(rng, 40, 6)
    s1 = rng.standard_normal((40, 6)) * 3.0
    out = extrapolate_pod_basis(s0, s1, 3, 0.0)
    np.testing.assert_allclose(out.basis, out.u0, atol=1e-15)
    mu = 0.5
    out = extrapolate_pod_basis(s0, s1, 3, mu)
    assert out.tangency_repair <= 1e-10
    assert np.linalg.norm(out.basis.T @ out.basis - np.eye(3)) <= 1e-10
    taylor = out.u0 + mu * out.u_dot
    assert np.linalg.norm(taylor.T @ taylor - np.eye(3)) > 1e-4
    back = st_log_canonical(out.u0, out.basis).delta
    np.testing.assert_allclose(back, mu * out.u_dot, atol=1e-7)


def _halving_ratios(err, mus):
    e = np.array([err(mu) for mu in mus])
    return e[:-1] / e[1:]


def test_extrapolation_order_stiefel(rng):
    st = Stiefel(12, 3)
    u0 = st.random_point(rng)
    v = st.random_tangent(u0, rng, 1.0)
    w = st.random_tangent(u0, rng, 1.0)
    p = ManifoldPoint(st, u0)
    tv = TangentVector(p, v)

    def err(mu):
        c = st_exp_canonical(u0, mu * v + mu**2 * w)
        return np.linalg.norm(extrapolate_geodesic(p, tv, mu).rep - c)

    ratios = _halving_ratios(err, [0.08, 0.04, 0.02, 0.01])
    assert np.all((ratios >= 3.5) & (ratios <= 4.5)), ratios


def test_extrapolation_order_grassmann(rng):
    gr = Grassmann(10, 3)
    u0 = gr.random_point(rng)
    v = gr_project(u0, rng.standard_normal((10, 3)))
    w = gr_project(u0, rng.standard_normal((10, 3)))
    p = ManifoldPoint(gr, u0)

    def err(mu):
        c = gr_exp(u0, mu * v + mu**2 * w)
        return gr_dist(extrapolate_geodesic(p, v, mu).rep, c)

    ratios = _halving_ratios(err, [0.08, 0.04, 0.02, 0.01])
    assert np.all((ratios >= 3.5) & (ratios <= 4.5)), ratios


def test_extrapolate_geodesic_plain_array(rng):
    st = Stiefel(5, 2)
    u = st.random_point(rng)
    v = st.random_tangent(u, rng, 0.5)
    out = extrapolate_geodesic(ManifoldPoint(st, u), v, 1.0)
    np.testing.assert_allclose(out.rep, st_exp_canonical(u, v), atol=1e-14)
    assert st_project(u, v) == pytest.approx(v)
