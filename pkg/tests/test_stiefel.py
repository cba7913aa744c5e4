import numpy as np
import pytest
from conftest import random_orthonormal, random_skew

from manifoldkit.errors import NoConvergence, NotTangent, UnsupportedMetric
from manifoldkit.manifolds import Stiefel
from manifoldkit.manifolds.stiefel import (
    StiefelGeodesic,
    st_dist_canonical,
    st_exp_canonical,
    st_exp_euclidean,
    st_inner,
    st_log_canonical,
    st_project,
)


def _tangent(rng, u, scale):
    st = Stiefel(*u.shape)
    return st.random_tangent(u, rng, scale)


def _near_pair(rng, n, p, bound=0.09):
    """A pair with ||u - u2||_2 <= bound, via the canonical exponential."""
    u = random_orthonormal(rng, n, p)
    while True:
        u2 = st_exp_canonical(u, _tangent(rng, u, rng.uniform(0.3, 1.0) * bound))
        if np.linalg.norm(u - u2, 2) <= bound:
            return u, u2


def test_inner_product(rng):
    u = random_orthonormal(rng, 6, 2)
    z = np.zeros((6, 2))
    assert st_inner(u, z, z) == 0.0
    h1 = st_project(u, rng.standard_normal((6, 2)))
    h1 -= u @ (u.T @ h1)
    h2 = rng.standard_normal((6, 2))
    h2 -= u @ (u.T @ h2)
    assert st_inner(u, h1, h2, "canonical") == pytest.approx(st_inner(u, h1, h2, "euclidean"))
    assert st_inner(u, h1, h2, "euclidean") == pytest.approx(np.trace(h1.T @ h2))
    vert = u @ random_skew(rng, 2)
    assert st_inner(u, vert, vert, "canonical") == pytest.approx(0.5 * st_inner(u, vert, vert, "euclidean"))


def test_projection_examples():
    np.testing.assert_allclose(st_project(np.array([[1.0], [0.0]]), np.array([[1.0], [2.0]])), [[0.0], [2.0]])


def test_projection_idempotent(rng):
    u = random_orthonormal(rng, 7, 3)
    d = st_project(u, rng.standard_normal((7, 3)))
    np.testing.assert_allclose(st_project(u, d), d, atol=1e-14)
    w = u.T @ d
    np.testing.assert_allclose(w, -w.T, atol=1e-14)


def test_exp_canonical_examples(rng):
    u = random_orthonormal(rng, 5, 2)
    np.testing.assert_allclose(st_exp_canonical(u, np.zeros((5, 2))), u, atol=1e-15)
    theta = 0.8
    out = st_exp_canonical(np.array([[1.0], [0.0]]), np.array([[0.0], [theta]]))
    np.testing.assert_allclose(out, [[np.cos(theta)], [np.sin(theta)]], atol=1e-15)
    with pytest.raises(NotTangent):
        st_exp_canonical(u, u)


def test_exp_canonical_membership_large(rng):
    u = random_orthonormal(rng, 100, 10)
    d = _tangent(rng, u, 2.0)
    out = st_exp_canonical(u, d)
    assert np.linalg.norm(out.T @ out - np.eye(10)) <= 1e-10


def test_exp_euclidean(rng):
    u = random_orthonormal(rng, 5, 2)
    np.testing.assert_allclose(st_exp_euclidean(u, np.zeros((5, 2))), u, atol=1e-15)
    v = random_orthonormal(rng, 6, 1)
    h = rng.standard_normal((6, 1))
    h -= v @ (v.T @ h)
    np.testing.assert_allclose(st_exp_euclidean(v, h), st_exp_canonical(v, h), atol=1e-9)
    d = _tangent(rng, u, 1.5)
    out = st_exp_euclidean(u, d)
    assert np.linalg.norm(out.T @ out - np.eye(2)) <= 1e-10
    assert np.linalg.norm(out - st_exp_canonical(u, d)) > 1e-4


def test_prepared_geodesic(rng):
    u = random_orthonormal(rng, 8, 3)
    d = _tangent(rng, u, 1.0)
    g = StiefelGeodesic(u, d)
    for t in (0.0, 0.25, 1.0, -0.5):
        np.testing.assert_allclose(g(t), st_exp_canonical(u, t * d), atol=1e-14)


def test_log_identity_pair(rng):
    u = random_orthonormal(rng, 9, 3)
    rep = st_log_canonical(u, u)
    assert rep.iterations == 0
    np.testing.assert_allclose(rep.delta, 0, atol=1e-14)


def test_log_round_trip(rng):
    u = random_orthonormal(rng, 20, 4)
    d = _tangent(rng, u, 0.05)
    rep = st_log_canonical(u, st_exp_canonical(u, d))
    assert np.linalg.norm(rep.delta - d) <= 1e-8
    assert rep.final_residual <= 1e-11
    w = u.T @ rep.delta
    assert np.linalg.norm(w + w.T) <= 1e-10


def test_log_contraction_near_pairs(rng):
    u, u2 = _near_pair(rng, 100, 10)
    rep = st_log_canonical(u, u2)
    h = rep.history
    assert rep.iterations <= 20
    assert all(b <= 0.5 * a for a, b in zip(h, h[1:]))
    np.testing.assert_allclose(st_exp_canonical(u, rep.delta), u2, atol=1e-8)


def test_log_no_convergence(rng):
    u = random_orthonormal(rng, 10, 3)
    u2 = st_exp_canonical(u, _tangent(rng, u, 1.5))
    with pytest.raises(NoConvergence) as info:
        st_log_canonical(u, u2, max_iter=1)
    assert info.value.max_iter == 1
    assert len(info.value.history) == 2


def test_dist(rng):
    u = random_orthonormal(rng, 6, 2)
    assert st_dist_canonical(u, u) == pytest.approx(0, abs=1e-14)
    x = random_orthonormal(rng, 5, 1)
    y = random_orthonormal(rng, 5, 1)
    assert st_dist_canonical(x, y) == pytest.approx(np.arccos((x.T @ y).item()), rel=1e-10)
    u2 = st_exp_canonical(u, _tangent(rng, u, 0.4))
    assert st_dist_canonical(u, u2) == pytest.approx(st_dist_canonical(u2, u), abs=1e-8)
    assert st_dist_canonical(u, u2) == pytest.approx(0.4, abs=1e-10)


def test_geodesic_constant_speed(rng):
    st = Stiefel(7, 3)
    u = st.random_point(rng)
    d = st.random_tangent(u, rng, 0.9)
    h = 1e-6
    for t in np.linspace(0, 1, 10):
        fd = (st.geodesic(u, d, t + h) - st.geodesic(u, d, t - h)) / (2 * h)
        x = st.geodesic(u, d, t)
        speed = np.sqrt(st_inner(x, fd, fd, "canonical"))
        assert speed == pytest.approx(0.9, rel=1e-4)


def test_stiefel_manifold_metrics(rng):
    st = Stiefel(5, 2)
    u = st.random_point(rng)
    with pytest.raises(UnsupportedMetric):
        st.log(u, u, "euclidean")
    with pytest.raises(UnsupportedMetric):
        st.exp(u, np.zeros((5, 2)), "natural")
    assert st.default_metric.value == "canonical"
