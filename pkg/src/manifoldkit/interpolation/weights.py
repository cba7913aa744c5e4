"""Weight schemes for interpolation in tangent space.

A scheme maps the sample parameters ``mu_1, ..., mu_k`` (a ``k x d`` array)
and a target ``mu*`` to weights ``phi_i(mu*)``.  Every scheme is cardinal,
``phi_i(mu_j) = delta_ij``, which makes all interpolators exact at the nodes.
"""

import numpy as np

from ..errors import WeightSchemeUnsupported


def as_params(params):
    """Parameters as a ``k x d`` float array; 1-d input means ``d = 1``."""
    a = np.asarray(params, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] == 0:
        raise ValueError(f"parameters must be a nonempty k x d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("parameters contain NaN or Inf")
    return a


def as_target(mu, d):
    m = np.atleast_1d(np.asarray(mu, dtype=float)).ravel()
    if m.shape != (d,):
        raise ValueError(f"target parameter has {m.size} entries, expected {d}")
    return m


class WeightScheme:
    """Base class; subclasses implement :meth:`weights`."""

    kind = ""

    def weights(self, params, mu):
        raise NotImplementedError

    def __call__(self, params, mu):
        return self.weights(params, mu)

    def __repr__(self):
        return f"{type(self).__name__}()"


def _one_dim(params, mu, kind):
    p = as_params(params)
    if p.shape[1] != 1:
        raise WeightSchemeUnsupported(
            f"{kind} weights need one-dimensional parameters, got d={p.shape[1]}"
        )
    return p[:, 0], float(as_target(mu, 1)[0])


class LinearWeights1D(WeightScheme):
    """Piecewise linear hat functions over the sorted nodes.

    Outside the node range the end segment is extended linearly, so weights
    there can be negative.
    """

    kind = "linear"

    def weights(self, params, mu):
        x, m = _one_dim(params, mu, self.kind)
        k = x.size
        w = np.zeros(k)
        if k == 1:
            w[0] = 1.0
            return w
        order = np.argsort(x)
        xs = x[order]
        exact = np.flatnonzero(xs == m)
        if exact.size:
            w[order[exact[0]]] = 1.0
            return w
        j = int(np.clip(np.searchsorted(xs, m) - 1, 0, k - 2))
        t = (m - xs[j]) / (xs[j + 1] - xs[j])
        w[order[j]] = 1.0 - t
        w[order[j + 1]] = t
        return w


class LagrangeWeights1D(WeightScheme):
    """Lagrange basis polynomials ``prod_{j != i} (mu - mu_j) / (mu_i - mu_j)``."""

    kind = "lagrange"

    def weights(self, params, mu):
        x, m = _one_dim(params, mu, self.kind)
        k = x.size
        w = np.ones(k)
        for i in range(k):
            for j in range(k):
                if j != i:
                    w[i] *= (m - x[j]) / (x[i] - x[j])
        return w


class RBFWeights(WeightScheme):
    """Cardinal radial basis function weights for scattered parameters.

    Parameters
    ----------
    kernel : {"gaussian", "thin_plate"}
        ``exp(-(eps r)^2)`` or ``r^2 log r``.
    epsilon : float
        Shape parameter of the Gaussian kernel.
    normalize : bool
        Rescale Gaussian weights to sum to one.

    Notes
    -----
    The weights solve ``K phi = k(mu)`` with ``K_ij = kernel(|mu_i - mu_j|)``.
    The thin-plate kernel is only conditionally positive definite, so its
    system is augmented with linear polynomials; those weights sum to one and
    reproduce affine functions of ``mu``.
    """

    kind = "rbf"

    def __init__(self, kernel="gaussian", epsilon=1.0, normalize=False):
        if kernel not in ("gaussian", "thin_plate"):
            raise WeightSchemeUnsupported(f"unknown RBF kernel {kernel!r}")
        if not epsilon > 0:
            raise ValueError("epsilon must be positive")
        self.kernel = kernel
        self.epsilon = float(epsilon)
        self.normalize = bool(normalize)

    def __repr__(self):
        return (
            f"RBFWeights(kernel={self.kernel!r}, epsilon={self.epsilon}, "
            f"normalize={self.normalize})"
        )

    def _phi(self, r):
        if self.kernel == "gaussian":
            return np.exp(-((self.epsilon * r) ** 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = r**2 * np.log(r)
        return np.where(r > 0, out, 0.0)

    def weights(self, params, mu):
        p = as_params(params)
        m = as_target(mu, p.shape[1])
        k, d = p.shape
        exact = np.flatnonzero(np.all(p == m, axis=1))
        if exact.size:
            w = np.zeros(k)
            w[exact[0]] = 1.0
            return w
        kmat = self._phi(np.linalg.norm(p[:, None, :] - p[None, :, :], axis=2))
        rhs = self._phi(np.linalg.norm(p - m, axis=1))
        try:
            if self.kernel == "gaussian":
                w = np.linalg.solve(kmat, rhs)
                if self.normalize:
                    w = w / w.sum()
                return w
            poly = np.hstack([np.ones((k, 1)), p])
            full = np.block([[kmat, poly], [poly.T, np.zeros((d + 1, d + 1))]])
            sol = np.linalg.solve(full, np.concatenate([rhs, [1.0], m]))
        except np.linalg.LinAlgError as exc:
            raise WeightSchemeUnsupported(
                f"RBF system is singular for these nodes ({exc}); thin-plate "
                "splines need at least d + 1 affinely independent nodes"
            ) from None
        return sol[:k]


def make_scheme(spec):
    """Build a scheme from a name or a config mapping.

    Accepted forms are ``"linear"``, ``"lagrange"``, ``"rbf"`` or a mapping
    ``{"kind": "rbf", "kernel": ..., "epsilon": ..., "normalize": ...}``.
    """
    if isinstance(spec, WeightScheme):
        return spec
    if isinstance(spec, str):
        spec = {"kind": spec}
    spec = dict(spec)
    kind = spec.pop("kind", "linear")
    if kind == "linear":
        return LinearWeights1D()
    if kind == "lagrange":
        return LagrangeWeights1D()
    if kind == "rbf":
        return RBFWeights(**spec)
    raise WeightSchemeUnsupported(f"unknown weight scheme {kind!r}")
