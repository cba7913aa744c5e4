"""Typed, validated front end over the manifold classes.

:class:`ManifoldPoint` and :class:`TangentVector` check the membership and
tangency predicates of their manifold on construction.  The functions below
dispatch to the owning manifold and wrap the results again.

Examples
--------
>>> import numpy as np
>>> from manifoldkit import api
>>> from manifoldkit.manifolds import Stiefel
>>> st = Stiefel(3, 1)
>>> p = api.ManifoldPoint(st, np.array([[1.0], [0.0], [0.0]]))
>>> v = api.project_tangent(p, np.array([[1.0], [2.0], [0.0]]))
>>> q = api.exp(p, v)
>>> round(api.dist(p, q), 12)
2.0
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BaseMismatch
from .kernels import MEMBERSHIP_TOL
from .manifolds.base import Manifold


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """A point on `manifold` given by its extrinsic representative `rep`."""

    manifold: Manifold
    rep: np.ndarray
    tol: float = field(default=MEMBERSHIP_TOL, repr=False)
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        rep = self.manifold._as_element(self.rep, "point")
        if self.validate:
            self.manifold.check_point(rep, self.tol)
        rep = rep.copy()
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    def same_as(self, other, tol=MEMBERSHIP_TOL):
        """Point equality; subspace equality on Gr."""
        return self.manifold == other.manifold and self.manifold.same_point(self.rep, other.rep, tol)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector `rep` at `base`."""

    base: ManifoldPoint
    rep: np.ndarray
    tol: float = field(default=MEMBERSHIP_TOL, repr=False)
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = self.base.manifold
        rep = m._as_element(self.rep, "tangent vector")
        if self.validate:
            m.check_tangent(self.base.rep, rep, self.tol)
        rep = rep.copy()
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    @property
    def manifold(self):
        return self.base.manifold

    def __mul__(self, t):
        return TangentVector(self.base, float(t) * self.rep, validate=False)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Diagnostics:
    """Residuals of the membership and tangency predicates."""

    manifold: str
    point_residual: float
    tangent_residual: float | None = None
    tol: float = MEMBERSHIP_TOL

    @property
    def ok(self):
        res = [self.point_residual]
        if self.tangent_residual is not None:
            res.append(self.tangent_residual)
        return all(r <= self.tol for r in res)


def _same_base(p, q):
    if p is q:
        return
    if p.manifold != q.manifold or not np.array_equal(p.rep, q.rep):
        raise BaseMismatch("tangent vector is attached to a different base point")


def _check_on(p, q):
    if p.manifold != q.manifold:
        raise BaseMismatch(f"points live on different manifolds: {p.manifold!r} vs {q.manifold!r}")


def inner(v, w, metric=None):
    _same_base(v.base, w.base)
    return v.manifold.inner(v.base.rep, v.rep, w.rep, metric)


def norm(v, metric=None):
    return v.manifold.norm(v.base.rep, v.rep, metric)


def exp(p, v, metric=None):
    _same_base(p, v.base)
    return ManifoldPoint(p.manifold, p.manifold.exp(p.rep, v.rep, metric))


def log(p, q, metric=None):
    _check_on(p, q)
    return TangentVector(p, p.manifold.log(p.rep, q.rep, metric))


def dist(p, q, metric=None):
    _check_on(p, q)
    return p.manifold.dist(p.rep, q.rep, metric)


def geodesic(p, v, t, metric=None):
    """``exp(p, t v)``."""
    _same_base(p, v.base)
    return ManifoldPoint(p.manifold, p.manifold.geodesic(p.rep, v.rep, t, metric))


def project_tangent(p, ambient):
    return TangentVector(p, p.manifold.project(p.rep, np.asarray(ambient, dtype=float)))


def zero_vector(p):
    return TangentVector(p, p.manifold.zero_vector(p.rep))


def check_point(manifold, x=None, tol=MEMBERSHIP_TOL):
    """Membership residual of `x` on `manifold` (or of a :class:`ManifoldPoint`)."""
    if isinstance(manifold, ManifoldPoint):
        manifold, x = manifold.manifold, manifold.rep
    x = manifold._as_element(x, "point")
    return Diagnostics(manifold.id, float(manifold.point_residual(x)), None, tol)


def check_tangent(manifold, x=None, v=None, tol=MEMBERSHIP_TOL):
    """Membership and tangency residuals.

    Accepts ``(manifold, x, v)`` with plain arrays, or a single
    :class:`TangentVector`.
    """
    if isinstance(manifold, TangentVector):
        manifold, x, v = manifold.manifold, manifold.base.rep, manifold.rep
    x = manifold._as_element(x, "point")
    v = manifold._as_element(v, "tangent vector")
    return Diagnostics(
        manifold.id,
        float(manifold.point_residual(x)),
        float(manifold.tangent_residual(x, v)),
        tol,
    )
