"""Matrix manifolds and a factory keyed by manifold id."""

from ..errors import DimensionMismatch, ParseError
from .base import Manifold, Metric
from .gl import GeneralLinear
from .grassmann import Grassmann
from .orthogonal import Orthogonal
from .spd import SPD
from .stiefel import Stiefel

MANIFOLDS = {
    "GL": GeneralLinear,
    "On": Orthogonal,
    "SPD": SPD,
    "St": Stiefel,
    "Gr": Grassmann,
}


def get_manifold(manifold_id, n, p=None):
    """Instantiate the manifold with the given id and dimensions.

    Square manifolds (GL, On, SPD) require ``p`` to be ``None`` or ``n``.
    """
    try:
        cls = MANIFOLDS[manifold_id]
    except KeyError:
        known = ", ".join(MANIFOLDS)
        raise ParseError(f"unknown manifold id {manifold_id!r} (known: {known})") from None
    if cls in (GeneralLinear, Orthogonal, SPD):
        if p is not None and int(p) != int(n):
            raise DimensionMismatch(f"{manifold_id} requires p == n, got n={n}, p={p}")
        return cls(n)
    return cls(n, n if p is None else p)


__all__ = [
    "MANIFOLDS",
    "GeneralLinear",
    "Grassmann",
    "Manifold",
    "Metric",
    "Orthogonal",
    "SPD",
    "Stiefel",
    "get_manifold",
]
