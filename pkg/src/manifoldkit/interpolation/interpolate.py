"""Interpolation of manifold-valued samples.

Three methods are provided:

* :func:`interp_normal_coords` maps all samples to the tangent space at one
  base sample, interpolates there and maps back;
* :func:`interp_geodesic` joins consecutive samples of a 1-d parameter by
  geodesic segments;
* :func:`karcher_interpolate` returns the weighted Riemannian center of the
  samples, found by gradient descent.
"""

from dataclasses import dataclass, field

import numpy as np

from ..api import ManifoldPoint
from ..errors import (
    DecompositionFailed,
    DomainError,
    LogDomainFailure,
    NoConvergence,
    OutOfRange,
    WeightSchemeUnsupported,
)
from .weights import as_target, make_scheme

_LOG_FAILURES = (DomainError, NoConvergence, DecompositionFailed)

#: halvings allowed per Karcher step before giving up
MAX_HALVINGS = 30


def _log(manifold, x, y, index, metric):
    try:
        return manifold.log(x, y, metric)
    except _LOG_FAILURES as exc:
        raise LogDomainFailure(
            f"logarithm towards sample {index} is not defined: {exc}", index=index
        ) from exc


def _medoid(samples, metric):
    """Index minimizing the largest distance to the other samples."""
    m = samples.manifold
    pts = samples.points
    k = len(pts)
    worst = np.zeros(k)
    for i in range(k):
        for j in range(i + 1, k):
            try:
                d = m.dist(pts[i], pts[j], metric)
            except _LOG_FAILURES:
                d = np.inf
            worst[i] = max(worst[i], d)
            worst[j] = max(worst[j], d)
    return int(np.argmin(worst))


def interp_normal_coords(
    samples, mu_star, scheme="linear", base_index=0, metric=None, full_output=False
):
    """Interpolate in normal coordinates centred at one sample.

    Parameters
    ----------
    samples : SampleSet
    mu_star : float or array_like
        Target parameter.
    scheme : WeightScheme, str or mapping
        Weight scheme, see :func:`make_scheme`.
    base_index : int or "medoid"
        Sample used as the base point.
    metric : str, optional
        Metric tag; the manifold default if omitted.
    full_output : bool
        Also return a dict with the base index and the weights.

    Returns
    -------
    ManifoldPoint, or (ManifoldPoint, dict)

    Raises
    ------
    LogDomainFailure
        If the logarithm from the base point to some sample fails; the
        exception's ``index`` names the sample.
    """
    scheme = make_scheme(scheme)
    m = samples.manifold
    if base_index == "medoid":
        base_index = _medoid(samples, metric)
    base_index = int(base_index)
    if not 0 <= base_index < len(samples):
        raise IndexError(f"base index {base_index} out of range")
    w = scheme.weights(samples.params, mu_star)
    base = samples.points[base_index]
    v = np.zeros(m.shape)
    for j, (wj, pj) in enumerate(zip(w, samples.points)):
        if j == base_index or wj == 0.0:
            continue
        v += wj * _log(m, base, pj, j, metric)
    out = ManifoldPoint(m, m.exp(base, v, metric))
    if full_output:
        return out, {"base_index": base_index, "weights": w}
    return out


def interp_geodesic(samples, mu_star, metric=None, full_output=False):
    """Piecewise geodesic interpolation for a scalar parameter.

    Raises
    ------
    OutOfRange
        If `mu_star` lies outside the sampled parameter range.
    LogDomainFailure
        If consecutive samples cannot be joined.
    """
    if samples.dim != 1:
        raise WeightSchemeUnsupported("geodesic interpolation needs a scalar parameter")
    m = samples.manifold
    mu = float(as_target(mu_star, 1)[0])
    x = samples.params[:, 0]
    order = np.argsort(x)
    xs = x[order]
    if not xs[0] <= mu <= xs[-1]:
        raise OutOfRange(f"mu*={mu:g} is outside the sampled range [{xs[0]:g}, {xs[-1]:g}]")
    hit = np.flatnonzero(xs == mu)
    if hit.size:
        i = int(order[hit[0]])
        out = ManifoldPoint(m, samples.points[i])
        info = {"segment": (i, i), "t": 0.0}
    else:
        j = int(np.searchsorted(xs, mu) - 1)
        i0, i1 = int(order[j]), int(order[j + 1])
        t = (mu - xs[j]) / (xs[j + 1] - xs[j])
        p0 = samples.points[i0]
        v = _log(m, p0, samples.points[i1], i1, metric)
        out = ManifoldPoint(m, m.geodesic(p0, v, t, metric))
        info = {"segment": (i0, i1), "t": float(t)}
    if full_output:
        return out, info
    return out


@dataclass
class KarcherReport:
    """Diagnostics of :func:`karcher_interpolate`.

    Attributes
    ----------
    converged : bool
        Whether the gradient norm reached `tau`.
    iterations : int
        Number of accepted steps.
    grad_norms : list of float
        Gradient norm at every iterate, the last one belonging to the result.
    steps : list of float
        Accepted step lengths.
    weights : ndarray
        Weights ``phi_i(mu*)``.
    initial_index : int or None
        Sample used as starting point, ``None`` for a caller-provided start.
    message : str
    """

    converged: bool
    iterations: int
    grad_norms: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    weights: np.ndarray = None
    initial_index: int = None
    message: str = ""

    @property
    def grad_norm(self):
        return self.grad_norms[-1] if self.grad_norms else float("nan")


def _objective(m, q, pts, w, metric):
    logs = []
    f = 0.0
    for i, (wi, pi) in enumerate(zip(w, pts)):
        if wi == 0.0:
            logs.append(None)
            continue
        li = _log(m, q, pi, i, metric)
        logs.append(li)
        f += 0.5 * wi * m.inner(q, li, li, metric)
    return f, logs


def karcher_interpolate(
    samples,
    mu_star,
    scheme="linear",
    q0=None,
    tau=1e-9,
    max_iter=200,
    step_rule="backtracking",
    alpha0=1.0,
    metric=None,
    strict=True,
):
    """Weighted Riemannian center ``argmin_q 1/2 sum_i phi_i dist(q, p_i)^2``.

    Iterates ``q <- Exp_q(-alpha grad f(q))`` with
    ``grad f(q) = -sum_i phi_i Log_q(p_i)`` until ``||grad f(q)||_q <= tau``.

    Parameters
    ----------
    samples : SampleSet
    mu_star : float or array_like
    scheme : WeightScheme, str or mapping
    q0 : array_like or ManifoldPoint, optional
        Starting point; defaults to the sample with the largest weight.
    tau : float
        Gradient norm tolerance.
    max_iter : int
    step_rule : {"backtracking", "fixed"}
        ``"backtracking"`` starts every step at `alpha0` and halves it (at most
        30 times) until the objective does not increase; ``"fixed"`` always
        takes `alpha0`.
    alpha0 : float or "auto"
        Initial step; ``"auto"`` uses ``1 / sum_i phi_i``.
    metric : str, optional
    strict : bool
        Raise :class:`NoConvergence` when `tau` is not reached; otherwise
        return the last iterate with ``report.converged = False``.

    Returns
    -------
    (ManifoldPoint, KarcherReport)

    Notes
    -----
    Weights may be negative away from the nodes, in which case the objective
    need not have a unique minimizer.
    """
    if step_rule not in ("backtracking", "fixed"):
        raise ValueError(f"unknown step rule {step_rule!r}")
    scheme = make_scheme(scheme)
    m = samples.manifold
    pts = samples.points
    w = np.asarray(scheme.weights(samples.params, mu_star), dtype=float)
    if alpha0 == "auto":
        sw = float(w.sum())
        alpha0 = 1.0 / sw if sw > 0 else 1.0
    alpha0 = float(alpha0)
    if q0 is None:
        start = int(np.argmax(w))
        q = pts[start]
    else:
        start = None
        q = q0.rep if isinstance(q0, ManifoldPoint) else m.check_point(q0)

    report = KarcherReport(False, 0, weights=w, initial_index=start)
    f, logs = _objective(m, q, pts, w, metric)
    for it in range(max_iter + 1):
        step = np.zeros(m.shape)
        for wi, li in zip(w, logs):
            if li is not None:
                step += wi * li
        gnorm = m.norm(q, step, metric)
        report.grad_norms.append(gnorm)
        if gnorm <= tau:
            report.converged = True
            report.message = "gradient norm below tolerance"
            break
        if it == max_iter:
            report.message = f"no convergence in {max_iter} iterations"
            break
        alpha = alpha0
        accepted = False
        for _ in range(MAX_HALVINGS + 1):
            trial = m.exp(q, alpha * step, metric)
            f_trial, logs_trial = _objective(m, trial, pts, w, metric)
            if step_rule == "fixed" or f_trial <= f + 1e-12 * (1.0 + abs(f)):
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            report.message = "line search failed to decrease the objective"
            break
        q, f, logs = trial, f_trial, logs_trial
        report.steps.append(alpha)
        report.iterations += 1

    if not report.converged and strict:
        raise NoConvergence(
            f"Karcher iteration stopped: {report.message} "
            f"(gradient norm {report.grad_norm:.3e}, tau {tau:g})",
            max_iter=max_iter,
            history=report.grad_norms,
            last=q,
        )
    return ManifoldPoint(m, q, validate=False), report
