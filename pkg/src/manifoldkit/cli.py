"""Command line front end.

Subcommands
-----------
exp, log, dist
    Riemannian exponential, logarithm and distance on matrix files.
interp
    Interpolate the samples listed in a manifest at one or more parameters.
extrapolate
    Geodesic extrapolation from a point and a tangent, or of a POD basis from
    a snapshot matrix and its derivative.

Exit codes: 0 success, 2 unreadable or malformed input, 3 domain or
validation error, 4 an iteration did not converge.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .api import ManifoldPoint
from .errors import BaseMismatch, ManifoldError, NoConvergence, ParseError
from .interpolation import (
    SampleSet,
    extrapolate_geodesic,
    extrapolate_pod_basis,
    interp_geodesic,
    interp_normal_coords,
    karcher_interpolate,
)
from .io import RAW_ID, atomic_write, format_matrix, load_config, read_manifest, read_matrix
from .manifolds import Stiefel, get_manifold

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NO_CONVERGENCE = 4

FORMATS = """\
file formats:
  matrix file   '# manifold=<id> n=<n> p=<p> [kind=tangent]' followed by n rows
                of p reals; ids GL, On, SPD, St, Gr, and R for unconstrained
                snapshot matrices. Output uses 17 significant digits.
  manifest      one sample per line: 'mu_1 [mu_2 ...] <matrix file>'; relative
                paths are resolved against the manifest directory.
  --mu-star     a real, or comma separated reals for d > 1; repeat the flag to
                evaluate several parameters (then --out must contain '{i}').
  config        JSON object read from --config or $MANIFOLDKIT_CONFIG with keys
                membership_tol, roundtrip_tol, karcher_tau, max_iter, log_tau,
                log_max_iter, scheme, metric, base_point, step_rule, alpha0.

exit codes: 0 ok, 2 parse error, 3 domain error, 4 no convergence.
"""


def exit_code(exc):
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, NoConvergence):
        return EXIT_NO_CONVERGENCE
    return EXIT_DOMAIN


def _fmt(x):
    return repr(float(x))


def _manifold_for(mf, cfg):
    if mf.manifold == RAW_ID:
        raise ParseError("expected a manifold point, got an unconstrained matrix (id R)")
    m = get_manifold(mf.manifold, mf.n, mf.p)
    if isinstance(m, Stiefel):
        m = Stiefel(m.n, m.p, cfg.log_tau, cfg.log_max_iter)
    return m


def _load_point(path, cfg, validate):
    mf = read_matrix(path)
    if mf.kind != "point":
        raise ParseError(f"{path}: expected a point file, got kind={mf.kind}")
    m = _manifold_for(mf, cfg)
    if validate:
        m.check_point(mf.data, cfg.membership_tol)
    return m, mf.data


def _load_tangent(path, m, base, cfg, validate):
    mf = read_matrix(path)
    if mf.manifold != m.id or mf.data.shape != m.shape:
        raise BaseMismatch(
            f"{path}: tangent file is for {mf.manifold} {mf.data.shape}, base is {m.id} {m.shape}"
        )
    if validate:
        m.check_tangent(base, mf.data, cfg.membership_tol)
    return mf.data


def _emit(out, text):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def _metric(args, cfg):
    return args.metric if args.metric is not None else cfg.metric


def cmd_exp(args, cfg):
    m, x = _load_point(args.base, cfg, args.validate)
    v = _load_tangent(args.tangent, m, x, cfg, args.validate)
    y = m.exp(x, v, _metric(args, cfg))
    _emit(args.out, format_matrix(y, m.id))


def cmd_log(args, cfg):
    m, x = _load_point(args.base, cfg, args.validate)
    m2, y = _load_point(args.target, cfg, args.validate)
    if m2 != m:
        raise BaseMismatch(f"points live on {m!r} and {m2!r}")
    v = m.log(x, y, _metric(args, cfg))
    _emit(args.out, format_matrix(v, m.id, kind="tangent"))


def cmd_dist(args, cfg):
    m, x = _load_point(args.a, cfg, args.validate)
    m2, y = _load_point(args.b, cfg, args.validate)
    if m2 != m:
        raise BaseMismatch(f"points live on {m!r} and {m2!r}")
    sys.stdout.write(_fmt(m.dist(x, y, _metric(args, cfg))) + "\n")


def _parse_mu(text):
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise ParseError(f"invalid --mu-star value {text!r}") from None


def _out_paths(out, count):
    if count == 1:
        return [out]
    if out is None or "{i}" not in out:
        raise ParseError("several --mu-star values need an --out template containing '{i}'")
    return [out.replace("{i}", str(i)) for i in range(count)]


def _interp_one(samples, mu, args, cfg):
    """Evaluate one parameter; returns (point or None, report lines, error)."""
    metric = _metric(args, cfg)
    scheme = args.scheme if args.scheme is not None else cfg.scheme
    lines = [
        f"method={args.method}",
        f"manifold={samples.manifold.id}",
        f"n={samples.manifold.n}",
        f"p={samples.manifold.p}",
        f"samples={len(samples)}",
        "mu_star=" + ",".join(_fmt(v) for v in mu),
    ]
    try:
        if args.method == "tangent":
            base = args.base if args.base is not None else cfg.base_point
            pt, info = interp_normal_coords(samples, mu, scheme, base, metric, full_output=True)
            lines.append(f"base_index={info['base_index']}")
            lines.append("weights=" + ",".join(_fmt(w) for w in info["weights"]))
        elif args.method == "geodesic":
            pt, info = interp_geodesic(samples, mu, metric, full_output=True)
            lines.append(f"segment={info['segment'][0]},{info['segment'][1]}")
            lines.append(f"t={_fmt(info['t'])}")
        else:
            pt, rep = karcher_interpolate(
                samples,
                mu,
                scheme,
                tau=cfg.karcher_tau,
                max_iter=cfg.max_iter,
                step_rule=cfg.step_rule,
                alpha0=cfg.alpha0,
                metric=metric,
            )
            lines.append(f"initial_index={rep.initial_index}")
            lines.append("weights=" + ",".join(_fmt(w) for w in rep.weights))
            lines.append(f"iterations={rep.iterations}")
            lines.append(f"grad_norm={_fmt(rep.grad_norm)}")
            lines.append(f"tau={_fmt(cfg.karcher_tau)}")
            lines.append(f"converged={str(rep.converged).lower()}")
    except ManifoldError as exc:
        lines.append("status=error")
        lines.append(f"error={type(exc).__name__}")
        if isinstance(exc, NoConvergence) and exc.history:
            lines.append(f"iterations={len(exc.history) - 1}")
            lines.append(f"grad_norm={_fmt(exc.history[-1])}")
        return None, lines, exc
    lines.append(f"membership_residual={_fmt(samples.manifold.point_residual(pt.rep))}")
    lines.append("status=ok")
    return pt, lines, None


def cmd_interp(args, cfg):
    params, paths = read_manifest(args.manifest)
    loaded = [_load_point(p, cfg, args.validate) for p in paths]
    m = loaded[0][0]
    for p, (mi, _) in zip(paths, loaded):
        if mi != m:
            raise BaseMismatch(f"{p}: sample lives on {mi!r}, first sample on {m!r}")
    samples = SampleSet(m, params, [x for _, x in loaded], validate=False)
    mus = [_parse_mu(t) for t in args.mu_star]
    outs = _out_paths(args.out, len(mus))

    def run(i):
        pt, lines, err = _interp_one(samples, mus[i], args, cfg)
        if pt is not None:
            _emit(outs[i], format_matrix(pt.rep, m.id))
        if outs[i] not in (None, "-"):
            atomic_write(outs[i] + ".report", "\n".join(lines) + "\n")
        return err

    if args.jobs > 1 and len(mus) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            errors = list(pool.map(run, range(len(mus))))
    else:
        errors = [run(i) for i in range(len(mus))]
    failed = [e for e in errors if e is not None]
    if failed:
        raise max(failed, key=exit_code)


def cmd_extrapolate(args, cfg):
    mu = float(args.mu_star)
    if args.snapshot is not None:
        if args.snapshot_dot is None or args.rank is None:
            raise ParseError("POD mode needs --snapshot, --snapshot-dot and --rank")
        s = read_matrix(args.snapshot).data
        sd = read_matrix(args.snapshot_dot).data
        res = extrapolate_pod_basis(s, sd, args.rank, mu)
        _emit(args.out, format_matrix(res.basis, "St"))
        return
    if args.base is None or args.tangent is None:
        raise ParseError("give either --base and --tangent, or --snapshot/--snapshot-dot/--rank")
    m, x = _load_point(args.base, cfg, args.validate)
    v = _load_tangent(args.tangent, m, x, cfg, args.validate)
    p0 = ManifoldPoint(m, x, validate=False)
    y = extrapolate_geodesic(p0, v, mu, _metric(args, cfg))
    _emit(args.out, format_matrix(y.rep, m.id))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="manifoldkit",
        description="Riemannian exp/log/dist and manifold-valued interpolation on matrix files.",
        epilog=FORMATS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON config file (default: $MANIFOLDKIT_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--metric", help="metric tag (default: manifold default or config)")
        p.add_argument(
            "--no-validate",
            dest="validate",
            action="store_false",
            help="skip membership and tangency checks of the inputs",
        )
        if out:
            p.add_argument("-o", "--out", help="output matrix file (default: standard output)")

    p = sub.add_parser("exp", help="Riemannian exponential")
    p.add_argument("base")
    p.add_argument("tangent")
    common(p)
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("log", help="Riemannian logarithm")
    p.add_argument("base")
    p.add_argument("target")
    common(p)
    p.set_defaults(func=cmd_log)

    p = sub.add_parser("dist", help="Riemannian distance, printed to standard output")
    p.add_argument("a")
    p.add_argument("b")
    common(p, out=False)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("interp", help="interpolate manifest samples")
    p.add_argument("manifest")
    p.add_argument("--mu-star", action="append", required=True)
    p.add_argument("--method", choices=("tangent", "geodesic", "karcher"), default="tangent")
    p.add_argument("--scheme", choices=("linear", "lagrange", "rbf"))
    p.add_argument("--base", help="base sample index or 'medoid' (tangent method)")
    p.add_argument("--jobs", type=int, default=1, help="evaluate parameters in parallel")
    common(p)
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("extrapolate", help="geodesic or POD basis extrapolation")
    p.add_argument("--base")
    p.add_argument("--tangent")
    p.add_argument("--snapshot")
    p.add_argument("--snapshot-dot")
    p.add_argument("--rank", type=int)
    p.add_argument("--mu-star", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_extrapolate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "base", None) not in (None, "medoid") and args.command == "interp":
        try:
            args.base = int(args.base)
        except ValueError:
            parser.error(f"--base must be an integer or 'medoid', got {args.base!r}")
    try:
        cfg = load_config(args.config)
        args.func(args, cfg)
    except (ManifoldError, ValueError, IndexError) as exc:
        code = exit_code(exc)
        msg = str(exc).replace("\n", " ")
        sys.stderr.write(f"manifoldkit: error={type(exc).__name__} exit={code}: {msg}\n")
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
