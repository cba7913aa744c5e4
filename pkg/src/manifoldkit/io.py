"""Text formats used by the command line tool.

Matrix files
    A header ``# manifold=<id> n=<n> p=<p>`` (optionally followed by
    ``kind=tangent``) and ``n`` rows of ``p`` whitespace separated reals,
    written with 17 significant digits so that doubles round-trip exactly.
    The id is one of GL, On, SPD, St, Gr, or R for an unconstrained matrix
    such as a snapshot matrix.

Manifests
    One sample per line, ``mu_1 [mu_2 ...] <path>``.  Relative paths are
    resolved against the manifest's directory; blank lines and lines starting
    with ``#`` are ignored.

Config
    A JSON object, see :class:`RunConfig`.
"""

import json
import os
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ParseError
from .manifolds import MANIFOLDS

#: id of unconstrained matrices (snapshot data)
RAW_ID = "R"
CONFIG_ENV = "MANIFOLDKIT_CONFIG"


@dataclass
class MatrixFile:
    manifold: str
    data: np.ndarray
    kind: str = "point"

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def p(self):
        return self.data.shape[1]


def format_matrix(x, manifold_id, kind="point"):
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    head = f"# manifold={manifold_id} n={n} p={p}"
    if kind != "point":
        head += f" kind={kind}"
    rows = (" ".join(f"{v:.17g}" for v in row) for row in x)
    return head + "\n" + "\n".join(rows) + "\n"


def atomic_write(path, text):
    """Write `text` to `path` through a temporary file and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_matrix(path, x, manifold_id, kind="point"):
    atomic_write(path, format_matrix(x, manifold_id, kind))


def parse_matrix(text, source="<string>"):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].lstrip().startswith("#"):
        raise ParseError(f"{source}: missing '# manifold=<id> n=<n> p=<p>' header")
    fields_ = {}
    for tok in lines[0].lstrip()[1:].split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise ParseError(f"{source}: malformed header token {tok!r}")
        fields_[key] = val
    try:
        mid = fields_["manifold"]
        n = int(fields_["n"])
        p = int(fields_["p"])
    except (KeyError, ValueError):
        raise ParseError(f"{source}: header needs manifold=, n= and p= fields") from None
    if mid != RAW_ID and mid not in MANIFOLDS:
        raise ParseError(f"{source}: unknown manifold id {mid!r}")
    if n < 1 or p < 1:
        raise ParseError(f"{source}: invalid dimensions n={n}, p={p}")
    kind = fields_.get("kind", "point")
    if kind not in ("point", "tangent"):
        raise ParseError(f"{source}: unknown kind {kind!r}")
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"{source}: header declares {n} rows, found {len(body)}")
    data = np.empty((n, p))
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != p:
            raise ParseError(f"{source}: row {i + 1} has {len(toks)} entries, expected {p}")
        try:
            data[i] = [float(t) for t in toks]
        except ValueError:
            raise ParseError(f"{source}: row {i + 1} contains a non-numeric entry") from None
    if not np.all(np.isfinite(data)):
        raise ParseError(f"{source}: matrix contains NaN or Inf")
    return MatrixFile(mid, data, kind)


def read_matrix(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_matrix(text, str(path))


def read_manifest(path):
    """Return ``(params, paths)`` with ``params`` a ``k x d`` array."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    params, paths = [], []
    d = None
    for lineno, ln in enumerate(text.splitlines(), 1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        toks = ln.split()
        if len(toks) < 2:
            raise ParseError(f"{path}:{lineno}: expected 'mu_1 [mu_2 ...] <path>'")
        try:
            mu = [float(t) for t in toks[:-1]]
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric parameter") from None
        if d is None:
            d = len(mu)
        elif len(mu) != d:
            raise ParseError(f"{path}:{lineno}: {len(mu)} parameters, previous lines have {d}")
        params.append(mu)
        p = Path(toks[-1])
        paths.append(p if p.is_absolute() else path.parent / p)
    if not params:
        raise ParseError(f"{path}: manifest lists no samples")
    return np.array(params), paths


@dataclass
class RunConfig:
    """Settings of a CLI run; all tolerances must be positive."""

    membership_tol: float = 1e-8
    roundtrip_tol: float = 1e-9
    karcher_tau: float = 1e-9
    max_iter: int = 200
    log_tau: float = 1e-11
    log_max_iter: int = 100
    scheme: object = "linear"
    metric: str | None = None
    base_point: object = 0
    step_rule: str = "backtracking"
    alpha0: object = 1.0

    def __post_init__(self):
        for name in ("membership_tol", "roundtrip_tol", "karcher_tau", "log_tau"):
            if not float(getattr(self, name)) > 0:
                raise ParseError(f"config: {name} must be positive")
        for name in ("max_iter", "log_max_iter"):
            if int(getattr(self, name)) < 1:
                raise ParseError(f"config: {name} must be at least 1")


def load_config(path=None):
    """Read a :class:`RunConfig` from `path` or ``$MANIFOLDKIT_CONFIG``."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ParseError(f"config {path} must contain a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ParseError(f"config {path}: unknown keys {', '.join(unknown)}")
    try:
        return RunConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"config {path}: {exc}") from None
