import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rot(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_orthonormal(rng, n, p):
    q, r = np.linalg.qr(rng.standard_normal((n, p)))
    return q * np.sign(np.diag(r))


def random_spd(rng, n, shift=1.0):
    b = rng.standard_normal((n, n))
    return b.T @ b + shift * np.eye(n)


def random_skew(rng, n, scale=1.0):
    a = rng.standard_normal((n, n))
    return scale * (a - a.T) / 2


def series_exp(x, terms=30):
    """Truncated power series of the matrix exponential."""
    out = np.eye(x.shape[0])
    term = np.eye(x.shape[0])
    for k in range(1, terms):
        term = term @ x / k
        out = out + term
    return out


def write_cli_corpus(root, seed=7):
    """Write a small fixed-seed set of CLI input files under `root`."""
    from manifoldkit.io import write_matrix
    from manifoldkit.manifolds import Grassmann, Stiefel

    rng = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    st = Stiefel(6, 2)
    u = st.random_point(rng)
    v = st.random_tangent(u, rng, 0.4)
    write_matrix(root / "u.txt", u, "St")
    write_matrix(root / "v.txt", v, "St", kind="tangent")
    write_matrix(root / "zero.txt", np.zeros((6, 2)), "St", kind="tangent")
    write_matrix(root / "u2.txt", st.exp(u, v), "St")
    a, b = random_spd(rng, 3), random_spd(rng, 3)
    write_matrix(root / "a.txt", a, "SPD")
    write_matrix(root / "b.txt", b, "SPD")
    gr = Grassmann(6, 2)
    g0 = gr.random_point(rng)
    gv = gr.random_tangent(g0, rng, 0.8)
    lines = []
    for i, t in enumerate((0.0, 0.5, 1.0)):
        write_matrix(root / f"g{i}.txt", gr.exp(g0, t * gv), "Gr")
        lines.append(f"{t} g{i}.txt")
    (root / "gr.manifest").write_text("\n".join(lines) + "\n")
    lines = []
    for i, mu in enumerate(((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))):
        write_matrix(root / f"s{i}.txt", random_spd(rng, 3), "SPD")
        lines.append(f"{mu[0]} {mu[1]} s{i}.txt")
    (root / "spd.manifest").write_text("\n".join(lines) + "\n")
    s = rng.standard_normal((20, 5)) @ np.diag([9.0, 7.0, 5.0, 3.0, 1.0])
    write_matrix(root / "snap.txt", s, "R")
    write_matrix(root / "snapdot.txt", rng.standard_normal((20, 5)), "R")
    return root


def golden_run(corpus, out):
    """Run a fixed set of CLI commands on `corpus`; return ``{name: bytes}``."""
    from manifoldkit.cli import main

    def run(*argv):
        return main([str(a) for a in argv])

    out.mkdir()
    run("log", corpus / "u.txt", corpus / "u2.txt", "-o", out / "log.txt")
    run("exp", corpus / "a.txt", corpus / "b.txt", "--no-validate", "-o", out / "exp.txt")
    run("interp", corpus / "spd.manifest", "--method", "karcher", "--scheme", "rbf",
        "--mu-star", "0.3,0.3", "-o", out / "karcher.txt")
    run("interp", corpus / "gr.manifest", "--mu-star", "0.7", "-o", out / "tangent.txt")
    run("extrapolate", "--snapshot", corpus / "snap.txt", "--snapshot-dot",
        corpus / "snapdot.txt", "--rank", "2", "--mu-star", "0.5", "-o", out / "pod.txt")
    return {p.name: p.read_bytes() for p in sorted(out.iterdir())}


#: acceptance criterion -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
