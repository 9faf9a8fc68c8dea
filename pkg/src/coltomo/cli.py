"""Batch command-line interface: ``coltomo <subcommand> [options]``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import binary_pauli as bp
from . import collective_recon as cr
from . import dicke_tomo as dt
from . import special_fn as sf
from .errors import TomographyError
from .io import MatrixFile, write_json, write_table
from .phase_space import DEFAULT_XI, FiducialState, q_symbol
from .sampling import random_symmetric_density
from .verify import DEFAULT_TOLERANCES, PROFILES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    n_qubits: int = 2
    xi: complex = DEFAULT_XI
    seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out_dir: Path = Path(".")
    fmt: str = "csv"

    def to_json(self) -> dict:
        # the output directory is left out: it does not affect any result
        d = asdict(self)
        d.pop("out_dir")
        d["xi"] = [self.xi.real, self.xi.imag]
        return d

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


class UsageError(Exception):
    pass


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    if name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"unknown tolerance {name!r}; known: {', '.join(DEFAULT_TOLERANCES)}")
    try:
        tol = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name} is not a number: {value!r}") from None
    if not tol >= 0:
        raise argparse.ArgumentTypeError(f"tolerance {name} must be non-negative")
    return name, tol


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--n", type=int, default=None, help="number of qubits")
    g.add_argument("--seed", type=_seed, default=0, help="RNG seed (64-bit)")
    g.add_argument("--xi-re", type=float, default=DEFAULT_XI.real, help="real part of the fiducial xi")
    g.add_argument("--xi-im", type=float, default=DEFAULT_XI.imag, help="imaginary part of the fiducial xi")
    g.add_argument("--out", type=Path, default=Path("."), help="output directory")
    g.add_argument("--format", choices=("csv", "json"), default="csv", help="format of tabular outputs")
    g.add_argument("--tolerance", type=_tolerance, action="append", default=[], metavar="NAME=VALUE",
                   help=f"override a tolerance ({', '.join(f'{k}={v:g}' for k, v in DEFAULT_TOLERANCES.items())})")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="coltomo", description="Tomography of N qubits from collective measurements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the invariant checks at the configured N")
    p.add_argument("--profile", choices=PROFILES, default="full")
    p.add_argument("--samples", type=int, default=5, help="random states per sampled check")

    p = sub.add_parser("reconstruct", parents=[common], help="reconstruct a density matrix from its ideal data")
    p.add_argument("input", type=Path, help="matrix file (JSON)")
    p.add_argument("--mode", choices=("collective", "dicke"), default="collective")

    p = sub.add_parser("fidelity-sweep", parents=[common], help="reconstruction fidelity of a state family")
    p.add_argument("family", choices=("2q", "3q"))
    p.add_argument("--points", type=int, default=50, help="grid points per swept parameter")
    p.add_argument("--resolution", type=int, default=16, help="3q: grid points per averaged phase")
    p.add_argument("--measure", choices=("block", "overlap"), default="block", help="3q fidelity measure")

    p = sub.add_parser("dicke", parents=[common], help="symmetric-subspace protocol: p-table, reconstruction, rank")
    p.add_argument("input", type=Path, nargs="?", help="symmetric density matrix in the Dicke basis (default: random)")

    p = sub.add_parser("special-fn", parents=[common], help="dump a table of g, f or psi")
    p.add_argument("table", choices=("g", "f", "psi"))
    p.add_argument("--closed-form", action="store_true", help="evaluate through the finite-sum forms")
    return parser


def config_from_args(args) -> RunConfig:
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(dict(args.tolerance))
    n = 2 if args.n is None else args.n
    return RunConfig(n, complex(args.xi_re, args.xi_im), args.seed, tolerances, args.out, args.format)


def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``; equals ``<psi|sigma|psi>`` for pure ``rho``."""
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    root = (vecs * np.sqrt(_drop_noise(vals))) @ vecs.conj().T
    inner = root @ sigma @ root
    inner_vals = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    return float(np.sqrt(_drop_noise(inner_vals)).sum() ** 2)


def _drop_noise(vals: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    # rounding-level eigenvalues would otherwise add ~1e-8 after the square root
    return np.where(vals > rel * max(vals.max(), 0.0), vals, 0.0)


def _metrics(truth: np.ndarray, rec: np.ndarray, mode: str, n: int) -> dict:
    herm = (rec + rec.conj().T) / 2
    return {
        "mode": mode,
        "N": n,
        "fidelity": uhlmann_fidelity(truth, herm),
        "trace": float(np.trace(rec).real),
        "min_eigenvalue": float(np.linalg.eigvalsh(herm).min()),
        "max_abs_error": float(np.abs(rec - truth).max()),
    }


def _triple_rows(n: int, values) -> list[list]:
    return [[t.m, t.n, t.k, float(np.real(values[t]))] for t in bp.enumerate_triples(n)]


# ------------------------------------------------------------------ commands


def cmd_verify(cfg: RunConfig, profile: str = "full", samples: int = 5) -> int:
    results, report = run_suite(cfg.n_qubits, cfg.xi, cfg.seed, cfg.tolerances, profile, samples)
    ok = all(r.passed for r in results)
    payload = {
        "config": cfg.to_json(),
        "profile": profile,
        "checks": [r.to_json() for r in results],
        "all_pass": ok,
    }
    if report is not None:
        payload["rank_report"] = report
    write_json(cfg.out_dir / "verify_report.json", payload)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.check_name} N={r.n_qubits} max_error={r.max_error:.3g}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reconstruct(cfg: RunConfig, path: Path, mode: str, n_given: bool) -> int:
    rho = MatrixFile.load(path).matrix
    if mode == "collective":
        n = rho.shape[0].bit_length() - 1
        if n_given and rho.shape[0] != 1 << cfg.n_qubits:
            raise UsageError(f"matrix of dim {rho.shape[0]} does not match --n {cfg.n_qubits}")
        exps = cr.collective_expectations(rho)
        rec = cr.reconstruct_collective(exps)
        qt = cr.project_q(q_symbol(rho, FiducialState(n, cfg.xi)))
        write_table(cfg.out_dir / "q_tilde", ["m", "n", "k", "value"], _triple_rows(n, qt.values), cfg.fmt)
    else:
        n = rho.shape[0] - 1
        if n_given and n != cfg.n_qubits:
            raise UsageError(f"matrix of dim {rho.shape[0]} does not match --n {cfg.n_qubits}")
        sym = dt.SymmetricDensity(n, rho).validate(tol=1e-8)
        p = dt.measure_probabilities(sym, dt.build_povm(n, cfg.xi))
        rec = dt.reconstruct_symmetric(p, n, cfg.xi).matrix
        write_table(cfg.out_dir / "p_table", ["m", "n", "k", "value"], _triple_rows(n, p), cfg.fmt)
    MatrixFile(rec).save(cfg.out_dir / "reconstructed.json")
    metrics = _metrics(rho, rec, mode, n)
    write_json(cfg.out_dir / "metrics.json", metrics)
    print(f"fidelity={metrics['fidelity']:.12g} trace={metrics['trace']:.12g} "
          f"min_eigenvalue={metrics['min_eigenvalue']:.3g}")
    return EXIT_OK


def sweep_rows(cfg: RunConfig, family: str, points: int, resolution: int = 16,
               measure: str = "block") -> tuple[list[str], list[list]]:
    if points < 2:
        raise UsageError("a sweep needs at least 2 points per parameter")
    rng = cfg.rng()
    if family == "2q":
        # spectator parameters of the symmetric part are drawn from the seed
        beta, g1, g2 = rng.uniform(0, 2 * math.pi, size=3)
        a1, a2 = rng.uniform(0, math.pi / 2, size=2)
        rows = []
        for theta in np.linspace(0, math.pi / 2, points):
            v = cr.ParamState2Q(theta, beta, a1, a2, g1, g2).vector()
            num = cr.fidelity(cr.reconstruct_collective(cr.collective_expectations(np.outer(v, v.conj()))), v)
            ref = float(cr.fidelity_2q_formula(theta))
            rows.append([float(theta), num, ref, abs(num - ref)])
        return ["theta", "fidelity_numeric", "fidelity_formula", "abs_diff"], rows
    if resolution < 16:
        raise UsageError("the 3q average needs at least 16 points per phase")
    formula = cr.avg_fidelity_3q_formula if measure == "block" else cr.avg_overlap_fidelity_3q_formula
    rows = []
    for theta in np.linspace(0, math.pi / 2, points):
        for alpha in np.linspace(0, math.pi / 2, points):
            num = cr.avg_fidelity_3q(theta, alpha, resolution, measure)
            ref = float(formula(theta, alpha))
            rows.append([float(theta), float(alpha), num, ref, abs(num - ref)])
    return ["theta", "alpha", "fidelity_numeric", "fidelity_formula", "abs_diff"], rows


def cmd_fidelity_sweep(cfg: RunConfig, family: str, points: int, resolution: int, measure: str) -> int:
    header, rows = sweep_rows(cfg, family, points, resolution, measure)
    path = write_table(cfg.out_dir / f"fidelity_{family}", header, rows, cfg.fmt)
    print(f"wrote {len(rows)} rows to {path}; max abs_diff={max(r[-1] for r in rows):.3g}")
    return EXIT_OK


def cmd_dicke(cfg: RunConfig, path: Path | None) -> int:
    n = cfg.n_qubits
    if path is None:
        rho = random_symmetric_density(cfg.rng(), n)
    else:
        rho = MatrixFile.load(path).matrix
        if rho.shape[0] != n + 1:
            raise UsageError(f"matrix of dim {rho.shape[0]} does not match --n {n} (need {n + 1})")
    sym = dt.SymmetricDensity(n, rho).validate(tol=1e-8)
    povm = dt.build_povm(n, cfg.xi)
    p = dt.measure_probabilities(sym, povm)
    rows = [[t.m, t.n, t.k, p[t], float(povm.norms2[i]), int(povm.weights[i])]
            for i, t in enumerate(povm.triples)]
    write_table(cfg.out_dir / "p_table", ["m", "n", "k", "value", "norm2", "weight"], rows, cfg.fmt)
    MatrixFile(rho).save(cfg.out_dir / "input.json")
    rec = dt.reconstruct_symmetric(p, n, cfg.xi).matrix
    MatrixFile(rec).save(cfg.out_dir / "reconstructed.json")
    report = dt.build_omega(n, cfg.xi)
    rank = {"N": n, "T": len(report.matrix), "rank": report.rank(cfg.tolerances["rank"]),
            "independent_count": report.independent_count(cfg.tolerances["rank"])}
    write_json(cfg.out_dir / "rank_report.json", rank)
    err = float(np.abs(rec - rho).max())
    print(f"rank={rank['rank']} independent_count={rank['independent_count']} roundtrip_error={err:.3g}")
    return EXIT_OK if err <= cfg.tolerances["roundtrip"] else EXIT_FAIL


def special_fn_rows(n: int, table: str, xi: complex, closed_form: bool = False) -> tuple[list[str], list[list]]:
    triples = bp.enumerate_triples(n)
    rows: list[list] = []
    if table == "g":
        g = sf.g_table(n)
        for i, t in enumerate(triples):
            for j, u in enumerate(triples):
                value = sf.g_closedform(n, t, u) if closed_form else int(g[i, j])
                rows.append([*t, *u, value])
        return ["m", "n", "k", "m'", "n'", "k'", "value"], rows
    if table == "f":
        # (m, k) of f, then the weights of (delta, gamma, gamma + delta)
        f = sf.f_table(n)
        for m in range(n + 1):
            for k in range(n + 1):
                for j, w in enumerate(triples):
                    value = sf.f_closedform(n, m, k, w) if closed_form else int(f[m, k, j])
                    rows.append([m, k, *w, value])
        return ["m", "k", "h_delta", "h_gamma", "h_sum", "value"], rows
    psi = sf.psi_table(n, xi)
    for i, t in enumerate(triples):
        for l in range(n + 1):
            value = sf.psi_closedform(n, l, t, xi) if closed_form else psi[i, l]
            rows.append([l, *t, float(value.real), float(value.imag)])
    return ["l", "m", "n", "k", "re", "im"], rows


def cmd_special_fn(cfg: RunConfig, table: str, closed_form: bool) -> int:
    header, rows = special_fn_rows(cfg.n_qubits, table, cfg.xi, closed_form)
    path = write_table(cfg.out_dir / f"{table}_table", header, rows, cfg.fmt)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        bp.check_capacity(cfg.n_qubits)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "verify":
            return cmd_verify(cfg, args.profile, args.samples)
        if args.command == "reconstruct":
            return cmd_reconstruct(cfg, args.input, args.mode, args.n is not None)
        if args.command == "fidelity-sweep":
            return cmd_fidelity_sweep(cfg, args.family, args.points, args.resolution, args.measure)
        if args.command == "dicke":
            return cmd_dicke(cfg, args.input)
        return cmd_special_fn(cfg, args.table, args.closed_form)
    except (UsageError, TomographyError, OSError) as exc:
        print(f"coltomo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
