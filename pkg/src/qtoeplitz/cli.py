"""``qtsolve``: experiment runner for quaternion Toeplitz prediction systems.

Three commands share one configuration::

    qtsolve solve    --preset table1              # exact covariances
    qtsolve estimate --preset table2 --seed 7     # covariances estimated from samples
    qtsolve spectrum --model ma1 --beta 0.5,0,0,0 --n 64,256 --eps 0.1

Settings come from built-in defaults, then ``--preset``, then ``--config``
(flat ``key=value`` lines, repeated keys form lists), then explicit flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .circulant import SingularBlockError
from .pcg import MaxIterationsError, PCGError, SolveConfig, make_preconditioner, pcg_solve
from .signal import ProcessSpec, estimate_correlation, prediction_system, process_model, sample_count, synthesize
from .spectra import clustering_report, dense_spectrum, szego_moment_check
from .symbols import constant_model, grid_extrema
from .toeplitz import HermitianToeplitz

log = logging.getLogger("qtsolve")

SCHEMA_VERSION = 1
FIELDS = ["model", "beta0", "beta1", "beta2", "beta3", "delta", "n", "m", "solver", "iters", "time_ms", "error", "seed"]
SPECTRUM_FIELDS = [
    "model", "beta0", "beta1", "beta2", "beta3", "delta", "n", "lambda_min", "lambda_max",
    "fmin", "fmax", "moment1_gap", "moment2_gap", "eps", "outside_count", "min_precond_eig",
]
SOLVER_TAGS = {"strang": "PCG-C", "none": "PCG-I"}
MODELS = ("ar1", "ma1", "identity")

_POW = [2**k for k in range(8, 12)]
PRESETS = {
    "table1": dict(command="solve", model="ar1", stop="absolute", n=_POW, betas=[
        (0.45, -0.01, 0.3, -0.35), (-0.07, 0.41, 0.29, 0.45), (0.15, -0.46, 0.34, 0.43)]),
    "table3": dict(command="solve", model="ma1", stop="absolute", n=_POW, betas=[
        (-0.08, 0.21, -0.8, -0.79), (-0.2, 0.18, -1.19, -0.07), (-0.52, -0.32, -0.01, -1.23)]),
    "table2": dict(command="estimate", model="ar1", stop="relative", n=_POW[1:], m=[4, 8, 16], betas=[
        (0.1, 0.0, -0.3, -0.4), (0.3, 0.4, 0.0, 0.4), (0.3, 0.4, 0.4, 0.0)]),
    "table4": dict(command="estimate", model="ma1", stop="relative", n=_POW[1:], m=[4, 8, 16], betas=[
        (0.9, 0.9, 0.5, 1.3), (-1.9, -0.6, 0.3, 0.0), (-2.0, -0.6, -0.4, -0.1)]),
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    model: str = "ar1"
    betas: list = field(default_factory=lambda: [(0.5, 0.0, 0.0, 0.0)])
    delta: float = 1.0
    n: list = field(default_factory=lambda: [256])
    m: list = field(default_factory=lambda: [4])
    precond: str = "both"
    tol: float = 1e-7
    stop: str = "relative"
    seed: int = 0
    eps: list = field(default_factory=lambda: [0.1])
    out: Optional[str] = None
    format: str = "csv"
    spectrum_dir: Optional[str] = None

    def validate(self) -> "ExperimentConfig":
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.precond not in ("strang", "none", "both"):
            raise ConfigError(f"unknown preconditioner {self.precond!r}")
        if self.stop not in ("relative", "absolute"):
            raise ConfigError(f"unknown stopping rule {self.stop!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if any(v < 1 for v in self.n) or any(v < 1 for v in self.m):
            raise ConfigError("n and m values must be positive integers")
        for b in self.betas:
            if len(b) != 4:
                raise ConfigError(f"beta needs four components, got {b}")
            if self.model != "identity":
                try:
                    ProcessSpec(self.model, b, self.delta)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from exc
        return self

    @property
    def solvers(self) -> list[str]:
        return ["strang", "none"] if self.precond == "both" else [self.precond]

    def solve_config(self, n: int, **kw) -> SolveConfig:
        if self.stop == "absolute":
            return SolveConfig(tol_abs=self.tol, max_iter=10 * n, **kw)
        return SolveConfig(tol_rel=self.tol, max_iter=10 * n, **kw)


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.replace(" ", "").split(","))


def _ints(values) -> list[int]:
    out = []
    for v in values:
        out.extend(int(s) for s in str(v).split(",") if s.strip())
    return out


def read_config_file(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment and repeated keys accumulate."""
    entries: dict[str, list[str]] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        entries.setdefault(key.replace("-", "_"), []).append(value)
    return entries


def _apply(cfg: ExperimentConfig, entries: dict) -> ExperimentConfig:
    """Overlay list-valued string settings on ``cfg``."""
    updates = {}
    for key, values in entries.items():
        if not values:
            continue
        last = values[-1]
        if key == "beta":
            updates["betas"] = [_floats(v) for v in values]
        elif key in ("n", "m"):
            updates[key] = _ints(values)
        elif key == "eps":
            updates["eps"] = [x for v in values for x in _floats(v)]
        elif key in ("delta", "tol"):
            updates[key] = float(last)
        elif key == "seed":
            updates["seed"] = int(last)
        elif key in ("model", "precond", "stop", "format"):
            updates[key] = last.lower()
        elif key in ("out", "spectrum_dir"):
            updates[key] = last
        elif key == "preset":
            continue
        else:
            raise ConfigError(f"unknown setting {key!r}")
    try:
        return replace(cfg, **updates)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig()
    file_entries = read_config_file(args.config) if args.config else {}
    preset = args.preset or (file_entries.get("preset") or [None])[-1]
    if preset:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        p = PRESETS[preset]
        cfg = replace(cfg, model=p["model"], betas=list(p["betas"]), n=list(p["n"]),
                      m=list(p.get("m", cfg.m)), stop=p["stop"])
        if p["command"] != args.command and args.command != "spectrum":
            log.warning("preset %s is meant for the %s command", preset, p["command"])
    cfg = _apply(cfg, file_entries)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "preset", "verbose") and v is not None}
    cfg = _apply(cfg, {k: v if isinstance(v, list) else [str(v)] for k, v in flags.items()})
    return cfg.validate()


def _system(cfg: ExperimentConfig, beta, n: int):
    if cfg.model == "identity":
        col = np.zeros((n, 4))
        col[0, 0] = 1.0
        return HermitianToeplitz(col), np.tile([1.0, 0.0, 0.0, 0.0], (n, 1))
    return prediction_system(ProcessSpec(cfg.model, beta, cfg.delta), n)


def _run_solver(t: HermitianToeplitz, rhs, kind: str, scfg: SolveConfig) -> dict:
    start = time.perf_counter()
    try:
        _, rep = pcg_solve(t.matvec, make_preconditioner(t, kind), rhs, scfg)
        return dict(iters=rep.iterations, time_ms=1e3 * rep.wall_time, error=rep.final_error, status="converged")
    except MaxIterationsError:
        status = "max_iter"
    except SingularBlockError:
        status = "singular_preconditioner"
    except PCGError as exc:
        status = "breakdown"
        log.debug("breakdown: %s", exc)
    return dict(iters=-1, time_ms=1e3 * (time.perf_counter() - start), error=float("nan"), status=status)


def _row(cfg, beta, n, m, solver, result, seed) -> dict:
    return dict(
        model=cfg.model, beta0=beta[0], beta1=beta[1], beta2=beta[2], beta3=beta[3], delta=cfg.delta,
        n=n, m=m, solver=SOLVER_TAGS[solver], seed=seed, **result,
    )


def solve_cell(cfg: ExperimentConfig, beta, n: int) -> list[dict]:
    t, rhs = _system(cfg, beta, n)
    return [_row(cfg, beta, n, "exact", s, _run_solver(t, rhs, s, cfg.solve_config(n)), cfg.seed) for s in cfg.solvers]


def cell_seed(base: int, beta_index: int, n: int, m: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base, beta_index, n, m])


def estimate_cell(cfg: ExperimentConfig, beta_index: int, n: int, m: int) -> list[dict]:
    """Synthesize one path, estimate ``H`` and ``w``, and run each solver on it."""
    beta = cfg.betas[beta_index]
    if cfg.model == "identity":
        raise ConfigError("estimate needs a process model (ar1 or ma1)")
    spec = ProcessSpec(cfg.model, beta, cfg.delta, cfg.seed)
    rng = np.random.default_rng(cell_seed(cfg.seed, beta_index, n, m))
    est = estimate_correlation(synthesize(spec, sample_count(n, m), rng), n)
    rows = []
    for s in cfg.solvers:
        if est.degenerate:
            result = dict(iters=-1, time_ms=0.0, error=float("nan"), status="degenerate")
        else:
            result = _run_solver(est.operator(), est.rhs, s, cfg.solve_config(n, definite_preconditioner=False))
        rows.append(_row(cfg, beta, n, m, s, result, cfg.seed))
    return rows


def spectrum_cell(cfg: ExperimentConfig, beta, n: int) -> list[dict]:
    model = constant_model(1.0) if cfg.model == "identity" else process_model(ProcessSpec(cfg.model, beta, cfg.delta))
    t = HermitianToeplitz.from_symbol(model, n)
    report = dense_spectrum(t, model=cfg.model, beta=list(beta), delta=cfg.delta)
    if cfg.spectrum_dir:
        out_dir = Path(cfg.spectrum_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        tag = "_".join(f"{b:g}" for b in beta)
        report.to_csv(out_dir / f"{cfg.model}_{tag}_n{n}.csv")
    fmin, fmax = grid_extrema(model)
    gap1 = szego_moment_check(model, n, lambda x: x)[2]
    gap2 = szego_moment_check(model, n, lambda x: x**2)[2]
    base = dict(
        model=cfg.model, beta0=beta[0], beta1=beta[1], beta2=beta[2], beta3=beta[3], delta=cfg.delta, n=n,
        lambda_min=float(report.eigenvalues[0]), lambda_max=float(report.eigenvalues[-1]),
        fmin=fmin, fmax=fmax, moment1_gap=gap1, moment2_gap=gap2,
    )
    rows = []
    for eps in cfg.eps:
        clus = clustering_report(model, n, eps, t=t)
        rows.append(dict(base, eps=eps, outside_count=clus.outside_count, min_precond_eig=clus.min_eig))
    return rows


def _workers(cells: int) -> int:
    env = os.environ.get("QTSOLVE_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, cells))


def run(command: str, cfg: ExperimentConfig) -> list[dict]:
    """All rows for ``command`` in a stable order, independent of the pool size."""
    jobs = []
    for bi, beta in enumerate(cfg.betas):
        for n in cfg.n:
            if command == "solve":
                jobs.append((solve_cell, cfg, beta, n))
            elif command == "spectrum":
                jobs.append((spectrum_cell, cfg, beta, n))
            else:
                jobs.extend((estimate_cell, cfg, bi, n, m) for m in cfg.m)
    with ThreadPoolExecutor(max_workers=_workers(len(jobs))) as pool:
        futures = [pool.submit(fn, *a) for fn, *a in jobs]
        return [row for fut in futures for row in fut.result()]


def format_rows(rows: list[dict], fmt: str, command: str, cfg: ExperimentConfig) -> str:
    if fmt == "json":
        return json.dumps(dict(schema=SCHEMA_VERSION, command=command, config=asdict(cfg), rows=rows), indent=1, default=str)
    fields = SPECTRUM_FIELDS if command == "spectrum" else FIELDS
    buf = io.StringIO()
    buf.write(f"# qtsolve {command} report, schema v{SCHEMA_VERSION}\n")
    writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{v:.6g}" if isinstance(v, float) and k not in ("error",) else v) for k, v in row.items()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtsolve", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=["solve", "spectrum", "estimate"])
    parser.add_argument("--preset", choices=sorted(PRESETS))
    parser.add_argument("--config", help="key=value settings file")
    parser.add_argument("--model", choices=MODELS)
    parser.add_argument("--beta", action="append", help="a0,a1,a2,a3 (repeat for several)")
    parser.add_argument("--delta", type=float)
    parser.add_argument("--n", action="append", help="system sizes, comma separated or repeated")
    parser.add_argument("--m", action="append", help="sample multipliers, M = m n + 1")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--stop", choices=["relative", "absolute"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--precond", choices=["strang", "none", "both"])
    parser.add_argument("--eps", action="append", help="clustering radii for the spectrum command")
    parser.add_argument("--out", help="output file (default stdout)")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--spectrum-dir", help="write one eigenvalue CSV per cell here")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = build_config(args)
        rows = run(args.command, cfg)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"qtsolve: error: {exc}", file=sys.stderr)
        return 1
    text = format_rows(rows, cfg.format, args.command, cfg)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            print(f"qtsolve: error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if r.get("status", "converged") != "converged"]
    for r in failed:
        log.warning("cell beta=%s n=%s m=%s %s: %s", (r["beta0"], r["beta1"], r["beta2"], r["beta3"]),
                    r["n"], r["m"], r["solver"], r["status"])
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
