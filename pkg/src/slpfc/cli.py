"""Experiment driver: config parsing, registry, CSV emission.

Every experiment writes deterministic CSV output (fixed reduction
order, no randomness); the rotation table additionally carries a
wall-clock runtime column, which is the one intentionally
non-reproducible field. Exit codes: 0 success, 1 configuration error,
2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import dispersion as disp
from . import experiments, rotation, vlasov
from .engine import as_scheme
from .pfc import EPS_DEFAULT
from .weighted import C_DEFAULT, P_DEFAULT

EXPERIMENTS = ("advect1d_gaussian", "advect1d_sine", "advect1d_composite",
               "rotation3d", "dispersion", "two_stream", "bump_on_tail",
               "landau")

_DEFAULT_RESOLUTIONS = {
    "advect1d_gaussian": [32, 64, 128, 256],
    "advect1d_sine": [32, 64, 128, 256],
    "advect1d_composite": [200],
    "rotation3d": [32, 64],
    "dispersion": [1024],
    "two_stream": [128],
    "bump_on_tail": [128],
    "landau": [128],
}


class ConfigError(ValueError):
    """Invalid configuration (bad key, value, or file)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment settings; defaults match the source tables."""

    experiment: str
    scheme: str = "wpfc5"
    resolutions: list = field(default_factory=list)
    C: float = C_DEFAULT
    p: float = P_DEFAULT
    eps: float = EPS_DEFAULT
    dt: float = 0.01
    dt_rule: str = rotation.PAPER_DT
    t_end: float | None = None
    cfl: float = 0.4
    out_dir: str = "."
    snapshot_every: float = 0.0
    snapshot_format: str = "csv"
    long: bool = False
    workers: int = 1


_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}; "
                          f"expected one of {', '.join(EXPERIMENTS)}")
    try:
        scheme = as_scheme(cfg.scheme).value
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    res = [int(n) for n in (cfg.resolutions or
                            _DEFAULT_RESOLUTIONS[cfg.experiment])]
    if any(n <= 0 for n in res):
        raise ConfigError("resolutions must be positive")
    for name in ("C", "p", "eps", "dt", "cfl"):
        value = getattr(cfg, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value)
                and value > 0.0):
            raise ConfigError(f"{name} must be a positive finite number")
    if cfg.t_end is not None and cfg.t_end <= 0.0:
        raise ConfigError("t_end must be positive")
    if cfg.dt_rule not in (rotation.PAPER_DT, rotation.REFINED_DT):
        raise ConfigError(f"unknown dt_rule {cfg.dt_rule!r}")
    if cfg.snapshot_format not in ("csv", "bin"):
        raise ConfigError(f"unknown snapshot_format "
                          f"{cfg.snapshot_format!r}")
    if cfg.snapshot_every < 0.0:
        raise ConfigError("snapshot_every must be >= 0")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    return replace(cfg, scheme=scheme, resolutions=res)


def _reject_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ConfigError(f"duplicate config key {key!r}")
        seen[key] = value
    return seen


def _load_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError("unknown config keys: " + ", ".join(unknown))
    return data


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # config errors exit 1, not argparse's 2
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slpfc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("--experiment", choices=EXPERIMENTS)
    run.add_argument("--scheme")
    run.add_argument("--n", help="resolution or comma-separated list")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--out", dest="out_dir")
    run.add_argument("--long", action="store_const", const=True,
                     default=None, help="include the long checks")
    run.add_argument("--workers", type=int)
    run.add_argument("--C", type=float, dest="C")
    run.add_argument("--p", type=float, dest="p")
    run.add_argument("--eps", type=float)
    run.add_argument("--dt", type=float)
    run.add_argument("--dt-rule", dest="dt_rule")
    run.add_argument("--t-end", dest="t_end", type=float)
    run.add_argument("--cfl", type=float)
    run.add_argument("--snapshot-every", dest="snapshot_every",
                     type=float)
    run.add_argument("--snapshot-format", dest="snapshot_format")
    return parser


def parse_config(argv) -> ExperimentConfig:
    """Merge defaults, config file, and flags (flags win)."""
    args = build_parser().parse_args(argv)
    merged = {}
    if args.config:
        merged.update(_load_config_file(args.config))
    flag_fields = ("experiment", "scheme", "out_dir", "long", "workers",
                   "C", "p", "eps", "dt", "dt_rule", "t_end", "cfl",
                   "snapshot_every", "snapshot_format")
    for name in flag_fields:
        value = getattr(args, name)
        if value is not None:
            merged[name] = value
    if args.n is not None:
        try:
            merged["resolutions"] = [int(v) for v in args.n.split(",")]
        except ValueError:
            raise ConfigError(f"bad --n value {args.n!r}") from None
    if "experiment" not in merged:
        raise ConfigError("an experiment must be named (--experiment "
                          "or config file)")
    try:
        cfg = ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return _validate(cfg)


def convergence_order(errors, resolutions):
    """order_i = log(e_{i-1}/e_i) / log(N_i/N_{i-1}) for i >= 1."""
    if len(errors) != len(resolutions) or len(errors) < 2:
        raise ValueError("need matched lists of length >= 2")
    if any(e <= 0.0 for e in errors):
        raise ValueError("errors must be positive")
    if any(b <= a for a, b in zip(resolutions, resolutions[1:])):
        raise ValueError("resolutions must increase")
    return [math.log(errors[i - 1] / errors[i])
            / math.log(resolutions[i] / resolutions[i - 1])
            for i in range(1, len(errors))]


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_csv(path: Path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
            fh.flush()


def _order_column(errors):
    out = [""]
    for i in range(1, len(errors)):
        out.append(f"{convergence_order(errors[i - 1:i + 1], [1, 2])[0]:.2f}"
                   if errors[i] > 0 else "")
    return out


def _print_table(header, rows, stream):
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows))
              for i, h in enumerate(header)]
    line = "  ".join(str(h).rjust(w) for h, w in zip(header, widths))
    print(line, file=stream)
    for row in rows:
        print("  ".join(str(v).rjust(w) for v, w in zip(row, widths)),
              file=stream)


def _run_advect1d(cfg: ExperimentConfig, profile: str, t_end: float,
                  stream) -> Path:
    out = Path(cfg.out_dir) / f"{cfg.experiment}_{cfg.scheme}.csv"
    results = []
    for n in cfg.resolutions:
        results.append(experiments.run_advect1d(
            profile, n, cfg.scheme, cfg.cfl,
            cfg.t_end if cfg.t_end is not None else t_end,
            cfg.C, cfg.p, cfg.eps))
    if profile == experiments.COMPOSITE:
        r = results[-1]
        _write_csv(out, ["x", "initial", "value"],
                   zip(r.centers, r.exact, r.values))
        print(f"{cfg.experiment}: n={r.n} min={r.values.min():.3e} "
              f"max={r.values.max():.3e}", file=stream)
        return out
    l1 = [r.l1 for r in results]
    linf = [r.linf for r in results]
    l1_ord = _order_column(l1)
    linf_ord = _order_column(linf)
    rows = [(cfg.experiment, r.scheme, r.n, r.l1, o1, r.linf, oi)
            for r, o1, oi in zip(results, l1_ord, linf_ord)]
    _write_csv(out, ["experiment", "scheme", "n", "l1", "l1_order",
                     "linf", "linf_order"], rows)
    disp_rows = [(r.n, f"{r.l1:.3e}", o1, f"{r.linf:.3e}", oi)
                 for r, o1, oi in zip(results, l1_ord, linf_ord)]
    _print_table(["n", "L1", "L1 order", "Linf", "Linf order"],
                 disp_rows, stream)
    return out


def _run_rotation(cfg: ExperimentConfig, stream) -> Path:
    ns = list(cfg.resolutions)
    if cfg.long and 128 not in ns:
        ns.append(128)
    out = Path(cfg.out_dir) / f"rotation3d_{cfg.scheme}.csv"
    rows = []
    results = []
    with open(out, "w") as fh:
        fh.write("n,scheme,dt_rule,L1,Linf,runtime_seconds\n")
        for n in ns:
            res = rotation.run_rotation(n, cfg.scheme, cfg.dt_rule,
                                        C=cfg.C, p=cfg.p,
                                        eps=cfg.eps)[0]
            results.append(res)
            fh.write(",".join(_fmt(v) for v in
                              (res.n, res.scheme, res.dt_rule, res.l1,
                               res.linf, res.runtime_seconds)) + "\n")
            fh.flush()
    l1 = [r.l1 for r in results]
    orders = _order_column(l1)
    disp_rows = [(r.n, f"{r.l1:.3e}", o, f"{r.linf:.3e}",
                  f"{r.runtime_seconds:.1f}s")
                 for r, o in zip(results, orders)]
    _print_table(["n", "L1", "L1 order", "Linf", "runtime"], disp_rows,
                 stream)
    return out


def _run_dispersion(cfg: ExperimentConfig, stream) -> Path:
    n_cells = cfg.resolutions[0]
    ks = disp.default_k_list(n_cells)
    points = disp.dispersion_scan(cfg.scheme, ks, n_cells, cfg.C, cfg.p,
                                  cfg.eps)
    out = Path(cfg.out_dir) / f"dispersion_{cfg.scheme}.csv"
    _write_csv(out, ["scheme", "k", "k_star_re", "k_star_im"],
               [(cfg.scheme, pt.k, pt.k_star_re, pt.k_star_im)
                for pt in points])
    worst = max(pt.k_star_im for pt in points)
    print(f"dispersion: {len(points)} wavenumbers, max Im(k*) = "
          f"{worst:.3e}", file=stream)
    return out


def _write_snapshot(cfg: ExperimentConfig, state, t: float,
                    base: str) -> None:
    out_dir = Path(cfg.out_dir)
    x = state.x_grid.centers()
    v = state.v_grid.centers()
    if cfg.snapshot_format == "csv":
        path = out_dir / f"{base}_t{t:g}.csv"
        with open(path, "w") as fh:
            fh.write("x,v,f\n")
            for j in range(x.size):
                for m in range(v.size):
                    fh.write(f"{_fmt(float(x[j]))},{_fmt(float(v[m]))},"
                             f"{_fmt(float(state.f[j, m]))}\n")
        return
    raw = out_dir / f"{base}_t{t:g}.bin"
    raw.write_bytes(state.f.astype("<f8").tobytes(order="C"))
    sidecar = {
        "shape": list(state.f.shape),
        "dtype": "float64",
        "byte_order": "little-endian",
        "order": "C",
        "axes": ["x", "v"],
        "x_min": state.x_grid.x_min, "x_max": state.x_grid.x_max,
        "v_min": state.v_grid.x_min, "v_max": state.v_grid.x_max,
        "time": t,
    }
    with open(out_dir / f"{base}_t{t:g}.json", "w") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)


def _run_vlasov(cfg: ExperimentConfig, stream) -> Path:
    n_v = cfg.resolutions[0]
    t_end = cfg.t_end
    if t_end is None:
        t_end = vlasov.PROBLEM_DEFAULTS[cfg.experiment]["t_end"]
    snaps = []
    if cfg.snapshot_every > 0.0:
        count = int(math.floor(t_end / cfg.snapshot_every))
        snaps = [cfg.snapshot_every * i for i in range(1, count + 1)]
    result = vlasov.run_vlasov(cfg.experiment, n_v, t_end, cfg.dt,
                               cfg.scheme, snapshot_times=snaps,
                               C=cfg.C, p=cfg.p, eps=cfg.eps)
    base = f"{cfg.experiment}_{cfg.scheme}_nv{n_v}"
    out = Path(cfg.out_dir) / f"{base}_diagnostics.csv"
    _write_csv(out,
               ["time", "energy", "entropy", "mass", "field_energy",
                "gauss_residual_max"],
               [(d.time, d.energy, d.entropy, d.mass, d.field_energy,
                 d.gauss_residual_max) for d in result.diagnostics])
    for t_snap, (t_actual, _) in sorted(result.snapshots.items()):
        snap_state = vlasov.PhaseSpace(result.snapshots[t_snap][1],
                                       result.state.x_grid,
                                       result.state.v_grid)
        _write_snapshot(cfg, snap_state, t_actual, base)
    d0, d1 = result.diagnostics[0], result.diagnostics[-1]
    print(f"{cfg.experiment}: t={d1.time:g} mass drift="
          f"{abs(d1.mass / d0.mass - 1):.2e} energy drift="
          f"{abs(d1.energy / d0.energy - 1):.2e} entropy change="
          f"{abs(d1.entropy / d0.entropy - 1):.2e} max gauss="
          f"{max(d.gauss_residual_max for d in result.diagnostics):.2e}",
          file=stream)
    return out


def run_experiment(config: ExperimentConfig, stream=None) -> int:
    """Run one experiment, write its CSVs, print a summary table."""
    stream = stream if stream is not None else sys.stdout
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if config.experiment == "advect1d_gaussian":
        _run_advect1d(config, experiments.GAUSSIAN, 4.0, stream)
    elif config.experiment == "advect1d_sine":
        _run_advect1d(config, experiments.SINE, 4.0, stream)
    elif config.experiment == "advect1d_composite":
        _run_advect1d(config, experiments.COMPOSITE, 20.0, stream)
    elif config.experiment == "rotation3d":
        _run_rotation(config, stream)
    elif config.experiment == "dispersion":
        _run_dispersion(config, stream)
    else:
        _run_vlasov(config, stream)
    return 0


def main(argv=None) -> int:
    try:
        config = parse_config(argv if argv is not None
                              else sys.argv[1:])
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure: exit 2 per contract
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
