"""Command-line front end.

Subcommands::

    weyl-scatter scatter       --config cfg.json [--out path] [--format csv|json] [--jobs N]
    weyl-scatter ssf           --config cfg.json [--out path] [--format csv|json] [--jobs N]
    weyl-scatter verify        [--config cfg.json] [--out path]
    weyl-scatter recover-theta --config cfg.json [--out path]

Configurations are JSON documents (schema in the README).  The environment
variable ``WEYL_SCATTER_QUAD_TOL`` overrides the quadrature tolerance.  Exit
codes: 0 ok, 1 configuration error, 2 numerical failure, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cxlinalg import QuadratureConfig
from .errors import ConfigError, NotOperator, WeylScatterError
from .models import (
    ConstantWell,
    DiracModel,
    ExponentialDecay,
    FreeHalfLineModel,
    MatrixSchrodingerModel,
    PointInteractionModel,
    TabulatedPotential,
    ZeroPotential,
)
from .relations import KERNEL_PAIR, MATRIX, BoundaryParameter
from .scattering import dirac_theta_recovery, smatrix
from .ssf import SINGULAR, classify_regime, dirac_thresholds, free_thresholds, ssf_point
from .verify import run_verification

__all__ = [
    "RunConfig",
    "GridConfig",
    "ResultRow",
    "load_config",
    "build_model",
    "build_theta",
    "build_grid",
    "cmd_scatter",
    "cmd_ssf",
    "cmd_verify",
    "cmd_recover_theta",
    "rows_to_csv",
    "rows_to_json",
    "main",
]

ENV_QUAD_TOL = "WEYL_SCATTER_QUAD_TOL"


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class GridConfig:
    start: float
    stop: float
    points: int
    scale: str = "linear"
    nudge: float = 1e-6

    def validate(self):
        if self.points < 1:
            raise ConfigError("grid.points: must be >= 1")
        if not self.start < self.stop:
            raise ConfigError("grid.start: must satisfy start < stop")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"grid.scale: unknown scale {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ConfigError("grid.start: log scale needs start > 0")
        if self.nudge < 0:
            raise ConfigError("grid.nudge: must be >= 0")


@dataclass(frozen=True)
class RunConfig:
    model: dict
    theta: dict
    grid: GridConfig
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    output_format: str = "csv"
    output_path: str | None = None
    lambda_probe: float = 1e8

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "theta": self.theta,
            "grid": {
                "start": self.grid.start,
                "stop": self.grid.stop,
                "points": self.grid.points,
                "scale": self.grid.scale,
                "nudge": self.grid.nudge,
            },
            "quad": {"tol": self.quad.tol, "cond_cap": self.quad.cond_cap},
            "outputs": {"format": self.output_format, "path": self.output_path},
            "lambda_probe": self.lambda_probe,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        for key in ("model", "theta", "grid"):
            if key not in data:
                raise ConfigError(f"{key}: missing")
        grid_raw = data["grid"]
        try:
            grid = GridConfig(
                start=float(grid_raw["start"]),
                stop=float(grid_raw["stop"]),
                points=int(grid_raw["points"]),
                scale=grid_raw.get("scale", "linear"),
                nudge=float(grid_raw.get("nudge", 1e-6)),
            )
        except KeyError as exc:
            raise ConfigError(f"grid.{exc.args[0]}: missing") from None
        grid.validate()
        quad_raw = data.get("quad", {})
        tol = float(os.environ.get(ENV_QUAD_TOL, quad_raw.get("tol", 1e-9)))
        quad = QuadratureConfig(tol=tol, cond_cap=float(quad_raw.get("cond_cap", 1e12)))
        outputs = data.get("outputs", {})
        fmt = outputs.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"outputs.format: unknown format {fmt!r}")
        cfg = cls(
            model=data["model"],
            theta=data["theta"],
            grid=grid,
            quad=quad,
            output_format=fmt,
            output_path=outputs.get("path"),
            lambda_probe=float(data.get("lambda_probe", 1e8)),
        )
        build_model(cfg.model)  # validate eagerly for early diagnostics
        build_theta(cfg.theta)
        return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return RunConfig.from_dict(data)


def _build_potential(spec: dict, n: int):
    kind = spec.get("kind")
    if kind == "zero":
        return ZeroPotential(n)
    if kind == "constant_well":
        return ConstantWell(spec.get("depth", spec.get("v0", 1.0)), spec.get("width", 1.0), dim=n)
    if kind == "exponential":
        return ExponentialDecay(spec.get("amplitude", 1.0), spec.get("rate", 1.0), dim=n)
    if kind == "tabulated":
        if "path" not in spec:
            raise ConfigError("model.potential.path: missing for tabulated potential")
        return TabulatedPotential.from_csv(spec["path"], n)
    raise ConfigError(f"model.potential.kind: unknown potential {kind!r}")


def build_model(spec: dict):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("model.kind: missing")
    kind = spec["kind"]
    if kind == "free_scalar":
        return FreeHalfLineModel(int(spec.get("n", 1)))
    if kind == "schrodinger_matrix":
        n = int(spec.get("n", 1))
        if "potential" not in spec:
            raise ConfigError("model.potential: missing for schrodinger_matrix")
        pot = _build_potential(spec["potential"], n)
        return MatrixSchrodingerModel(
            pot,
            X_max=spec.get("X_max"),
            ode_tol=float(spec.get("ode_tol", 1e-8)),
        )
    if kind == "dirac":
        if "a" not in spec:
            raise ConfigError("model.a: missing for dirac")
        return DiracModel(float(spec["a"]))
    if kind == "point_interaction":
        if "inner" not in spec:
            raise ConfigError("model.inner: missing for point_interaction")
        return PointInteractionModel(build_model(spec["inner"]))
    raise ConfigError(f"model.kind: unknown model {kind!r}")


def _matrix_from(spec: dict, re_key: str, im_key: str, where: str) -> np.ndarray:
    if re_key not in spec:
        raise ConfigError(f"{where}.{re_key}: missing")
    re = np.atleast_2d(np.asarray(spec[re_key], dtype=float))
    im = np.atleast_2d(np.asarray(spec.get(im_key, np.zeros_like(re)), dtype=float))
    if re.shape != im.shape:
        raise ConfigError(f"{where}: real and imaginary parts differ in shape")
    return re + 1j * im


def build_theta(spec: dict) -> BoundaryParameter:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("theta.kind: missing")
    kind = spec["kind"]
    try:
        if kind == MATRIX:
            return BoundaryParameter.from_matrix(_matrix_from(spec, "re", "im", "theta"))
        if kind == KERNEL_PAIR:
            A = _matrix_from(spec, "A_re", "A_im", "theta")
            B = _matrix_from(spec, "B_re", "B_im", "theta")
            return BoundaryParameter.from_kernel_pair(A, B)
    except ValueError as exc:
        raise ConfigError(f"theta: {exc}") from None
    raise ConfigError(f"theta.kind: unknown kind {kind!r}")


def theta_to_dict(theta: BoundaryParameter) -> dict:
    if theta.kind == MATRIX:
        return {"kind": MATRIX, "re": theta.matrix.real.tolist(), "im": theta.matrix.imag.tolist()}
    return {
        "kind": KERNEL_PAIR,
        "A_re": theta.A.real.tolist(),
        "A_im": theta.A.imag.tolist(),
        "B_re": theta.B.real.tolist(),
        "B_im": theta.B.imag.tolist(),
    }


# ---------------------------------------------------------------------------
# grids and rows


def build_grid(grid: GridConfig, avoid=()) -> tuple[list[float], list[tuple[float, float]]]:
    """Sample points plus the (original, nudged) pairs moved off bad points."""
    if grid.scale == "log":
        pts = np.geomspace(grid.start, grid.stop, grid.points)
    else:
        pts = np.linspace(grid.start, grid.stop, grid.points)
    out, moved = [], []
    for x in pts:
        x = float(x)
        y = x
        for s in avoid:
            if abs(y - s) < grid.nudge:
                y = s + grid.nudge
        if y != x:
            moved.append((x, y))
        out.append(y)
    return out, moved


def _avoid_points(model, theta: BoundaryParameter) -> tuple[float, ...]:
    pts = list(model.singular_points())
    pts.append(0.0)
    if theta.kind == MATRIX:
        eigs = np.linalg.eigvalsh(theta.matrix)
        if isinstance(model, DiracModel):
            d = np.diag(theta.matrix)
            pts += list(dirac_thresholds(model.a, float(d[0].real), float(d[-1].real)))
        else:
            pts += list(free_thresholds(eigs))
    return tuple(pts)


@dataclass(frozen=True)
class ResultRow:
    """One lambda sample: 2r^2 + 7 data columns, rank r carried by the block header."""

    lam: float
    regime: str
    rank: int
    s_entries: np.ndarray  # (r, r) complex; empty at rank 0 / singular rows
    det: complex
    xi: float
    bk_residual: float
    cond: float


_NAN = float("nan")


def _scatter_row(model, theta, lam, quad, with_xi: bool) -> ResultRow:
    point = ssf_point(model, theta, lam, quad=quad) if with_xi else None
    if point is not None:
        if point.regime == SINGULAR or point.scattering is None:
            return ResultRow(lam, SINGULAR, 0, np.zeros((0, 0), complex), complex(_NAN, _NAN), _NAN, _NAN, _NAN)
        sp = point.scattering
        return ResultRow(lam, point.regime, sp.rank, sp.S_reduced, sp.det_S, point.xi, point.bk_residual, sp.cond)
    try:
        M = model.eval_boundary(lam)
        sp = smatrix(M, theta, lam=lam)
    except WeylScatterError:
        return ResultRow(lam, SINGULAR, 0, np.zeros((0, 0), complex), complex(_NAN, _NAN), _NAN, _NAN, _NAN)
    return ResultRow(lam, classify_regime(M), sp.rank, sp.S_reduced, sp.det_S, _NAN, _NAN, sp.cond)


def _sweep(config: RunConfig, with_xi: bool, jobs: int = 1) -> list[ResultRow]:
    model = build_model(config.model)
    theta = build_theta(config.theta)
    if with_xi and not theta.is_operator():
        raise NotOperator("ssf requires an operator (matrix) boundary parameter")
    grid, _ = build_grid(config.grid, avoid=_avoid_points(model, theta))
    work = lambda lam: _scatter_row(model, theta, lam, config.quad, with_xi)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(work, grid))
    else:
        rows = [work(lam) for lam in grid]
    rows.sort(key=lambda r: r.lam)
    return rows


def cmd_scatter(config: RunConfig, jobs: int = 1) -> list[ResultRow]:
    return _sweep(config, with_xi=False, jobs=jobs)


def cmd_ssf(config: RunConfig, jobs: int = 1) -> list[ResultRow]:
    return _sweep(config, with_xi=True, jobs=jobs)


def cmd_verify(config: RunConfig | None = None) -> dict:
    quad = config.quad if config is not None else QuadratureConfig(
        tol=float(os.environ.get(ENV_QUAD_TOL, 1e-9))
    )
    extra = [build_model(config.model)] if config is not None else []
    checks = run_verification(quad=quad, extra_models=extra)
    return {
        "checks": [c.to_dict() for c in checks],
        "pass": all(c.passed for c in checks),
    }


def cmd_recover_theta(config: RunConfig) -> dict:
    model = build_model(config.model)
    if not isinstance(model, DiracModel):
        raise ConfigError("model.kind: recover-theta requires the dirac model")
    theta = build_theta(config.theta)
    if theta.kind != MATRIX:
        raise ConfigError("theta.kind: recover-theta requires a matrix parameter")
    sp = smatrix(model.eval_boundary(config.lambda_probe), theta, lam=config.lambda_probe)
    estimate = dirac_theta_recovery(sp.S_full)
    err = float(np.linalg.norm(estimate - theta.matrix, 2))
    return {
        "lambda_probe": config.lambda_probe,
        "theta_estimate": {"re": estimate.real.tolist(), "im": estimate.imag.tolist()},
        "error_norm": err,
    }


# ---------------------------------------------------------------------------
# serialisation


def config_hash(config: RunConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _fmt(x) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(x, ".17g")


def rows_to_csv(rows: list[ResultRow], config: RunConfig | None = None) -> str:
    lines = []
    if config is not None:
        lines.append(f"# weyl-scatter sweep, config sha256:{config_hash(config)}")
    lines.append("# columns: lambda, Re/Im S_reduced (row major), Re det_S, Im det_S, xi, bk_residual, cond, regime")
    current_rank = None
    for row in rows:
        block = "singular" if row.regime == SINGULAR else row.rank
        if block != current_rank:
            lines.append(f"# rank block: r = {block}")
            current_rank = block
        cells = [_fmt(row.lam)]
        for v in np.asarray(row.s_entries).ravel():
            cells += [_fmt(float(v.real)), _fmt(float(v.imag))]
        det = complex(row.det)
        cells += [_fmt(det.real), _fmt(det.imag), _fmt(row.xi), _fmt(row.bk_residual), _fmt(row.cond), row.regime]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _none_if_nan(x: float):
    return None if math.isnan(x) else x


def rows_to_json(rows: list[ResultRow], config: RunConfig | None = None) -> str:
    payload = {
        "config_hash": config_hash(config) if config is not None else None,
        "rows": [
            {
                "lambda": row.lam,
                "regime": row.regime,
                "rank": row.rank,
                "S_re": np.asarray(row.s_entries).real.tolist(),
                "S_im": np.asarray(row.s_entries).imag.tolist(),
                "det_re": _none_if_nan(complex(row.det).real),
                "det_im": _none_if_nan(complex(row.det).imag),
                "xi": _none_if_nan(row.xi),
                "bk_residual": _none_if_nan(row.bk_residual),
                "cond": _none_if_nan(row.cond),
            }
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are configuration errors (exit 1)
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weyl-scatter", description="Scattering matrices and spectral shift functions from Weyl functions")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("scatter", "ssf", "verify", "recover-theta"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=name != "verify", help="JSON run configuration")
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")
        p.add_argument("--format", choices=("csv", "json"), default=None, help="override outputs.format")
        p.add_argument("--jobs", type=int, default=1, help="worker threads for grid evaluation")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = load_config(args.config) if args.config else None
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command in ("scatter", "ssf"):
            if config is None:
                print("config error: --config is required", file=sys.stderr)
                return 1
            rows = cmd_scatter(config, jobs=args.jobs) if args.command == "scatter" else cmd_ssf(config, jobs=args.jobs)
            fmt = args.format or config.output_format
            text = rows_to_csv(rows, config) if fmt == "csv" else rows_to_json(rows, config)
            _emit(text, args.out or config.output_path)
            return 0
        if args.command == "recover-theta":
            if config is None:
                print("config error: --config is required", file=sys.stderr)
                return 1
            report = cmd_recover_theta(config)
            _emit(json.dumps(report, indent=2) + "\n", args.out or config.output_path)
            return 0
        report = cmd_verify(config)
        _emit(json.dumps(report, indent=2) + "\n", args.out or (config.output_path if config else None))
        return 0 if report["pass"] else 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except WeylScatterError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
