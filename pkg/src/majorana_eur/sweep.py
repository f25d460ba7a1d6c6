"""Parameter sweeps over (omega, lambda) written as deterministic CSV."""
from __future__ import annotations

import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import qinfo, witness

FIG_OMEGAS = (1e-3, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
FIG_LAMBDAS = (1.0, 0.1, 8e-2, 4e-2, 1e-2, 1e-3, 1e-4)
DEFAULT_COUNT = 201

# mode -> (name of the swept parameter, default fixed values, default range)
MODES = {
    "fig2-top": ("lambda", FIG_OMEGAS, (1e-4, 1.0, DEFAULT_COUNT)),
    "fig3-left": ("lambda", FIG_OMEGAS, (1e-4, 1.0, DEFAULT_COUNT)),
    "fig2-bottom": ("omega", FIG_LAMBDAS, (1e-4, 1.0, DEFAULT_COUNT)),
    "fig3-right": ("omega", FIG_LAMBDAS, (1e-4, 1.0, DEFAULT_COUNT)),
    "grid": ("lambda", (0.5,), (1e-3, 1.0, DEFAULT_COUNT)),
    "witness": ("ratio", (1.0,), (1e-3, 1e3, DEFAULT_COUNT)),
    "verify": (None, (), (1e-3, 1.0, 2)),
}

SWEEP_COLUMNS = (
    "omega", "lambda", "A", "S_rhoX_AB", "S_XgB", "S_ZgC", "S_AgB", "S_AgC", "I_AB", "I_AC",
    "H_XB", "H_ZC", "delta", "lhs", "rhs", "gap", "witness", "max_numeric_dev",
)
WITNESS_COLUMNS = ("ratio", "witness_numeric", "witness_analytic", "deviation")

_ANALYTIC_FIELDS = (
    "script_A", "s_rhoX_AB", "s_X_given_B", "s_Z_given_C", "s_A_given_B", "s_A_given_C",
    "i_AB", "i_AC", "h_XB", "h_ZC", "delta",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    fixed_values: tuple[float, ...] = ()
    range: tuple[float, float, int] = (1e-4, 1.0, DEFAULT_COUNT)
    scale: str = "log"
    output_path: str | None = None
    seed: int = 0
    tolerance: float = 1e-8
    workers: int = 1
    extra: dict = field(default_factory=dict, compare=False)

    def validate(self) -> "SweepConfig":
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {sorted(MODES)}")
        start, stop, count = self.range
        if int(count) != count or count < 2:
            raise ConfigError(f"range count must be an integer >= 2, got {count}")
        if not start < stop:
            raise ConfigError(f"range start must be below stop, got {start} >= {stop}")
        if self.scale not in ("log", "linear"):
            raise ConfigError(f"scale must be 'log' or 'linear', got {self.scale!r}")
        if self.scale == "log" and start <= 0:
            raise ConfigError(f"log scale needs a positive start, got {start}")
        swept = MODES[self.mode][0]
        if swept is not None and not self.fixed_values:
            raise ConfigError("at least one fixed value is required")
        for v in self.fixed_values:
            if not np.isfinite(v):
                raise ConfigError(f"fixed value {v} is not finite")
        # omega must be >= 0, and Delta > 0 everywhere on the grid
        if swept == "lambda" and min(self.fixed_values) < 0:
            raise ConfigError("fixed omega values must be non-negative")
        if swept in ("omega", "ratio") and start < 0:
            raise ConfigError("omega range must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def abscissae(self) -> np.ndarray:
        start, stop, count = self.range
        if self.scale == "log":
            return np.geomspace(start, stop, int(count))
        return np.linspace(start, stop, int(count))


def parse_range(text: str) -> tuple[float, float, int]:
    try:
        start, stop, count = text.split(":")
        return float(start), float(stop), int(count)
    except ValueError:
        raise ConfigError(f"range must look like start:stop:count, got {text!r}") from None


def default_config(mode: str) -> SweepConfig:
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {sorted(MODES)}")
    _, fixed, rng = MODES[mode]
    return SweepConfig(mode=mode, fixed_values=tuple(fixed), range=rng)


def load_config_file(path: str | Path) -> dict:
    """Read a JSON config; keys mirror the command-line flags."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def build_config(mode: str | None, file_values: dict | None = None, overrides: dict | None = None) -> SweepConfig:
    """Merge mode defaults, config-file values and flag overrides (in that order)."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    mode = merged.pop("mode", None) or mode
    if mode is None:
        raise ConfigError("no mode given")
    cfg = default_config(mode)
    changes = {}
    if "fixed" in merged:
        fixed = merged.pop("fixed")
        if isinstance(fixed, str):
            fixed = [x for x in fixed.split(",") if x.strip()]
        try:
            changes["fixed_values"] = tuple(float(x) for x in fixed)
        except (TypeError, ValueError):
            raise ConfigError(f"fixed values must be numbers, got {fixed!r}") from None
    if "range" in merged:
        rng = merged.pop("range")
        if isinstance(rng, str):
            changes["range"] = parse_range(rng)
        elif isinstance(rng, dict):
            try:
                changes["range"] = (float(rng["start"]), float(rng["stop"]), rng["count"])
            except KeyError as exc:
                raise ConfigError(f"range object is missing {exc}") from None
        else:
            try:
                start, stop, count = rng
            except (TypeError, ValueError):
                raise ConfigError(f"bad range {rng!r}") from None
            changes["range"] = (float(start), float(stop), count)
    for key, attr, kind in (
        ("scale", "scale", str),
        ("out", "output_path", str),
        ("seed", "seed", int),
        ("tolerance", "tolerance", float),
        ("workers", "workers", int),
    ):
        if key in merged:
            try:
                changes[attr] = kind(merged.pop(key))
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {key!r}") from None
    cfg = replace(cfg, extra=merged, **changes)
    return cfg.validate()


def _format(x: float) -> str:
    return format(float(x), ".17g")


def evaluate_point(point: tuple[float, float]) -> list[float]:
    """One CSV row (as floats) for ``(omega, lambda)``."""
    omega, lam = point
    rho = qinfo.model_ground_density(omega, lam)
    report = qinfo.tripartite_eur(rho)
    analytic = qinfo.analytic_quantities(omega, lam)
    qd = qinfo.partial_trace(rho, set(witness.QD_LABELS))
    w = witness.witness_from_state(qd, witness.KrausChannel()).witness
    dev = max(report.numeric.max_deviation(analytic), abs(w - witness.analytic_witness(omega, lam)))
    row = [omega, lam]
    row += [getattr(analytic, name) for name in _ANALYTIC_FIELDS]
    row += [report.lhs, report.rhs, report.gap, w, dev]
    return row


def evaluate_witness(point: tuple[float, float]) -> list[float]:
    ratio, lam = point
    w = witness.quantum_witness(ratio * lam, lam)
    return [ratio, w.witness, w.analytic_witness, abs(w.witness - w.analytic_witness)]


def grid_points(cfg: SweepConfig) -> list[tuple[float, float]]:
    """Points ordered by the swept value ascending, then fixed values as listed."""
    swept = MODES[cfg.mode][0]
    points = []
    for x in cfg.abscissae():
        for fixed in cfg.fixed_values:
            x, fixed = float(x), float(fixed)
            points.append((fixed, x) if swept == "lambda" else (x, fixed))
    return points


def compute_rows(cfg: SweepConfig) -> tuple[tuple[str, ...], list[list[float]]]:
    if cfg.mode == "verify":
        raise ConfigError("verify mode does not produce a sweep")
    fn = evaluate_witness if cfg.mode == "witness" else evaluate_point
    columns = WITNESS_COLUMNS if cfg.mode == "witness" else SWEEP_COLUMNS
    points = grid_points(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(fn, points, chunksize=16))
    else:
        rows = [fn(p) for p in points]
    return columns, rows


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_format(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(text: str, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run_sweep(cfg: SweepConfig) -> tuple[str, float]:
    """Return the CSV text and the largest numeric-vs-closed-form deviation."""
    columns, rows = compute_rows(cfg)
    dev_col = columns.index("deviation" if cfg.mode == "witness" else "max_numeric_dev")
    worst = max(row[dev_col] for row in rows)
    return render_csv(columns, rows), worst
