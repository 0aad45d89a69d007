"""Parameter sweeps over one axis, written as canonical CSV."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from . import analytic_global as ag
from . import analytic_local as al
from .errors import QTMError, SchemaError
from .model import _FIELDS, ModelParams, coth_half

FLOAT_FORMAT = ".17g"

# axes that are not plain ModelParams fields
DERIVED_AXES = {
    "temperature": "t_left = t_right = value",
    "gamma_ratio": "gamma_left = value * gamma_right",
    "coupling_ratio": "g chosen so that gamma_left gamma_right / 4 g^2 = value",
    "x": "t_left = t_right = omega / value",
}
_NUMERIC_FIELDS = tuple(f for f in _FIELDS if not f.startswith("eps"))


def fmt(value: float) -> str:
    return format(value, FLOAT_FORMAT)


def apply_axis(params: ModelParams, name: str, value: float) -> ModelParams:
    """Return ``params`` with one sweep coordinate set."""
    if name in _NUMERIC_FIELDS:
        return params.replace(**{name: value})
    if name == "temperature":
        return params.replace(t_left=value, t_right=value)
    if name == "gamma_ratio":
        return params.replace(gamma_left=value * params.gamma_right)
    if name == "coupling_ratio":
        return params.replace(g=math.sqrt(params.gamma_left * params.gamma_right / (4.0 * value)))
    if name == "x":
        t = params.omega / value
        return params.replace(t_left=t, t_right=t)
    raise SchemaError(f"unknown axis {name!r}")


def _contrast_global(p: ModelParams) -> float:
    return ag.contrast_global(p) if p.t_right == 0 else ag.contrast_global_swap(p)


def _numeric_current(p: ModelParams) -> float:
    from .numerics import local_current
    return local_current(p)


def _concurrence(p: ModelParams) -> float:
    from .numerics import build_local_liouvillian, concurrence, steady_state
    return concurrence(steady_state(build_local_liouvillian(p)))


def _entropy_rate(p: ModelParams) -> float:
    from .numerics import entropy_rate
    return entropy_rate(p, al.current_two(p))


def _critical_current(p: ModelParams) -> float:
    from .numerics import critical_current
    return critical_current(p)


def _ndtc_derivative(p: ModelParams) -> float:
    return al.differential_current(p, p.t_left - p.t_right, 1e-5 * p.omega)


QUANTITIES: dict[str, Callable[[ModelParams], float]] = {
    "current_local": al.current_two,
    "current_local_1": al.current_single,
    "current_numeric": _numeric_current,
    "current_global": ag.current_global,
    "contrast_local": lambda p: al.contrast(p, "two").contrast,
    "contrast_single": lambda p: al.contrast(p, "single").contrast,
    "contrast_global": _contrast_global,
    "conductance_local_1": lambda p: al.conductance_single(p, p.t_left),
    "conductance_local_2": lambda p: al.conductance_two(p, p.t_left),
    "conductance_global": lambda p: ag.conductance_global(p, p.t_left),
    "alpha": al.scaling_alpha,
    "alpha_0": lambda p: al.alpha_limits(p)[0],
    "alpha_1": lambda p: al.alpha_limits(p)[1],
    "alpha_2": lambda p: al.alpha_limits(p)[2],
    "concurrence": _concurrence,
    "entropy_rate": _entropy_rate,
    "critical_current": _critical_current,
    "ndtc_derivative": _ndtc_derivative,
    "inverse_x": lambda p: p.t_left / p.omega,
    "half_coth_x": lambda p: 0.5 * coth_half(2.0 * p.omega, p.t_left),
}
_CHAIN = re.compile(r"^chain_current\((\d+)\)$")


def quantity_function(name: str) -> Callable[[ModelParams], float]:
    if name in QUANTITIES:
        return QUANTITIES[name]
    m = _CHAIN.match(name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise SchemaError("chain_current needs N >= 1")
        return lambda p: al.current_chain(p, n)
    raise SchemaError(f"unknown quantity {name!r}")


@dataclass(frozen=True)
class Grid:
    min: float
    max: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if not isinstance(self.points, int) or isinstance(self.points, bool) or self.points < 2:
            raise SchemaError("grid.points must be an integer >= 2")
        if not self.min < self.max:
            raise SchemaError("grid.min must be smaller than grid.max")
        if self.spacing not in ("linear", "log"):
            raise SchemaError("grid.spacing must be 'linear' or 'log'")
        if self.spacing == "log" and not self.min > 0:
            raise SchemaError("log spacing needs grid.min > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    grid: Grid
    fixed: ModelParams
    quantities: tuple[str, ...]
    series_param: str | None = None
    series_values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for name in (self.axis,) + ((self.series_param,) if self.series_param else ()):
            if name not in _NUMERIC_FIELDS and name not in DERIVED_AXES:
                raise SchemaError(f"unknown sweep parameter {name!r}")
        if not self.quantities:
            raise SchemaError("at least one quantity is required")
        for q in self.quantities:
            quantity_function(q)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SweepSpec":
        if not isinstance(data, Mapping):
            raise SchemaError("sweep spec must be a JSON object")
        allowed = {"axis", "grid", "fixed", "quantities", "series"}
        missing = sorted({"axis", "grid", "fixed", "quantities"} - set(data))
        extra = sorted(set(data) - allowed)
        if missing or extra:
            raise SchemaError("; ".join(filter(None, [
                "missing field(s): " + ", ".join(missing) if missing else "",
                "unknown field(s): " + ", ".join(extra) if extra else ""])))
        g = data["grid"]
        if not isinstance(g, Mapping) or not {"min", "max", "points"} <= set(g):
            raise SchemaError("grid needs min, max, points (and optional spacing)")
        grid = Grid(float(g["min"]), float(g["max"]), g["points"], g.get("spacing", "linear"))
        quantities = data["quantities"]
        if not isinstance(quantities, list) or not all(isinstance(q, str) for q in quantities):
            raise SchemaError("quantities must be a list of names")
        series_param, series_values = None, ()
        if "series" in data:
            s = data["series"]
            if not isinstance(s, Mapping) or set(s) != {"param", "values"}:
                raise SchemaError("series needs exactly 'param' and 'values'")
            series_param = s["param"]
            series_values = tuple(float(v) for v in s["values"])
            if not series_values:
                raise SchemaError("series.values must not be empty")
        return cls(data["axis"], grid, ModelParams.from_dict(data["fixed"]), tuple(quantities),
                   series_param, series_values)

    @classmethod
    def from_json(cls, text: str) -> "SweepSpec":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc

    def columns(self) -> list[tuple[str, float | None, str]]:
        """(quantity, series value, header) for every output column."""
        if self.series_param is None:
            return [(q, None, q) for q in self.quantities]
        return [(q, v, f"{q}[{self.series_param}={format(v, 'g')}]")
                for v in self.series_values for q in self.quantities]

    def header(self) -> list[str]:
        return [self.axis] + [c[2] for c in self.columns()]


def _evaluate_row(job: tuple[SweepSpec, int]) -> tuple[int, list[str], list[str]]:
    spec, index = job
    x = float(spec.grid.values()[index])
    cells, notes = [fmt(x)], []
    for quantity, series_value, header in spec.columns():
        try:
            p = spec.fixed
            if spec.series_param is not None:
                p = apply_axis(p, spec.series_param, series_value)
            p = apply_axis(p, spec.axis, x)
            value = float(quantity_function(quantity)(p))
            if not math.isfinite(value):
                raise QTMError(f"non-finite result {value}")
            cells.append(fmt(value))
        except (QTMError, ValueError, ZeroDivisionError, OverflowError) as exc:
            cells.append("")
            notes.append(f"{spec.axis}={fmt(x)} {header}: {exc}")
    return index, cells, notes


def run_sweep(spec: SweepSpec, jobs: int | None = None) -> tuple[list[list[str]], list[str]]:
    """Evaluate every grid point; rows come back in grid order regardless of scheduling."""
    if jobs is None:
        jobs = os.cpu_count() or 1
    work = [(spec, i) for i in range(spec.grid.points)]
    if jobs <= 1:
        results = [_evaluate_row(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_row, work, chunksize=max(1, len(work) // (4 * jobs))))
    results.sort(key=lambda r: r[0])
    rows = [spec.header()] + [r[1] for r in results]
    notes = [n for r in results for n in r[2]]
    return rows, notes


def render_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def canonicalize_csv(text: str) -> str:
    """Parse a sweep CSV and re-emit it with canonical float formatting."""
    reader = list(csv.reader(io.StringIO(text)))
    if not reader:
        raise SchemaError("empty CSV")
    out = [reader[0]]
    for row in reader[1:]:
        out.append([fmt(float(c)) if c != "" else "" for c in row])
    return render_csv(out)


def write_sweep(spec: SweepSpec, path: str, jobs: int | None = None) -> list[str]:
    rows, notes = run_sweep(spec, jobs)
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(rows))
    for note in notes:
        print(f"note: {note}", file=sys.stderr)
    return notes
