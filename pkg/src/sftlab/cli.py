"""Config ingestion, subcommand orchestration and bit-stable tabular output.

Config files are JSON with the shape::

    {
      "subshift": {"alphabet_size": 2, "forbidden": [[2, 2]]},
      "markov":   {"transition": [[0.5, 0.5], [1.0, 0.0]]},
      "grid":     {"count": 101, "k_min": 0.05, "k_max": 3.09},
      "mc":       {"n_steps": 100000, "n_samples": 100, "seed": 1234},
      "bands":    {"grid_points": 2001, "tol": 1e-10, "max_period": 6},
      "epsilon": 0.01,
      "exclusion_halfwidth": 0.02
    }

Floats in CSV output carry 17 significant digits, so tables round-trip
exactly and identical configs give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .cocycle import solve_difference
from .errors import (
    ParseError,
    ResolutionTooCoarse,
    SftlabError,
    SingularEnergy,
    UnknownSubcommand,
)
from .graph_model import VertexData, kirchhoff_residual
from .lyapunov import McParams, lyapunov_mc, lyapunov_mc_grid, lyapunov_periodic, zero_set_scan
from .measure import MarkovMeasure, sample_window, stationary_markov
from .sft import SubshiftSpec, enumerate_periodic_points, validate_spec
from .spectra import band_set, exceptional_candidates

SUBCOMMANDS = ("periodic", "bands", "lyapunov", "zeroset", "candidates", "kalinin", "verify-graph")

_NUMERIC_ERRORS_EXIT_3 = (ResolutionTooCoarse, SingularEnergy)

VERIFY_GRAPH_WINDOW = (-1, 48)
VERIFY_GRAPH_DATA = (1.0, 0.5)  # (u0, um1)


@dataclass(frozen=True)
class GridSpec:
    count: int
    k_min: float
    k_max: float

    def points(self) -> list[float]:
        return [float(x) for x in np.linspace(self.k_min, self.k_max, self.count)]


@dataclass(frozen=True)
class BandParams:
    grid_points: int
    tol: float
    max_period: int


@dataclass(frozen=True)
class RunConfig:
    spec: SubshiftSpec
    measure: MarkovMeasure
    grid: GridSpec
    mc: McParams
    bands: BandParams
    epsilon: float
    exclusion_halfwidth: float


def _get(mapping, key, kind, context):
    if key not in mapping:
        raise ParseError(f"{context}.{key}: missing")
    value = mapping[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"{context}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def load_config(path: str) -> RunConfig:
    """Parse and validate a config file; all module-level invariants are
    re-checked here so a bad file fails before any computation starts."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")

    sub = _get(raw, "subshift", dict, "config")
    alphabet_size = _get(sub, "alphabet_size", int, "subshift")
    forbidden = sub.get("forbidden", [])
    if not isinstance(forbidden, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(x, int) for x in p) for p in forbidden
    ):
        raise ParseError("subshift.forbidden: expected a list of [i, j] letter pairs")
    try:
        spec = validate_spec(alphabet_size, [tuple(p) for p in forbidden])
    except ValueError as exc:
        raise ParseError(f"subshift: {exc}") from exc

    markov = _get(raw, "markov", dict, "config")
    transition = _get(markov, "transition", list, "markov")
    measure = stationary_markov(spec, transition)

    grid_raw = _get(raw, "grid", dict, "config")
    grid = GridSpec(
        _get(grid_raw, "count", int, "grid"),
        _get(grid_raw, "k_min", float, "grid"),
        _get(grid_raw, "k_max", float, "grid"),
    )
    if grid.count < 1 or not (0.0 <= grid.k_min <= grid.k_max <= np.pi):
        raise ParseError("grid: need count >= 1 and 0 <= k_min <= k_max <= pi")

    mc_raw = _get(raw, "mc", dict, "config")
    mc = McParams(
        _get(mc_raw, "n_steps", int, "mc"),
        _get(mc_raw, "n_samples", int, "mc"),
        _get(mc_raw, "seed", int, "mc"),
    )
    if mc.n_steps < 1000 or mc.n_samples < 2 or mc.seed < 0:
        raise ParseError("mc: need n_steps >= 1000, n_samples >= 2, seed >= 0")

    bands_raw = _get(raw, "bands", dict, "config")
    bands = BandParams(
        _get(bands_raw, "grid_points", int, "bands"),
        _get(bands_raw, "tol", float, "bands"),
        _get(bands_raw, "max_period", int, "bands"),
    )
    if bands.grid_points < 64 or bands.tol <= 0.0 or bands.max_period < 1:
        raise ParseError("bands: need grid_points >= 64, tol > 0, max_period >= 1")

    epsilon = _get(raw, "epsilon", float, "config")
    halfwidth = _get(raw, "exclusion_halfwidth", float, "config")
    if epsilon < 0.0 or halfwidth < 0.0:
        raise ParseError("epsilon and exclusion_halfwidth must be nonnegative")

    return RunConfig(spec, measure, grid, mc, bands, epsilon, halfwidth)


@dataclass
class ResultTable:
    """Schema id, column names and scalar rows; serializes with exact float
    round-trip."""

    schema_id: str
    columns: tuple[str, ...]
    rows: list[tuple]

    def _cell(self, value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return format(value, ".17g")
        return str(value)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([self._cell(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {"schema": self.schema_id, "columns": list(self.columns), "rows": [list(r) for r in self.rows]},
            indent=2,
        )


def _cycle_str(p) -> str:
    return ",".join(str(a) for a in p.cycle.letters)


def run_subcommand(
    name: str,
    config: RunConfig,
    *,
    k: float | None = None,
    seed: int | None = None,
    max_period: int | None = None,
) -> ResultTable:
    """Execute one subcommand and return its table.  ``k``, ``seed`` and
    ``max_period`` override config values where the subcommand uses them."""
    mp = max_period if max_period is not None else config.bands.max_period

    if name == "periodic":
        points = enumerate_periodic_points(config.spec, mp)
        return ResultTable("periodic", ("period", "cycle"), [(p.period, _cycle_str(p)) for p in points])

    if name == "bands":
        rows = []
        for p in enumerate_periodic_points(config.spec, mp):
            b = band_set(p, config.bands.grid_points, config.bands.tol)
            for i, (lo, hi) in enumerate(b.intervals):
                rows.append((p.period, _cycle_str(p), i, lo, hi))
        return ResultTable("bands", ("period", "cycle", "band_index", "k_lo", "k_hi"), rows)

    if name == "candidates":
        cand = exceptional_candidates(config.spec, mp, config.bands.grid_points, config.bands.tol)
        rows = [(i, lo, hi) for i, (lo, hi) in enumerate(cand.intervals)]
        return ResultTable("candidates", ("interval_index", "k_lo", "k_hi"), rows)

    if name == "lyapunov":
        estimates = lyapunov_mc_grid(
            config.measure, config.grid.points(), config.mc.n_steps, config.mc.n_samples, config.mc.seed
        )
        rows = [(e.k, e.value, e.stderr, e.n_steps, e.n_samples, e.seed) for e in estimates]
        return ResultTable(
            "lyapunov", ("k", "value", "stderr", "n_steps", "n_samples", "seed"), rows
        )

    if name == "zeroset":
        hits = zero_set_scan(
            config.measure,
            config.grid.points(),
            config.epsilon,
            config.mc,
            config.exclusion_halfwidth,
        )
        rows = [(h.k, h.estimate.value, h.estimate.stderr, h.in_exclusion_window) for h in hits]
        return ResultTable("zeroset", ("k", "value", "stderr", "in_exclusion_window"), rows)

    if name == "kalinin":
        if k is None:
            raise ParseError("kalinin requires --k")
        est = lyapunov_mc(config.measure, k, config.mc.n_steps, config.mc.n_samples, config.mc.seed)
        points = enumerate_periodic_points(config.spec, mp)
        rows = []
        for period_budget in range(1, mp + 1):
            gap = min(
                abs(lyapunov_periodic(p, k) - est.value)
                for p in points
                if p.period <= period_budget
            )
            rows.append((period_budget, gap))
        return ResultTable("kalinin", ("max_period", "gap"), rows)

    if name == "verify-graph":
        if k is None:
            raise ParseError("verify-graph requires --k")
        window_seed = seed if seed is not None else config.mc.seed
        first, last = VERIFY_GRAPH_WINDOW
        word = sample_window(config.measure, first, last, window_seed)
        u0, um1 = VERIFY_GRAPH_DATA
        values = solve_difference(k, word, u0, um1)
        residuals = kirchhoff_residual(VertexData(word, tuple(values)), k)
        rows = [(first + 1 + i, r) for i, r in enumerate(residuals)]
        return ResultTable("verify-graph", ("vertex", "residual"), rows)

    raise UnknownSubcommand(f"unknown subcommand {name!r}; expected one of {SUBCOMMANDS}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sftlab", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = subs.add_parser(name)
        sp.add_argument("--config", required=True, help="path to the JSON config")
        sp.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
        sp.add_argument("--output", default=None, help="write to a file instead of stdout")
        if name in ("periodic", "bands", "candidates", "kalinin"):
            sp.add_argument("--max-period", type=int, default=None)
        if name in ("kalinin", "verify-graph"):
            sp.add_argument("--k", type=float, required=True)
        if name == "verify-graph":
            sp.add_argument("--seed", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        table = run_subcommand(
            args.subcommand,
            config,
            k=getattr(args, "k", None),
            seed=getattr(args, "seed", None),
            max_period=getattr(args, "max_period", None),
        )
    except _NUMERIC_ERRORS_EXIT_3 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SftlabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = table.to_json() if args.json else table.to_csv()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
