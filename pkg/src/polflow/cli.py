"""Command-line surface emitting deterministic CSV or JSON.

Subcommands: eval, field, flow, fixedpoints, expfam, replicator, series,
basins.  Output is data only (no plotting): comma-separated values with
'#'-prefixed comment lines and a header row, or a JSON array of row
objects.  All floats are rendered with 17 significant digits so repeated
runs are byte-identical.

Exit codes: 0 success, 2 input error, 3 domain error, 4 non-convergence.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import PolflowError
from .expfam import border_pol_expectation, build_triple_table, count_table
from .flow import CONVERGED, LEFT_DOMAIN, basin_map, find_fixed_points, integrate
from .indices import CubicIndexCoeffs, cubic_index_eta, pol_eta
from .natgrad import VectorField, cubic_field, pol_euclidean_field, pol_field
from .replicator import (CHARTS, EXPONENTIAL, PROJECTIVE, SOLID, LVParams,
                         integrate_replicator, lv_conserved, lv_fitness, lv_uplift,
                         point_to_chart)
from .timeseries import DistributionSeries, analyze_series

CHART_ALIASES = {"solid": SOLID, "exp": EXPONENTIAL, "proj": PROJECTIVE,
                 "exponential": EXPONENTIAL, "projective": PROJECTIVE}


class CliInputError(Exception):
    """Unparseable command input; exits with code 2."""


def fmt(x) -> str:
    """Fixed 17-significant-digit decimal rendering."""
    return f"{float(x):.17g}"


def _parse_floats(text: str, what: str) -> np.ndarray:
    try:
        return np.asarray([float(tok) for tok in text.split(",")], dtype=float)
    except ValueError:
        raise CliInputError(f"cannot parse {what} from {text!r}")


def parse_index(spec: str):
    """Return (label, value_fn_on_eta, VectorField) for an index spec."""
    if spec == "pol":
        return "pol", pol_eta, pol_field(2)
    if spec.startswith("cubic:"):
        vals = _parse_floats(spec[len("cubic:"):], "cubic coefficients")
        if vals.size != 5:
            raise CliInputError("cubic index needs five coefficients a,b,c,d,e")
        coeffs = CubicIndexCoeffs(*vals)
        return spec, (lambda eta: cubic_index_eta(coeffs, eta)), cubic_field(coeffs)
    raise CliInputError(f"unknown index {spec!r}; use pol or cubic:a,b,c,d,e")


def load_config(path: str) -> dict[str, str]:
    """Read a simple key=value configuration file."""
    config: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliInputError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                config[key.strip()] = value.strip()
    except OSError as exc:
        raise CliInputError(f"cannot read config {path}: {exc}")
    return config


@dataclass
class Settings:
    """Flag values with config-file fallback (flags > config > defaults)."""

    args: argparse.Namespace
    config: dict[str, str]

    def get(self, name: str, default=None, convert=str):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        if name in self.config:
            raw = self.config[name]
            try:
                return convert(raw)
            except ValueError:
                raise CliInputError(f"config value {name}={raw!r} is not valid")
        return default


class Writer:
    """Accumulates comments, a header, and rows; emits CSV or JSON."""

    def __init__(self, header: list[str]):
        self.header = header
        self.comments: list[str] = []
        self.rows: list[list] = []

    def comment(self, text: str):
        self.comments.append(text)

    def row(self, values):
        self.rows.append(list(values))

    def _cell(self, value) -> str:
        if value is None:
            return ""
        if isinstance(value, str):
            return value
        if isinstance(value, (bool, np.bool_)):
            return "1" if value else "0"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        return fmt(value)

    def render_csv(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        lines.append(",".join(self.header))
        for row in self.rows:
            lines.append(",".join(self._cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def render_json(self) -> str:
        def jsonable(value):
            if value is None or isinstance(value, str):
                return value
            if isinstance(value, (bool, np.bool_)):
                return bool(value)
            if isinstance(value, (int, np.integer)):
                return int(value)
            return float(fmt(value))

        records = [dict(zip(self.header, map(jsonable, row))) for row in self.rows]
        return json.dumps(records, indent=2) + "\n"


def emit(writer: Writer, settings: Settings) -> None:
    out_format = settings.get("format", "csv")
    if out_format not in ("csv", "json"):
        raise CliInputError(f"unknown format {out_format!r}")
    if settings.get("header", False):
        writer.comments.insert(0, f"polflow {__version__}")
    text = writer.render_csv() if out_format == "csv" else writer.render_json()
    out_path = settings.get("out")
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _read_point_rows(path: str) -> list[np.ndarray]:
    rows = []
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    rows.append(np.asarray([float(t) for t in line.split(",")]))
                except ValueError:
                    raise CliInputError(f"{path}:{lineno}: cannot parse row {line!r}")
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}")
    return rows


def cmd_eval(settings: Settings) -> int:
    label, value_fn, _ = parse_index(settings.get("index", "pol"))
    etas: list[np.ndarray] = []
    for spec in settings.args.eta or []:
        etas.append(_parse_floats(spec, "eta coordinates"))
    points_path = settings.get("points")
    if points_path:
        etas.extend(_read_point_rows(points_path))
    if not etas:
        raise CliInputError("no input points: pass --eta or --points")
    n = etas[0].size
    header = ([f"eta{j+1}" for j in range(n)] + [f"pi{j}" for j in range(n + 1)]
              + ["value"])
    writer = Writer(header)
    for eta in etas:
        if eta.size != n:
            raise CliInputError("all input points must share the dimension")
        pi = np.concatenate([[1.0 - eta.sum()], eta])
        writer.row([*eta, *pi, value_fn(eta)])
    emit(writer, settings)
    return 0


def _field_for(settings: Settings) -> tuple[str, VectorField]:
    label, _, field = parse_index(settings.get("index", "pol"))
    if settings.get("euclidean", False):
        if label != "pol":
            raise CliInputError("--euclidean is only defined for the pol index")
        return "pol-euclidean", pol_euclidean_field()
    return label, field


def cmd_field(settings: Settings) -> int:
    _, field = _field_for(settings)
    grid = settings.get("grid", 11, int)
    if grid < 2:
        raise CliInputError("grid resolution must be at least 2")
    extent = settings.get("extent", "0,1")
    lo_hi = _parse_floats(extent, "extent") if isinstance(extent, str) else extent
    if lo_hi.size != 2 or lo_hi[0] >= lo_hi[1]:
        raise CliInputError(f"extent must be lo,hi with lo < hi, got {extent!r}")
    ticks = np.linspace(lo_hi[0], lo_hi[1], grid)
    writer = Writer(["eta1", "eta2", "g1", "g2", "gnorm"])
    for e1 in ticks:
        for e2 in ticks:
            g = field(np.array([e1, e2]))
            writer.row([e1, e2, g[0], g[1], float(np.linalg.norm(g))])
    emit(writer, settings)
    return 0


def cmd_flow(settings: Settings) -> int:
    _, field = _field_for(settings)
    start = settings.get("start", "0.4,0.45")
    eta0 = _parse_floats(start, "start") if isinstance(start, str) else start
    if eta0.size != field.dimension:
        raise CliInputError("start point dimension does not match the field")
    dt = settings.get("dt", 0.01, float)
    t_max = settings.get("tmax", 50.0, float)
    tol = settings.get("tol", 1e-9, float)
    record = integrate(field, eta0, dt=dt, t_max=t_max, stop_tol=tol)
    n = field.dimension
    writer = Writer(["t"] + [f"eta{j+1}" for j in range(n)] + ["value", "fieldnorm"])
    for k, t in enumerate(record.times):
        state = record.states[k]
        value = record.values[k] if record.values is not None else None
        writer.row([t, *state, value, float(np.linalg.norm(field(state)))])
    writer.comment(f"terminal_reason={record.terminal_reason}")
    emit(writer, settings)
    return 4 if record.terminal_reason == LEFT_DOMAIN else 0


def cmd_fixedpoints(settings: Settings) -> int:
    _, field = _field_for(settings)
    grid = settings.get("grid", 7, int)
    extent = settings.get("extent", "0,1")
    lo_hi = _parse_floats(extent, "extent") if isinstance(extent, str) else extent
    tol = settings.get("tol", 1e-12, float)
    ticks = np.linspace(lo_hi[0], lo_hi[1], grid)
    seeds = [np.array([a, b]) for a in ticks for b in ticks]
    reports = find_fixed_points(field, seeds, newton_tol=tol)
    writer = Writer(["eta1", "eta2", "residual", "eig1_re", "eig1_im",
                     "eig2_re", "eig2_im", "classification"])
    for rep in reports:
        e = rep.eigenvalues
        writer.row([rep.location[0], rep.location[1], rep.residual,
                    e[0].real, e[0].imag, e[1].real, e[1].imag,
                    rep.classification])
    emit(writer, settings)
    return 0 if reports else 4


def cmd_expfam(settings: Settings) -> int:
    table = settings.get("table", "triples")
    if table == "triples":
        data = build_triple_table()
        writer = Writer(["case", "x", "y", "z", "x1", "y1", "z1",
                         "x2", "y2", "z2", "t1", "t2", "polarized"])
        for k, row in enumerate(data.rows, start=1):
            writer.row([k, *[int(v) for v in row], bool(data.polarization_mask[k - 1])])
    elif table == "counts":
        counts = count_table()
        writer = Writer(["t1", "t2", "count"])
        for t1 in range(4):
            for t2 in range(4):
                writer.row([t1, t2, int(counts.f[t1, t2])])
    elif table == "border":
        writer = Writer(["eta1", "eta2", "expectation"])
        for eta in ([0.0, 0.5], [0.5, 0.0], [0.5, 0.5]):
            writer.row([eta[0], eta[1], border_pol_expectation(np.asarray(eta))])
    else:
        raise CliInputError(f"unknown expfam table {table!r}")
    emit(writer, settings)
    return 0


def cmd_replicator(settings: Settings) -> int:
    alpha = settings.get("alpha", "1,1")
    avals = _parse_floats(alpha, "alpha") if isinstance(alpha, str) else alpha
    if avals.size != 2:
        raise CliInputError("alpha must be two rates a1,a2")
    params = LVParams(avals[0], avals[1])
    start = settings.get("start", "2,1")
    z0 = _parse_floats(start, "start z") if isinstance(start, str) else start
    if z0.size != 2:
        raise CliInputError("start must be z1,z2")
    chart_name = settings.get("chart", "solid")
    chart = CHART_ALIASES.get(chart_name)
    if chart is None:
        raise CliInputError(f"unknown chart {chart_name!r}; use solid, exp, or proj")
    dt = settings.get("dt", 1e-3, float)
    t_max = settings.get("tmax", 10.0, float)

    fitness = lv_fitness(params)
    state0 = point_to_chart(chart, lv_uplift(z0))
    traj = integrate_replicator(fitness, chart, state0, dt=dt, t_max=t_max)
    writer = Writer(["t", "state1", "state2", "pi0", "pi1", "pi2", "C"])
    for k, t in enumerate(traj.times):
        pi = traj.pi_states[k]
        z = pi[1:] / pi[0]
        writer.row([t, traj.chart_states[k][0], traj.chart_states[k][1],
                    pi[0], pi[1], pi[2], lv_conserved(params, z)])
    writer.comment(f"terminal_reason={traj.terminal_reason}")
    emit(writer, settings)
    return 4 if traj.terminal_reason == LEFT_DOMAIN else 0


def cmd_series(settings: Settings) -> int:
    path = settings.get("input")
    if not path:
        raise CliInputError("series needs --input FILE")
    index_spec = settings.get("index", "pol")
    parse_index(index_spec)
    index = index_spec
    if index_spec.startswith("cubic:"):
        index = CubicIndexCoeffs(*_parse_floats(index_spec[len("cubic:"):], "coefficients"))
    times = []
    rows = []
    try:
        with open(path, encoding="utf-8") as handle:
            header_seen = False
            for lineno, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if not header_seen:
                    header_seen = True
                    cols = [c.strip() for c in line.split(",")]
                    if cols[0] != "t":
                        raise CliInputError(f"{path}:{lineno}: header must start with t")
                    continue
                try:
                    values = [float(tok) for tok in line.split(",")]
                except ValueError:
                    raise CliInputError(f"{path}:{lineno}: cannot parse row {line!r}")
                times.append(values[0])
                rows.append(values[1:])
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}")
    if len(rows) < 2:
        raise CliInputError("series needs at least two rows")
    series = DistributionSeries.from_arrays(times, rows)
    report = analyze_series(series, index)
    n_cats = len(rows[0])
    writer = Writer(["t_from", "t_to", "value_from", "value_to", "delta_value",
                     *[f"v{j}" for j in range(n_cats)], "score", "cosine", "floored"])
    for step in report.steps:
        writer.row([step.t_from, step.t_to, step.value_from, step.value_to,
                    step.delta_value, *step.velocity, step.score, step.cosine,
                    step.floored])
    emit(writer, settings)
    return 0


def cmd_basins(settings: Settings) -> int:
    _, field = _field_for(settings)
    grid = settings.get("grid", 20, int)
    dt = settings.get("dt", 0.05, float)
    t_max = settings.get("tmax", 200.0, float)
    tol = settings.get("tol", 1e-9, float)
    result = basin_map(field, grid, dt=dt, t_max=t_max, stop_tol=tol)
    writer = Writer(["eta1", "eta2", "label", "attractor_eta1", "attractor_eta2"])
    for point, label in zip(result.grid, result.labels):
        if label >= 0:
            att = result.attractors[label]
            writer.row([point[0], point[1], int(label), att[0], att[1]])
        else:
            writer.row([point[0], point[1], -1, None, None])
    emit(writer, settings)
    return 0


COMMANDS = {
    "eval": cmd_eval,
    "field": cmd_field,
    "flow": cmd_flow,
    "fixedpoints": cmd_fixedpoints,
    "expfam": cmd_expfam,
    "replicator": cmd_replicator,
    "series": cmd_series,
    "basins": cmd_basins,
}


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--format", choices=["csv", "json"], default=None,
                     help="output format (default csv)")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--header", action="store_true", default=None,
                     help="prepend a version comment line")
    sub.add_argument("--config", default=None, help="key=value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polflow",
        description="Polarization gradient-flow toolkit: deterministic CSV/JSON emitters.",
    )
    parser.add_argument("--version", action="version", version=f"polflow {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("eval", help="evaluate an index at solid coordinates")
    p.add_argument("--index", default=None, help="pol or cubic:a,b,c,d,e")
    p.add_argument("--eta", action="append", default=None,
                   help="inline coordinates, e.g. 0.5,0.5 (repeatable)")
    p.add_argument("--points", default=None, help="CSV file of coordinate rows")
    _add_common(p)

    p = subs.add_parser("field", help="sample a gradient field on a grid")
    p.add_argument("--index", default=None)
    p.add_argument("--grid", type=int, default=None, help="points per axis")
    p.add_argument("--extent", default=None, help="lo,hi for both axes")
    p.add_argument("--euclidean", action="store_true", default=None,
                   help="emit the uncorrected Euclidean gradient instead")
    _add_common(p)

    p = subs.add_parser("flow", help="integrate the gradient flow from a start point")
    p.add_argument("--index", default=None)
    p.add_argument("--start", default=None, help="initial eta1,eta2")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--tol", type=float, default=None, help="stop tolerance on field norm")
    _add_common(p)

    p = subs.add_parser("fixedpoints", help="find and classify fixed points")
    p.add_argument("--index", default=None)
    p.add_argument("--grid", type=int, default=None, help="seed grid per axis")
    p.add_argument("--extent", default=None)
    p.add_argument("--tol", type=float, default=None, help="Newton tolerance")
    _add_common(p)

    p = subs.add_parser("expfam", help="dump exponential-family tables")
    p.add_argument("--table", choices=["triples", "counts", "border"], default=None)
    _add_common(p)

    p = subs.add_parser("replicator", help="integrate Lotka-Volterra replicator flows")
    p.add_argument("--alpha", default=None, help="rates a1,a2")
    p.add_argument("--start", default=None, help="initial z1,z2")
    p.add_argument("--chart", default=None, help="solid, exp, or proj")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--tmax", type=float, default=None)
    _add_common(p)

    p = subs.add_parser("series", help="velocity-index report for a series file")
    p.add_argument("--input", default=None, help="CSV with header t,p0,...,pn")
    p.add_argument("--index", default=None)
    _add_common(p)

    p = subs.add_parser("basins", help="label interior grid points by attractor")
    p.add_argument("--index", default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if getattr(args, "config", None) else {}
        settings = Settings(args, config)
        return COMMANDS[args.command](settings)
    except CliInputError as exc:
        print(f"polflow: input error: {exc}", file=sys.stderr)
        return 2
    except PolflowError as exc:
        print(f"polflow: domain error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
