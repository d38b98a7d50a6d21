"""Command-line front end: analytic and simulated sweeps, figure regeneration, diversity fits.

Exit codes: 0 success, 2 usage error, 3 configuration or input error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, fields
from typing import Iterable

from . import __version__, analytic, presets
from .geometry import Scheme
from .model import InfeasibleSICError, NetworkConfig, db_to_linear, derive_thresholds
from .numerics import QuadratureSpec
from .simulator import DEFAULT_TRIALS, RngPolicy, estimate_outage

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3, 4
CSV_SCHEMA = "coopnoma-csv/1"

CONFIG_KEYS = tuple(f.name for f in fields(NetworkConfig))
RUN_KEYS = ("snr_db", "scheme", "quad", "trials", "seed", "variant", "approx_relay_distance")
INFO_KEYS = ("schema", "tool_version", "command", "figure", "engine")

ANALYTIC_COLUMNS = ["snr_db", "scheme", "user", "variant", "probability", "raw_value", "clamped_flag"]
SIMULATE_COLUMNS = ANALYTIC_COLUMNS + ["stderr", "trials", "seed"]
FIGURE_COLUMNS = [
    "figure", "curve", "x_name", "x", "scheme", "user", "engine", "variant",
    "value", "stderr", "raw_value", "clamped_flag",
]  # fmt: skip


class UsageError(Exception):
    pass


class ConfigError(Exception):
    pass


# --- settings -------------------------------------------------------------------


@dataclass
class Settings:
    config: NetworkConfig
    snr_db: list[float]
    snr_text: str
    schemes: list[Scheme]
    quad: QuadratureSpec
    trials: int
    seed: int
    variant: str
    approx_relay_distance: bool


def fmt(x) -> str:
    """Shortest round-tripping text for a number; stable across runs."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def parse_snr_grid(text: str) -> list[float]:
    """``A:B:STEP`` (inclusive), a comma list, or a single value, all in dB."""
    text = text.strip()
    if not text:
        raise UsageError("empty SNR grid")
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise UsageError(f"SNR grid must be A:B:STEP, got {text!r}")
            a, b, step = parts
            if step <= 0:
                raise UsageError("SNR step must be positive")
            grid = presets.snr_grid(a, b, step)
        else:
            grid = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"cannot parse SNR grid {text!r}") from None
    if not grid:
        raise UsageError(f"SNR grid {text!r} is empty")
    return grid


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def read_config_file(path: str) -> dict[str, str]:
    """Read flat ``key=value`` lines; ``#`` starts a comment.

    A CSV written by this tool is also accepted: its ``# key=value`` manifest
    header is read and the data rows are ignored, which replays the run.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    manifest = bool(lines) and lines[0].startswith("# schema=")
    values: dict[str, str] = {}
    for lineno, line in enumerate(lines, 1):
        if manifest:
            if not line.startswith("#"):
                break
            line = line[1:]
        else:
            line = line.split("#", 1)[0]
        line = line.strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS + RUN_KEYS + INFO_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_settings(args, defaults: NetworkConfig | None = None, default_snr: str = "0:5:40") -> Settings:
    raw: dict[str, str] = {}
    if getattr(args, "config", None):
        raw.update(read_config_file(args.config))
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = v
    for key in ("snr_db", "scheme", "quad", "trials", "seed", "variant"):
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = str(v)
    if getattr(args, "approx_relay_distance", False):
        raw["approx_relay_distance"] = "1"

    base = defaults or NetworkConfig()
    changes = {}
    for key in CONFIG_KEYS:
        if key in raw:
            try:
                changes[key] = float(raw[key])
            except ValueError:
                raise ConfigError(f"{key} must be a number, got {raw[key]!r}") from None
    try:
        cfg = base.replace(**changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    snr_text = raw.get("snr_db", default_snr)
    grid = parse_snr_grid(snr_text)
    try:
        schemes = Scheme.parse(raw.get("scheme", "all"))
    except ValueError:
        raise UsageError(f"unknown scheme in {raw.get('scheme')!r}") from None
    try:
        quad = QuadratureSpec.parse(raw.get("quad", "30,30,30"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        trials = int(raw.get("trials", DEFAULT_TRIALS))
        seed = int(raw.get("seed", 0))
        approx = _parse_bool(raw.get("approx_relay_distance", "0"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if trials < 1:
        raise UsageError("--trials must be at least 1")
    if not 0 <= seed < 2**64:
        raise UsageError("--seed must lie in [0, 2**64)")
    variant = raw.get("variant", "auto")
    if variant != "auto" and variant not in {v.value for v in analytic.Variant}:
        raise UsageError(f"unknown variant {variant!r}")
    return Settings(cfg, grid, snr_text, schemes, quad, trials, seed, variant, approx)


def manifest_lines(command: str, st: Settings, extra: dict | None = None, engine: str | None = None) -> list[str]:
    lines = [f"# schema={CSV_SCHEMA}", f"# tool_version={__version__}", f"# command={command}"]
    for k, v in (extra or {}).items():
        lines.append(f"# {k}={v}")
    if engine:
        lines.append(f"# engine={engine}")
    for key in CONFIG_KEYS:
        if key == "rho":
            continue  # the SNR grid sets rho
        lines.append(f"# {key}={fmt(getattr(st.config, key))}")
    lines += [
        f"# snr_db={st.snr_text}",
        f"# scheme={','.join(s.value for s in st.schemes)}",
        f"# quad={st.quad}",
        f"# variant={st.variant}",
        f"# trials={st.trials}",
        f"# seed={st.seed}",
        f"# approx_relay_distance={fmt(st.approx_relay_distance)}",
    ]
    return lines


def write_table(out_path: str | None, header: list[str], columns: list[str], rows: Iterable[list]) -> None:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (int, float)) else v for v in row])
    text = buf.getvalue()
    if out_path and out_path != "-":
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- evaluation helpers ---------------------------------------------------------


NAN = float("nan")
SIM_USERS = ("near", "far_coop", "far_noncoop")


def _variant_arg(variant: str):
    return None if variant == "auto" else variant


def analytic_value(cfg: NetworkConfig, scheme: Scheme, user: str, st: Settings):
    """``(probability, raw, flag, variant_used)`` for one analytic point."""
    variant = _variant_arg(st.variant)
    used = str(analytic._resolve_variant(variant, cfg.alpha))
    th = derive_thresholds(cfg)
    if user != "near" and not th.sic_feasible:
        return NAN, NAN, "infeasible_sic", used
    if user == "near":
        v = analytic.outage_near(cfg, st.quad, scheme, variant)
    elif user == "far_coop":
        v = analytic.outage_far(cfg, st.quad, scheme, variant)
    elif user == "far_noncoop":
        v = analytic.outage_far_noncooperative(cfg, st.quad, scheme, variant)
    else:
        p_far = analytic.outage_far(cfg, st.quad, scheme, variant)
        p_near = analytic.outage_near(cfg, st.quad, scheme, variant)
        t = analytic.throughput_from_outages(p_far, p_near, cfg.r1, cfg.r2)
        return t, t, p_far.flag or p_near.flag, used
    return float(v), v.raw, v.flag, used


class SimulationCache:
    def __init__(self, st: Settings):
        self.st = st
        self._cache = {}

    def estimates(self, cfg: NetworkConfig, scheme: Scheme):
        key = (cfg, scheme)
        if key not in self._cache:
            if not derive_thresholds(cfg).sic_feasible:
                self._cache[key] = None
            else:
                self._cache[key] = estimate_outage(
                    cfg, scheme, self.st.trials, RngPolicy(self.st.seed),
                    approx_relay_distance=self.st.approx_relay_distance,
                )  # fmt: skip
        return self._cache[key]

    def value(self, cfg: NetworkConfig, scheme: Scheme, user: str):
        """``(probability, stderr, flag)``; SIC-infeasible points report near = 1 and far = nan."""
        est = self.estimates(cfg, scheme)
        if est is None:
            return (1.0, 0.0, "infeasible_sic") if user == "near" else (NAN, NAN, "infeasible_sic")
        if user == "throughput":
            t = analytic.throughput_from_outages(est.far_coop.probability, est.near.probability, cfg.r1, cfg.r2)
            var = (cfg.r1 * est.far_coop.stderr) ** 2 + (cfg.r2 * est.near.stderr) ** 2
            return t, math.sqrt(var), ""
        e = getattr(est, user)
        return e.probability, e.stderr, ""

    @property
    def variant(self) -> str:
        return "monte_carlo_approx_dc" if self.st.approx_relay_distance else "monte_carlo"


# --- commands -------------------------------------------------------------------


def _users(arg: str) -> list[str]:
    return list(SIM_USERS) if arg == "all" else [arg]


def cmd_analytic(args) -> int:
    st = build_settings(args)
    rows = []
    for snr in st.snr_db:
        cfg = st.config.with_snr_db(snr)
        for s in st.schemes:
            for user in _users(args.user):
                p, raw, flag, used = analytic_value(cfg, s, user, st)
                rows.append([snr, s.value, user, used, p, raw, flag])
    write_table(args.out, manifest_lines("analytic", st), ANALYTIC_COLUMNS, rows)
    return EXIT_OK


def cmd_simulate(args) -> int:
    st = build_settings(args)
    sim = SimulationCache(st)
    rows = []
    for snr in st.snr_db:
        cfg = st.config.with_snr_db(snr)
        for s in st.schemes:
            for user in _users(args.user):
                p, se, flag = sim.value(cfg, s, user)
                rows.append([snr, s.value, user, sim.variant, p, p, flag, se, st.trials, st.seed])
    write_table(args.out, manifest_lines("simulate", st), SIMULATE_COLUMNS, rows)
    return EXIT_OK


def agreement_report(rows: list[list], figure_id: int) -> list[str]:
    """Per-point relative gap ``|analytic − simulated| / simulated`` and its maximum."""
    idx = {c: i for i, c in enumerate(FIGURE_COLUMNS)}
    pairs: dict[tuple, dict[str, float]] = {}
    for r in rows:
        key = (r[idx["curve"]], r[idx["x_name"]], r[idx["x"]], r[idx["scheme"]], r[idx["user"]])
        pairs.setdefault(key, {})[r[idx["engine"]]] = r[idx["value"]]
    lines = [f"agreement report, figure {figure_id}", "curve,x_name,x,scheme,user,analytic,simulate,relative_gap"]
    worst, worst_key = -1.0, None
    for key, vals in pairs.items():
        if "analytic" not in vals or "simulate" not in vals:
            continue
        a, s = vals["analytic"], vals["simulate"]
        if math.isnan(a) or math.isnan(s):
            gap = NAN
        elif s == 0.0:
            gap = 0.0 if a == 0.0 else math.inf
        else:
            gap = abs(a - s) / abs(s)
        if not math.isnan(gap) and gap > worst:
            worst, worst_key = gap, key
        lines.append(",".join([key[0], key[1], fmt(key[2]), key[3], key[4], fmt(a), fmt(s), fmt(gap)]))
    if worst_key is None:
        lines.append("max_relative_gap=nan")
    else:
        lines.append(f"max_relative_gap={fmt(worst)} at curve={worst_key[0]} {worst_key[1]}={fmt(worst_key[2])} "
                     f"scheme={worst_key[3]} user={worst_key[4]}")  # fmt: skip
    return lines


def cmd_figure(args) -> int:
    try:
        spec = presets.figure(args.id)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    st = build_settings(args, defaults=spec.base, default_snr="0:50:5")
    points = spec.points(st.config)
    if args.scheme:
        points = [p for p in points if p.scheme in st.schemes]
    # honour an explicit SNR grid for SNR-swept figures
    if args.snr_db and points and points[0].x_name == "snr_db":
        wanted = set(st.snr_db)
        points = [p for p in points if p.x in wanted]
    engines = ("analytic", "simulate") if args.engine == "both" else (args.engine,)
    sim = SimulationCache(st)
    rows = []
    for pt in points:
        for engine in engines:
            if engine == "analytic":
                v, raw, flag, used = analytic_value(pt.config, pt.scheme, pt.quantity, st)
                se = NAN
            else:
                v, se, flag = sim.value(pt.config, pt.scheme, pt.quantity)
                raw, used = v, sim.variant
            rows.append([spec.figure_id, pt.curve, pt.x_name, pt.x, pt.scheme.value, pt.quantity, engine, used, v, se, raw, flag])
    header = manifest_lines("figure", st, {"figure": spec.figure_id}, engine=args.engine)
    write_table(args.out, header, FIGURE_COLUMNS, rows)
    if len(engines) == 2:
        report = "\n".join(agreement_report(rows, spec.figure_id)) + "\n"
        if args.report:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(report)
        else:
            (sys.stdout if args.out and args.out != "-" else sys.stderr).write(report)
    return EXIT_OK


_VALUE_COLUMNS = {"snr_db", "x", "probability", "value", "raw_value", "clamped_flag", "stderr", "trials", "seed"}


def read_curves(path: str) -> dict[tuple, list[tuple[float, float]]]:
    """Group a tool CSV into curves of ``(rho, probability)`` points keyed by descriptor columns."""
    try:
        with open(path, encoding="utf-8") as fh:
            body = [line for line in fh if not line.startswith("#")]
    except OSError as exc:
        raise ConfigError(f"cannot read {path!r}: {exc}") from None
    reader = csv.DictReader(body)
    cols = reader.fieldnames or []
    if "x_name" in cols:
        x_col, p_col = "x", "value"
    elif "snr_db" in cols:
        x_col, p_col = "snr_db", "probability"
    else:
        raise ConfigError(f"{path}: no SNR column; not a CSV written by this tool")
    if p_col not in cols:
        raise ConfigError(f"{path}: missing column {p_col!r}")
    keys = [c for c in cols if c not in _VALUE_COLUMNS and c != "x_name"]
    curves: dict[tuple, list[tuple[float, float]]] = {}
    for n, row in enumerate(reader, 2):
        if None in row or any(row.get(c) is None for c in cols):
            raise ConfigError(f"{path}: row {n} has the wrong number of fields")
        if "x_name" in row and row["x_name"] != "snr_db":
            continue
        if row.get("user") == "throughput":
            continue
        try:
            snr = float(row[x_col])
            p = float(row[p_col])
        except ValueError:
            raise ConfigError(f"{path}: row {n} has a non-numeric SNR or probability") from None
        key = tuple((c, row[c]) for c in keys)
        curves.setdefault(key, [])
        if math.isfinite(p) and 0.0 < p < 1.0:
            curves[key].append((db_to_linear(snr), p))
    return curves


def cmd_diversity(args) -> int:
    curves = read_curves(args.csv)
    lo = db_to_linear(args.min_snr) if args.min_snr is not None else -math.inf
    hi = db_to_linear(args.max_snr) if args.max_snr is not None else math.inf
    rows = []
    for key, pts in curves.items():
        pts = [(r, p) for r, p in pts if lo <= r <= hi]
        label = ";".join(f"{k}={v}" for k, v in key)
        try:
            fit = analytic.diversity_fit_band(pts, args.model, args.confidence)
            rows.append([label, args.model, fit.slope, fit.stderr, fit.low, fit.high, fit.points, "ok"])
        except analytic.DegenerateFitError as exc:
            rows.append([label, args.model, NAN, NAN, NAN, NAN, len(pts), f"skipped: {exc}"])
    header = [f"# schema={CSV_SCHEMA}", f"# tool_version={__version__}", "# command=diversity",
              f"# source={args.csv}", f"# model={args.model}", f"# confidence={fmt(args.confidence)}"]  # fmt: skip
    write_table(args.out, header, ["curve", "model", "slope", "stderr", "ci_low", "ci_high", "points", "status"], rows)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, simulate: bool, analytic_opts: bool):
    p.add_argument("--config", metavar="PATH", help="flat key=value file, or a CSV from a previous run")
    p.add_argument("--snr-db", dest="snr_db", metavar="A:B:STEP", help="SNR grid in dB (inclusive)")
    p.add_argument("--scheme", help="rnrf, nnnf, nnff, a comma list, or all")
    p.add_argument("--out", metavar="PATH", help="output CSV (stdout if omitted)")
    p.add_argument("--alpha", dest="alpha", metavar="F", help="path-loss exponent")
    for key in CONFIG_KEYS:
        if key == "alpha":
            continue
        flags = [f"--{key}"] + ([f"--{key.replace('_', '-')}"] if "_" in key else [])
        p.add_argument(*flags, dest=key, metavar="V", help=argparse.SUPPRESS)
    if analytic_opts:
        p.add_argument("--quad", metavar="N,K,M", help="quadrature orders")
        p.add_argument("--variant", help="auto, quadrature, closed_form, high_snr or oracle")
    if simulate:
        p.add_argument("--trials", type=int, help=f"Monte Carlo trials per point (default {DEFAULT_TRIALS})")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--approx-relay-distance", action="store_true", help="use d_C = d_A in the simulator")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopnoma", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="analytic outage table")
    _add_common(p, simulate=False, analytic_opts=True)
    p.add_argument("--user", choices=("near", "far_coop", "far_noncoop", "all"), default="all")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="Monte Carlo outage table")
    _add_common(p, simulate=True, analytic_opts=False)
    p.add_argument("--user", choices=("near", "far_coop", "far_noncoop", "all"), default="all")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure", help="regenerate a figure's data with both engines")
    p.add_argument("id", type=int, choices=sorted(presets.FIGURES), help="figure number")
    _add_common(p, simulate=True, analytic_opts=True)
    p.add_argument("--engine", choices=("analytic", "simulate", "both"), default="both")
    p.add_argument("--report", metavar="PATH", help="write the agreement report here")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("diversity", help="fit decay exponents to curves in a CSV")
    p.add_argument("csv", help="CSV produced by analytic, simulate or figure")
    p.add_argument("--model", choices=("plain", "log-corrected"), default="plain")
    p.add_argument("--min-snr", type=float, help="lowest SNR (dB) to include")
    p.add_argument("--max-snr", type=float, help="highest SNR (dB) to include")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_diversity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with 2
    except ConfigError as exc:
        print(f"coopnoma: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, InfeasibleSICError) as exc:
        print(f"coopnoma: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
