"""Command-line orchestration: simulate runs to CSV/JSON, analyze them to reports.

Interfaces
----------
``qrevival simulate --preset <name> --out <prefix>`` or
``qrevival simulate --config <file.json> --out <prefix>`` write
``<prefix>_series.csv`` and ``<prefix>_meta.json``.

``qrevival analyze --series <csv> --meta <json> [--window N]
[--prominence X] [--qmax Q] [--tol T]`` writes ``<prefix>_report.json``
next to the series file and prints a summary table.

Exit codes: 0 success, 2 configuration error, 3 numeric error, 4 file
schema error.  CSV output is deterministic: a fixed 12-significant-digit
format and no timestamps, so identical configs give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from qrevival import __version__
from qrevival.entropy import ConjugatePair
from qrevival.errors import (
    ConfigError,
    ContractError,
    QRevivalError,
    SchemaError,
)
from qrevival.revivals import (
    build_report,
    collapse_window,
    default_window,
    format_order,
    run_diagnostics,
)
from qrevival.systems import (
    BouncerSystem,
    GaussianPacket,
    OscillatorSystem,
    Timescales,
    WellSystem,
    timescales,
)

UNITS_NOTE = (
    "scaled units: well runs use 2m = hbar = L = 1; bouncer runs are "
    "dimensionless (lengths in l_g, energies in m*g*l_g, hbar = 1); "
    "oscillator parameters are explicit"
)

_SYSTEMS = ("sho", "well", "bouncer")


@dataclass
class RunConfig:
    """Flat run description; mirrors the JSON config file key-for-key."""

    system: str
    sigma: float
    x0: float = 0.0  # initial height z0 for the bouncer
    p0: float = 0.0
    t_start: float = 0.0
    t_stop: float = 0.0
    samples: int = 0
    pairs: list = field(default_factory=list)
    components: list = field(default_factory=list)
    # oscillator
    m: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    # well
    L: float = 1.0
    n_min: int = 1
    n_max: int = 1
    completeness_tol: float | None = None
    # analyze defaults (overridable by flags)
    window: int | None = None
    prominence: float | None = None
    q_max: int = 10
    tolerance: float | None = None

    def conjugate_pairs(self) -> list[ConjugatePair]:
        try:
            return [ConjugatePair(alpha=a, beta=b) for a, b in self.pairs]
        except ContractError as exc:
            raise ConfigError(f"pairs: {exc}") from exc

    def validate(self) -> None:
        if self.system not in _SYSTEMS:
            raise ConfigError(f"system must be one of {_SYSTEMS}, got {self.system!r}")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.samples < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples}")
        if not self.t_stop > self.t_start:
            raise ConfigError(
                f"empty time span: t_start = {self.t_start}, t_stop = {self.t_stop}"
            )
        if not self.pairs:
            raise ConfigError("at least one conjugate pair is required")
        pairs = self.conjugate_pairs()
        for space, order in self.components:
            if space not in ("position", "momentum"):
                raise ConfigError(f"components: unknown space {space!r}")
            if not order > 0:
                raise ConfigError(f"components: order must be positive, got {order}")
        if self.q_max < 2:
            raise ConfigError(f"q_max must be >= 2, got {self.q_max}")
        if self.window is not None and self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.prominence is not None and self.prominence < 0:
            raise ConfigError(f"prominence must be >= 0, got {self.prominence}")

        system, packet = self.build_system()
        scales = timescales(system, packet)
        dt = (self.t_stop - self.t_start) / (self.samples - 1)
        per_tcl = scales.t_cl / dt
        if per_tcl < 8.0:
            raise ConfigError(
                f"time grid too coarse: {per_tcl:.2f} samples per T_cl (need >= 8); "
                f"raise samples to >= {math.ceil(8 * (self.t_stop - self.t_start) / scales.t_cl) + 1}"
            )
        if self.system == "well":
            support = 5.0 if (self.completeness_tol or 1e-6) <= 1e-6 else 3.0
            if not (
                self.x0 - support * self.sigma > 0.0
                and self.x0 + support * self.sigma < self.L
            ):
                raise ConfigError(
                    f"packet support x0 +- {support:g} sigma must lie inside (0, L)"
                )
        if self.system == "bouncer":
            if self.p0 != 0.0:
                raise ConfigError("bouncer runs require p0 = 0")
            if not (self.x0 > 0 and self.x0 >= 5.0 * self.sigma):
                raise ConfigError("bouncer packet needs z0 >= 5 sigma above the floor")

    def build_system(self):
        packet = GaussianPacket(x0=self.x0, p0=self.p0, sigma=self.sigma)
        if self.system == "sho":
            if min(self.m, self.omega, self.hbar) <= 0:
                raise ConfigError("m, omega, hbar must be positive")
            return OscillatorSystem(m=self.m, omega=self.omega, hbar=self.hbar), packet
        if self.system == "well":
            if min(self.m, self.L, self.hbar) <= 0:
                raise ConfigError("m, L, hbar must be positive")
            if not (1 <= self.n_min <= self.n_max):
                raise ConfigError(
                    f"need 1 <= n_min <= n_max, got [{self.n_min}, {self.n_max}]"
                )
            return (
                WellSystem(
                    m=self.m, L=self.L, hbar=self.hbar,
                    n_min=self.n_min, n_max=self.n_max,
                ),
                packet,
            )
        if self.system == "bouncer":
            if self.n_max < 1:
                raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
            return BouncerSystem.build(self.n_max), packet
        raise ConfigError(f"unknown system {self.system!r}")

    # -- JSON round trip -----------------------------------------------------

    def to_dict(self) -> dict:
        def encode_order(v):
            return "inf" if math.isinf(v) else v

        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "pairs":
                value = [[encode_order(a), encode_order(b)] for a, b in value]
            elif f.name == "components":
                value = [[space, encode_order(order)] for space, order in value]
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        def decode_order(v):
            if isinstance(v, str):
                if v.lower() in ("inf", "infinity"):
                    return math.inf
                raise ConfigError(f"cannot parse Renyi order {v!r}")
            return float(v)

        data = dict(data)
        if "z0" in data:  # bouncer configs may name the height z0
            data["x0"] = data.pop("z0")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "system" not in data or "sigma" not in data:
            raise ConfigError("config requires at least 'system' and 'sigma'")
        if "pairs" in data:
            try:
                data["pairs"] = [
                    (decode_order(a), decode_order(b)) for a, b in data["pairs"]
                ]
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"pairs must be a list of [alpha, beta]: {exc}") from exc
        if "components" in data:
            try:
                data["components"] = [
                    (str(space), decode_order(order)) for space, order in data["components"]
                ]
            except (TypeError, ValueError) as exc:
                raise ConfigError(
                    f"components must be a list of [space, order]: {exc}"
                ) from exc
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def series_columns(config: RunConfig) -> list[str]:
    cols = ["t", "autocorr_sq", "dxdp"]
    cols += [
        f"esum_{format_order(a)}_{format_order(b)}" for a, b in config.pairs
    ]
    prefix = {"position": "rpos", "momentum": "rmom"}
    cols += [
        f"{prefix[space]}_{format_order(order)}" for space, order in config.components
    ]
    return cols


def simulate(config: RunConfig, out_prefix: str) -> tuple[Path, Path]:
    """Run the configured simulation and write series CSV plus metadata JSON."""
    config.validate()
    system, packet = config.build_system()
    times = np.linspace(config.t_start, config.t_stop, config.samples)
    series = run_diagnostics(
        system,
        packet,
        times,
        config.conjugate_pairs(),
        components=tuple(config.components),
        completeness_tol=config.completeness_tol,
    )

    columns = series_columns(config)
    data = [series.times, series.autocorr_sq, series.uncertainty_product]
    data += [series.entropy_sums[pair] for pair in config.conjugate_pairs()]
    data += list(series.entropy_components.values())

    lines = [",".join(columns)]
    for i in range(len(times)):
        lines.append(",".join(_fmt(col[i]) for col in data))
    csv_path = Path(f"{out_prefix}_series.csv")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    _atomic_write(csv_path, "\n".join(lines) + "\n")

    scales = timescales(system, packet)
    meta = {
        "kind": "qrevival-series-meta",
        "version": __version__,
        "units": UNITS_NOTE,
        "config": config.to_dict(),
        "timescales": {
            "t_cl": scales.t_cl,
            "t_rev": scales.t_rev,
            "t_coll": scales.t_coll,
        },
        "columns": columns,
    }
    meta_path = Path(f"{out_prefix}_meta.json")
    _atomic_write(meta_path, json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return csv_path, meta_path


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _load_series(series_path: Path) -> tuple[list[str], np.ndarray]:
    try:
        with open(series_path) as fh:
            header = fh.readline().strip().split(",")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise SchemaError(f"cannot read series file: {exc}") from exc
    except ValueError as exc:
        raise SchemaError(f"malformed series CSV: {exc}") from exc
    if header[:3] != ["t", "autocorr_sq", "dxdp"]:
        raise SchemaError(
            f"series header must start with t,autocorr_sq,dxdp; got {header[:3]}"
        )
    if data.shape[0] < 2 or data.shape[1] != len(header):
        raise SchemaError(
            f"series shape {data.shape} inconsistent with {len(header)} columns"
        )
    if np.any(np.diff(data[:, 0]) <= 0):
        raise SchemaError("series times must be strictly increasing")
    return header, data


def _load_meta(meta_path: Path, header: list[str]) -> dict:
    try:
        meta = json.loads(Path(meta_path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read metadata file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"metadata is not valid JSON (line {exc.lineno}): {exc.msg}") from exc
    if meta.get("kind") != "qrevival-series-meta":
        raise SchemaError("metadata kind mismatch; not produced by qrevival simulate")
    for key in ("config", "timescales", "columns"):
        if key not in meta:
            raise SchemaError(f"metadata missing key {key!r}")
    t_cl = meta["timescales"].get("t_cl")
    if not isinstance(t_cl, (int, float)) or not t_cl > 0:
        raise SchemaError(f"metadata timescales.t_cl must be positive, got {t_cl!r}")
    if meta["columns"] != header:
        raise SchemaError("metadata column list does not match series header")
    return meta


def analyze(
    series_path: str | Path,
    meta_path: str | Path,
    window: int | None = None,
    prominence: float | None = None,
    q_max: int | None = None,
    tolerance: float | None = None,
) -> Path:
    """Detect and classify extrema of every diagnostic column; write the report.

    ``prominence`` is a fraction of each column's range.  Returns the report
    path (``<prefix>_report.json`` next to the series file).
    """
    series_path = Path(series_path)
    header, data = _load_series(series_path)
    meta = _load_meta(Path(meta_path), header)

    config = RunConfig.from_dict(meta["config"])
    raw_scales = meta["timescales"]
    scales = Timescales(
        t_cl=raw_scales.get("t_cl"),
        t_rev=raw_scales.get("t_rev"),
        t_coll=raw_scales.get("t_coll"),
    )
    times = data[:, 0]

    window_used = window or config.window or default_window(times, scales.t_cl)
    prom_fraction = prominence if prominence is not None else (
        config.prominence if config.prominence is not None else 0.02
    )
    q_used = q_max or config.q_max
    tol_used = tolerance if tolerance is not None else config.tolerance

    report_columns = {}
    for j, name in enumerate(header[1:], start=1):
        values = data[:, j]
        is_esum = name.startswith("esum_")
        column_report = build_report(
            values,
            times,
            scales,
            window=window_used,
            prominence=prom_fraction * float(values.max() - values.min()),
            q_max=q_used,
            tolerance=tol_used,
            estimate_collapse=is_esum,
            collapse_window_samples=(
                collapse_window(times, scales.t_coll)
                if is_esum and scales.t_coll
                else None
            ),
        )
        report_columns[name] = {
            "minima": [
                {
                    "time": m.time,
                    "value": m.value,
                    "fraction": [f.p, f.q] if f else None,
                    "residual": f.residual if f else None,
                }
                for m, f in column_report.minima
            ],
            "maxima": [
                {"time": m.time, "value": m.value} for m in column_report.maxima
            ],
            "collapse_estimate": column_report.collapse_estimate,
            "collapse_error": column_report.collapse_error,
        }

    report = {
        "kind": "qrevival-report",
        "version": __version__,
        "series": series_path.name,
        "timescales": raw_scales,
        "detection": {
            "window": window_used,
            "prominence_fraction": prom_fraction,
            "q_max": q_used,
            "tolerance": tol_used,
        },
        "columns": report_columns,
    }
    name = series_path.name
    base = name[: -len("_series.csv")] if name.endswith("_series.csv") else series_path.stem
    report_path = series_path.with_name(base + "_report.json")
    _atomic_write(report_path, json.dumps(report, indent=2, sort_keys=True) + "\n")
    _print_summary(report)
    return report_path


def _print_summary(report: dict) -> None:
    scales = report["timescales"]
    print(
        f"timescales: T_cl = {scales.get('t_cl')}, T_rev = {scales.get('t_rev')}, "
        f"T_coll = {scales.get('t_coll')}"
    )
    det = report["detection"]
    print(
        f"detection: window = {det['window']} samples, prominence = "
        f"{det['prominence_fraction']:.3g} of range, q_max = {det['q_max']}"
    )
    widths = max(len(c) for c in report["columns"])
    print(f"{'column':<{widths}}  minima  maxima  collapse      fractions")
    for name, entry in report["columns"].items():
        fractions = sorted(
            {(f["fraction"][0], f["fraction"][1]) for f in entry["minima"] if f["fraction"]},
            key=lambda pq: pq[0] / pq[1],
        )
        frac_text = " ".join(f"{p}/{q}" for p, q in fractions) or "-"
        collapse = entry["collapse_estimate"]
        collapse_text = f"{collapse:.6g}" if collapse is not None else (
            "error" if entry["collapse_error"] else "-"
        )
        print(
            f"{name:<{widths}}  {len(entry['minima']):>6}  {len(entry['maxima']):>6}  "
            f"{collapse_text:<12}  {frac_text}"
        )


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrevival",
        description="Wave-packet revival diagnostics for bound 1-D quantum systems.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a simulation and write series/meta files")
    source = sim.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="JSON file mirroring RunConfig")
    source.add_argument("--preset", help="bundled preset name (see --list-presets)")
    sim.add_argument("--out", required=True, help="output path prefix")

    sub.add_parser("list-presets", help="print bundled preset names")

    ana = sub.add_parser("analyze", help="detect/classify revivals in a series file")
    ana.add_argument("--series", required=True, help="series CSV from simulate")
    ana.add_argument("--meta", required=True, help="metadata JSON from simulate")
    ana.add_argument("--window", type=int, help="detection window in samples")
    ana.add_argument(
        "--prominence", type=float, help="detection prominence as a fraction of range"
    )
    ana.add_argument("--qmax", type=int, help="largest fraction denominator")
    ana.add_argument(
        "--tol", type=float, help="classification tolerance in absolute time"
    )
    return parser


def _run(args) -> int:
    if args.command == "list-presets":
        from qrevival.presets import preset_names

        for name in preset_names():
            print(name)
        return 0
    if args.command == "simulate":
        if args.preset:
            from qrevival.presets import get_preset

            config = get_preset(args.preset)
        else:
            path = Path(args.config)
            try:
                raw = json.loads(path.read_text())
            except OSError as exc:
                raise ConfigError(f"cannot read config file: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(
                    f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}"
                ) from exc
            config = RunConfig.from_dict(raw)
        csv_path, meta_path = simulate(config, args.out)
        print(f"wrote {csv_path} and {meta_path}")
        return 0
    if args.command == "analyze":
        report_path = analyze(
            args.series,
            args.meta,
            window=args.window,
            prominence=args.prominence,
            q_max=args.qmax,
            tolerance=args.tol,
        )
        print(f"wrote {report_path}")
        return 0
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 4
    except QRevivalError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
