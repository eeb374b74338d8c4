"""Command line entry points.

Subcommands: crb (bound tables), simulate (one scenario, both estimators),
sweep (Monte-Carlo grid), compare (method report from a summary CSV), plot
(SVG chart from a summary CSV).  All commands are non-interactive and their
outputs are fully determined by flags and config files.

Exit codes: 0 success, 1 estimator hard failure (simulate), 2 usage or
config errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import CONSTANTS_NOTE, OperatingPoint, freq_crb_dual
from .experiments import ExperimentConfig, _sub_config, compare_report, read_summary_csv, render_compare_text, run_sweep
from .omp import OmpConfig, build_dictionary, omp_recover, prepare_stacked
from .signal_core import (
    NoiseConfig,
    SamplingScheme,
    Scenario,
    ToneParams,
    add_noise,
    synthesize,
)
from .sngem import EstimationError, EstimatorConfig, estimate
from .svgplot import PlotSpec, plot_spec_from_dict, render_chart

OBSERVATION_COLUMNS = ("t", "x", "xdot")
TRUTH_COLUMNS = ("tone_idx", "f_true_hz", "a_true", "phi_true_rad")
ESTIMATE_COLUMNS = (
    "method",
    "f_hat",
    "a_hat",
    "phi_hat",
    "ratio",
    "f_ratio",
    "fold_index",
    "mirror",
)

_CRB_COLUMNS = (
    "n_samples",
    "snr_db",
    "frequency",
    "amp_var_bound",
    "amp_relvar_bound",
    "ratio_var_bound",
    "ratio_relvar_bound",
    "freq_relvar_single_channel",
    "freq_relvar_bound",
    "penalty_db",
)


def parse_sweep(text: str, integer: bool = False):
    """Parse a swept flag value: a number or inclusive start:step:stop."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            values = [float(parts[0])]
        elif len(parts) == 3:
            start, step, stop = (float(p) for p in parts)
            if step <= 0.0:
                raise ValueError(f"sweep step must be positive in {text!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            if count < 1:
                raise ValueError(f"sweep {text!r} contains no values")
            values = [start + i * step for i in range(count)]
        else:
            raise ValueError(f"expected a number or start:step:stop, got {text!r}")
    except ValueError as exc:
        # argparse turns ValueError from a type callable into exit code 2
        raise ValueError(str(exc) or f"bad numeric value {text!r}") from None
    if integer:
        for v in values:
            if abs(v - round(v)) > 1e-9:
                raise ValueError(f"expected integer values, got {v} in {text!r}")
        return [int(round(v)) for v in values]
    return values


def _sweep_arg(text: str):
    return parse_sweep(text)


def _int_sweep_arg(text: str):
    return parse_sweep(text, integer=True)


def load_json(path):
    """Read a JSON document; parse errors carry line and column."""
    raw = Path(path).read_text()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def _require_keys(doc: dict, allowed: set, label: str) -> None:
    if not isinstance(doc, dict):
        raise ValueError(f"{label} must be a JSON object")
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown {label} keys: {sorted(unknown)}")


def scenario_from_dict(doc: dict) -> Scenario:
    _require_keys(doc, {"band_limit", "tones", "min_separation"}, "scenario")
    if "band_limit" not in doc or "tones" not in doc:
        raise ValueError("scenario needs band_limit and tones")
    tones = []
    for i, tdoc in enumerate(doc["tones"]):
        _require_keys(tdoc, {"amplitude", "frequency", "phase"}, f"tones[{i}]")
        tones.append(ToneParams(**tdoc))
    return Scenario(
        tones=tuple(tones),
        band_limit=doc["band_limit"],
        min_separation=doc.get("min_separation", 0.0),
    )


def scheme_from_dict(doc: dict) -> SamplingScheme:
    _require_keys(
        doc,
        {"variant", "num_samples", "sample_rate", "base_rate", "compression", "seed"},
        "scheme",
    )
    return SamplingScheme(**doc)


def noise_from_dict(doc: dict, scenario: Scenario) -> NoiseConfig:
    """Noise section: sigma_x directly, or snr_db relative to the strongest tone."""
    _require_keys(
        doc, {"sigma_x", "snr_db", "convention", "reference_frequency"}, "noise"
    )
    if ("sigma_x" in doc) == ("snr_db" in doc):
        raise ValueError("noise needs exactly one of sigma_x or snr_db")
    if "sigma_x" in doc:
        sigma_x = float(doc["sigma_x"])
    else:
        snr = 10.0 ** (float(doc["snr_db"]) / 10.0)
        a_ref = float(np.max(scenario.amplitudes))
        sigma_x = a_ref / math.sqrt(2.0 * snr)
    return NoiseConfig(
        sigma_x=sigma_x,
        convention=doc.get("convention", "equal_snr"),
        reference_frequency=doc.get("reference_frequency"),
    )


@dataclass(frozen=True)
class SimulateConfig:
    scenario: Scenario
    scheme: SamplingScheme
    noise: NoiseConfig | None = None
    methods: tuple = ("sngem", "omp")
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    omp: OmpConfig = field(default_factory=OmpConfig)


def simulate_config_from_dict(doc: dict) -> SimulateConfig:
    _require_keys(
        doc,
        {"scenario", "scheme", "noise", "methods", "estimator", "omp"},
        "simulate config",
    )
    if "scenario" not in doc or "scheme" not in doc:
        raise ValueError("simulate config needs scenario and scheme sections")
    scenario = scenario_from_dict(doc["scenario"])
    scheme = scheme_from_dict(doc["scheme"])
    noise_doc = doc.get("noise")
    noise = None if noise_doc is None else noise_from_dict(noise_doc, scenario)
    methods = tuple(doc.get("methods", ("sngem", "omp")))
    unknown = set(methods) - {"sngem", "omp"}
    if unknown or not methods:
        raise ValueError(f"methods must be a nonempty subset of sngem/omp, got {methods}")
    est = doc.get("estimator")
    omp_doc = doc.get("omp")
    return SimulateConfig(
        scenario=scenario,
        scheme=scheme,
        noise=noise,
        methods=methods,
        estimator=(
            EstimatorConfig()
            if est is None
            else _sub_config(EstimatorConfig, est, "estimator")
        ),
        omp=OmpConfig() if omp_doc is None else _sub_config(OmpConfig, omp_doc, "omp"),
    )


def _cell(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def cmd_crb(args) -> int:
    rows = []
    for n in args.n:
        for snr_db in args.snr_db:
            for freq in args.freq:
                op = OperatingPoint(
                    n_samples=n, snr=10.0 ** (snr_db / 10.0), frequency=freq
                )
                rep = freq_crb_dual(op)
                rows.append(
                    (
                        n,
                        snr_db,
                        freq,
                        rep.amp_var_bound,
                        rep.amp_relvar_bound,
                        rep.ratio_var_bound,
                        rep.ratio_relvar_bound,
                        rep.freq_relvar_single_channel,
                        rep.freq_relvar_bound,
                        rep.penalty_db,
                    )
                )
    note = CONSTANTS_NOTE
    if args.csv:
        writer = csv.writer(sys.stdout)
        print(f"# {note}")
        writer.writerow(_CRB_COLUMNS)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return 0
    cells = [[f"{v:.6g}" if isinstance(v, float) else str(v) for v in row] for row in rows]
    widths = [
        max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
        for i, h in enumerate(_CRB_COLUMNS)
    ]
    print("  ".join(h.rjust(w) for h, w in zip(_CRB_COLUMNS, widths)))
    for r in cells:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    print(f"\nnote: {note}")
    return 0


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_simulate(args) -> int:
    cfg = simulate_config_from_dict(load_json(args.config))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    obs = synthesize(cfg.scenario, cfg.scheme)
    if cfg.noise is not None:
        obs = add_noise(obs, cfg.noise, args.seed)

    _write_csv(
        out / "observation.csv",
        OBSERVATION_COLUMNS,
        (
            (_cell(float(t)), _cell(float(x)), _cell(float(d)))
            for t, x, d in zip(obs.times, obs.x, obs.xdot)
        ),
    )
    _write_csv(
        out / "truth.csv",
        TRUTH_COLUMNS,
        (
            (_cell(i), _cell(t.frequency), _cell(t.amplitude), _cell(t.phase))
            for i, t in enumerate(cfg.scenario.tones)
        ),
    )

    est_rows = []
    for method in cfg.methods:
        try:
            if method == "sngem":
                result = estimate(obs, cfg.estimator, cfg.scenario.band_limit)
                for w in result.warnings:
                    print(f"sngem: {w}", file=sys.stderr)
                for failure in result.failures:
                    print(
                        f"sngem: component at alias "
                        f"{failure.alias_frequency:.6g} Hz failed: {failure.reason}",
                        file=sys.stderr,
                    )
                for t in result.tones:
                    est_rows.append(
                        (
                            method,
                            _cell(t.frequency),
                            _cell(t.amplitude),
                            _cell(t.phase),
                            _cell(t.ratio),
                            _cell(t.f_ratio),
                            _cell(t.fold_index),
                            _cell(t.mirror),
                        )
                    )
            else:
                base = build_dictionary(
                    obs.times, cfg.scenario.band_limit, cfg.omp.grid_size
                )
                stacked = prepare_stacked(
                    base, obs.sigma_x, obs.sigma_xdot, cfg.omp.use_derivative_channel
                )
                result = omp_recover(obs, stacked, cfg.omp)
                for t in result.tones:
                    est_rows.append(
                        (method, _cell(t.frequency), _cell(t.amplitude), _cell(t.phase), "", "", "", "")
                    )
        except (EstimationError, np.linalg.LinAlgError, ValueError) as exc:
            print(f"{method} failed: {exc}", file=sys.stderr)
            return 1
    _write_csv(out / "estimates.csv", ESTIMATE_COLUMNS, est_rows)
    return 0


def cmd_sweep(args) -> int:
    cfg = ExperimentConfig.from_dict(load_json(args.config))
    run_sweep(cfg, out_dir=args.out_dir)
    out = Path(args.out_dir)
    print(f"wrote {out / 'trials.csv'}, {out / 'summary.csv'}, {out / 'config_echo.json'}")
    return 0


def cmd_compare(args) -> int:
    summary = read_summary_csv(args.input)
    report = compare_report(summary)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        sys.stdout.write(render_compare_text(report))
    return 0


def cmd_plot(args) -> int:
    summary = read_summary_csv(args.input)
    doc = {} if args.spec is None else load_json(args.spec)
    spec = plot_spec_from_dict(doc)
    out = args.out or spec.output
    if out is None:
        raise ValueError("no output path: pass --out or set output in the spec")
    svg = render_chart(summary, spec)
    with open(out, "w", newline="") as fh:
        fh.write(svg)
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subnyq",
        description="dual-channel sub-Nyquist tone estimation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_crb = sub.add_parser("crb", help="print frequency/amplitude bound tables")
    p_crb.add_argument("--n", type=_int_sweep_arg, required=True, help="sample count, sweepable as start:step:stop")
    p_crb.add_argument("--snr-db", type=_sweep_arg, required=True, help="SNR in dB, sweepable")
    p_crb.add_argument("--freq", type=_sweep_arg, required=True, help="tone frequency in Hz, sweepable")
    p_crb.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    p_crb.set_defaults(func=cmd_crb)

    p_sim = sub.add_parser("simulate", help="run both estimators on one scenario")
    p_sim.add_argument("--config", required=True, help="simulate config JSON")
    p_sim.add_argument("--seed", type=int, default=0, help="noise seed")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a Monte-Carlo sweep")
    p_sweep.add_argument("--config", required=True, help="experiment config JSON")
    p_sweep.add_argument("--out-dir", required=True, help="output directory")
    p_sweep.set_defaults(func=cmd_sweep)

    p_cmp = sub.add_parser("compare", help="method comparison from a summary CSV")
    p_cmp.add_argument("--in", dest="input", required=True, help="summary CSV path")
    p_cmp.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p_cmp.set_defaults(func=cmd_compare)

    p_plot = sub.add_parser("plot", help="render a summary CSV to an SVG chart")
    p_plot.add_argument("--in", dest="input", required=True, help="summary CSV path")
    p_plot.add_argument("--spec", default=None, help="plot spec JSON path")
    p_plot.add_argument("--out", default=None, help="output SVG path")
    p_plot.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
