"""Command-line front end: experiment runs, pulse demos, sweeps, condition checks.

Subcommands: ``shor-demo``, ``pulse``, ``sweep``, ``check-condition``. Reports
go to stdout as JSON or CSV (sweeps write a file); diagnostics go to stderr.
Exit codes: 0 success, 1 usage or config error, 2 run finished without a
factor. The SHORPHASE_FORMAT environment variable sets the default output
format; flags override it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import pulses, shor, statevec, transforms
from .config import (
    OUTPUT_FORMATS,
    ConfigError,
    DelaySchedule,
    ExperimentConfig,
    PipelineMode,
    build_config,
    config_to_text,
    parse_config_text,
)
from .pulses import PulseMode, PulseSpec, TwoLevelSystem, natural_init
from .statevec import wrap_phase

FORMAT_ENV_VAR = "SHORPHASE_FORMAT"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_FACTOR = 2

RUN_CSV_COLUMNS = (
    "mode", "tau1", "tau2", "seed", "measured_x", "period", "factor",
    "delta1", "delta2", "satisfied", "p0", "p1", "p2", "p3", "retries", "diagnostic",
)
PULSE_CSV_COLUMNS = (
    "mode", "e_k", "e_p", "rabi", "duration", "t0", "phase", "area",
    "ck_modulus", "ck_phase", "cp_modulus", "cp_phase",
    "ode_discrepancy", "phase_error_vs_coherent",
)
CONDITION_CSV_COLUMNS = ("tau1", "tau2", "delta1", "delta2", "satisfied")
SWEEP_CSV_COLUMNS = (
    "tau1", "tau2", "delta1", "delta2", "satisfied", "p0", "p1", "p2", "p3", "amp11_mod",
)


class UsageError(Exception):
    """Bad flags or unusable inputs; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 by default, which collides with the
    # no-factor exit code; route everything through UsageError instead.
    def error(self, message):
        raise UsageError(message)


def _default_format() -> str:
    fmt = os.environ.get(FORMAT_ENV_VAR)
    if fmt is None:
        return "json"
    if fmt not in OUTPUT_FORMATS:
        raise UsageError(f"{FORMAT_ENV_VAR} must be one of {OUTPUT_FORMATS}, got {fmt!r}")
    return fmt


def _floats(text: str, count: int, what: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in str(text).split(","))
    except ValueError:
        raise UsageError(f"{what} must be comma-separated numbers, got {text!r}") from None
    if len(values) != count:
        raise UsageError(f"{what} needs {count} values, got {len(values)}")
    return values


def _sig(value: float) -> float:
    """Round to the 12 significant digits used in printed reports."""
    return float(f"{value:.12g}")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


# ---------------------------------------------------------------------------
# shor-demo


def _assemble_config(args) -> ExperimentConfig:
    settings: dict = {}
    if args.config is not None:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
        settings.update(parse_config_text(text))

    if args.omega is not None and args.energies is not None:
        raise UsageError("give either --omega or --energies, not both")
    if args.omega is not None:
        settings.pop("energies", None)
        settings["omega"] = _floats(args.omega, 4, "--omega")
    elif args.energies is not None:
        settings.pop("omega", None)
        settings["energies"] = _floats(args.energies, 16, "--energies")

    for key, value in (
        ("mode", args.mode),
        ("tau1", args.tau1),
        ("tau2", args.tau2),
        ("seed", args.seed),
        ("retry_cap", args.retry_cap),
        ("tolerance", args.tolerance),
        ("format", args.format),
    ):
        if value is not None:
            settings[key] = value
    settings.setdefault("format", _default_format())
    return build_config(settings)


def _config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "mode": config.mode.value,
        "tau1": config.delays.tau1,
        "tau2": config.delays.tau2,
        "spectrum": list(config.spectrum),
        "seed": config.seed,
        "retry_cap": config.retry_cap,
        "tolerance": config.tolerance,
        "output_format": config.output_format,
    }


def report_to_dict(report: shor.RunReport) -> dict:
    """JSON form of a run report; validates against the shipped run_report schema."""
    return {
        "config": _config_to_dict(report.config),
        "final_state": statevec.state_to_json(report.final_state),
        "x_distribution": {str(x): p for x, p in sorted(report.x_distribution.items())},
        "residuals": {
            "delta1": report.residuals.delta1,
            "delta2": report.residuals.delta2,
            "satisfied": report.residuals.satisfied,
        },
        "measured_x": report.measured_x,
        "period": report.period,
        "factor": report.factor,
        "retries": report.retries,
        "diagnostic": report.diagnostic,
    }


def _render_run_report(report: shor.RunReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report_to_dict(report), indent=2) + "\n"
    dist = report.x_distribution
    row = (
        report.config.mode.value,
        report.config.delays.tau1,
        report.config.delays.tau2,
        report.config.seed,
        report.measured_x,
        report.period,
        report.factor,
        report.residuals.delta1,
        report.residuals.delta2,
        report.residuals.satisfied,
        dist[0], dist[1], dist[2], dist[3],
        report.retries,
        report.diagnostic,
    )
    return _csv_text(RUN_CSV_COLUMNS, [row])


def cmd_shor_demo(args) -> int:
    config = _assemble_config(args)
    if args.dump_config is not None:
        Path(args.dump_config).write_text(config_to_text(config))
    report = shor.run_experiment(config)
    _emit(_render_run_report(report, config.output_format))
    return EXIT_OK if report.factor is not None else EXIT_NO_FACTOR


# ---------------------------------------------------------------------------
# pulse


def _pulse_result(args) -> dict:
    mode = PulseMode(args.mode)
    e_k, e_p = _floats(args.energies, 2, "--energies")
    system = TwoLevelSystem(e_k, e_p)
    t0 = args.t0
    init = natural_init(1.0, e_k, t0)

    if mode is PulseMode.SUDDEN:
        if args.area is None:
            raise UsageError("sudden mode needs --area")
        if any(v is not None for v in (args.rabi, args.duration, args.phase, args.step)):
            raise UsageError("sudden pulses take --area, --t0 and --energies only")
        final = pulses.evolve_sudden(init, args.area)
        rabi = duration = phase = ode_discrepancy = phase_error = None
        area = float(args.area)
    else:
        duration = args.duration if args.duration is not None else 1.0
        phase = args.phase if args.phase is not None else 0.5 * math.pi
        if args.area is not None and args.rabi is not None:
            raise UsageError("give --area or --rabi, not both")
        if args.area is not None:
            if duration <= 0:
                raise UsageError("--area needs a positive --duration")
            rabi = 2.0 * args.area / duration
        elif args.rabi is not None:
            rabi = args.rabi
        else:
            raise UsageError("give --area or --rabi")
        spec = PulseSpec(mode=mode, rabi=rabi, t0=t0, tau=duration, phase=phase)
        evolve = {
            PulseMode.COHERENT: pulses.evolve_coherent,
            PulseMode.NONCOHERENT: pulses.evolve_noncoherent,
            PulseMode.PHASE_CORRECTED: pulses.evolve_phase_corrected,
        }[mode]
        final = evolve(system, spec, init)
        ode = pulses.integrate_ode(system, spec, init, args.step)
        ode_discrepancy = max(abs(final.c_k - ode.c_k), abs(final.c_p - ode.c_p))
        area = spec.pulse_area
        phase = spec.phase
        if mode is PulseMode.NONCOHERENT:
            coherent_spec = PulseSpec(
                mode=PulseMode.COHERENT, rabi=rabi, t0=t0, tau=duration, phase=phase
            )
            coherent = pulses.evolve_coherent(system, coherent_spec, init)
            phase_error = _sig(wrap_phase(
                np.angle(final.c_p) - np.angle(coherent.c_p)
            ))
        else:
            phase_error = None

    return {
        "mode": mode.value,
        "e_k": e_k,
        "e_p": e_p,
        "rabi": rabi,
        "duration": duration,
        "t0": t0,
        "phase": phase,
        "area": area,
        "c_k": {
            "modulus": _sig(abs(final.c_k)),
            "phase": _sig(wrap_phase(np.angle(final.c_k))),
        },
        "c_p": {
            "modulus": _sig(abs(final.c_p)),
            "phase": _sig(wrap_phase(np.angle(final.c_p))),
        },
        "ode_discrepancy": None if ode_discrepancy is None else _sig(ode_discrepancy),
        "phase_error_vs_coherent": phase_error,
    }


def cmd_pulse(args) -> int:
    result = _pulse_result(args)
    fmt = args.format if args.format is not None else _default_format()
    if fmt == "json":
        _emit(json.dumps(result, indent=2) + "\n")
    else:
        row = tuple(
            result[k] for k in ("mode", "e_k", "e_p", "rabi", "duration", "t0", "phase", "area")
        ) + (
            result["c_k"]["modulus"], result["c_k"]["phase"],
            result["c_p"]["modulus"], result["c_p"]["phase"],
            result["ode_discrepancy"], result["phase_error_vs_coherent"],
        )
        _emit(_csv_text(PULSE_CSV_COLUMNS, [row]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# check-condition


def _spectrum_from_flags(args) -> np.ndarray:
    if args.omega is not None and args.energies is not None:
        raise UsageError("give either --omega or --energies, not both")
    if args.omega is not None:
        return statevec.make_spectrum(_floats(args.omega, 4, "--omega"))
    if args.energies is not None:
        return statevec.make_spectrum(_floats(args.energies, 16, "--energies"))
    return statevec.additive_spectrum()


def cmd_check_condition(args) -> int:
    try:
        delays = DelaySchedule(args.tau1, args.tau2)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    residual = shor.check_condition(_spectrum_from_flags(args), delays, args.tolerance)
    result = {
        "tau1": delays.tau1,
        "tau2": delays.tau2,
        "delta1": residual.delta1,
        "delta2": residual.delta2,
        "satisfied": residual.satisfied,
    }
    fmt = args.format if args.format is not None else _default_format()
    if fmt == "json":
        _emit(json.dumps(result, indent=2) + "\n")
    else:
        _emit(_csv_text(CONDITION_CSV_COLUMNS, [tuple(result[k] for k in CONDITION_CSV_COLUMNS)]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _sweep_rows(args, spectrum: np.ndarray) -> list[dict]:
    mode = PipelineMode(args.mode) if args.mode is not None else PipelineMode.FREE_EVOLUTION
    taus1 = np.linspace(args.tau1_start, args.tau1_stop, args.tau1_count)
    taus2 = np.linspace(args.tau2_start, args.tau2_stop, args.tau2_count)
    rows = []
    for t1 in taus1:  # row-major, tau1 outer
        for t2 in taus2:
            delays = DelaySchedule(float(t1), float(t2))
            residual = shor.check_condition(spectrum, delays, args.tolerance)
            config = ExperimentConfig(
                mode=mode, delays=delays, spectrum=tuple(spectrum), tolerance=args.tolerance
            )
            state = transforms.run_pipeline(config)
            dist = statevec.measure_x_distribution(state)
            rows.append({
                "tau1": delays.tau1,
                "tau2": delays.tau2,
                "delta1": residual.delta1,
                "delta2": residual.delta2,
                "satisfied": residual.satisfied,
                "p0": dist[0],
                "p1": dist[1],
                "p2": dist[2],
                "p3": dist[3],
                "amp11_mod": abs(transforms.amplitude_of(state, 1, 1)),
            })
    return rows


def _sweep_format(args) -> str:
    if args.format is not None:
        return args.format
    suffix = Path(args.out).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".csv":
        return "csv"
    return _default_format()


def cmd_sweep(args) -> int:
    for name in ("tau1_count", "tau2_count"):
        if getattr(args, name) < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be at least 1")
    spectrum = _spectrum_from_flags(args)
    rows = _sweep_rows(args, spectrum)
    fmt = _sweep_format(args)
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = _csv_text(SWEEP_CSV_COLUMNS, [tuple(r[k] for k in SWEEP_CSV_COLUMNS) for r in rows])
    Path(args.out).write_text(text)
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="shorphase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spectrum_flags(p):
        p.add_argument("--omega", help="four qubit frequencies 'w0,w1,w2,w3' (additive spectrum)")
        p.add_argument("--energies", help="full 16-entry energy table, comma separated")

    demo = sub.add_parser("shor-demo", help="run one period-finding experiment")
    demo.add_argument("--config", help="config file; flags override its values")
    demo.add_argument("--dump-config", help="write the effective config to this path")
    demo.add_argument("--mode", choices=[m.value for m in PipelineMode])
    demo.add_argument("--tau1", type=float, help="delay before the function evaluation")
    demo.add_argument("--tau2", type=float, help="delay before the DFT")
    add_spectrum_flags(demo)
    demo.add_argument("--seed", type=int, help="measurement RNG seed")
    demo.add_argument("--retry-cap", type=int, help="max redraws after measuring x = 0")
    demo.add_argument("--tolerance", type=float, help="interference-condition tolerance")
    demo.add_argument("--format", choices=OUTPUT_FORMATS)
    demo.set_defaults(func=cmd_shor_demo)

    pulse = sub.add_parser("pulse", help="evolve one two-level pulse and report phases")
    pulse.add_argument("--mode", default="coherent", choices=[m.value for m in PulseMode])
    pulse.add_argument("--rabi", type=float, help="Rabi frequency (area = rabi*duration/2)")
    pulse.add_argument("--duration", type=float, help="pulse length (default 1.0)")
    pulse.add_argument("--area", type=float, help="pulse area; with resonant modes sets rabi")
    pulse.add_argument("--t0", type=float, default=0.0, help="pulse start time")
    pulse.add_argument("--phase", type=float, help="pulse phase (default pi/2)")
    pulse.add_argument("--energies", default="1.0,3.0", help="level energies 'E_k,E_p'")
    pulse.add_argument("--step", type=float, help="integrator step (default duration/1000)")
    pulse.add_argument("--format", choices=OUTPUT_FORMATS)
    pulse.set_defaults(func=cmd_pulse)

    sweep_p = sub.add_parser("sweep", help="grid of delay pairs to a CSV or JSON file")
    sweep_p.add_argument("--tau1-start", type=float, required=True)
    sweep_p.add_argument("--tau1-stop", type=float, required=True)
    sweep_p.add_argument("--tau1-count", type=int, required=True)
    sweep_p.add_argument("--tau2-start", type=float, required=True)
    sweep_p.add_argument("--tau2-stop", type=float, required=True)
    sweep_p.add_argument("--tau2-count", type=int, required=True)
    add_spectrum_flags(sweep_p)
    sweep_p.add_argument("--mode", choices=[m.value for m in PipelineMode])
    sweep_p.add_argument("--tolerance", type=float, default=1e-9)
    sweep_p.add_argument("--out", required=True, help="output file path")
    sweep_p.add_argument("--format", choices=OUTPUT_FORMATS)
    sweep_p.set_defaults(func=cmd_sweep)

    cond = sub.add_parser("check-condition", help="interference-condition residuals")
    cond.add_argument("--tau1", type=float, default=0.0)
    cond.add_argument("--tau2", type=float, default=0.0)
    add_spectrum_flags(cond)
    cond.add_argument("--tolerance", type=float, default=1e-9)
    cond.add_argument("--format", choices=OUTPUT_FORMATS)
    cond.set_defaults(func=cmd_check_condition)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))
