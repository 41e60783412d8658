"""
Línea de comandos: spectrum, simulate, analyze y constants.

Códigos de salida: 0 éxito, 1 error interno, 2 error de entrada del usuario.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from . import analysis, electrostatics, mechanics, spectrum, transport
from .device_config import load_device_config
from .errors import NanoshuttleError
from .logger import bind_run, get_logger, setup_application_logging
from .reports import (
    format_peak_summary,
    read_trace_csv,
    table_i_panel,
    write_peak_report,
    write_table,
    write_trace_csv,
)
from .schemas import DeviceModel, SweepConfig, SweepDirection, SweepKind
from .settings import EXPORT_DIR, default_seed

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

KINDS = {"drain": SweepKind.DRAIN, "gate": SweepKind.GATE}


def _print(line: str = "") -> None:
    print(line, flush=True)


# ----------------------------------------------------------------------------
# spectrum
# ----------------------------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> int:
    model = load_device_config(args.config)
    table = spectrum.enumerate_levels(model.geometry, args.cutoff)
    out = write_table(table, args.out or EXPORT_DIR / "state_table.csv")
    n_states = sum(level.degeneracy for level in table)
    _print(f"{len(table)} levels ({n_states} states) up to {args.cutoff:g} meV -> {out}")
    upper = spectrum.state_energy(transport.STAIRCASE_UP_STATE, model.geometry)
    if args.cutoff >= upper:
        for line in table_i_panel(table):
            _print(line)
    return EXIT_OK


# ----------------------------------------------------------------------------
# simulate
# ----------------------------------------------------------------------------


def _sweep_from_args(args: argparse.Namespace) -> SweepConfig:
    direction = args.direction
    if direction is None:
        direction = "up" if args.v_end >= args.v_start else "down"
    seed = args.seed if args.seed is not None else default_seed()
    bind_run(seed=seed)
    return SweepConfig(
        v_start=args.v_start,
        v_end=args.v_end,
        step=args.step,
        direction=SweepDirection(direction),
        kind=KINDS[args.kind],
        seed=seed,
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    model = load_device_config(args.config)
    if args.noise is not None:
        model = model.with_updates(noise_enabled=args.noise)
    sweep = _sweep_from_args(args)
    trace = transport.simulate(model, sweep, V_ds=args.vds)
    out = write_trace_csv(trace, args.out or EXPORT_DIR / "trace.csv")

    peaks = analysis.detect_peaks(analysis.signal_window(trace))
    threshold = trace.first(transport.TraceLabel.THRESHOLD)
    _print(f"trace: {len(trace)} points ({sweep.kind.value}, {sweep.direction.value}, seed {sweep.seed}) -> {out}")
    _print(f"threshold: {threshold.voltage:.4f} V" if threshold else "threshold: not crossed")
    _print(f"peaks: {len(peaks)}")
    for annotation in trace.annotations:
        if annotation.label is not transport.TraceLabel.THRESHOLD:
            _print(f"event: {annotation.label.value} at {annotation.voltage:.4f} V")
    if "onset_drive_energy_meV" in trace.metadata:
        state = trace.metadata.get("onset_state", "none")
        _print(f"onset drive energy: {trace.metadata['onset_drive_energy_meV']:.2f} meV -> {state}")
    return EXIT_OK


# ----------------------------------------------------------------------------
# analyze
# ----------------------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    model = load_device_config(args.config)
    kind = KINDS[args.kind]
    trace = read_trace_csv(args.trace_csv, kind=kind)
    C = electrostatics.junction_capacitance(model.junction)
    table = None
    if len(trace):
        top = 1000.0 * float(abs(trace.voltages).max()) + args.tol
        table = spectrum.enumerate_levels(model.geometry, max(top, 1.0))
    report = analysis.build_peak_report(
        trace,
        table=table,
        tol=args.tol,
        C=C,
        min_height=args.min_height,
        min_prominence=args.min_prominence,
        lead_in=args.lead_in,
    )
    out = write_peak_report(report, args.out or EXPORT_DIR / "peak_report.csv")
    _print(format_peak_summary(report))
    _print(f"report -> {out}")
    return EXIT_OK


# ----------------------------------------------------------------------------
# constants
# ----------------------------------------------------------------------------


def _guarded(fn: Callable[[], str]) -> str:
    try:
        return fn()
    except NanoshuttleError as exc:
        return f"n/a ({exc})"


def constants_panel(model: DeviceModel, V_ds: float = 0.05) -> List[str]:
    """Panel de parámetros derivados, cada uno con su fórmula."""
    j, g, m = model.junction, model.gate, model.mech
    rows: List[Tuple[str, str]] = []

    C = electrostatics.junction_capacitance(j)
    Ec = electrostatics.charging_energy(C)
    rows.append((f"C = {C:#.4g} aF", "C = eps_r*eps_0*A/D"))
    rows.append((f"E_c = {Ec:#.4g} meV", "E_c = e^2/2C"))
    rows.append((f"spacing = {model.spacing_meV:#.4g} meV", "configured peak spacing E_c/e"))

    def _alpha() -> str:
        coupling = electrostatics.gate_alpha_from_period(g.period_dVgs, C)
        return f"alpha = {coupling.alpha:.4f}, C_g = {coupling.Cg:.4f} aF"

    rows.append((_guarded(_alpha), "alpha = sqrt(e/(dVgs*C)), C_g = alpha*C"))
    drive = electrostatics.total_drive_energy(V_ds, g.onset_Vgs, g.alpha)
    rows.append((f"drive energy = {drive:#.4g} meV", f"e(V_ds + alpha*V_gs), V_ds = {V_ds} V, V_gs = {g.onset_Vgs} V"))

    K = mechanics.spring_constant(m.stress_sigma, j.face_area_A)
    rows.append((f"K = {K:#.4g} N/m", "K = sigma*A (calibrated)"))
    if m.noise_amplitude_dI > 0:
        args = (m.noise_amplitude_dI, j.face_area_A, m.charge_density_ne, m.tunnel_rate_Gamma)
        dX = mechanics.displacement_from_noise(*args)
        dX3 = mechanics.displacement_from_noise(*args, third_volume=True)
        rows.append((f"dX = {dX:#.4g} nm", "dX = dI/(e*A*n_e*Gamma)"))
        rows.append((f"dX(/3) = {dX3:#.4g} nm", "dX = 3*dI/(e*A*n_e*Gamma)"))
    work = mechanics.mechanical_work(m.spring_K, m.displacement_dX)
    rows.append((f"W = {work:#.4g} meV", f"W = K*dX^2/2, dX = {m.displacement_dX} nm"))
    freqs = mechanics.oscillator_frequencies(m.spring_K, m.density_rho, m.box_volume)
    rows.append((f"omega0 = {freqs.omega0:#.4g} 1/s", "omega0 = sqrt(K/(rho*V))"))
    rows.append((f"59 omega0 = {freqs.omega_net:#.4g} 1/s", "net box mode"))

    rc = electrostatics.rc_limited_current(j.junction_resistance_R, j.rc_capacitance * electrostatics.AF)
    rows.append((f"tau = {rc.tau:#.4g} s", "tau = R*C"))
    rows.append((f"I_peak = {rc.I_peak * 1e12:#.4g} pA", "I_peak = e/RC"))

    table = spectrum.enumerate_levels(model.geometry, spectrum.state_energy(transport.FORWARD_THRESHOLD_STATE, model.geometry) + 1.0)
    dEn = spectrum.level_gap(table, transport.FORWARD_THRESHOLD_STATE, spectrum.QuantumState(2, 2, 2))
    rows.append((f"dE_n = {dEn:#.4g} meV", "E[3,2,2] - E[2,2,2]"))
    for label, energy in (("spacing", model.spacing_meV), ("E_c", Ec)):

        def _lam(energy: float = energy, label: str = label) -> str:
            budget = mechanics.coupling_lambda(energy, dEn)
            ratio = mechanics.feedback_ratio(budget.dEe, work) if work > 0 else float("nan")
            reverse = mechanics.reverse_coupling_lambda(energy, dEn)
            return (
                f"dE_e = {budget.dEe:#.4g} meV, lambda = {budget.lam:.4f} "
                f"({mechanics.classify_coupling(budget.lam).value}; dE_e/W = {ratio:.4f}; "
                f"reverse lambda = {reverse:.4f} {mechanics.classify_coupling(reverse).value})"
            )

        rows.append((_guarded(_lam), f"dE_e = {label} - dE_n, lambda = dE_e/dE_n"))

    width = max(len(value) for value, _ in rows)
    return [f"{value:<{width}}  [{formula}]" for value, formula in rows]


def cmd_constants(args: argparse.Namespace) -> int:
    model = load_device_config(args.config)
    for line in constants_panel(model, V_ds=args.vds):
        _print(line)
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="device config (INI)")
    common.add_argument("--out", type=Path, default=None, help="output file")

    parser = argparse.ArgumentParser(
        prog="nanoshuttle",
        description="Single-electron transport through a vibrating 3D quantum box",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="enumerate the box levels")
    p.add_argument("--cutoff", type=float, default=1000.0, help="cutoff energy in meV")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("simulate", parents=[common], help="synthesize an I-V trace")
    p.add_argument("--kind", choices=sorted(KINDS), default="drain")
    p.add_argument("--from", dest="v_start", type=float, required=True)
    p.add_argument("--to", dest="v_end", type=float, required=True)
    p.add_argument("--step", type=float, default=0.001)
    p.add_argument("--direction", choices=["up", "down"], default=None)
    p.add_argument("--seed", type=int, default=None, help="falls back to NANOSHUTTLE_SEED")
    p.add_argument("--vds", type=float, default=0.05, help="drain bias for gate sweeps (V)")
    p.add_argument("--noise", action=argparse.BooleanOptionalAction, default=None)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("analyze", parents=[common], help="detect peaks and estimate parameters")
    p.add_argument("trace_csv", type=Path)
    p.add_argument("--kind", choices=sorted(KINDS), default="drain")
    p.add_argument("--tol", type=float, default=analysis.DEFAULT_TOL, help="state match tolerance (meV)")
    p.add_argument("--min-height", type=float, default=analysis.DEFAULT_MIN_HEIGHT)
    p.add_argument("--min-prominence", type=float, default=analysis.DEFAULT_MIN_PROMINENCE)
    p.add_argument("--lead-in", type=float, default=analysis.DEFAULT_LEAD_IN)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("constants", parents=[common], help="print the derived-parameter panel")
    p.add_argument("--vds", type=float, default=0.05)
    p.set_defaults(handler=cmd_constants)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_application_logging(args.command, config=args.config, seed=getattr(args, "seed", None))
    try:
        return args.handler(args)
    except ValidationError as exc:
        logger.error(f"Parámetros inválidos: {exc}")
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NanoshuttleError as exc:
        logger.error(f"Error de entrada: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        logger.error(f"Error de E/S: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover
        logger.exception(f"Error interno: {exc}")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
