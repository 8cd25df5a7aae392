#!/usr/bin/env python3
"""
Zeeman Lasing - magnetic-field-controlled cavity QED with bright and dark states.

Provides:
- Dressed-state ladders and predicted transmission lines
- Pulsed transmission spectra from the driven mean-field equations
- Steady-state lasing, emission spectra and linewidths
- Pump sweeps with pseudo-Dicke numbers
- An oracle suite against the exact master equation
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .analysis.emission import adaptive_emission_grid, emission_spectrum
from .analysis.lasing import lasing_steady_state, lasing_trajectory
from .analysis.sweep import SweepRow, SweepSettings, pump_sweep, steady_observables
from .analysis.transmission import pulse_response, transmission_from_response
from .analysis.verify import run_verification
from .config import Config, output_dir, parse_fgrid
from .core.data import DriveShape, RunManifest, SpectrumKind, SpectrumResult
from .core.errors import ConfigError, ParameterError, SolverError
from .core.units import angular_to_hz, angular_to_khz
from .dressed.levels import dressed_levels
from .dressed.peaks import transmission_peaks

logger = logging.getLogger(__name__)

# =============================================================================
# OUTPUT
# =============================================================================


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if value is None:
        return ""
    return str(value)


class RunContext:
    """Output directory, timings and manifest of one command run."""

    def __init__(self, command: str, config: Config, out: Path, argv: Sequence[str]):
        self.out = out
        self.manifest = RunManifest(
            command=command,
            version=__version__,
            config=config.to_dict(),
            argv=list(argv),
        )
        out.mkdir(parents=True, exist_ok=True)

    def timed(self, stage: str, fn: Callable):
        start = time.perf_counter()
        try:
            return fn()
        finally:
            self.manifest.timings[stage] = time.perf_counter() - start

    def write_csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
        path = self.out / name
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        self.manifest.outputs.append(name)
        print(f"Wrote {path}")
        return path

    def write_manifest(self) -> Path:
        path = self.out / "manifest.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.manifest.to_dict(), indent=2, sort_keys=True, default=_json_default))
        tmp.replace(path)
        print(f"Wrote {path}")
        return path


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _spectrum_rows(sr: SpectrumResult, log_scale: bool) -> tuple[list[str], list[list]]:
    """Transmission rows carry |F_out/F_in|^2 as intensity_sq plus the magnitude |F_out/F_in|."""
    transmission = sr.kind == SpectrumKind.TRANSMISSION
    header = ["offset_rad_per_ms", "offset_hz", "intensity_sq" if transmission else "intensity"]
    if transmission:
        header.append("magnitude")
    if sr.phase is not None:
        header.append("phase_rad")
    if log_scale:
        header.append("log10_intensity")
    rows = []
    for i, (w, value) in enumerate(zip(sr.offsets, sr.intensity)):
        row = [w, angular_to_hz(w), value]
        if transmission:
            row.append(np.sqrt(value))
        if sr.phase is not None:
            row.append(sr.phase[i])
        if log_scale:
            row.append(np.log10(value) if value > 0 else float("-inf"))
        rows.append(row)
    return header, rows


def _peak_rows(sr: SpectrumResult) -> list[list]:
    return [[w, angular_to_hz(w), h] for w, h in sorted(sr.peaks)]


# =============================================================================
# COMMANDS
# =============================================================================


def cmd_dressed(args, config: Config, ctx: RunContext) -> int:
    p = config.physical_params()
    rows = []
    for n in range(args.max_n + 1):
        for lvl in dressed_levels(p, n):
            row = [lvl.branch.value, n, angular_to_hz(lvl.shift)]
            for amp in (lvl.amp_D, lvl.amp_B, lvl.amp_G):
                row += [complex(amp).real, complex(amp).imag]
            rows.append(row + [lvl.shift])
    ctx.write_csv(
        "dressed.csv",
        ["branch", "n", "shift_hz", "amp_D_re", "amp_D_im", "amp_B_re", "amp_B_im", "amp_G_re", "amp_G_im",
         "shift_rad_per_ms"],
        rows,
    )
    if args.peaks:
        peaks = transmission_peaks(p, args.max_n)
        ctx.write_csv(
            "peaks.csv",
            ["offset_hz", "weight", "group", "n_photons", "offset_rad_per_ms"],
            [[angular_to_hz(pk.frequency_offset), pk.weight, pk.group, pk.n_photons, pk.frequency_offset]
             for pk in peaks],
        )
    return 0


def cmd_transmit(args, config: Config, ctx: RunContext) -> int:
    drive = config.drive_config()
    if drive is None or drive.shape != DriveShape.GAUSSIAN:
        raise ConfigError("transmit needs a 'drive' block with shape 'gaussian'", path=config.config_path)
    p = config.physical_params()
    cfg = config.integration_config()
    keep = args.keep_every if args.trajectory else None
    response = ctx.timed("integrate", lambda: pulse_response(p, drive, cfg, keep_every=keep))
    sr = ctx.timed("fourier", lambda: transmission_from_response(p, response))
    if args.normalize:
        sr = sr.normalized()
    ctx.manifest.diagnostics["pulse"] = response.diagnostics | {"nfev": response.nfev}
    header, rows = _spectrum_rows(sr, args.log)
    ctx.write_csv("transmission.csv", header, rows)
    ctx.write_csv("transmission_peaks.csv", ["offset_rad_per_ms", "offset_hz", "intensity_sq"], _peak_rows(sr))
    if response.trajectory is not None:
        header, rows = response.trajectory.to_rows()
        ctx.write_csv("trajectory.csv", header, rows)
    for w, h in sorted(sr.peaks):
        print(f"  peak at {angular_to_khz(w):+12.3f} kHz  height {h:.6g}")
    return 0


def cmd_lase(args, config: Config, ctx: RunContext) -> int:
    p = config.physical_params()
    cfg = config.integration_config()
    result = ctx.timed("steady_state", lambda: lasing_steady_state(p, cfg))
    ctx.manifest.diagnostics["steady_state"] = result.diagnostics()
    if not result.converged:
        raise SolverError(f"steady state not converged (residual {result.residual:.3e})")
    x = p.pump_plus / p.decay_plus if p.decay_plus > 0 else float("nan")
    row = steady_observables(p, x, result)
    if row.error:
        ctx.manifest.diagnostics["warnings"] = row.error

    header = ["n", "p_BB", "p_DD", "p_gg", "im_DB", "lw_semi_hz", "lw_semi_valid", "lw_implicit_hz",
              "M_B", "J_B", "M_D", "J_D", "residual", "converged"]
    ctx.write_csv("lase.csv", header, [[
        row.n, row.p_BB, row.p_DD, row.p_gg, row.im_DB,
        angular_to_hz(abs(row.lw_semi)), row.lw_semi_valid, angular_to_hz(abs(row.lw_implicit)),
        row.M_B, row.J_B, row.M_D, row.J_D, row.residual, row.converged,
    ]])
    print(f"  <a+a> = {row.n:.6g}, linewidth {angular_to_hz(abs(row.lw_semi)):.4g} Hz (semi-analytic), "
          f"{angular_to_hz(abs(row.lw_implicit)):.4g} Hz (implicit)")
    if args.trajectory:
        stride = cfg.output_stride or cfg.t_end / 1000.0
        traj = ctx.timed("trajectory", lambda: lasing_trajectory(p, cfg.replace(output_stride=stride)))
        header, rows = traj.to_rows()
        ctx.write_csv("trajectory.csv", header, rows)
    return 0


def _default_span(config: Config) -> float:
    p = config.physical_params()
    return 2.0 * max(np.sqrt(p.n_atoms) * p.bright_coupling, p.delta_zeeman, p.kappa)


def cmd_spectrum(args, config: Config, ctx: RunContext) -> int:
    p = config.physical_params()
    cfg = config.integration_config()
    filt = config.filter_override(p)
    fgrid = args.fgrid or config.sweep.fgrid
    jobs = args.jobs or config.sweep.jobs
    if fgrid:
        lo, hi, n = parse_fgrid(fgrid)
        run = lambda: emission_spectrum(p, np.linspace(lo, hi, n), filt, cfg, jobs=jobs, normalize=args.normalize)
    else:
        run = lambda: adaptive_emission_grid(p, _default_span(config), filt=filt, cfg=cfg, jobs=jobs,
                                             normalize=args.normalize)
    sr = ctx.timed("emission", run)
    ctx.manifest.diagnostics["fwhm_rad_per_ms"] = sr.fwhm
    header, rows = _spectrum_rows(sr, args.log)
    ctx.write_csv("spectrum.csv", header, rows)
    ctx.write_csv("spectrum_peaks.csv", ["offset_rad_per_ms", "offset_hz", "intensity"], _peak_rows(sr))
    if sr.fwhm is not None:
        print(f"  fwhm {angular_to_hz(sr.fwhm):.6g} Hz")
    return 0


def _sweep(args, config: Config, ctx: RunContext, with_fwhm: bool) -> list[SweepRow]:
    p = config.physical_params()
    cfg = config.integration_config()
    span = 0.0
    fgrid = getattr(args, "fgrid", None) or config.sweep.fgrid
    if with_fwhm and fgrid:
        lo, hi, _ = parse_fgrid(fgrid)
        span = max(abs(lo), abs(hi))
    jobs = args.jobs or config.sweep.jobs
    settings = SweepSettings(
        fwhm_span=span,
        filter=config.filter_override(p),
        warm_start=not args.cold,
        jobs=jobs,
    )
    rows = ctx.timed("sweep", lambda: pump_sweep(p, config.sweep.eta_over_gamma, cfg, settings))
    ctx.manifest.diagnostics["rows"] = [
        {"eta_over_gamma": r.eta_over_gamma, "residual": r.residual, "converged": r.converged, "error": r.error}
        for r in rows
    ]
    return rows


def cmd_sweep(args, config: Config, ctx: RunContext) -> int:
    rows = _sweep(args, config, ctx, with_fwhm=True)
    ctx.write_csv("sweep.csv", SweepRow.columns(), [r.values() for r in rows])
    failed = sum(1 for r in rows if r.error)
    print(f"  {len(rows)} rows, {failed} with errors")
    return 0


def cmd_dicke(args, config: Config, ctx: RunContext) -> int:
    rows = _sweep(args, config, ctx, with_fwhm=False)
    ctx.write_csv(
        "dicke.csv",
        ["eta_over_gamma", "J_B", "M_B", "J_D", "M_D", "converged"],
        [[r.eta_over_gamma, r.J_B, r.M_B, r.J_D, r.M_D, r.converged] for r in rows],
    )
    return 0


def cmd_verify(args, config: Config, ctx: RunContext) -> int:
    p = config.physical_params()
    results = ctx.timed(
        "verify",
        lambda: run_verification(p, config.integration_config(), n_max=config.exact.n_max,
                                 dressed_samples=args.samples),
    )
    ctx.write_csv(
        "verify.csv",
        ["check", "passed", "error", "tolerance", "seconds", "detail"],
        [[r.name, r.passed, r.error, r.tolerance, r.seconds, r.detail] for r in results],
    )
    print(f"  {'check':<24} {'result':<6} {'error':>10} {'tol':>8}")
    for r in results:
        print(f"  {r.name:<24} {'pass' if r.passed else 'FAIL':<6} {r.error:>10.3e} {r.tolerance:>8.1e}  {r.detail}")
    ctx.manifest.diagnostics["verify"] = {r.name: r.passed for r in results}
    return 0 if all(r.passed for r in results) else 1


HANDLERS = {
    "dressed": cmd_dressed,
    "transmit": cmd_transmit,
    "lase": cmd_lase,
    "spectrum": cmd_spectrum,
    "sweep-pump": cmd_sweep,
    "dicke": cmd_dicke,
    "verify": cmd_verify,
}


# =============================================================================
# ENTRY POINT
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Path to config.json")
    common.add_argument("--out", type=Path, help="Output directory (default $ZEEMAN_LASING_OUT or ./out)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging (-v info, -vv debug)")

    parser = argparse.ArgumentParser(
        prog="zeeman-lasing",
        description="Magnetic-field-controlled cavity QED with bright and dark atomic states",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("dressed", parents=[common], help="Dressed-state ladder and predicted lines")
    p.add_argument("--peaks", action="store_true", help="Also write predicted transmission lines")
    p.add_argument("--max-n", type=int, default=1, help="Highest photon-number block")

    p = sub.add_parser("transmit", parents=[common], help="Pulsed transmission spectrum")
    p.add_argument("--normalize", action="store_true", help="Scale intensities to a maximum of 1")
    p.add_argument("--log", action="store_true", help="Add a log10 intensity column")
    p.add_argument("--trajectory", action="store_true", help="Write the moment trajectory")
    p.add_argument("--keep-every", type=int, default=64, help="Trajectory decimation in samples")

    p = sub.add_parser("lase", parents=[common], help="Steady-state lasing point")
    p.add_argument("--trajectory", action="store_true", help="Write the relaxation trajectory")

    p = sub.add_parser("spectrum", parents=[common], help="Emission spectrum via a filter cavity")
    p.add_argument("--fgrid", help="Filter grid 'min:max:n' in kHz (default: adaptive)")
    p.add_argument("--jobs", type=int, default=0, help="Worker threads")
    p.add_argument("--normalize", action="store_true", help="Scale intensities to a maximum of 1")
    p.add_argument("--log", action="store_true", help="Add a log10 intensity column")

    for name, text in (("sweep-pump", "Pump sweep"), ("dicke", "Pseudo-Dicke numbers over a pump sweep")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--jobs", type=int, default=0, help="Worker threads (with --cold)")
        p.add_argument("--cold", action="store_true", help="Start every row from the ground state")
        if name == "sweep-pump":
            p.add_argument("--fgrid", help="Add the emission FWHM using this span 'min:max:n' in kHz")

    p = sub.add_parser("verify", parents=[common], help="Oracle comparisons")
    p.add_argument("--samples", type=int, default=1000, help="Random dressed-state blocks")
    return parser


def setup_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)-7s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)

    try:
        config = Config.load(args.config)
        ctx = RunContext(args.command, config, output_dir(args.out), argv)
        status = HANDLERS[args.command](args, config, ctx)
        ctx.write_manifest()
        return status
    except (ConfigError, ParameterError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2
    except SolverError as e:
        print(f"ERROR: solver failure: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
