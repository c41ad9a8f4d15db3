"""
Command-line interface.

Usage:
    narrowband synth --angle 3.14159265 --objective area --out pi.json
    narrowband synth --angle 90 --degrees --family sk1 --format csv
    narrowband table --out table.csv
    narrowband sweep-epsilon --angle 3.14159265 --points 101 --out fig3a.csv
    narrowband sweep-position --angle 3.14159265 --span 150 --out fig4.csv
    narrowband contours --n 41 --out fig2a.csv
    narrowband verify

Exit codes: 0 success, 1 verification failure, 2 infeasible request, 64 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import click

from . import families, optimize, verify
from .addressing import (
    DEFAULT_WAIST_RADIUS_UM,
    REPORTED_WAIST_DIAMETER_UM,
    BeamModel,
    DetectionModel,
    SweepSpec,
    SweepTable,
    epsilon_sweep,
    position_sweep,
)
from .errors import NarrowbandError
from .sequence import (
    Pulse,
    PulseSequence,
    dumps_sequence,
    infidelity_coefficient,
    sequence_csv_rows,
    sequence_to_dict,
    total_pulse_area,
)

__all__ = ["cli", "main"]

EXIT_VERIFY_FAILED = 1
EXIT_INFEASIBLE = 2
EXIT_USAGE = 64
TABLE_DIGITS = 15


class InfeasibleRequest(click.ClickException):
    exit_code = EXIT_INFEASIBLE


def format_angle(theta: float) -> str:
    """Render an angle as a multiple of pi when it is one (``3pi/4``)."""
    frac = Fraction(theta / math.pi).limit_denominator(16)
    if abs(float(frac) * math.pi - theta) > 1e-9:
        return f"{theta:.6g}"
    num, den = frac.numerator, frac.denominator
    head = "pi" if num == 1 else f"{num}pi"
    return head if den == 1 else f"{head}/{den}"


def _radians(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _check_target(theta: float) -> None:
    if not (math.isfinite(theta) and 0.0 < theta <= 2 * math.pi + 1e-12):
        raise InfeasibleRequest(f"target angle {theta!r} rad is outside (0, 2pi]")


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _write_sidecar(out: Path | None, meta: dict) -> None:
    if out is None:
        return
    meta = {"generated": datetime.now(timezone.utc).isoformat(timespec="seconds"), **meta}
    Path(f"{out}.meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def _optimized(theta: float, phi: float, objective: str) -> PulseSequence:
    try:
        return optimize.optimize(theta, phi, objective).sequence
    except NarrowbandError as exc:
        raise InfeasibleRequest(str(exc)) from exc


def _comparison_sequences(theta: float) -> list[PulseSequence]:
    return [
        PulseSequence((Pulse(theta, 0.0),), name="simple", target=(theta, 0.0)),
        families.sk1(theta, 0.0),
        _optimized(theta, 0.0, "area"),
        _optimized(theta, 0.0, "infidelity"),
    ]


angle_option = click.option("--angle", type=float, required=True, help="Target net rotation angle (radians).")
degrees_option = click.option("--degrees", is_flag=True, help="Read angle inputs in degrees.")
out_option = click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Output file (default stdout)."
)
detection_option = click.option(
    "--detection", type=click.FloatRange(0.0, 1.0), default=1.0, show_default=True,
    help="Detection fidelity scaling every population.",
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Synthesize, optimize and simulate SK1 / TASK1 narrowband pulse sequences."""


@cli.command()
@angle_option
@click.option("--azimuth", type=float, default=0.0, show_default=True, help="Target axis azimuth (radians).")
@click.option("--objective", type=click.Choice(optimize.OBJECTIVES), default="area", show_default=True)
@click.option("--family", type=click.Choice(["sk1", "task1"]), default="task1", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@out_option
@degrees_option
def synth(angle, azimuth, objective, family, fmt, out, degrees):
    """Write the sequence implementing a target in-plane rotation."""
    theta, phi = _radians(angle, degrees), _radians(azimuth, degrees)
    _check_target(theta)
    if family == "sk1":
        seq = families.sk1(min(theta, 2 * math.pi), phi)
    else:
        seq = _optimized(theta, phi, objective)
    text = dumps_sequence(seq) if fmt == "json" else _csv_text(sequence_csv_rows(seq))
    _emit(text, out)
    summary = f"pulses {len(seq)}  pulse_area {total_pulse_area(seq):.6f}  infidelity_coeff {infidelity_coefficient(seq):.6f}"
    click.echo(summary, err=out is None)


@cli.command()
@out_option
def table(out):
    """Recompute the 16-row TASK1 (T_min / E_min) table at full precision."""
    rows = [verify.TABLE_COLUMNS]
    for row in families.reference_table():
        cols = verify.result_columns(row.subfamily, verify.resynthesize(row))
        rows.append([v if isinstance(v, str) else f"{v:.{TABLE_DIGITS}g}" for v in cols.values()])
    _emit(_csv_text(rows), out)


def _sweep_metadata(seqs, detection: DetectionModel, beam: BeamModel | None = None) -> dict:
    meta: dict = {"detection_fidelity": detection.fidelity, "sequences": [sequence_to_dict(s) for s in seqs]}
    if beam is not None:
        meta["beam"] = {
            "waist_radius_um": beam.waist_radius,
            "center_um": beam.center,
            "epsilon_model": "exp(-(x - center)^2 / waist_radius^2)",
            "reported_waist_diameter_um": REPORTED_WAIST_DIAMETER_UM,
        }
    return meta


@cli.command("sweep-epsilon")
@angle_option
@click.option("--points", type=click.IntRange(min=2), default=101, show_default=True)
@detection_option
@out_option
@degrees_option
def sweep_epsilon(angle, points, detection, out, degrees):
    """Inversion against relative drive strength eps in [0, 1]."""
    theta = _radians(angle, degrees)
    _check_target(theta)
    seqs = _comparison_sequences(theta)
    det = DetectionModel(detection)
    result: SweepTable = epsilon_sweep(SweepSpec("epsilon", 0.0, 1.0, points, tuple(seqs), det))
    _emit(result.to_csv(), out)
    _write_sidecar(out, {"kind": "epsilon", "target_angle": theta, **_sweep_metadata(seqs, det)})


@cli.command("sweep-position")
@angle_option
@click.option(
    "--waist-radius", type=click.FloatRange(min=0.0, min_open=True), default=DEFAULT_WAIST_RADIUS_UM,
    show_default=True, help="1/e^2 intensity radius of the beam (micrometers).",
)
@click.option(
    "--span", type=click.FloatRange(min=0.0, min_open=True), default=150.0, show_default=True,
    help="Width of the position window centered on the beam (micrometers).",
)
@click.option("--points", type=click.IntRange(min=2), default=301, show_default=True)
@detection_option
@out_option
@degrees_option
def sweep_position(angle, waist_radius, span, points, detection, out, degrees):
    """Inversion against ion position across a Gaussian beam."""
    theta = _radians(angle, degrees)
    _check_target(theta)
    seqs = _comparison_sequences(theta)
    det, beam = DetectionModel(detection), BeamModel(waist_radius, 0.0)
    spec = SweepSpec("position", -span / 2, span / 2, points, tuple(seqs), det, beam)
    _emit(position_sweep(spec).to_csv(), out)
    _write_sidecar(out, {"kind": "position", "target_angle": theta, **_sweep_metadata(seqs, det, beam)})


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=2), default=41, show_default=True, help="Grid points per axis.")
@out_option
def contours(n, out):
    """Net angle, pulse area and infidelity coefficient over (lambda_x, lambda_y)."""
    rows = [["lambda_x", "lambda_y", "net_angle", "pulse_area", "infidelity_coeff"]]
    for p in optimize.contour_grid(n):
        rows.append([f"{v:.9g}" for v in (p.lambda_x, p.lambda_y, p.net_angle, p.pulse_area, p.infidelity_coeff)])
    _emit(_csv_text(rows), out)


@cli.command("verify")
def verify_cmd():
    """Re-synthesize every reference table row and compare all columns within 5e-4."""
    checks = verify.check_table()
    for c in checks:
        label = f"{c.row.subfamily:5s} {format_angle(c.row.net_rotation):>6s}"
        if c.error is not None:
            click.echo(f"FAIL {label}  {c.error}")
        elif c.passed:
            key, d = c.worst
            click.echo(f"pass {label}  max |delta| {d:.2e} ({key})")
        else:
            bad = ", ".join(f"{k} {d:.2e}" for k, d in c.failures.items())
            click.echo(f"FAIL {label}  {bad}")
    passed = sum(c.passed for c in checks)
    click.echo(f"{passed}/{len(checks)} rows within {verify.TABLE_TOL:g}")
    if passed != len(checks):
        sys.exit(EXIT_VERIFY_FAILED)


def main(argv=None) -> int:
    """Entry point mapping click's exit codes onto the documented ones."""
    try:
        cli.main(args=argv, prog_name="narrowband", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except InfeasibleRequest as exc:
        exc.show()
        return EXIT_INFEASIBLE
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
