"""Re-synthesis of the TASK1 reference table and column-by-column comparison."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NarrowbandError
from .families import ReferenceRow, reference_table
from .optimize import OptimizationResult, optimize
from .sequence import angular_distance, infidelity_coefficient, total_pulse_area

TABLE_TOL = 5e-4
SUBFAMILY_OBJECTIVE = {"T_min": "area", "E_min": "infidelity"}
TABLE_COLUMNS = (
    ["subfamily", "net_rotation", "lambda_x", "lambda_y"]
    + [f"theta_{i}" for i in range(1, 6)]
    + [f"phi_{i}" for i in range(1, 6)]
    + ["pulse_area", "infidelity_coeff"]
)


def resynthesize(row: ReferenceRow) -> OptimizationResult:
    return optimize(row.net_rotation, 0.0, SUBFAMILY_OBJECTIVE[row.subfamily])


def result_columns(subfamily: str, result: OptimizationResult) -> dict[str, float | str]:
    seq = result.sequence
    cols: dict[str, float | str] = {
        "subfamily": subfamily,
        "net_rotation": result.params.theta_T,
        "lambda_x": result.params.lambda_x,
        "lambda_y": result.params.lambda_y,
    }
    for i, p in enumerate(seq.pulses, start=1):
        cols[f"theta_{i}"] = p.theta
    for i, p in enumerate(seq.pulses, start=1):
        cols[f"phi_{i}"] = p.phi
    cols["pulse_area"] = total_pulse_area(seq)
    cols["infidelity_coeff"] = infidelity_coefficient(seq)
    return cols


@dataclass(frozen=True)
class RowCheck:
    row: ReferenceRow
    deltas: dict[str, float]
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(d <= TABLE_TOL for d in self.deltas.values())

    @property
    def worst(self) -> tuple[str, float]:
        if not self.deltas:
            return ("", float("nan"))
        key = max(self.deltas, key=self.deltas.get)
        return key, self.deltas[key]

    @property
    def failures(self) -> dict[str, float]:
        return {k: d for k, d in self.deltas.items() if d > TABLE_TOL}


def check_row(row: ReferenceRow) -> RowCheck:
    try:
        cols = result_columns(row.subfamily, resynthesize(row))
    except NarrowbandError as exc:
        return RowCheck(row, {}, error=f"{type(exc).__name__}: {exc}")
    tabulated = {
        "lambda_x": row.lambda_x,
        "lambda_y": row.lambda_y,
        **{f"theta_{i}": t for i, t in enumerate(row.thetas, start=1)},
        **{f"phi_{i}": p for i, p in enumerate(row.phis, start=1)},
        "pulse_area": row.pulse_area,
        "infidelity_coeff": row.infidelity_coeff,
    }
    deltas = {}
    for key, expected in tabulated.items():
        if key.startswith("phi_"):
            deltas[key] = angular_distance(cols[key], expected)
        else:
            deltas[key] = abs(cols[key] - expected)
    return RowCheck(row, deltas)


def check_table() -> list[RowCheck]:
    return [check_row(row) for row in reference_table()]
