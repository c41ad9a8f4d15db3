"""
Crosstalk simulation: population transferred on a qubit driven at a fraction of
the addressed Rabi frequency.

A neighbor at relative drive strength ``eps`` evolves under the same pulse
sequence with every pulse area scaled by ``eps``. For a Gaussian addressing beam
the Rabi frequency follows the field amplitude, so an ion displaced by ``x``
from the beam center sees ``eps(x) = exp(-(x - center)^2 / w^2)`` with ``w`` the
1/e^2 intensity radius.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError
from .sequence import PulseSequence, scaled_propagator

__all__ = [
    "BeamModel",
    "DetectionModel",
    "SweepSpec",
    "SweepTable",
    "beam_epsilon",
    "epsilon_sweep",
    "half_max_width",
    "inversion",
    "position_sweep",
]

# 1/e^2 diameter of the addressing beam reported for the experiment, in micrometers
REPORTED_WAIST_DIAMETER_UM = 44.2
DEFAULT_WAIST_RADIUS_UM = REPORTED_WAIST_DIAMETER_UM / 2
CSV_DIGITS = 9


@dataclass(frozen=True)
class BeamModel:
    waist_radius: float = DEFAULT_WAIST_RADIUS_UM
    center: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.waist_radius) and self.waist_radius > 0):
            raise InvalidArgumentError(f"waist radius must be positive, got {self.waist_radius}")
        if not math.isfinite(self.center):
            raise InvalidArgumentError(f"beam center must be finite, got {self.center}")


@dataclass(frozen=True)
class DetectionModel:
    """Single multiplicative visibility applied to every ideal population."""

    fidelity: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.fidelity <= 1.0:
            raise InvalidArgumentError(f"detection fidelity must lie in [0, 1], got {self.fidelity}")


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    lo: float
    hi: float
    points: int
    sequences: tuple[PulseSequence, ...]
    detection: DetectionModel = field(default_factory=DetectionModel)
    beam: BeamModel | None = None

    def __post_init__(self):
        if self.kind not in ("epsilon", "position"):
            raise InvalidArgumentError(f"sweep kind must be 'epsilon' or 'position', got {self.kind!r}")
        if not self.lo < self.hi:
            raise InvalidArgumentError(f"sweep range must have lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 2:
            raise InvalidArgumentError(f"sweep needs at least 2 points, got {self.points}")
        if self.kind == "position" and self.beam is None:
            raise InvalidArgumentError("position sweeps need a beam model")
        object.__setattr__(self, "sequences", tuple(self.sequences))

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class SweepTable:
    """Sweep results: one grid column followed by one column per sequence."""

    axis_name: str
    axis: np.ndarray
    columns: dict[str, np.ndarray]

    def header(self) -> list[str]:
        return [self.axis_name, *self.columns]

    def rows(self) -> list[list[float]]:
        data = np.column_stack([self.axis, *self.columns.values()])
        return data.tolist()

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        for row in self.rows():
            writer.writerow([f"{v:.{CSV_DIGITS}g}" for v in row])
        return buf.getvalue()


def inversion(seq: PulseSequence, eps: float, det: DetectionModel = DetectionModel()) -> float:
    """Detected transfer probability ``f * |<0| U_eps |1>|^2``."""
    U = scaled_propagator(seq, eps)
    return det.fidelity * float(abs(U[0, 1]) ** 2)


def beam_epsilon(beam: BeamModel, x) -> np.ndarray | float:
    """Relative Rabi frequency at position ``x`` (micrometers)."""
    eps = np.exp(-((np.asarray(x, dtype=float) - beam.center) ** 2) / beam.waist_radius**2)
    return float(eps) if np.ndim(eps) == 0 else eps


def _unique_names(sequences: Sequence[PulseSequence]) -> list[str]:
    names: list[str] = []
    for i, seq in enumerate(sequences):
        name = seq.name or f"seq{i + 1}"
        base, k = name, 2
        while name in names:
            name = f"{base}_{k}"
            k += 1
        names.append(name)
    return names


def _sweep(spec: SweepSpec, axis_name: str, eps_values: np.ndarray) -> SweepTable:
    columns = {
        name: np.array([inversion(seq, e, spec.detection) for e in eps_values])
        for name, seq in zip(_unique_names(spec.sequences), spec.sequences)
    }
    return SweepTable(axis_name, spec.grid(), columns)


def epsilon_sweep(spec: SweepSpec) -> SweepTable:
    """Inversion of every sequence over a uniform grid of relative drive strengths."""
    if spec.kind != "epsilon":
        raise InvalidArgumentError(f"expected an epsilon sweep, got {spec.kind!r}")
    return _sweep(spec, "eps", spec.grid())


def position_sweep(spec: SweepSpec) -> SweepTable:
    """Inversion of every sequence for ions placed across the beam profile."""
    if spec.kind != "position":
        raise InvalidArgumentError(f"expected a position sweep, got {spec.kind!r}")
    return _sweep(spec, "x_um", np.atleast_1d(beam_epsilon(spec.beam, spec.grid())))


def half_max_width(x: np.ndarray, y: np.ndarray) -> float:
    """Full width of the region where ``y`` is at least half its peak.

    Edges are located by linear interpolation between grid points. The region is
    taken from the outermost crossings, so side lobes above half maximum widen it.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    half = 0.5 * y.max()
    above = np.flatnonzero(y >= half)
    i, j = above[0], above[-1]

    def crossing(a: int, b: int) -> float:
        if y[a] == y[b]:
            return x[a]
        return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a])

    left = x[i] if i == 0 else crossing(i - 1, i)
    right = x[j] if j == len(x) - 1 else crossing(j, j + 1)
    return float(right - left)
