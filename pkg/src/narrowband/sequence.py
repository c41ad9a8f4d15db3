"""
Pulse sequences, their propagators, and the BCH constraint functionals.

A pulse ``(theta, phi)`` is a constant-phase drive segment with generator
``-i theta sigma(phi) / 2``, ``sigma(phi) = X cos(phi) + Y sin(phi)``. Pulse 1 is
applied first, so the sequence propagator is ``exp(r_L) ... exp(r_2) exp(r_1)``.
A neighbor qubit seeing a fraction ``eps`` of the drive evolves under the same
sequence with every generator scaled by ``eps``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import su2
from .errors import InvalidArgumentError, NotNarrowbandError, RangeError

__all__ = [
    "Pulse",
    "PulseSequence",
    "angular_distance",
    "dilate",
    "dumps_sequence",
    "f1",
    "f2",
    "infidelity",
    "infidelity_coefficient",
    "loads_sequence",
    "phase_advance",
    "propagator",
    "read_sequence",
    "scaled_propagator",
    "suppression_order",
    "total_pulse_area",
    "write_sequence",
]

TWO_PI = 2 * math.pi
CLOSURE_TOL = 1e-8
FILE_DIGITS = 15


def normalize_phase(phi: float) -> float:
    """Map ``phi`` into [0, 2pi)."""
    phi = math.fmod(float(phi), TWO_PI)
    if phi < 0:
        phi += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2pi
    if phi >= TWO_PI:
        phi = 0.0
    return phi


def angular_distance(a: float, b: float) -> float:
    """Smallest absolute difference between two angles, in [0, pi]."""
    d = math.fmod(abs(a - b), TWO_PI)
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class Pulse:
    """Rotation by ``theta >= 0`` about the in-plane axis at azimuth ``phi``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise InvalidArgumentError(f"pulse has non-finite values: ({theta}, {phi})")
        if theta < 0:
            raise InvalidArgumentError(f"pulse angle must be non-negative, got {theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", normalize_phase(phi))

    @classmethod
    def from_vector(cls, vx: float, vy: float) -> "Pulse":
        """Pulse whose generator vector is ``(vx, vy, 0)``; zero vectors get phase 0."""
        theta = math.hypot(vx, vy)
        if theta == 0.0:
            return cls(0.0, 0.0)
        return cls(theta, math.atan2(vy, vx))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.theta * math.cos(self.phi), self.theta * math.sin(self.phi), 0.0])


@dataclass(frozen=True)
class PulseSequence:
    """Ordered pulses (index 0 applied first) with an optional target ``(theta, phi)``."""

    pulses: tuple[Pulse, ...] = ()
    name: str = ""
    target: tuple[float, float] | None = None

    def __post_init__(self):
        pulses = tuple(p if isinstance(p, Pulse) else Pulse(*p) for p in self.pulses)
        object.__setattr__(self, "pulses", pulses)
        if self.target is not None:
            theta, phi = self.target
            object.__setattr__(self, "target", (float(theta), normalize_phase(phi)))

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self):
        return iter(self.pulses)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        """Concatenate: ``self`` is applied first, then ``other``."""
        return PulseSequence(self.pulses + other.pulses, name=self.name, target=None)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([p.theta for p in self.pulses])

    @property
    def phis(self) -> np.ndarray:
        return np.array([p.phi for p in self.pulses])

    def vectors(self) -> np.ndarray:
        """Generator vectors as an ``(L, 3)`` array."""
        if not self.pulses:
            return np.zeros((0, 3))
        return np.array([p.vector for p in self.pulses])

    def target_unitary(self) -> np.ndarray:
        if self.target is None:
            raise InvalidArgumentError(f"sequence {self.name!r} has no target")
        theta, phi = self.target
        return su2.expm([theta * math.cos(phi), theta * math.sin(phi), 0.0])

    def with_name(self, name: str) -> "PulseSequence":
        return replace(self, name=name)


def propagator(seq: PulseSequence) -> np.ndarray:
    """Net unitary of the sequence on the addressed qubit."""
    return scaled_propagator(seq, 1.0)


def scaled_propagator(seq: PulseSequence, eps: float) -> np.ndarray:
    """Net unitary when every pulse area is multiplied by ``eps``."""
    U = su2.IDENTITY.copy()
    for p in seq.pulses:
        U = su2.expm(eps * p.vector) @ U
    return U


def f1(seq: PulseSequence) -> np.ndarray:
    """First-order BCH term: the sum of generator vectors."""
    return seq.vectors().sum(axis=0)


def f2(seq: PulseSequence) -> np.ndarray:
    """Second-order BCH term ``1/2 sum_{l>k} v_l x v_k``."""
    v = seq.vectors()
    if len(v) < 2:
        return np.zeros(3)
    preceding = np.cumsum(v, axis=0)[:-1]
    return 0.5 * np.cross(v[1:], preceding).sum(axis=0)


def infidelity_coefficient(seq: PulseSequence) -> float:
    """Limit of ``infidelity(seq, eps) / eps**4`` as ``eps -> 0``.

    With ``F1 = 0`` the neighbor propagator is ``exp(eps^2 F2 + ...)``, whose
    trace fidelity is ``cos(eps^2 |F2| / 2)``, so the coefficient is ``|F2|^2 / 8``.

    Raises
    ------
    NotNarrowbandError
        If ``|F1|`` exceeds 1e-8.
    """
    residual = float(np.linalg.norm(f1(seq)))
    if residual > CLOSURE_TOL:
        raise NotNarrowbandError(f"sequence {seq.name!r} is not closed: |F1| = {residual:.3g}")
    c = f2(seq)
    return float(c @ c) / 8.0


def infidelity(seq: PulseSequence, eps: float) -> float:
    """``1 - |tr U_eps| / 2`` for the scaled propagator ``U_eps``."""
    w, a = su2.vector_part(scaled_propagator(seq, eps))
    # 1 - |w| = |a|^2 / (1 + |w|) on SU(2); avoids cancellation for tiny infidelities
    return float(a @ a) / (1.0 + abs(w))


def total_pulse_area(seq: PulseSequence) -> float:
    return float(sum(abs(p.theta) for p in seq.pulses))


def phase_advance(seq: PulseSequence, beta: float) -> PulseSequence:
    """Add ``beta`` to every phase, i.e. conjugate every generator by a Z rotation."""
    pulses = tuple(Pulse(p.theta, p.phi + beta) for p in seq.pulses)
    target = None
    if seq.target is not None:
        target = (seq.target[0], seq.target[1] + beta)
    return PulseSequence(pulses, name=seq.name, target=target)


def dilate(seq: PulseSequence, lx: float, ly: float) -> PulseSequence:
    """Scale the X components of every generator by ``lx`` and the Y components by ``ly``."""
    if not (math.isfinite(lx) and math.isfinite(ly)):
        raise InvalidArgumentError(f"dilation factors must be finite, got ({lx}, {ly})")
    pulses = []
    for p in seq.pulses:
        vx, vy, _ = p.vector
        pulses.append(Pulse.from_vector(lx * vx, ly * vy))
    return PulseSequence(tuple(pulses), name=seq.name)


def suppression_order(
    seq: PulseSequence, eps_lo: float = 1e-3, eps_hi: float = 1e-2, points: int = 9
) -> float:
    """Log-log slope of the neighbor infidelity against ``eps``.

    A plain pulse gives about 2, a first-order narrowband sequence about 4.
    """
    if not 0 < eps_lo < eps_hi:
        raise InvalidArgumentError(f"need 0 < eps_lo < eps_hi, got ({eps_lo}, {eps_hi})")
    eps = np.geomspace(eps_lo, eps_hi, points)
    values = np.array([infidelity(seq, e) for e in eps])
    if np.any(values < 1e-300):
        raise RangeError("infidelity underflows on the requested eps range")
    slope, _ = np.polyfit(np.log(eps), np.log(values), 1)
    return float(slope)


# --- sequence files ---------------------------------------------------------


def _fmt(x: float) -> float:
    return float(f"{x:.{FILE_DIGITS}g}")


def _fmt_phase(phi: float) -> float:
    phi = _fmt(phi)
    return 0.0 if phi >= TWO_PI else phi


def sequence_to_dict(seq: PulseSequence) -> dict:
    doc: dict = {"name": seq.name}
    if seq.target is not None:
        doc["target"] = {"theta": _fmt(seq.target[0]), "phi": _fmt_phase(seq.target[1])}
    doc["pulses"] = [{"theta": _fmt(p.theta), "phi": _fmt_phase(p.phi)} for p in seq.pulses]
    return doc


def sequence_from_dict(doc: dict) -> PulseSequence:
    try:
        pulses = tuple(Pulse(float(p["theta"]), float(p["phi"])) for p in doc["pulses"])
        target = doc.get("target")
        if target is not None:
            target = (float(target["theta"]), float(target["phi"]))
        return PulseSequence(pulses, name=str(doc.get("name", "")), target=target)
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"malformed sequence document: {exc}") from exc


def dumps_sequence(seq: PulseSequence) -> str:
    """Serialize to JSON with every number rounded to 15 significant digits."""
    return json.dumps(sequence_to_dict(seq), indent=2) + "\n"


def loads_sequence(text: str) -> PulseSequence:
    return sequence_from_dict(json.loads(text))


def write_sequence(seq: PulseSequence, path: str | Path) -> None:
    Path(path).write_text(dumps_sequence(seq))


def read_sequence(path: str | Path) -> PulseSequence:
    return loads_sequence(Path(path).read_text())


def sequence_csv_rows(seq: PulseSequence) -> list[list[str]]:
    rows = [["pulse", "theta", "phi"]]
    for i, p in enumerate(seq.pulses, start=1):
        rows.append([str(i), f"{p.theta:.{FILE_DIGITS}g}", f"{_fmt_phase(p.phi):.{FILE_DIGITS}g}"])
    return rows


def sequence_from_pairs(pairs: Iterable[Sequence[float]], name: str = "", target=None) -> PulseSequence:
    return PulseSequence(tuple(Pulse(t, p) for t, p in pairs), name=name, target=target)
