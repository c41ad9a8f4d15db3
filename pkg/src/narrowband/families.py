"""
SK1, ASK1 and TASK1 narrowband sequence constructors.

ASK1 is the SK1(2pi) triangle with its X and Y generator components scaled
independently. Its net rotation generally points out of the X-Y plane, so TASK1
wraps it as ``(r', T ask1 T^dagger, -r')``: a Z rotation ``T`` (a uniform phase
advance ``beta`` on the inner pulses) sets the azimuth of the net axis and an
in-plane tilt pulse ``r'`` brings the axis down into the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import su2
from .errors import DegenerateAxisError, InvalidArgumentError, InvalidParamsError
from .sequence import Pulse, PulseSequence, dilate, f1, phase_advance, propagator

__all__ = [
    "ReferenceRow",
    "Task1Params",
    "align",
    "ask1",
    "net_axis",
    "reference_table",
    "sk1",
    "sk1_phase",
    "task1",
    "task1_params",
]

TWO_PI = 2 * math.pi
CONSTRAINT_TOL = 1e-8
# tilts smaller than this are treated as exactly zero so the tabulated phase convention applies
TILT_TIE_TOL = 1e-9
# azimuth of the net axis of any equilateral (lx == ly) ASK1 triangle
EQUILATERAL_AZIMUTH = -math.pi / 3


def sk1_phase(theta: float) -> float:
    """Phase of the two correction pulses of SK1(theta), chosen so the triangle closes."""
    return math.acos(-theta / (4 * math.pi))


def sk1(theta_T: float, phi_T: float = 0.0) -> PulseSequence:
    """SK1 sequence for the in-plane target ``exp(-i theta_T sigma(phi_T) / 2)``."""
    if not (math.isfinite(theta_T) and 0.0 <= theta_T <= TWO_PI):
        raise InvalidArgumentError(f"SK1 target angle must lie in [0, 2pi], got {theta_T}")
    phi_sk1 = sk1_phase(theta_T)
    pulses = (
        Pulse(theta_T, phi_T),
        Pulse(TWO_PI, phi_T + phi_sk1),
        Pulse(TWO_PI, phi_T - phi_sk1),
    )
    return PulseSequence(pulses, name="sk1", target=(theta_T, phi_T))


def ask1(lx: float, ly: float) -> PulseSequence:
    """SK1(2pi) with X components scaled by ``lx`` and Y components by ``ly``."""
    if not (lx > 0 and ly > 0):
        raise InvalidArgumentError(f"ASK1 scale factors must be positive, got ({lx}, {ly})")
    return dilate(sk1(TWO_PI, 0.0), lx, ly).with_name("ask1")


def net_axis(seq: PulseSequence) -> su2.AxisAngle:
    """Net rotation of the sequence on the addressed qubit, angle in [0, 2pi]."""
    return su2.axis_angle(propagator(seq))


def align(m: su2.AxisAngle, phi_T: float) -> tuple[np.ndarray, float]:
    """Split the frame change that carries ``m.axis`` to azimuth ``phi_T`` in-plane.

    Returns the tilt generator ``r'`` and the Z-rotation angle ``beta``. The Z
    rotation by ``beta`` moves the axis to azimuth ``phi_T`` keeping its
    elevation; ``exp(-r')``, a rotation about the in-plane direction
    ``phi_T + pi/2``, then removes the elevation. ``r'`` is the minimal such
    tilt, zero when the axis is already in-plane.
    """
    if m.degenerate:
        raise DegenerateAxisError("cannot align the axis of a degenerate rotation")
    ax, ay, az = m.axis
    beta = phi_T - math.atan2(ay, ax)
    delta = -math.asin(max(-1.0, min(1.0, az)))
    if abs(delta) < TILT_TIE_TOL:
        delta = 0.0
    direction = phi_T + math.pi / 2
    r_prime = np.array([delta * math.cos(direction), delta * math.sin(direction), 0.0])
    return r_prime, beta


@dataclass(frozen=True)
class Task1Params:
    """Everything needed to write down one TASK1 sequence.

    ``delta`` is the signed tilt about the in-plane direction ``phi_T + pi/2``
    and ``beta`` the phase advance applied to the inner ASK1 pulses.
    """

    lambda_x: float
    lambda_y: float
    theta_T: float
    phi_T: float = 0.0
    delta: float = 0.0
    beta: float = 0.0


def task1_params(lx: float, ly: float, theta_T: float, phi_T: float = 0.0) -> Task1Params:
    """Fill in the tilt and phase advance for ASK1(lx, ly) and the target azimuth."""
    m = net_axis(ask1(lx, ly))
    if m.degenerate:
        # ASK1 = +-I: no axis to move; keep the equilateral convention for the inner phases
        return Task1Params(lx, ly, theta_T, phi_T, 0.0, phi_T - EQUILATERAL_AZIMUTH)
    r_prime, beta = align(m, phi_T)
    direction = np.array([-math.sin(phi_T), math.cos(phi_T), 0.0])
    return Task1Params(lx, ly, theta_T, phi_T, float(r_prime @ direction), beta)


def _tilt_pulse(params: Task1Params) -> Pulse:
    if params.delta > 0:
        phase = params.phi_T + math.pi / 2
    elif params.delta < 0:
        phase = params.phi_T + 3 * math.pi / 2
    else:
        # zero-angle tilt: the phase is cosmetic; follow the reference table's convention
        phase = params.phi_T + (math.pi / 2 if params.theta_T <= math.pi else 3 * math.pi / 2)
    return Pulse(abs(params.delta), phase)


def task1(params: Task1Params) -> PulseSequence:
    """Five-pulse TASK1 sequence ``(r', T ask1 T^dagger, -r')``.

    Raises
    ------
    InvalidParamsError
        If the net angle of ASK1(lambda_x, lambda_y) differs from ``theta_T`` by
        more than 1e-8.
    """
    core = ask1(params.lambda_x, params.lambda_y)
    angle = net_axis(core).angle
    if abs(angle - params.theta_T) > CONSTRAINT_TOL:
        raise InvalidParamsError(
            f"ASK1({params.lambda_x}, {params.lambda_y}) rotates by {angle:.12g}, "
            f"not by the target {params.theta_T:.12g}"
        )
    first = _tilt_pulse(params)
    last = Pulse(first.theta, first.phi + math.pi)
    inner = phase_advance(core, params.beta).pulses
    return PulseSequence(
        (first, *inner, last), name="task1", target=(params.theta_T, params.phi_T)
    )


# --- reference table ---------------------------------------------------------


@dataclass(frozen=True)
class ReferenceRow:
    subfamily: str
    net_rotation: float
    lambda_x: float
    lambda_y: float
    thetas: tuple[float, ...]
    phis: tuple[float, ...]
    pulse_area: float
    infidelity_coeff: float

    def sequence(self) -> PulseSequence:
        """The row's pulses at the tabulated 4-decimal precision."""
        pulses = tuple(Pulse(t, p) for t, p in zip(self.thetas, self.phis))
        return PulseSequence(pulses, name=f"task1_{self.subfamily}", target=(self.net_rotation, 0.0))


_PI = math.pi

# subfamily, net rotation, lambda_x, lambda_y, thetas, phis, pulse area, infidelity / eps^4
_ROWS = [
    ("T_min", _PI / 4, 0.2730, 0.1828,
     (0.6817, 1.7155, 1.3133, 1.3133, 0.6817), (1.5708, 1.2177, 3.5002, 5.2184, 4.7124), 5.7055, 0.0910),
    ("T_min", _PI / 2, 0.3988, 0.2723,
     (0.3013, 2.5057, 1.9404, 1.9404, 0.3013), (1.5708, 1.2348, 3.5075, 5.2453, 4.7124), 6.9890, 0.4308),
    ("T_min", 3 * _PI / 4, 0.5000, 0.3550,
     (0.0000, 3.1416, 2.4898, 2.4898, 0.0000), (1.5708, 1.2566, 3.5101, 5.2863, 4.7124), 8.1213, 1.1510),
    ("T_min", _PI, 0.5000, 0.5000,
     (0.0000, 3.1416, 3.1416, 3.1416, 0.0000), (1.5708, 1.0472, 3.1416, 5.2360, 4.7124), 9.4248, 2.2830),
    ("T_min", 5 * _PI / 4, 0.5532, 0.6227,
     (0.1309, 3.4758, 3.8081, 3.8081, 0.1309), (4.7124, 0.8958, 2.9405, 5.1343, 1.5708), 11.3539, 4.3347),
    ("T_min", 3 * _PI / 2, 0.6447, 0.7135,
     (0.3447, 4.0507, 4.3792, 4.3792, 0.3447), (4.7124, 0.8251, 2.8767, 5.0567, 1.5708), 13.4984, 7.7300),
    ("T_min", 7 * _PI / 4, 0.7578, 0.8246,
     (0.5262, 4.7613, 5.0795, 5.0795, 0.5262), (4.7124, 0.5860, 2.6446, 4.8106, 1.5708), 15.9728, 14.2640),
    ("T_min", 2 * _PI, 1.0000, 1.0000,
     (0.0000, 6.2832, 6.2832, 6.2832, 0.0000), (4.7124, 1.0472, 3.1416, 5.2360, 1.5708), 18.8496, 36.5284),
    ("E_min", _PI / 4, 0.2226, 0.2226,
     (0.8001, 1.3984, 1.3984, 1.3984, 0.8001), (1.5708, 1.0472, 3.1416, 5.2360, 4.7124), 5.7953, 0.0896),
    ("E_min", _PI / 2, 0.3268, 0.3268,
     (0.4826, 2.0534, 2.0534, 2.0534, 0.4826), (1.5708, 1.0472, 3.1416, 5.2360, 4.7124), 7.1255, 0.4167),
    ("E_min", 3 * _PI / 4, 0.4159, 0.4159,
     (0.2301, 2.6134, 2.6134, 2.6134, 0.2301), (1.5708, 1.0472, 3.1416, 5.2360, 4.7124), 8.3002, 1.0932),
    ("E_min", _PI, 0.5000, 0.5000,
     (0.0000, 3.1416, 3.1416, 3.1416, 0.0000), (1.5708, 1.0472, 3.1416, 5.2360, 4.7124), 9.4248, 2.2830),
    ("E_min", 5 * _PI / 4, 0.5841, 0.5841,
     (0.2301, 3.6698, 3.6698, 3.6698, 0.2301), (4.7124, 1.0472, 3.1416, 5.2360, 1.5708), 11.4696, 4.2510),
    ("E_min", 3 * _PI / 2, 0.6732, 0.6732,
     (0.4826, 4.2298, 4.2298, 4.2298, 0.4826), (4.7124, 1.0472, 3.1416, 5.2360, 1.5708), 13.6545, 7.5020),
    ("E_min", 7 * _PI / 4, 0.7774, 0.7774,
     (0.8001, 4.8848, 4.8848, 4.8848, 0.8001), (4.7124, 1.0472, 3.1416, 5.2360, 1.5708), 16.2547, 13.3445),
    ("E_min", 2 * _PI, 1.0000, 1.0000,
     (0.0000, 6.2832, 6.2832, 6.2832, 0.0000), (4.7124, 1.0472, 3.1416, 5.2360, 1.5708), 18.8496, 36.5284),
]


def reference_table() -> list[ReferenceRow]:
    """The 16 reference TASK1 rows (8 net rotations for each of T_min and E_min)."""
    return [ReferenceRow(*row) for row in _ROWS]
