"""Narrowband composite pulse sequences (SK1, ASK1, TASK1) for selective qubit addressing."""

from .families import Task1Params, align, ask1, net_axis, reference_table, sk1, task1, task1_params
from .optimize import contour_grid, minimize_area, minimize_infidelity, solve_constraint
from .sequence import (
    Pulse,
    PulseSequence,
    dilate,
    f1,
    f2,
    infidelity,
    infidelity_coefficient,
    phase_advance,
    propagator,
    scaled_propagator,
    suppression_order,
    total_pulse_area,
)

__version__ = "0.1.0"
