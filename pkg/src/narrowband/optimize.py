"""
Constrained search over the ASK1 scale factors.

For a target angle ``theta_T`` the feasible set is the curve of ``(lx, ly)`` where
ASK1(lx, ly) rotates by ``theta_T``. Parameterizing the curve by ``lx`` (with
``ly`` from a bracketed root solve) turns each subfamily into a bounded 1-D
minimization: T_min minimizes total pulse area, E_min the leading infidelity
coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import InvalidArgumentError, NoSolutionError
from .families import Task1Params, sk1, task1, task1_params
from .sequence import PulseSequence, infidelity_coefficient, total_pulse_area

__all__ = [
    "ConstraintCurvePoint",
    "OptimizationResult",
    "ask1_net_angle",
    "contour_grid",
    "contour_point",
    "minimize_area",
    "minimize_infidelity",
    "optimize",
    "solve_constraint",
]

TWO_PI = 2 * math.pi
LY_BRACKET = 1.2
# ly subintervals scanned for sign changes; fine enough to separate the two
# roots that merge at the fold of the constraint curve near theta_T = 7pi/4
LY_SCAN = 1024
LX_SCAN = 100
CONSTRAINT_TOL = 1e-10
FULL_TURN_TOL = 1e-12
XATOL = 1e-12

OBJECTIVES = ("area", "infidelity")


def _ask1_base() -> np.ndarray:
    """In-plane components of the SK1(2pi) generators, shape (3, 2)."""
    return sk1(TWO_PI, 0.0).vectors()[:, :2]


def _ask1_quaternion(lx: float, ly) -> tuple[np.ndarray, np.ndarray]:
    """Scalar and vector parts of the ASK1(lx, ly) propagator, vectorized over ``ly``.

    A unitary ``w I - i a.sigma`` is carried as ``(w, a)``; the product
    ``U2 U1`` is ``(w2 w1 - a2.a1, w2 a1 + w1 a2 + a2 x a1)``.
    """
    ly = np.atleast_1d(np.asarray(ly, dtype=float))
    w = np.ones_like(ly)
    a = np.zeros(ly.shape + (3,))
    for bx, by in _ask1_base():
        v = np.zeros(ly.shape + (3,))
        v[..., 0] = lx * bx
        v[..., 1] = ly * by
        angle = np.linalg.norm(v, axis=-1)
        wk = np.cos(angle / 2)
        ak = v * (0.5 * np.sinc(angle / TWO_PI))[..., None]
        w, a = (
            wk * w - np.einsum("...i,...i->...", ak, a),
            wk[..., None] * a + w[..., None] * ak + np.cross(ak, a),
        )
    return w, a


def ask1_net_angle(lx: float, ly) -> np.ndarray:
    """Net rotation angle in [0, 2pi] of ASK1(lx, ly), vectorized over ``ly``."""
    w, a = _ask1_quaternion(lx, ly)
    return 2.0 * np.arctan2(np.linalg.norm(a, axis=-1), w)


def _check_angle(theta_T: float) -> None:
    if not (math.isfinite(theta_T) and 0.0 < theta_T <= TWO_PI + FULL_TURN_TOL):
        raise InvalidArgumentError(f"target angle must lie in (0, 2pi], got {theta_T}")


def _is_full_turn(theta_T: float) -> bool:
    return abs(theta_T - TWO_PI) <= FULL_TURN_TOL


def solve_constraint(lx: float, theta_T: float) -> float:
    """Smallest ``ly`` in (0, 1.2] with ``net_angle(ASK1(lx, ly)) == theta_T``.

    Raises
    ------
    NoSolutionError
        If the net angle never reaches ``theta_T`` for this ``lx``.
    """
    if not (math.isfinite(lx) and 0.0 < lx <= 1.0):
        raise InvalidArgumentError(f"lx must lie in (0, 1], got {lx}")
    _check_angle(theta_T)
    grid = np.linspace(0.0, LY_BRACKET, LY_SCAN + 1)[1:]
    residual = ask1_net_angle(lx, grid) - theta_T

    if _is_full_turn(theta_T):
        # 2pi is the top of the angle range, so the angle only touches it. At -I the
        # vector part vanishes linearly, so root-find on its most sign-changing component.
        i = int(np.argmax(residual))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, LY_SCAN - 1)]
        a_lo, a_hi = _ask1_quaternion(lx, lo)[1][0], _ask1_quaternion(lx, hi)[1][0]
        change = np.where(a_lo * a_hi < 0, np.abs(a_hi - a_lo), 0.0)
        k = int(np.argmax(change))
        if change[k] > 0:
            ly = brentq(lambda y: _ask1_quaternion(lx, y)[1][0, k], lo, hi, xtol=1e-15)
            if abs(ask1_net_angle(lx, ly)[0] - theta_T) < CONSTRAINT_TOL:
                return float(ly)
        raise NoSolutionError(f"ASK1({lx}, ly) never reaches a full turn")

    hits = np.flatnonzero(residual == 0.0)
    crossings = np.flatnonzero(np.sign(residual[:-1]) * np.sign(residual[1:]) < 0)
    first_hit = hits[0] if hits.size else LY_SCAN
    first_cross = crossings[0] if crossings.size else LY_SCAN
    if first_hit == LY_SCAN and first_cross == LY_SCAN:
        raise NoSolutionError(f"no ly in (0, {LY_BRACKET}] gives net angle {theta_T:.12g} at lx = {lx}")
    if first_hit <= first_cross:
        return float(grid[first_hit])
    ly = brentq(
        lambda y: ask1_net_angle(lx, y)[0] - theta_T,
        grid[first_cross], grid[first_cross + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps,
    )
    return float(ly)


@dataclass(frozen=True)
class OptimizationResult:
    params: Task1Params
    objective: str
    objective_value: float
    iterations: int
    converged: bool

    @property
    def sequence(self) -> PulseSequence:
        seq = task1(self.params)
        tag = "tmin" if self.objective == "area" else "emin"
        return seq.with_name(f"task1_{tag}")


def _objective_fn(objective: str) -> Callable[[PulseSequence], float]:
    if objective == "area":
        return total_pulse_area
    if objective == "infidelity":
        return infidelity_coefficient
    raise InvalidArgumentError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


def objective_on_curve(lx: float, theta_T: float, objective: str) -> float:
    """Objective value at ``lx`` on the constraint curve, ``inf`` where infeasible."""
    fn = _objective_fn(objective)
    try:
        ly = solve_constraint(lx, theta_T)
    except NoSolutionError:
        return math.inf
    return fn(task1(task1_params(lx, ly, theta_T)))


def _feasible_edge(g, infeasible: float, feasible: float) -> float:
    """Bisect to the feasible side of the boundary between two ``lx`` values."""
    for _ in range(60):
        mid = 0.5 * (infeasible + feasible)
        if math.isfinite(g(mid)):
            feasible = mid
        else:
            infeasible = mid
    return feasible


def optimize(theta_T: float, phi_T: float = 0.0, objective: str = "area") -> OptimizationResult:
    """Minimize ``objective`` over the TASK1 sequences with net rotation ``theta_T``.

    The curve is scanned on a fixed ``lx`` grid and the best grid cell is refined
    with bounded Brent minimization, so repeated calls return identical results.
    """
    _check_angle(theta_T)
    _objective_fn(objective)
    if _is_full_turn(theta_T):
        # ASK1 = -I only at lx = ly = 1 inside the unit square
        ly = solve_constraint(1.0, TWO_PI)
        params = task1_params(1.0, ly, TWO_PI, phi_T)
        value = _objective_fn(objective)(task1(params))
        return OptimizationResult(params, objective, value, 0, True)

    def g(lx: float) -> float:
        return objective_on_curve(lx, theta_T, objective)

    grid = np.linspace(1.0 / LX_SCAN, 1.0, LX_SCAN)
    values = np.array([g(x) for x in grid])
    if not np.any(np.isfinite(values)):
        raise NoSolutionError(f"no TASK1 sequence reaches net angle {theta_T:.12g}")
    i = int(np.argmin(values))

    lo = grid[i - 1] if i > 0 else 1e-6
    hi = grid[i + 1] if i < LX_SCAN - 1 else 1.0
    if not math.isfinite(g(lo)):
        lo = _feasible_edge(g, lo, grid[i])
    if not math.isfinite(g(hi)):
        hi = _feasible_edge(g, hi, grid[i])

    res = minimize_scalar(g, bounds=(lo, hi), method="bounded", options={"xatol": XATOL, "maxiter": 500})
    candidates = [(float(res.fun), float(res.x)), (g(lo), lo), (values[i], float(grid[i])), (g(hi), hi)]
    value, lx = min(candidates)
    ly = solve_constraint(lx, theta_T)
    params = task1_params(lx, ly, theta_T, phi_T)
    return OptimizationResult(params, objective, value, int(res.nfev) + LX_SCAN, bool(res.success))


def minimize_area(theta_T: float, phi_T: float = 0.0) -> OptimizationResult:
    """TASK1 (T_min): the shortest sequence for the target rotation."""
    return optimize(theta_T, phi_T, "area")


def minimize_infidelity(theta_T: float, phi_T: float = 0.0) -> OptimizationResult:
    """TASK1 (E_min): the smallest residual neighbor rotation for the target."""
    return optimize(theta_T, phi_T, "infidelity")


@dataclass(frozen=True)
class ConstraintCurvePoint:
    lambda_x: float
    lambda_y: float
    net_angle: float
    pulse_area: float
    infidelity_coeff: float


def contour_point(lx: float, ly: float) -> ConstraintCurvePoint:
    """Net angle, TASK1 pulse area and infidelity coefficient at one ``(lx, ly)``."""
    angle = float(ask1_net_angle(lx, ly)[0])
    seq = task1(task1_params(lx, ly, angle))
    return ConstraintCurvePoint(lx, ly, angle, total_pulse_area(seq), infidelity_coefficient(seq))


def contour_grid(n: int) -> list[ConstraintCurvePoint]:
    """``n x n`` grid over (0, 1]^2 at ``k / n``, row-major in ``lx`` then ``ly``."""
    if n < 2:
        raise InvalidArgumentError(f"grid size must be at least 2, got {n}")
    axis = np.arange(1, n + 1) / n
    return [contour_point(float(lx), float(ly)) for lx in axis for ly in axis]
