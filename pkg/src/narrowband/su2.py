"""
Exact SU(2) and su(2) arithmetic on 2x2 complex matrices.

Conventions
-----------
An algebra vector ``v = (vx, vy, vz)`` names the generator ``-i (v . sigma) / 2``
so ``expm(v)`` is a rotation by ``|v|`` radians about ``v / |v|``. Unitaries are
plain ``(2, 2)`` complex numpy arrays; vectors are ``(3,)`` float arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "IDENTITY",
    "PAULI",
    "AxisAngle",
    "axis_angle",
    "commutator",
    "conjugate",
    "expm",
    "logm",
    "so3",
    "trace_fidelity",
    "vector_part",
]

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

UNITARITY_TOL = 1e-8
DEGENERATE_TOL = 1e-10
IN_PLANE_TOL = 1e-12


@dataclass(frozen=True)
class AxisAngle:
    """Rotation angle in [0, 2pi] about a unit axis.

    ``axis`` is ``None`` when ``degenerate`` is set (the unitary is +I or -I).
    """

    axis: tuple[float, float, float] | None
    angle: float
    degenerate: bool

    @property
    def vector(self) -> np.ndarray:
        if self.degenerate:
            return np.zeros(3)
        return self.angle * np.asarray(self.axis)


def _as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise InvalidArgumentError(f"algebra vector must have 3 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError(f"algebra vector has non-finite components: {v}")
    return v


def _check_unitary(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise InvalidArgumentError(f"expected a 2x2 matrix, got shape {U.shape}")
    if not np.all(np.isfinite(U)):
        raise InvalidArgumentError("matrix has non-finite entries")
    defect = np.max(np.abs(U @ U.conj().T - IDENTITY))
    if defect > UNITARITY_TOL:
        raise InvalidArgumentError(f"matrix is not unitary (defect {defect:.3g})")
    return U


def expm(v) -> np.ndarray:
    """Return ``exp(-i (v . sigma) / 2)`` in closed form.

    Examples
    --------
    >>> np.allclose(expm([np.pi, 0, 0]), -1j * SIGMA_X)
    True
    """
    v = _as_vector(v)
    angle = float(np.linalg.norm(v))
    # sin(a/2)/a written via sinc so the a -> 0 limit is exact
    s = 0.5 * np.sinc(angle / (2 * np.pi))
    return np.cos(angle / 2) * IDENTITY - 1j * s * np.einsum("k,kij->ij", v, PAULI)


def vector_part(U) -> tuple[float, np.ndarray]:
    """Split ``U = w I - i (a . sigma)`` into the real scalar ``w`` and vector ``a``.

    For a special unitary ``w = cos(angle/2)`` and ``a = sin(angle/2) * axis``.
    """
    U = np.asarray(U, dtype=complex)
    w = 0.5 * (U[0, 0] + U[1, 1]).real
    a = np.array(
        [
            -0.5 * (U[0, 1] + U[1, 0]).imag,
            0.5 * (U[1, 0] - U[0, 1]).real,
            0.5 * (U[1, 1] - U[0, 0]).imag,
        ]
    )
    return float(w), a


def axis_angle(U) -> AxisAngle:
    """Rotation angle in [0, 2pi] and axis of a special unitary.

    The angle is ``2 * atan2(|a|, w)``, which agrees with ``2 arccos(Re tr U / 2)``
    but keeps full precision near 0 and 2pi.
    """
    U = _check_unitary(U)
    w, a = vector_part(U)
    s = float(np.linalg.norm(a))
    angle = 2.0 * np.arctan2(s, w)
    if s < DEGENERATE_TOL:
        angle = 2 * np.pi if w < 0 else 0.0
        return AxisAngle(axis=None, angle=angle, degenerate=True)
    axis = a / s
    return AxisAngle(axis=tuple(float(c) for c in axis), angle=float(angle), degenerate=False)


def logm(U, *, return_ambiguity: bool = False):
    """Algebra vector ``v`` with ``expm(v) = U`` and ``|v|`` in [0, 2pi].

    At ``U = -I`` every axis is valid; the x axis is returned and, when
    ``return_ambiguity`` is set, the second return value is ``True``.
    """
    m = axis_angle(U)
    ambiguous = m.degenerate and m.angle > 0
    if ambiguous:
        v = np.array([2 * np.pi, 0.0, 0.0])
    else:
        v = m.vector
    if return_ambiguity:
        return v, ambiguous
    return v


def so3(R) -> np.ndarray:
    """3x3 rotation matrix of the adjoint action of ``R`` on algebra vectors."""
    R = np.asarray(R, dtype=complex)
    Rd = R.conj().T
    # entry (a, b) = tr(sigma_a R sigma_b R^dagger) / 2
    return 0.5 * np.einsum("aij,jk,bkl,li->ab", PAULI, R, PAULI, Rd).real


def conjugate(v, R) -> np.ndarray:
    """Vector of ``R (-i v . sigma / 2) R^dagger``, the SO(3) image of ``v``."""
    v = _as_vector(v)
    R = _check_unitary(R)
    return so3(R) @ v


def commutator(a, b) -> np.ndarray:
    """Vector of ``[-i a . sigma / 2, -i b . sigma / 2]``, which is ``a x b``."""
    return np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def trace_fidelity(U, V) -> float:
    """``|tr(U^dagger V)| / 2``; with ``V = I`` the identity-gate fidelity."""
    U = _check_unitary(U)
    V = _check_unitary(V)
    return float(min(1.0, abs(np.trace(U.conj().T @ V)) / 2))
