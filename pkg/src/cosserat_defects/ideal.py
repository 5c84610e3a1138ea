"""Quasi-static, first-order solution of an ideal straight prismatic rod.

With the ends prescribed and no distributed loads the balance laws reduce to
``n' = 0`` and ``m' + e3 x n = 0``, so the internal force is a constant
``k_n`` and the moment is ``k_m - s e3 x k_n``.  The strains follow from the
constitutive tensors and the rotation/displacement fields from quadrature of

    phi' = u,    x' = (v - v_hat) + phi x e3,

which is done in closed form.  Every field is a cubic polynomial in ``s``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .rod import RodSpec, skew

__all__ = [
    "DOF_LABELS",
    "EndDisplacement",
    "IdealSolution",
    "LinearRegimeWarning",
    "UnsupportedConfigurationError",
    "solve_ideal",
    "ideal_stiffness",
    "end_forces",
]

DOF_LABELS = ("x1", "y1", "z1", "phix1", "phiy1", "phiz1", "x2", "y2", "z2", "phix2", "phiy2", "phiz2")

E3 = np.array([0.0, 0.0, 1.0])
A3 = skew(E3)


class UnsupportedConfigurationError(ValueError):
    """The closed form only covers straight prismatic rods with a centred section."""


class LinearRegimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EndDisplacement:
    """End translations (m) and rotations (rad), ordered as ``DOF_LABELS``."""

    values: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.values, dtype=float).reshape(-1)
        if q.shape != (12,):
            raise ValueError(f"end displacement must have 12 entries, got {q.shape}")
        if not np.all(np.isfinite(q)):
            raise ValueError("end displacement entries must be finite")
        object.__setattr__(self, "values", q)

    def check_linear_regime(self, length: float) -> None:
        q = self.values
        translation = np.max(np.abs(np.r_[q[0:3], q[6:9]]))
        rotation = np.max(np.abs(np.r_[q[3:6], q[9:12]]))
        if translation / length > 0.1 or rotation > 0.1:
            warnings.warn(
                "end displacement is outside the small-deflection regime of the linear model",
                LinearRegimeWarning,
                stacklevel=2,
            )


def _polyval(coeffs: np.ndarray, s) -> np.ndarray:
    """Evaluate a vector polynomial with coefficient rows c_0, c_1, ...

    Works for real or complex ``s`` of any shape; the result has a trailing
    axis of length 3.
    """
    s = np.asarray(s)
    out = np.zeros(s.shape + (coeffs.shape[1],), dtype=np.result_type(s, coeffs))
    for c in coeffs[::-1]:
        out = out * s[..., None] + c
    return out


def _check_supported(rod: RodSpec) -> None:
    if not rod.reference.is_straight_prismatic:
        raise UnsupportedConfigurationError(
            "only straight prismatic reference configurations are supported"
        )
    m = rod.moments
    if m.A_1 != 0.0 or m.A_2 != 0.0:
        raise UnsupportedConfigurationError(
            "the ideal section must be centred on the reference axis (T = 0)"
        )


def _compliances(rod: RodSpec):
    t = rod.tensors
    return np.linalg.inv(t.K), np.linalg.inv(t.J)


def _end_map(Kinv: np.ndarray, Jinv: np.ndarray, L: float) -> np.ndarray:
    """Map (k_n, k_m) to (x(L), phi(L)) for a rod starting at rest at s = 0."""
    H = np.zeros((6, 6))
    H[:3, :3] = Kinv * L + A3 @ Jinv @ A3 * L**3 / 6.0
    H[:3, 3:] = -A3 @ Jinv * L**2 / 2.0
    H[3:, :3] = -Jinv @ A3 * L**2 / 2.0
    H[3:, 3:] = Jinv * L
    return H


def _load_map(L: float) -> np.ndarray:
    """Map Q to the end jump (x(L) - x(0) - L phi(0) x e3, phi(L) - phi(0))."""
    P = np.zeros((6, 12))
    eye = np.eye(3)
    P[:3, 0:3] = -eye
    P[:3, 3:6] = L * A3
    P[:3, 6:9] = eye
    P[3:, 3:6] = -eye
    P[3:, 9:12] = eye
    return P


def _force_map(L: float) -> np.ndarray:
    """Map (k_n, k_m) to the generalized end forces conjugate to Q."""
    B = np.zeros((12, 6))
    eye = np.eye(3)
    B[0:3, :3] = -eye
    B[3:6, 3:] = -eye
    B[6:9, :3] = eye
    B[9:12, :3] = -L * A3
    B[9:12, 3:] = eye
    return B


def _solve_scaled(H: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # rows/cols mix metres, radians, newtons and newton-metres
    r = 1.0 / np.max(np.abs(H), axis=1)
    c = 1.0 / np.max(np.abs(H * r[:, None]), axis=0)
    y = np.linalg.solve(H * r[:, None] * c[None, :], rhs * (r[:, None] if rhs.ndim == 2 else r))
    return y * (c[:, None] if rhs.ndim == 2 else c)


def constant_map(rod: RodSpec) -> np.ndarray:
    """6x12 matrix taking Q to the integration constants (k_n, k_m)."""
    _check_supported(rod)
    Kinv, Jinv = _compliances(rod)
    L = rod.length
    return _solve_scaled(_end_map(Kinv, Jinv, L), _load_map(L))


@dataclass(frozen=True)
class IdealSolution:
    rod: RodSpec
    q: np.ndarray
    k_n: np.ndarray
    k_m: np.ndarray
    _strain: np.ndarray
    _curvature: np.ndarray
    _rotation: np.ndarray
    _displacement: np.ndarray

    def force(self, s) -> np.ndarray:
        s = np.asarray(s)
        return np.broadcast_to(self.k_n, s.shape + (3,)).astype(np.result_type(s, float))

    def moment(self, s) -> np.ndarray:
        return _polyval(np.array([self.k_m, -A3 @ self.k_n]), s)

    def strain(self, s) -> np.ndarray:
        """v - v_hat, constant along the rod."""
        return _polyval(self._strain, s)

    def curvature(self, s) -> np.ndarray:
        return _polyval(self._curvature, s)

    def rotation(self, s) -> np.ndarray:
        return _polyval(self._rotation, s)

    def displacement(self, s) -> np.ndarray:
        """r(s) - s e3."""
        return _polyval(self._displacement, s)

    def end_forces(self) -> np.ndarray:
        return _force_map(self.rod.length) @ np.r_[self.k_n, self.k_m]


def solve_ideal(rod: RodSpec, q) -> IdealSolution:
    """Closed-form quasi-static solution for prescribed end displacements."""
    if not isinstance(q, EndDisplacement):
        q = EndDisplacement(q)
    q.check_linear_regime(rod.length)
    Q = q.values
    k = constant_map(rod) @ Q
    k_n, k_m = k[:3], k[3:]
    Kinv, Jinv = _compliances(rod)
    x0, phi0 = Q[0:3], Q[3:6]

    strain = (Kinv @ k_n)[None, :]
    curvature = np.array([Jinv @ k_m, -Jinv @ A3 @ k_n])
    rotation = np.array([phi0, Jinv @ k_m, -Jinv @ A3 @ k_n / 2.0])
    # x' = strain - A3 phi
    displacement = np.array(
        [
            x0,
            strain[0] - A3 @ phi0,
            -A3 @ rotation[1] / 2.0,
            -A3 @ rotation[2] / 3.0,
        ]
    )
    return IdealSolution(rod, Q, k_n, k_m, strain, curvature, rotation, displacement)


def end_forces(rod: RodSpec, q) -> np.ndarray:
    return solve_ideal(rod, q).end_forces()


def ideal_stiffness(rod: RodSpec) -> np.ndarray:
    """12x12 end-point stiffness of the ideal rod, conjugate to ``DOF_LABELS``."""
    return _force_map(rod.length) @ constant_map(rod)
