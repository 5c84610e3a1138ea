"""First-order (in Gamma and in the end displacement) defect correction.

With ``K = K0 + Gamma N K1``, ``J = J0 + Gamma N J1`` and ``T = Gamma N T1``
the correction stresses are again equilibrated (``n1`` constant, ``m1 =
k_m1 - s e3 x k_n1``) and the correction kinematics integrate in closed form:

    J0 phi1 = k_m1 s - A3 k_n1 s^2/2 - a(s)
    x1      = int_0^s phi1 x e3 + K0^-1 (k_n1 s - b(s))

with

    a(s) = J1 J0^-1 (k_m tilde_1 - A3 k_n tilde_s) + T1 K0^-1 k_n tilde_1
    b(s) = K1 K0^-1 k_n tilde_1 + T1^T J0^-1 (k_m tilde_1 - A3 k_n tilde_s)

``k_n1, k_m1`` are fixed by requiring ``phi1`` and ``x1`` to vanish at both
ends, which is the same 6x6 end map as the ideal problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .defects import DefectProfile
from .ideal import A3, IdealSolution, _compliances, _end_map, _solve_scaled
from .rod import RodSpec

__all__ = [
    "CorrectionSolution",
    "ResidualReport",
    "solve_correction",
    "defect_energy",
    "residual_check",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _check_compatible(rod: RodSpec, profile: DefectProfile) -> None:
    if not np.isclose(rod.length, profile.rod_length, rtol=1e-12, atol=0.0):
        raise ValueError(
            f"profile was built for a rod of length {profile.rod_length:.6g} m, "
            f"not {rod.length:.6g} m"
        )


@dataclass(frozen=True)
class CorrectionSolution:
    """Gamma-scaled correction fields; all are linear in Q."""

    rod: RodSpec
    profile: DefectProfile
    ideal: IdealSolution
    k_n: np.ndarray
    k_m: np.ndarray
    _a: tuple
    _b: tuple

    def _tildes(self, s):
        f = self.profile.functionals
        t1, ts, ts2 = f.tilde_one(s), f.tilde_s(s), f.tilde_s2(s)
        return np.asarray(t1), np.asarray(ts), np.asarray(ts2)

    def force(self, s) -> np.ndarray:
        s = np.asarray(s)
        return np.broadcast_to(self.k_n, s.shape + (3,)).astype(np.result_type(s, float))

    def moment(self, s) -> np.ndarray:
        s = np.asarray(s)[..., None]
        return self.k_m - s * (A3 @ self.k_n)

    def rotation(self, s) -> np.ndarray:
        _, Jinv = _compliances(self.rod)
        s = np.asarray(s)
        t1, ts, _ = self._tildes(s)
        ca1, cas = self._a
        a = t1[..., None] * ca1 + ts[..., None] * cas
        S = s[..., None]
        inner = S * self.k_m - S**2 / 2.0 * (A3 @ self.k_n) - a
        return inner @ Jinv.T

    def displacement(self, s) -> np.ndarray:
        Kinv, Jinv = _compliances(self.rod)
        s = np.asarray(s)
        t1, ts, ts2 = self._tildes(s)
        ca1, cas = self._a
        cb1, cbs = self._b
        i1 = s * t1 - ts
        i_s = s * ts - ts2
        alpha = i1[..., None] * ca1 + i_s[..., None] * cas
        b = t1[..., None] * cb1 + ts[..., None] * cbs
        S = s[..., None]
        int_phi = (S**2 / 2.0 * self.k_m - S**3 / 6.0 * (A3 @ self.k_n) - alpha) @ Jinv.T
        return -int_phi @ A3.T + (S * self.k_n - b) @ Kinv.T

    def curvature(self, s) -> np.ndarray:
        _, Jinv = _compliances(self.rod)
        s = np.asarray(s)
        N = self.profile.shape(s)[..., None]
        ca1, cas = self._a
        return (self.moment(s) - N * (ca1 + s[..., None] * cas)) @ Jinv.T

    def strain(self, s) -> np.ndarray:
        Kinv, _ = _compliances(self.rod)
        s = np.asarray(s)
        N = self.profile.shape(s)[..., None]
        cb1, cbs = self._b
        return (self.k_n - N * (cb1 + s[..., None] * cbs)) @ Kinv.T


def solve_correction(rod: RodSpec, profile: DefectProfile, ideal: IdealSolution) -> CorrectionSolution:
    _check_compatible(rod, profile)
    if ideal.rod is not rod and ideal.rod != rod:
        raise ValueError("ideal solution belongs to a different rod")
    Kinv, Jinv = _compliances(rod)
    d = profile.tensors
    k_n, k_m = ideal.k_n, ideal.k_m
    ca1 = d.J @ Jinv @ k_m + d.T @ Kinv @ k_n
    cas = -d.J @ Jinv @ A3 @ k_n
    cb1 = d.K @ Kinv @ k_n + d.T.T @ Jinv @ k_m
    cbs = -d.T.T @ Jinv @ A3 @ k_n

    L = rod.length
    f = profile.functionals
    t1, ts, ts2 = f.bar_one, f.bar_s, f.bar_s2
    a_L = t1 * ca1 + ts * cas
    b_L = t1 * cb1 + ts * cbs
    alpha_L = (L * t1 - ts) * ca1 + (L * ts - ts2) * cas
    rhs = np.r_[-A3 @ Jinv @ alpha_L + Kinv @ b_L, Jinv @ a_L]
    k = _solve_scaled(_end_map(Kinv, Jinv, L), rhs)
    return CorrectionSolution(rod, profile, ideal, k[:3], k[3:], (ca1, cas), (cb1, cbs))


def _intervals(rod: RodSpec, profile: DefectProfile) -> np.ndarray:
    pts = np.concatenate([[0.0, rod.length], np.clip(profile.shape.breakpoints, 0.0, rod.length)])
    return np.unique(pts)


def defect_energy(rod: RodSpec, profile: DefectProfile, ideal: IdealSolution,
                  correction: CorrectionSolution) -> float:
    """First-order change in stored energy caused by the defect.

    Integrand: ``n1.dv0 + m1.du0 - N (dv0 K1 dv0/2 + du0 J1 du0/2 + du0 T1 dv0)``,
    integrated with Gauss-Legendre on every smooth piece of N.
    """
    _check_compatible(rod, profile)
    d = profile.tensors
    edges = _intervals(rod, profile)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        s = lo + half * (_GL_NODES + 1.0)
        dv0 = ideal.strain(s)
        du0 = ideal.curvature(s)
        N = profile.shape(s)
        work = np.einsum("ij,ij->i", correction.force(s), dv0) + np.einsum("ij,ij->i", correction.moment(s), du0)
        local = (
            0.5 * np.einsum("ij,jk,ik->i", dv0, d.K, dv0)
            + 0.5 * np.einsum("ij,jk,ik->i", du0, d.J, du0)
            + np.einsum("ij,jk,ik->i", du0, d.T, dv0)
        )
        total += half * np.sum(_GL_WEIGHTS * (work - N * local))
    return float(total)


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    scale: float
    samples: np.ndarray
    skipped: np.ndarray

    @property
    def any_skipped(self) -> bool:
        return self.skipped.size > 0


def residual_check(rod: RodSpec, profile: DefectProfile, ideal: IdealSolution,
                   correction: CorrectionSolution, n_samples: int = 11) -> ResidualReport:
    """Pointwise residual of the first-order balance laws.

    Stresses are rebuilt from the *kinematic* fields (complex-step derivatives
    of rotation and displacement) through the perturbed constitutive law, then
    ``dn1/ds`` and ``dm1/ds + e3 x n1`` are evaluated by central differences.
    Samples whose stencil straddles a jump of N are skipped and reported.
    """
    if n_samples < 3:
        raise ValueError("need at least three samples")
    L = rod.length
    t = rod.tensors
    d = profile.tensors
    h_cs = 1e-20 * L
    step = 1e-4 * L
    breaks = profile.shape.breakpoints

    def stresses(s):
        z = np.asarray(s, dtype=complex) + 1j * h_cs
        dphi = np.imag(correction.rotation(z)) / h_cs
        dx = np.imag(correction.displacement(z)) / h_cs
        phi = correction.rotation(np.asarray(s, dtype=float))
        dv1 = dx + phi @ A3.T
        du1 = dphi
        N = profile.shape(np.asarray(s, dtype=float))[..., None]
        dv0 = ideal.strain(s)
        du0 = ideal.curvature(s)
        n1 = dv1 @ t.K.T + N * (dv0 @ d.K.T + du0 @ d.T)
        m1 = du1 @ t.J.T + N * (du0 @ d.J.T + dv0 @ d.T.T)
        return n1, m1

    samples = np.linspace(0.0, L, n_samples)
    samples = np.clip(samples, 2 * step, L - 2 * step)
    near_jump = np.array([np.any(np.abs(breaks - s) <= 2 * step) for s in samples]) if breaks.size else np.zeros(n_samples, bool)
    good = samples[~near_jump]
    worst = 0.0
    if good.size:
        n_p, m_p = stresses(good + step)
        n_m, m_m = stresses(good - step)
        n_c, _ = stresses(good)
        dn = (n_p - n_m) / (2 * step)
        dm = (m_p - m_m) / (2 * step) + n_c @ A3.T
        worst = float(max(np.max(np.abs(dn)), np.max(np.abs(dm))))
    scale = np.linalg.norm(ideal.k_n) / L + np.linalg.norm(ideal.k_m) / L**2
    return ResidualReport(worst, float(scale), good, samples[near_jump])
