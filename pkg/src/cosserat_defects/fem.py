"""Independent 1-D finite-element beam oracle with variable cross-section.

Two-node, 6-DOF-per-node shear-deformable beam elements (interdependent
interpolation, exact for a uniform element) with consistent mass matrices
integrated numerically from the element shape functions.  Each element takes
the length-averaged section moments of the rod plus any defect strips that
overlap it, so defect edges need not coincide with nodes.

Nodal DOFs are ``(x, y, z, phi_x, phi_y, phi_z)``; the beam axis is z.  Only
the section sampling is shared with the Cosserat path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .rod import RodSpec, SectionMoments, section_moments

__all__ = [
    "FemModel",
    "UnconstrainedModelError",
    "build_mesh",
    "element_mass_xz",
    "element_stiffness_xz",
    "lowest_frequency_fem",
    "condensed_end_stiffness",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


class UnconstrainedModelError(ValueError):
    pass


def _shape_functions(xi: np.ndarray, length: float, phi: float):
    """Deflection and rotation interpolants of the shear-deformable element."""
    c = 1.0 / (1.0 + phi)
    L = length
    Nw = c * np.array(
        [
            2 * xi**3 - 3 * xi**2 - phi * xi + 1 + phi,
            L * (xi**3 - (2 + phi / 2) * xi**2 + (1 + phi / 2) * xi),
            -2 * xi**3 + 3 * xi**2 + phi * xi,
            L * (xi**3 - (1 - phi / 2) * xi**2 - (phi / 2) * xi),
        ]
    )
    Nt = c * np.array(
        [
            6.0 / L * (xi**2 - xi),
            3 * xi**2 - (4 + phi) * xi + 1 + phi,
            -6.0 / L * (xi**2 - xi),
            3 * xi**2 - (2 - phi) * xi,
        ]
    )
    return Nw, Nt


def element_stiffness_xz(EI: float, GA: float, length: float) -> np.ndarray:
    """Bending stiffness in one plane, DOFs (w1, theta1, w2, theta2), theta = +slope."""
    L = length
    phi = 12.0 * EI / (GA * L**2)
    return EI / ((1.0 + phi) * L**3) * np.array(
        [
            [12, 6 * L, -12, 6 * L],
            [6 * L, (4 + phi) * L**2, -6 * L, (2 - phi) * L**2],
            [-12, -6 * L, 12, -6 * L],
            [6 * L, (2 - phi) * L**2, -6 * L, (4 + phi) * L**2],
        ]
    )


def element_mass_xz(rhoA: float, rhoI: float, EI: float, GA: float, length: float) -> np.ndarray:
    """Consistent mass in one plane from quadrature of the shape functions."""
    phi = 12.0 * EI / (GA * length**2)
    xi = 0.5 * (_GL_NODES + 1.0)
    w = 0.5 * _GL_WEIGHTS * length
    Nw, Nt = _shape_functions(xi, length, phi)
    return rhoA * (Nw * w) @ Nw.T + rhoI * (Nt * w) @ Nt.T


def _bar(k: float) -> np.ndarray:
    return k * np.array([[1.0, -1.0], [-1.0, 1.0]])


_XZ = [0, 4, 6, 10]
_YZ = [1, 3, 7, 9]
_AX = [2, 8]
_TOR = [5, 11]
_FLIP = np.diag([1.0, -1.0, 1.0, -1.0])


def _element_matrices(mom: SectionMoments, rod: RodSpec, length: float):
    E, G, rho = rod.material.youngs_modulus, rod.material.shear_modulus, rod.material.density
    A, I_xz, I_yz = mom.A, mom.A_11, mom.A_22
    polar = I_xz + I_yz
    k = np.zeros((12, 12))
    m = np.zeros((12, 12))
    k[np.ix_(_AX, _AX)] = _bar(E * A / length)
    k[np.ix_(_TOR, _TOR)] = _bar(G * polar / length)
    k[np.ix_(_XZ, _XZ)] = element_stiffness_xz(E * I_xz, G * A, length)
    k[np.ix_(_YZ, _YZ)] = _FLIP @ element_stiffness_xz(E * I_yz, G * A, length) @ _FLIP
    pair = np.array([[2.0, 1.0], [1.0, 2.0]]) * length / 6.0
    m[np.ix_(_AX, _AX)] = rho * A * pair
    m[np.ix_(_TOR, _TOR)] = rho * polar * pair
    m[np.ix_(_XZ, _XZ)] = element_mass_xz(rho * A, rho * I_xz, E * I_xz, G * A, length)
    m[np.ix_(_YZ, _YZ)] = _FLIP @ element_mass_xz(rho * A, rho * I_yz, E * I_yz, G * A, length) @ _FLIP
    return k, m


@dataclass(frozen=True)
class FemModel:
    rod: RodSpec
    n_elements: int
    nodes: np.ndarray
    element_moments: tuple
    K: sp.csr_matrix
    M: sp.csr_matrix

    @property
    def n_dofs(self) -> int:
        return 6 * (self.n_elements + 1)

    def end_dofs(self, end: int) -> np.ndarray:
        node = 0 if end == 0 else self.n_elements
        return np.arange(6 * node, 6 * node + 6)

    def elastic_energy(self, u: np.ndarray) -> float:
        return 0.5 * float(u @ (self.K @ u))


def build_mesh(rod: RodSpec, profiles=(), n_elements: int = 64) -> FemModel:
    """Uniform mesh with length-averaged section moments per element."""
    if n_elements < 4:
        raise ValueError("the FEM oracle needs at least 4 elements")
    L = rod.length
    h = L / n_elements
    if h < np.finfo(float).eps * L:
        raise ValueError("element length below machine precision")
    nodes = L * (np.arange(n_elements + 1) / n_elements)
    base = section_moments(rod.section)
    moments = []
    rows, cols, kv, mv = [], [], [], []
    for e in range(n_elements):
        a, b = nodes[e], nodes[e + 1]
        mom = base
        for p in profiles:
            lo, hi = p.shape.support
            if hi > a and lo < b:
                mom = mom + p.section_delta(a, b)
        moments.append(mom)
        k, m = _element_matrices(mom, rod, b - a)
        dofs = np.arange(6 * e, 6 * e + 12)
        r, c = np.meshgrid(dofs, dofs, indexing="ij")
        rows.append(r.ravel())
        cols.append(c.ravel())
        kv.append(k.ravel())
        mv.append(m.ravel())
    n = 6 * (n_elements + 1)
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    K = sp.csr_matrix((np.concatenate(kv), (rows, cols)), shape=(n, n))
    M = sp.csr_matrix((np.concatenate(mv), (rows, cols)), shape=(n, n))
    return FemModel(rod, n_elements, nodes, tuple(moments), K, M)


def _ends(boundary) -> set:
    names = {"start": 0, "end": 1, 0: 0, 1: 1}
    if isinstance(boundary, (str, int)):
        boundary = [boundary]
    return {names[b] for b in boundary}


def _rotation_scale(model: FemModel) -> np.ndarray:
    per_node = np.r_[np.ones(3), np.full(3, 1.0 / model.rod.length)]
    return np.tile(per_node, model.n_elements + 1)


def lowest_frequency_fem(model: FemModel, boundary=("start",), tip_mass: float = 0.0) -> float:
    """Lowest natural frequency (Hz) with the given ends clamped.

    A point ``tip_mass`` sits on the translations of the first free end.
    """
    fixed_ends = _ends(boundary)
    if not fixed_ends:
        raise UnconstrainedModelError("clamp at least one end")
    fixed = np.concatenate([model.end_dofs(e) for e in sorted(fixed_ends)])
    free = np.setdiff1d(np.arange(model.n_dofs), fixed)
    M = model.M.tolil(copy=True)
    free_ends = sorted({0, 1} - fixed_ends)
    if free_ends and tip_mass:
        for d in model.end_dofs(free_ends[0])[:3]:
            M[d, d] += tip_mass
    D = sp.diags(_rotation_scale(model))
    Ks = (D @ model.K @ D).tocsc()[free][:, free]
    Ms = (D @ M.tocsr() @ D).tocsc()[free][:, free]
    if np.any(Ms.diagonal() <= 0):
        raise RuntimeError("mass matrix is not positive definite")
    v0 = np.ones(Ks.shape[0])
    w = spla.eigsh(Ks, k=1, M=Ms, sigma=0.0, which="LM", v0=v0, return_eigenvectors=False, tol=0)
    lam = float(w[0])
    if lam <= 0:
        raise RuntimeError("non-positive eigenvalue in a constrained model")
    return float(np.sqrt(lam) / (2 * np.pi))


def condensed_end_stiffness(model: FemModel) -> np.ndarray:
    """Static condensation of the global stiffness onto the two end nodes."""
    ends = np.r_[model.end_dofs(0), model.end_dofs(1)]
    inner = np.setdiff1d(np.arange(model.n_dofs), ends)
    D = sp.diags(_rotation_scale(model))
    K = (D @ model.K @ D).tocsc()
    Kbb = K[ends][:, ends].toarray()
    Kbi = K[ends][:, inner]
    Kii = K[inner][:, inner]
    X = spla.splu(Kii.tocsc()).solve(Kbi.T.toarray())
    Kc = Kbb - Kbi @ X
    d = _rotation_scale(model)[ends]
    return Kc / d[:, None] / d[None, :]
