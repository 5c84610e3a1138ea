"""End-point component models: 12x12 stiffness, defect delta, mass, export.

The defect stiffness is the exact Hessian of the first-order defect energy
with respect to the end displacements Q.  Because the ideal strains are
``dv0 = K0^-1 k_n`` (constant) and ``du0 = J0^-1 (k_m - s e3 x k_n)``
(linear in s), the Hessian only needs the three moments of N.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from . import __version__
from .defects import DefectProfile
from .ideal import A3, DOF_LABELS, _compliances, constant_map, ideal_stiffness
from .rod import RodSpec

__all__ = [
    "ComponentModel",
    "ModalEstimate",
    "RigidBodyModeError",
    "DefectOverlapWarning",
    "RAYLEIGH_TIP_FACTOR",
    "defect_stiffness",
    "assemble_component",
    "static_shape_mass",
    "modal_estimate",
    "export_component",
    "load_component",
    "read_matrix_text",
    "rod_description",
]

SCHEMA_VERSION = "1"
RAYLEIGH_TIP_FACTOR = 33.0 / 140.0

_END_DOFS = {0: slice(0, 6), 1: slice(6, 12)}
_END_NAMES = {"start": 0, "end": 1, 0: 0, 1: 1, "s0": 0, "sL": 1}


class RigidBodyModeError(ValueError):
    """The component has no fixed end, so its lowest modes are rigid-body."""


class DefectOverlapWarning(UserWarning):
    pass


def defect_stiffness(rod: RodSpec, profile: DefectProfile) -> np.ndarray:
    """Hessian of the defect energy, already scaled by Gamma."""
    if not np.isclose(rod.length, profile.rod_length, rtol=1e-12, atol=0.0):
        raise ValueError("profile and rod lengths differ")
    G = constant_map(rod)
    Kinv, Jinv = _compliances(rod)
    V0 = Kinv @ G[:3]
    U0 = Jinv @ G[3:]
    U1 = -Jinv @ A3 @ G[:3]
    d = profile.tensors
    f = profile.functionals
    b0, b1, b2 = f.bar_one, f.bar_s, f.bar_s2

    def coupling(U):
        C = U.T @ d.T @ V0
        return C + C.T

    H = b0 * (V0.T @ d.K @ V0 + U0.T @ d.J @ U0 + coupling(U0))
    H += b1 * (U0.T @ d.J @ U1 + U1.T @ d.J @ U0 + coupling(U1))
    H += b2 * (U1.T @ d.J @ U1)
    return 0.5 * (H + H.T)


def _beam_block_mass(mass: float, rotary: float, length: float, phi: float) -> np.ndarray:
    """Consistent mass of a shear-deformable beam in one bending plane.

    DOFs (w1, theta1, w2, theta2) with theta the section rotation; ``phi`` is
    12 EI / (GA L^2).  Translational and rotary parts of the static-shape
    (interdependent interpolation) element.
    """
    L, p = length, phi
    t = mass / (1.0 + p) ** 2
    m11 = 13 / 35 + 7 * p / 10 + p**2 / 3
    m12 = (11 / 210 + 11 * p / 120 + p**2 / 24) * L
    m13 = 9 / 70 + 3 * p / 10 + p**2 / 6
    m14 = -(13 / 420 + 3 * p / 40 + p**2 / 24) * L
    m22 = (1 / 105 + p / 60 + p**2 / 120) * L**2
    m24 = -(1 / 140 + p / 60 + p**2 / 120) * L**2
    Mt = t * np.array(
        [
            [m11, m12, m13, m14],
            [m12, m22, -m14, m24],
            [m13, -m14, m11, -m12],
            [m14, m24, -m12, m22],
        ]
    )
    r = rotary / ((1.0 + p) ** 2 * L)
    r11 = 6 / 5
    r12 = (1 / 10 - p / 2) * L
    r22 = (2 / 15 + p / 6 + p**2 / 3) * L**2
    r24 = (-1 / 30 - p / 6 + p**2 / 6) * L**2
    Mr = r * np.array(
        [
            [r11, r12, -r11, r12],
            [r12, r22, -r12, r24],
            [-r11, -r12, r11, -r12],
            [r12, r24, -r12, r22],
        ]
    )
    return Mt + Mr


def static_shape_mass(rod: RodSpec) -> np.ndarray:
    """12x12 kinetic-energy matrix of the ideal rod on its static deflection shapes."""
    L = rod.length
    rho = rod.material.density
    m = rod.moments
    t = rod.tensors
    M = np.zeros((12, 12))
    pair = np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0
    axial, torsion = [2, 8], [5, 11]
    M[np.ix_(axial, axial)] = rho * m.A * L * pair
    M[np.ix_(torsion, torsion)] = rho * (m.A_11 + m.A_22) * L * pair
    # x-z plane: slope follows +phi_y, bending stiffness J_22, shear K_11
    phi_xz = 12.0 * t.J[1, 1] / (t.K[0, 0] * L**2)
    idx = [0, 4, 6, 10]
    M[np.ix_(idx, idx)] = _beam_block_mass(rho * m.A * L, rho * m.A_11, L, phi_xz)
    # y-z plane: slope follows -phi_x
    phi_yz = 12.0 * t.J[0, 0] / (t.K[1, 1] * L**2)
    idx = [1, 3, 7, 9]
    S = np.diag([1.0, -1.0, 1.0, -1.0])
    M[np.ix_(idx, idx)] = S @ _beam_block_mass(rho * m.A * L, rho * m.A_22, L, phi_yz) @ S
    return M


def rod_description(rod: RodSpec) -> dict:
    s = rod.section
    return {
        "length_m": rod.length,
        "width_m": s.width,
        "height_m": s.height,
        "youngs_modulus_pa": rod.material.youngs_modulus,
        "shear_modulus_pa": rod.material.shear_modulus,
        "density_kg_m3": rod.material.density,
    }


def _rod_hash(rod: RodSpec) -> str:
    text = json.dumps(rod_description(rod), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class ComponentModel:
    name: str
    rod: RodSpec
    profiles: tuple
    K_ideal: np.ndarray
    K_defect_delta: np.ndarray
    mass_data: dict
    metadata: dict = field(default_factory=dict)

    dof_order = DOF_LABELS

    @property
    def K_total(self) -> np.ndarray:
        return self.K_ideal + self.K_defect_delta

    def mass_matrix(self) -> np.ndarray:
        return static_shape_mass(self.rod)


@dataclass(frozen=True)
class ModalEstimate:
    frequency: float
    mode_shape: np.ndarray
    method: str
    free_dofs: tuple = ()


def _overlaps(profiles) -> bool:
    spans = sorted(p.shape.support for p in profiles if p.kind != "jitter")
    return any(b0 > a1 for (_, b0), (a1, _) in zip(spans[:-1], spans[1:]))


def assemble_component(rod: RodSpec, profiles=(), name: str = "beam", tip_mass: float = 0.0) -> ComponentModel:
    """Ideal stiffness plus the superposed first-order defect deltas."""
    profiles = tuple(profiles)
    if _overlaps(profiles):
        warnings.warn(
            "defect supports overlap; first-order superposition ignores their interaction",
            DefectOverlapWarning,
            stacklevel=2,
        )
    delta = np.zeros((12, 12))
    for p in profiles:
        delta = delta + defect_stiffness(rod, p)
    mass_data = {
        "beam_kg": rod.mass,
        "tip_kg": float(tip_mass),
        "factors": {
            "transverse_tip_loaded": RAYLEIGH_TIP_FACTOR,
            "axial": 1.0 / 3.0,
            "torsional": 1.0 / 3.0,
        },
    }
    metadata = {
        "rod_sha256": _rod_hash(rod),
        "profiles": [p.to_dict() for p in profiles],
    }
    return ComponentModel(name, rod, profiles, ideal_stiffness(rod), delta, mass_data, metadata)


def _fixed_ends(boundary) -> set:
    if isinstance(boundary, (str, int)):
        boundary = [boundary]
    try:
        return {_END_NAMES[b] for b in boundary}
    except KeyError as exc:
        raise ValueError(f"unknown end {exc.args[0]!r}; use 'start' or 'end'") from None


def modal_estimate(component: ComponentModel, boundary=("start",), tip_mass: float | None = None,
                   method: str = "condensed-eigen") -> ModalEstimate:
    """Lowest natural frequency of the component with one or both ends clamped.

    ``condensed-eigen`` solves the generalized eigenproblem of the free end
    DOFs with the static-shape consistent mass plus the tip mass.
    ``rayleigh`` condenses the stiffness onto the in-plane (x) tip
    translation and uses ``tip_mass + 33/140 rho A L``.
    """
    fixed = _fixed_ends(boundary)
    if not fixed:
        raise RigidBodyModeError("at least one end must be fixed for a modal estimate")
    free_ends = sorted({0, 1} - fixed)
    if not free_ends:
        raise ValueError("both ends fixed: the component has no free DOFs")
    tip = component.mass_data.get("tip_kg", 0.0) if tip_mass is None else float(tip_mass)
    free = np.arange(12)[_END_DOFS[free_ends[0]]]
    K = component.K_total[np.ix_(free, free)]
    L = component.rod.length
    # rotations scaled by L to balance the translational and rotary blocks
    D = np.r_[np.ones(3), np.full(3, 1.0 / L)]
    Ks = K * D[:, None] * D[None, :]
    Ks = 0.5 * (Ks + Ks.T)

    if method == "rayleigh":
        k_tip = 1.0 / np.linalg.inv(Ks)[0, 0]
        m_eff = tip + RAYLEIGH_TIP_FACTOR * component.rod.mass
        mode = np.zeros(6)
        mode[0] = 1.0
        return ModalEstimate(float(np.sqrt(k_tip / m_eff) / (2 * np.pi)), mode, "rayleigh", tuple(free))
    if method != "condensed-eigen":
        raise ValueError(f"unknown modal method {method!r}")

    M = component.mass_matrix()[np.ix_(free, free)]
    M[:3, :3] += tip * np.eye(3)
    Ms = M * D[:, None] * D[None, :]
    w, v = scipy.linalg.eigh(Ks, Ms, subset_by_index=[0, 0])
    if w[0] <= 0:
        raise RigidBodyModeError("non-positive eigenvalue: the constrained component is not stable")
    mode = v[:, 0] * D
    mode = mode / mode[np.argmax(np.abs(mode[:3]))]
    return ModalEstimate(float(np.sqrt(w[0]) / (2 * np.pi)), mode, "condensed-eigen", tuple(free))


def _fmt(x: float) -> str:
    return format(float(x), ".16e")


def _matrix_json(A: np.ndarray, indent: str) -> str:
    rows = [indent + "  [" + ", ".join(_fmt(x) for x in row) + "]" for row in A]
    return "[\n" + ",\n".join(rows) + "\n" + indent + "]"


def _component_document(component: ComponentModel, extra: dict | None = None, summary: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": component.name,
        "dof_order": list(DOF_LABELS),
        "units": {
            "translation": "m",
            "rotation": "rad",
            "stiffness": "SI per block: N/m (force-translation), N/rad and N (mixed), N*m/rad (moment-rotation)",
            "mass": "kg",
        },
        "stiffness_ideal": "@@stiffness_ideal@@",
        "stiffness_defect_delta": "@@stiffness_defect_delta@@",
        "mass": component.mass_data,
        "provenance": {
            "rod": rod_description(component.rod),
            "rod_sha256": component.metadata.get("rod_sha256"),
            "profiles": component.metadata.get("profiles", []),
            "tool_version": __version__,
            **(extra or {}),
        },
    }
    if summary is not None:
        doc["summary"] = summary
    return doc


def export_component(component: ComponentModel, destination, format: str = "json",
                     provenance: dict | None = None, summary: dict | None = None) -> Path:
    """Write the component as JSON or as '#'-annotated matrix text.

    Floats are written with 17 significant digits, so re-reading gives
    bit-identical matrices.
    """
    path = Path(destination)
    if format == "json":
        text = json.dumps(_component_document(component, provenance, summary), indent=2)
        text = text.replace('"@@stiffness_ideal@@"', _matrix_json(component.K_ideal, "  "))
        text = text.replace('"@@stiffness_defect_delta@@"', _matrix_json(component.K_defect_delta, "  "))
        text += "\n"
    elif format == "matrix-text":
        lines = [
            f"# schema_version {SCHEMA_VERSION}",
            f"# name {component.name}",
            f"# tool_version {__version__}",
            f"# rod_sha256 {component.metadata.get('rod_sha256')}",
            *(f"# {k} {v}" for k, v in (provenance or {}).items()),
            "# dof_order " + " ".join(DOF_LABELS),
        ]
        for key, A in (("stiffness_ideal", component.K_ideal), ("stiffness_defect_delta", component.K_defect_delta)):
            lines.append(f"# matrix {key}")
            lines.extend(" ".join(_fmt(x) for x in row) for row in A)
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown export format {format!r}")
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write component to {path}: {exc.strerror}") from exc
    return path


def load_component(path) -> dict:
    """Read an exported JSON component back; matrices come back as arrays."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read component from {path}: {exc.strerror}") from exc
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema_version {doc.get('schema_version')!r}")
    for key in ("stiffness_ideal", "stiffness_defect_delta"):
        doc[key] = np.array(doc[key], dtype=float)
    return doc


def read_matrix_text(path) -> dict:
    """Parse the matrix-text export into ``{name: 12x12 array}``."""
    out, current, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# matrix "):
            if current is not None:
                out[current] = np.array(rows, dtype=float)
            current, rows = line.split()[2], []
        elif line.startswith("#") or not line.strip():
            continue
        else:
            rows.append([float(x) for x in line.split()])
    if current is not None:
        out[current] = np.array(rows, dtype=float)
    return out
