"""Geometry, material and Cosserat section tensors.

Director convention: d1 runs along the section width, d2 along the height
and d3 along the rod axis.  All quantities are SI.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidGeometryError",
    "Material",
    "Strip",
    "RectangleSection",
    "SectionMoments",
    "StiffnessTensors",
    "ReferenceConfiguration",
    "RodSpec",
    "SlendernessWarning",
    "silicon",
    "section_moments",
    "strip_moments",
    "stiffness_tensors",
    "tensors_from_moments",
    "skew",
]

SLENDERNESS_LIMIT = 5.0


class InvalidGeometryError(ValueError):
    """Raised for non-physical dimensions or defect geometry."""


class SlendernessWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Material:
    youngs_modulus: float
    shear_modulus: float
    density: float

    def __post_init__(self):
        if self.youngs_modulus <= 0 or self.shear_modulus <= 0 or self.density <= 0:
            raise ValueError("material constants must be positive")
        if self.shear_modulus >= self.youngs_modulus:
            raise ValueError("shear modulus must be smaller than Young's modulus")

    @classmethod
    def from_poisson(cls, youngs_modulus: float, poisson_ratio: float, density: float) -> "Material":
        return cls(youngs_modulus, youngs_modulus / (2.0 * (1.0 + poisson_ratio)), density)


def silicon() -> Material:
    """Default material: E = 169 GPa, nu = 0.28, rho = 2330 kg/m^3."""
    return Material.from_poisson(169e9, 0.28, 2330.0)


@dataclass(frozen=True)
class Strip:
    """A full-height strip of material on one width flank.

    ``side`` is +1 or -1 (the flank at x1 = +w/2 or -w/2).  A removed strip
    occupies the outer ``depth`` of the nominal section; an added strip sits
    just outside it.
    """

    side: int
    depth: float
    added: bool = False

    def __post_init__(self):
        if self.side not in (1, -1):
            raise InvalidGeometryError(f"strip side must be +1 or -1, got {self.side!r}")
        if self.depth < 0:
            raise InvalidGeometryError("strip depth must be non-negative")


@dataclass(frozen=True)
class RectangleSection:
    width: float
    height: float
    strip: Strip | None = None

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise InvalidGeometryError(
                f"section dimensions must be positive (width={self.width}, height={self.height})"
            )
        if self.strip is not None and self.strip.depth >= self.width:
            raise InvalidGeometryError(
                f"strip depth {self.strip.depth} must be smaller than the width {self.width}"
            )


@dataclass(frozen=True)
class SectionMoments:
    """Area and mass moments of a cross-section about the reference axis."""

    A: float
    A_1: float = 0.0
    A_2: float = 0.0
    A_11: float = 0.0
    A_12: float = 0.0
    A_22: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.A, self.A_1, self.A_2, self.A_11, self.A_12, self.A_22])

    @classmethod
    def from_array(cls, values) -> "SectionMoments":
        return cls(*(float(v) for v in values))

    def __add__(self, other: "SectionMoments") -> "SectionMoments":
        return SectionMoments.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: "SectionMoments") -> "SectionMoments":
        return SectionMoments.from_array(self.as_array() - other.as_array())

    def scaled(self, factor: float) -> "SectionMoments":
        return SectionMoments.from_array(factor * self.as_array())

    @property
    def second_moment_matrix(self) -> np.ndarray:
        return np.array([[self.A_11, self.A_12], [self.A_12, self.A_22]])

    def rotary_inertia(self) -> np.ndarray:
        """I_lg = delta_lg A_mm - A_lg, I_33 = A_mm."""
        trace = self.A_11 + self.A_22
        out = np.zeros((3, 3))
        out[:2, :2] = trace * np.eye(2) - self.second_moment_matrix
        out[2, 2] = trace
        return out


@dataclass(frozen=True)
class StiffnessTensors:
    K: np.ndarray
    J: np.ndarray
    T: np.ndarray
    I_rot: np.ndarray

    def scaled(self, factor: float) -> "StiffnessTensors":
        return StiffnessTensors(factor * self.K, factor * self.J, factor * self.T, factor * self.I_rot)


def _zero_reference(s):
    return np.zeros(3)


def _straight_stretch(s):
    return np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class ReferenceConfiguration:
    """Intrinsic curvature u_hat(s) and stretch v_hat(s) of the unloaded rod."""

    curvature: object = _zero_reference
    stretch: object = _straight_stretch

    @property
    def is_straight_prismatic(self) -> bool:
        return self.curvature is _zero_reference and self.stretch is _straight_stretch


@dataclass(frozen=True)
class RodSpec:
    length: float
    material: Material = field(default_factory=silicon)
    section: RectangleSection = field(default_factory=lambda: RectangleSection(6e-6, 15e-6))
    reference: ReferenceConfiguration = field(default_factory=ReferenceConfiguration)

    def __post_init__(self):
        if not self.length > 0:
            raise InvalidGeometryError("rod length must be positive")
        slenderness = self.length / max(self.section.width, self.section.height)
        if slenderness < SLENDERNESS_LIMIT:
            warnings.warn(
                f"slenderness L/max(w,h) = {slenderness:.2f} is below {SLENDERNESS_LIMIT}; "
                "rod theory is unlikely to be accurate",
                SlendernessWarning,
                stacklevel=3,
            )

    @property
    def moments(self) -> SectionMoments:
        return section_moments(self.section)

    @property
    def tensors(self) -> StiffnessTensors:
        return stiffness_tensors(self.material, self.moments)

    @property
    def mass(self) -> float:
        return self.material.density * self.moments.A * self.length


def _rectangle(width: float, height: float) -> np.ndarray:
    return np.array([width * height, 0.0, 0.0, height * width**3 / 12.0, 0.0, width * height**3 / 12.0])


def strip_moments(width: float, height: float, strip: Strip) -> SectionMoments:
    """Signed moment deltas of a strip, taken about the nominal centroid."""
    half = 0.5 * width
    if strip.added:
        lo, hi, sign = half, half + strip.depth, 1.0
    else:
        lo, hi, sign = half - strip.depth, half, -1.0
    dA = sign * height * (hi - lo)
    dA1 = sign * strip.side * height * (hi**2 - lo**2) / 2.0
    dA11 = sign * height * (hi**3 - lo**3) / 3.0
    dA22 = sign * (hi - lo) * height**3 / 12.0
    return SectionMoments(dA, dA1, 0.0, dA11, 0.0, dA22)


def section_moments(section: RectangleSection) -> SectionMoments:
    """Closed-form moments of a rectangle, with an optional strip removed or added.

    Moments are always about the centroid of the nominal rectangle, so a
    one-sided strip shows up as a non-zero first moment ``A_1``.
    """
    base = SectionMoments.from_array(_rectangle(section.width, section.height))
    if section.strip is None or section.strip.depth == 0:
        return base
    return base + strip_moments(section.width, section.height, section.strip)


def tensors_from_moments(material: Material, moments: SectionMoments) -> StiffnessTensors:
    """Linear map from section moments to (K, J, T, I_rot).

    No validity checks, so it also turns moment *deltas* into tensor deltas.
    """
    E, G = material.youngs_modulus, material.shear_modulus
    m = moments
    K = np.diag([G * m.A, G * m.A, E * m.A])
    I_rot = m.rotary_inertia()
    J = np.diag([E * I_rot[0, 0], E * I_rot[1, 1], G * I_rot[2, 2]])
    T = np.zeros((3, 3))
    T[0, 2] = -E * m.A_2
    T[1, 2] = E * m.A_1
    T[2, 0] = G * m.A_2
    T[2, 1] = -G * m.A_1
    return StiffnessTensors(K, J, T, I_rot)


def stiffness_tensors(material: Material, moments: SectionMoments) -> StiffnessTensors:
    if moments.A <= 0:
        raise InvalidGeometryError("section area must be positive")
    if np.any(np.linalg.eigvalsh(moments.second_moment_matrix) <= 0):
        raise InvalidGeometryError("second-moment matrix must be positive definite")
    return tensors_from_moments(material, moments)


def skew(v) -> np.ndarray:
    """Cross-product matrix: ``skew(v) @ x == np.cross(v, x)``."""
    v = np.asarray(v)
    out = np.zeros((3, 3), dtype=v.dtype)
    out[0, 1], out[0, 2] = -v[2], v[1]
    out[1, 0], out[1, 2] = v[2], -v[0]
    out[2, 0], out[2, 1] = -v[1], v[0]
    return out
