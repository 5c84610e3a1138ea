"""Blob, nick and jitter defects as separable perturbations ``Gamma N(s)``.

A defect changes the section tensors by ``Gamma * N(s) * (K1, J1, T1)``
where ``N`` is a dimensionless shape and ``K1, J1, T1`` are constant
per-unit-Gamma tensors.  The closed-form correction only ever sees the shape
through the running moments

    tilde_k(s) = int_0^s t^k N(t) dt,     k = 0, 1, 2,

so every shape class here provides those exactly (and for complex ``s``, which
the complex-step residual checks rely on).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rod import (
    InvalidGeometryError,
    RodSpec,
    SectionMoments,
    StiffnessTensors,
    Strip,
    strip_moments,
    tensors_from_moments,
)

__all__ = [
    "AmplitudeCapError",
    "GAMMA_CAP",
    "PiecewisePolynomialShape",
    "RaisedCosineShape",
    "DefectProfile",
    "MomentFunctionals",
    "make_nick",
    "make_blob",
    "make_jitter",
    "moment_functionals",
    "sample_jitter_realization",
    "profile_from_dict",
]

GAMMA_CAP = 0.5

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)
_SAMPLE_NODES, _SAMPLE_WEIGHTS = np.polynomial.legendre.leggauss(8)


class AmplitudeCapError(ValueError):
    """|Gamma| exceeds the first-order model's hard cap."""


def _clip(s, a: float, b: float):
    """Clamp ``s`` to [a, b] by its real part, keeping complex values inside."""
    s = np.asarray(s)
    re = s.real
    return np.where(re <= a, a, np.where(re >= b, b, s))


@dataclass(frozen=True)
class PiecewisePolynomialShape:
    """N(s) = sum_j c_j s^j on each piece [a, b), zero elsewhere."""

    pieces: tuple

    def __post_init__(self):
        pieces = tuple((float(a), float(b), tuple(float(c) for c in coeffs)) for a, b, coeffs in self.pieces)
        for a, b, _ in pieces:
            if not b > a:
                raise InvalidGeometryError(f"empty shape piece [{a}, {b}]")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def indicator(cls, a: float, b: float) -> "PiecewisePolynomialShape":
        return cls(((a, b, (1.0,)),))

    @classmethod
    def piecewise_constant(cls, edges, values) -> "PiecewisePolynomialShape":
        return cls(tuple((edges[i], edges[i + 1], (values[i],)) for i in range(len(values))))

    @property
    def breakpoints(self) -> np.ndarray:
        return np.unique([x for a, b, _ in self.pieces for x in (a, b)])

    @property
    def support(self) -> tuple:
        return self.pieces[0][0], self.pieces[-1][1]

    def __call__(self, s):
        s = np.asarray(s)
        out = np.zeros(s.shape, dtype=np.result_type(s, float))
        for a, b, coeffs in self.pieces:
            inside = (s.real >= a) & (s.real < b)
            out = out + np.where(inside, np.polynomial.polynomial.polyval(s, coeffs), 0.0)
        return out

    @property
    def peak(self) -> float:
        """max |N| (pieces are at most a few degrees, so a fine sample is enough)."""
        best = 0.0
        for a, b, coeffs in self.pieces:
            t = np.linspace(a, b, 257)
            best = max(best, float(np.max(np.abs(np.polynomial.polynomial.polyval(t, coeffs)))))
        return best

    def moment(self, k: int, s):
        out = 0.0
        for a, b, coeffs in self.pieces:
            t = _clip(s, a, b)
            for j, c in enumerate(coeffs):
                p = j + k + 1
                out = out + c * (t**p - a**p) / p
        return out


@dataclass(frozen=True)
class RaisedCosineShape:
    """Smooth bump ``(1 - cos(2 pi (s - a)/(b - a)))/2`` on [a, b]."""

    a: float
    b: float

    def __post_init__(self):
        if not self.b > self.a:
            raise InvalidGeometryError("raised-cosine support must have positive length")

    @property
    def pieces(self) -> tuple:
        return ((self.a, self.b, None),)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.array([self.a, self.b])

    @property
    def support(self) -> tuple:
        return self.a, self.b

    peak = 1.0

    def _bump(self, t):
        return 0.5 * (1.0 - np.cos(2.0 * np.pi * (t - self.a) / (self.b - self.a)))

    def __call__(self, s):
        s = np.asarray(s)
        inside = (s.real >= self.a) & (s.real <= self.b)
        return np.where(inside, self._bump(s), 0.0)

    def moment(self, k: int, s):
        t = _clip(s, self.a, self.b)
        half = 0.5 * (t - self.a)
        nodes = self.a + half[..., None] * (_GL_NODES + 1.0)
        return np.sum(_GL_WEIGHTS * nodes**k * self._bump(nodes), axis=-1) * half


@dataclass(frozen=True)
class MomentFunctionals:
    shape: object
    length: float

    def tilde_one(self, s):
        return self.shape.moment(0, s)

    def tilde_s(self, s):
        return self.shape.moment(1, s)

    def tilde_s2(self, s):
        return self.shape.moment(2, s)

    @property
    def bar_one(self) -> float:
        return float(np.real(self.tilde_one(self.length)))

    @property
    def bar_s(self) -> float:
        return float(np.real(self.tilde_s(self.length)))

    @property
    def bar_s2(self) -> float:
        return float(np.real(self.tilde_s2(self.length)))


@dataclass(frozen=True)
class DefectProfile:
    """A separable defect ``Gamma N(s)`` on a rod of length ``rod_length``.

    ``per_unit`` holds the constant tensors multiplying ``Gamma N(s)``.
    ``side``, ``width`` and ``height`` describe the physical strip so the FEM
    oracle can rebuild the geometry; moment-only jitter profiles carry no
    geometry (``geometric`` is False).
    """

    kind: str
    rod_length: float
    s0: float
    extent: float
    gamma: float
    shape: object
    per_unit: StiffnessTensors
    width: float
    height: float
    side: int = 1
    geometric: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("blob", "nick", "jitter"):
            raise ValueError(f"unknown defect kind {self.kind!r}")
        if self.kind == "blob" and self.gamma < 0:
            raise ValueError("a blob must have Gamma >= 0")
        if self.kind == "nick" and self.gamma > 0:
            raise ValueError("a nick must have Gamma <= 0")
        if self.amplitude > GAMMA_CAP:
            raise AmplitudeCapError(
                f"peak |Gamma N| = {self.amplitude:.4g} exceeds the cap of {GAMMA_CAP} for the first-order model"
            )
        lo, hi = self.shape.support
        tol = 1e-12 * self.rod_length
        if lo < -tol or hi > self.rod_length + tol:
            raise InvalidGeometryError(
                f"defect support [{lo:.6g}, {hi:.6g}] m lies outside the rod [0, {self.rod_length:.6g}] m"
            )

    @property
    def amplitude(self) -> float:
        """Peak relative section change max |Gamma N(s)|."""
        return abs(self.gamma) * self.shape.peak

    @property
    def functionals(self) -> MomentFunctionals:
        return MomentFunctionals(self.shape, self.rod_length)

    @property
    def tensors(self) -> StiffnessTensors:
        """Gamma-scaled tensor deltas (multiply by N(s) for the local change)."""
        return self.per_unit.scaled(self.gamma)

    def with_gamma(self, gamma: float) -> "DefectProfile":
        kind = self.kind
        if kind != "jitter":
            kind = "blob" if gamma > 0 else "nick"
        return DefectProfile(
            kind, self.rod_length, self.s0, self.extent, gamma, self.shape, self.per_unit,
            self.width, self.height, self.side, self.geometric, dict(self.meta),
        )

    def section_delta(self, a: float, b: float) -> SectionMoments:
        """Length-averaged physical moment change over [a, b].

        The local strip depth is ``Gamma N(s) w``: negative removes material
        from the flank, positive adds it outside the nominal width.
        """
        if not self.geometric:
            raise ValueError("moment-only jitter profiles have no geometry to sample")
        total = np.zeros(6)
        for pa, pb, _ in self.shape.pieces:
            lo, hi = max(a, pa), min(b, pb)
            if hi <= lo:
                continue
            half = 0.5 * (hi - lo)
            nodes = lo + half * (_SAMPLE_NODES + 1.0)
            for t, wgt in zip(nodes, _SAMPLE_WEIGHTS):
                signed = self.gamma * float(np.real(self.shape(t))) * self.width
                if signed == 0.0:
                    continue
                strip = Strip(self.side, abs(signed), added=signed > 0)
                if strip.depth >= self.width:
                    raise InvalidGeometryError("local defect depth reaches the full width")
                total += wgt * half * strip_moments(self.width, self.height, strip).as_array()
        return SectionMoments.from_array(total / (b - a))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "s0_m": self.s0, "extent_m": self.extent, "gamma": self.gamma,
               "side": self.side, "shape": type(self.shape).__name__}
        out.update(self.meta)
        return out


def _support(rod: RodSpec, s0: float, extent: float) -> tuple:
    if not extent > 0:
        raise InvalidGeometryError("defect extent must be positive")
    a, b = s0 - 0.5 * extent, s0 + 0.5 * extent
    tol = 1e-12 * rod.length
    if a < -tol or b > rod.length + tol:
        raise InvalidGeometryError(
            f"defect [{a:.6g}, {b:.6g}] m does not fit inside the rod [0, {rod.length:.6g}] m"
        )
    return max(a, 0.0), min(b, rod.length)


def _make_shape(kind: str, a: float, b: float):
    if kind == "indicator":
        return PiecewisePolynomialShape.indicator(a, b)
    if kind == "raised-cosine":
        return RaisedCosineShape(a, b)
    raise ValueError(f"unknown defect shape {kind!r}")


def _strip_profile(rod, s0, extent, depth, side, shape, sign):
    w, h = rod.section.width, rod.section.height
    if depth < 0:
        raise InvalidGeometryError("defect depth must be non-negative")
    if depth >= w:
        raise InvalidGeometryError(f"defect depth {depth:.6g} m must be smaller than the width {w:.6g} m")
    if extent is None:
        extent = depth
    a, b = _support(rod, s0, extent)
    gamma = sign * depth * h / (w * h)
    if depth == 0:
        per_unit = tensors_from_moments(rod.material, SectionMoments(0.0))
    else:
        delta = strip_moments(w, h, Strip(side, depth, added=False))
        per_unit = tensors_from_moments(rod.material, delta.scaled(-1.0 / (depth * h / (w * h))))
    kind = "nick" if sign < 0 else "blob"
    return DefectProfile(
        kind, rod.length, s0, extent, gamma, _make_shape(shape, a, b), per_unit, w, h, side,
        meta={"depth_m": depth},
    )


def make_nick(rod: RodSpec, s0: float, extent: float | None = None, depth: float = 0.0,
              side: int = 1, shape: str = "indicator") -> DefectProfile:
    """A nick: a strip of ``depth`` removed from one flank around ``s0``.

    Gamma is the relative area loss; the per-unit tensors are the exact strip
    moments about the nominal centroid divided by Gamma.  ``extent`` defaults
    to ``depth``.
    """
    return _strip_profile(rod, s0, extent, depth, side, shape, -1.0)


def make_blob(rod: RodSpec, s0: float, extent: float | None = None, depth: float = 0.0,
              side: int = 1, shape: str = "indicator") -> DefectProfile:
    """Mirror of :func:`make_nick`: same per-unit tensors, Gamma > 0."""
    return _strip_profile(rod, s0, extent, depth, side, shape, +1.0)


def _thin_strip_tensors(rod: RodSpec, side: int) -> StiffnessTensors:
    w, h = rod.section.width, rod.section.height
    delta = SectionMoments(w * h, side * h * w**2 / 2.0, 0.0, h * w**3 / 4.0, 0.0, w * h**3 / 12.0)
    return tensors_from_moments(rod.material, delta)


def make_jitter(rod: RodSpec, bar_one: float, bar_s: float, gamma: float = 1.0,
                bar_s2: float | None = None, side: int = 1) -> DefectProfile:
    """Distributed flank roughness known only through the moments of N.

    The shape is replaced by the lowest-order polynomial on [0, L] with the
    supplied moments (linear, or quadratic when ``bar_s2`` is given); only the
    products Gamma * moments carry physical meaning.
    """
    L = rod.length
    if abs(bar_one) > L or abs(bar_s) > L**2 / 2.0:
        raise ValueError(f"moments bar_one={bar_one:.4g}, bar_s={bar_s:.4g} are not realizable with |N| <= 1")
    targets = [bar_one, bar_s]
    if bar_s2 is not None:
        if abs(bar_s2) > L**3 / 3.0:
            raise ValueError(f"moment bar_s2={bar_s2:.4g} is not realizable with |N| <= 1")
        targets.append(bar_s2)
    n = len(targets)
    # moments of xi^j with xi = s/L: int_0^L s^k xi^j ds = L^(k+1) / (j+k+1)
    gram = np.array([[L ** (k + 1) / (j + k + 1) for j in range(n)] for k in range(n)])
    c = np.linalg.solve(gram, np.array(targets))
    coeffs = tuple(c[j] / L**j for j in range(n))
    shape = PiecewisePolynomialShape(((0.0, L, coeffs),))
    meta = {"bar_one": bar_one, "bar_s": bar_s}
    if bar_s2 is not None:
        meta["bar_s2"] = bar_s2
    return DefectProfile(
        "jitter", L, 0.5 * L, L, gamma, shape, _thin_strip_tensors(rod, side),
        rod.section.width, rod.section.height, side, geometric=False, meta=meta,
    )


def sample_jitter_realization(rod: RodSpec, seed: int, n_segments: int, amplitude_rms: float,
                              gamma: float = 1.0, side: int = 1) -> DefectProfile:
    """One realization of piecewise-constant flank roughness.

    Segment values are i.i.d. uniform with zero mean and the requested RMS,
    drawn from a generator seeded with ``seed`` only.
    """
    if n_segments < 2:
        raise ValueError("a jitter realization needs at least two segments")
    rng = np.random.default_rng(seed)
    values = amplitude_rms * rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=n_segments)
    edges = np.linspace(0.0, rod.length, n_segments + 1)
    shape = PiecewisePolynomialShape.piecewise_constant(edges, values)
    profile = DefectProfile(
        "jitter", rod.length, 0.5 * rod.length, rod.length, gamma, shape,
        _thin_strip_tensors(rod, side), rod.section.width, rod.section.height, side,
        meta={"seed": seed, "n_segments": n_segments, "amplitude_rms": amplitude_rms},
    )
    f = profile.functionals
    profile.meta.update(bar_one=f.bar_one, bar_s=f.bar_s, bar_s2=f.bar_s2)
    return profile


def moment_functionals(profile: DefectProfile) -> MomentFunctionals:
    return profile.functionals


def profile_from_dict(rod: RodSpec, spec: dict) -> DefectProfile:
    """Build a profile from an SI dict (the config layer converts units first)."""
    kind = spec.get("kind")
    side = int(spec.get("side", 1))
    if kind in ("nick", "blob"):
        maker = make_nick if kind == "nick" else make_blob
        return maker(rod, spec["s0"], spec.get("extent"), spec["depth"], side, spec.get("shape", "indicator"))
    if kind == "jitter":
        if "seed" in spec:
            return sample_jitter_realization(
                rod, int(spec["seed"]), int(spec["n_segments"]), spec["amplitude_rms"],
                spec.get("gamma", 1.0), side,
            )
        return make_jitter(rod, spec["bar_one"], spec["bar_s"], spec.get("gamma", 1.0),
                           spec.get("bar_s2"), side)
    raise ValueError(f"unknown defect kind {kind!r}")
