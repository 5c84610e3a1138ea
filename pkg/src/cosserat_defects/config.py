"""TOML analysis configuration.

Lengths are given in micrometres and masses in nanograms at this boundary
only; everything is converted to SI before reaching the library.  Example::

    [geometry]
    length_um = 150
    width_um = 6
    height_um = 15

    [[defects]]
    kind = "nick"
    position_um = 100
    depth_um = 1.5

    [boundary]
    fixed = ["start"]
    tip_mass_ng = 157.3

    [verify]
    ladder = [8, 16, 32, 64, 128, 256]
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .rod import Material, RectangleSection, RodSpec

__all__ = ["ConfigError", "AnalysisConfig", "CaseConfig", "load_config", "parse_config"]

UM = 1e-6
NG = 1e-12

_DEFECT_KEYS = {
    "nick": {"kind", "position_um", "depth_um", "extent_um", "side", "shape"},
    "blob": {"kind", "position_um", "depth_um", "extent_um", "side", "shape"},
    "jitter": {"kind", "bar_one_um", "bar_s_um2", "bar_s2_um3", "gamma", "side",
               "seed", "segments", "rms"},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CaseConfig:
    name: str
    defects: tuple
    fixed: tuple
    tip_mass: float


@dataclass(frozen=True)
class AnalysisConfig:
    rod: RodSpec
    defects: tuple
    fixed: tuple
    tip_mass: float
    ladder: tuple
    cases: tuple
    workers: int | None
    sha256: str
    source: str = ""
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def provenance(self) -> dict:
        return {"config_sha256": self.sha256}


def _table(doc: dict, key: str, where: str) -> dict:
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(f"{where}{key}: expected a table")
    return value


def _number(table: dict, key: str, where: str, default=None, positive: bool = True):
    if key not in table:
        if default is None:
            raise ConfigError(f"{where}{key}: required field missing")
        return default
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}{key}: expected a number, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"{where}{key}: must be positive, got {value!r}")
    return float(value)


def _unknown(table: dict, allowed: set, where: str) -> None:
    extra = sorted(set(table) - allowed)
    if extra:
        raise ConfigError(f"{where}{extra[0]}: unknown field")


def _material(doc: dict) -> Material:
    t = _table(doc, "material", "")
    _unknown(t, {"youngs_modulus_gpa", "shear_modulus_gpa", "poisson_ratio", "density_kg_m3"}, "material.")
    E = _number(t, "youngs_modulus_gpa", "material.", 169.0) * 1e9
    rho = _number(t, "density_kg_m3", "material.", 2330.0)
    if "shear_modulus_gpa" in t and "poisson_ratio" in t:
        raise ConfigError("material.shear_modulus_gpa: give either shear_modulus_gpa or poisson_ratio")
    try:
        if "shear_modulus_gpa" in t:
            return Material(E, _number(t, "shear_modulus_gpa", "material.") * 1e9, rho)
        nu = _number(t, "poisson_ratio", "material.", 0.28, positive=False)
        return Material.from_poisson(E, nu, rho)
    except ValueError as exc:
        raise ConfigError(f"material: {exc}") from None


def _rod(doc: dict) -> RodSpec:
    g = _table(doc, "geometry", "")
    _unknown(g, {"length_um", "width_um", "height_um"}, "geometry.")
    L = _number(g, "length_um", "geometry.", 150.0) * UM
    w = _number(g, "width_um", "geometry.", 6.0) * UM
    h = _number(g, "height_um", "geometry.", 15.0) * UM
    try:
        return RodSpec(L, _material(doc), RectangleSection(w, h))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}") from None


def _defect(raw, where: str) -> dict:
    """Validate one defect entry and convert it to the SI dict used by the library."""
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a table")
    kind = raw.get("kind")
    if kind not in _DEFECT_KEYS:
        raise ConfigError(f"{where}.kind: expected one of nick, blob, jitter, got {kind!r}")
    _unknown(raw, _DEFECT_KEYS[kind], where + ".")
    side = raw.get("side", 1)
    if side not in (1, -1):
        raise ConfigError(f"{where}.side: must be 1 or -1")
    out = {"kind": kind, "side": side}
    if kind in ("nick", "blob"):
        out["s0"] = _number(raw, "position_um", where + ".", positive=False) * UM
        out["depth"] = _number(raw, "depth_um", where + ".", positive=False) * UM
        if out["depth"] < 0:
            raise ConfigError(f"{where}.depth_um: must not be negative")
        if "extent_um" in raw:
            out["extent"] = _number(raw, "extent_um", where + ".") * UM
        shape = raw.get("shape", "indicator")
        if shape not in ("indicator", "raised-cosine"):
            raise ConfigError(f"{where}.shape: expected 'indicator' or 'raised-cosine'")
        out["shape"] = shape
    elif "seed" in raw:
        seed, segments = raw.get("seed"), raw.get("segments")
        if not isinstance(seed, int) or not isinstance(segments, int):
            raise ConfigError(f"{where}: sampled jitter needs integer 'seed' and 'segments'")
        out.update(seed=seed, n_segments=segments, amplitude_rms=_number(raw, "rms", where + "."))
        out["gamma"] = _number(raw, "gamma", where + ".", 1.0, positive=False)
    else:
        out["bar_one"] = _number(raw, "bar_one_um", where + ".", positive=False) * UM
        out["bar_s"] = _number(raw, "bar_s_um2", where + ".", positive=False) * UM**2
        if "bar_s2_um3" in raw:
            out["bar_s2"] = _number(raw, "bar_s2_um3", where + ".", positive=False) * UM**3
        out["gamma"] = _number(raw, "gamma", where + ".", 1.0, positive=False)
    return out


def _defects(raw, where: str) -> tuple:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise ConfigError(f"{where}: expected an array of tables")
    return tuple(_defect(d, f"{where}[{i}]") for i, d in enumerate(raw))


def _boundary(raw: dict, where: str, default_fixed=("start",), default_mass=0.0):
    fixed = raw.get("fixed", list(default_fixed))
    if isinstance(fixed, str):
        fixed = [fixed]
    if not isinstance(fixed, list) or not fixed or any(f not in ("start", "end") for f in fixed):
        raise ConfigError(f"{where}fixed: expected a non-empty list of 'start'/'end'")
    mass = _number(raw, "tip_mass_ng", where, default_mass / NG, positive=False) * NG
    if mass < 0:
        raise ConfigError(f"{where}tip_mass_ng: must not be negative")
    return tuple(fixed), mass


def parse_config(text: str, source: str = "<string>") -> AnalysisConfig:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    _unknown(doc, {"material", "geometry", "defects", "boundary", "verify", "cases"}, "")
    rod = _rod(doc)
    defects = _defects(doc.get("defects"), "defects")
    fixed, tip_mass = _boundary(_table(doc, "boundary", ""), "boundary.")

    v = _table(doc, "verify", "")
    _unknown(v, {"ladder", "workers"}, "verify.")
    ladder = v.get("ladder", [8, 16, 32, 64, 128, 256])
    if not isinstance(ladder, list) or not all(isinstance(n, int) and not isinstance(n, bool) for n in ladder):
        raise ConfigError("verify.ladder: expected a list of integers")
    workers = v.get("workers")
    if workers is not None and (not isinstance(workers, int) or workers < 1):
        raise ConfigError("verify.workers: expected a positive integer")

    cases = []
    raw_cases = doc.get("cases", [])
    if not isinstance(raw_cases, list):
        raise ConfigError("cases: expected an array of tables")
    for i, c in enumerate(raw_cases):
        where = f"cases[{i}]."
        if not isinstance(c, dict):
            raise ConfigError(f"cases[{i}]: expected a table")
        _unknown(c, {"name", "fixed", "tip_mass_ng", "defects"}, where)
        name = c.get("name", f"case{i + 1}")
        if not isinstance(name, str):
            raise ConfigError(f"{where}name: expected a string")
        c_fixed, c_mass = _boundary(c, where)
        cases.append(CaseConfig(name, _defects(c.get("defects", []), f"cases[{i}].defects"), c_fixed, c_mass))

    sha = hashlib.sha256(text.encode()).hexdigest()
    return AnalysisConfig(rod, defects, fixed, tip_mass, tuple(ladder), tuple(cases), workers, sha, source, doc)


def load_config(path) -> AnalysisConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, str(path))
