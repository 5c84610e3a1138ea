"""Mesh-ladder extrapolation and component-vs-FEM case comparison."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .component import assemble_component, modal_estimate
from .defects import make_blob, make_nick
from .fem import build_mesh, lowest_frequency_fem
from .rod import RodSpec

__all__ = [
    "DEFAULT_LADDER",
    "VALIDITY_GAMMA",
    "BENCHMARK_TIP_MASS_KG",
    "ExtrapolationError",
    "ExtrapolationFit",
    "CaseSpec",
    "CaseResult",
    "extrapolate",
    "run_case",
    "compare_cases",
    "benchmark_cases",
    "format_fixed",
    "write_report_csv",
    "write_fit_json",
]

log = logging.getLogger(__name__)

DEFAULT_LADDER = (8, 16, 32, 64, 128, 256)
VALIDITY_GAMMA = 0.25
# 0.1573 "ng" in the benchmark figure; see README for the unit reading.
BENCHMARK_TIP_MASS_KG = 1.573e-10
REPORT_HEADER = ("case", "f_inf_hz", "f_component_hz", "percent_error", "flags")
ORACLE_NOTE = "reference frequencies from a 1-D variable-section shear-deformable beam FEM, not 2-D/3-D solid FEA"


class ExtrapolationError(ValueError):
    pass


@dataclass(frozen=True)
class ExtrapolationFit:
    f_infinity: float
    delta: float
    residual: float
    points: tuple

    def to_dict(self) -> dict:
        return {
            "f_infinity_hz": self.f_infinity,
            "delta_hz_elements": self.delta,
            "residual_rms_relative": self.residual,
            "points": [[int(n), float(f)] for n, f in self.points],
        }


def extrapolate(points) -> ExtrapolationFit:
    """Least-squares fit of ``f = f_inf + delta / N``.

    Repeated element counts are averaged into one point first.
    """
    by_n: dict[int, list] = {}
    for n, f in points:
        by_n.setdefault(int(n), []).append(float(f))
    if len(by_n) < 2:
        raise ExtrapolationError("need results for at least two distinct element counts")
    ns = np.array(sorted(by_n), dtype=float)
    fs = np.array([np.mean(by_n[int(n)]) for n in ns])
    X = np.column_stack([np.ones_like(ns), 1.0 / ns])
    (f_inf, delta), *_ = np.linalg.lstsq(X, fs, rcond=None)
    res = fs - X @ np.array([f_inf, delta])
    rms = float(np.sqrt(np.mean(res**2)) / abs(f_inf)) if f_inf else float("inf")
    pts = tuple((int(n), float(f)) for n, f in zip(ns, fs))
    return ExtrapolationFit(float(f_inf), float(delta), rms, pts)


@dataclass(frozen=True)
class CaseSpec:
    name: str
    rod: RodSpec
    profiles: tuple = ()
    boundary: tuple = ("start",)
    tip_mass: float = 0.0
    ladder: tuple = DEFAULT_LADDER
    flags: tuple = ()

    @property
    def all_flags(self) -> tuple:
        flags = list(self.flags)
        if any(p.amplitude > VALIDITY_GAMMA for p in self.profiles) and "beyond-validity" not in flags:
            flags.append("beyond-validity")
        return tuple(flags)


@dataclass(frozen=True)
class CaseResult:
    case: str
    f_infinity: float
    f_component: float
    percent_error: float
    flags: tuple
    fit: ExtrapolationFit = field(repr=False)

    def row(self) -> tuple:
        return (
            self.case,
            format_fixed(self.f_infinity, 6),
            format_fixed(self.f_component, 6),
            format_fixed(self.percent_error, 3),
            ";".join(self.flags),
        )


def format_fixed(x: float, digits: int) -> str:
    """Fixed-point text with ``digits`` significant digits."""
    return np.format_float_positional(x, precision=digits, unique=False, fractional=False, trim="-")


def run_case(case: CaseSpec) -> CaseResult:
    points = []
    for n in case.ladder:
        model = build_mesh(case.rod, case.profiles, n)
        points.append((n, lowest_frequency_fem(model, case.boundary, case.tip_mass)))
    fit = extrapolate(points)
    component = assemble_component(case.rod, case.profiles, name=case.name, tip_mass=case.tip_mass)
    f_c = modal_estimate(component, case.boundary).frequency
    err = 100.0 * (f_c - fit.f_infinity) / fit.f_infinity
    log.info("case %s: f_inf=%.6g f_component=%.6g (%.3f%%)", case.name, fit.f_infinity, f_c, err)
    return CaseResult(case.name, fit.f_infinity, f_c, err, case.all_flags, fit)


def compare_cases(cases, max_workers: int | None = None) -> list:
    """Run every case; rows come back in input order whatever the scheduling."""
    cases = list(cases)
    if max_workers == 1 or len(cases) <= 1:
        return [run_case(c) for c in cases]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(run_case, cases))


def benchmark_cases(rod: RodSpec | None = None, ladder=DEFAULT_LADDER, tip_mass: float = BENCHMARK_TIP_MASS_KG,
                nick_extent: float | None = None, blob_depth: float = 1.5e-6,
                blob_position: float = 10e-6, mid_nick_position: float | None = None) -> list:
    """Analogues of the six benchmark beams.

    Nick positions of the tip-loaded cases are 100 um (deep nick) and 50 um
    (shallow nick) back from the free end.  Blob size and the mid-span nick
    location are not given by the benchmark, so those rows are flagged.
    """
    rod = rod or RodSpec(150e-6)
    L = rod.length
    ladder = tuple(ladder)
    mid = L / 2 if mid_nick_position is None else mid_nick_position
    deep = make_nick(rod, L - 100e-6, nick_extent, depth=3e-6)
    shallow = make_nick(rod, L - 50e-6, nick_extent, depth=1.5e-6)
    middle = make_nick(rod, mid, nick_extent, depth=1.5e-6)
    blob = make_blob(rod, blob_position, None, depth=blob_depth)
    assumed = ("assumed-geometry",)
    return [
        CaseSpec("I", rod, (), ladder=ladder),
        CaseSpec("II", rod, (blob,), ladder=ladder, flags=assumed),
        CaseSpec("III", rod, (), tip_mass=tip_mass, ladder=ladder),
        CaseSpec("IV", rod, (deep,), tip_mass=tip_mass, ladder=ladder),
        CaseSpec("V", rod, (shallow,), tip_mass=tip_mass, ladder=ladder),
        CaseSpec("VI", rod, (middle,), tip_mass=tip_mass, ladder=ladder, flags=assumed),
    ]


def _provenance_lines(provenance: dict | None) -> list:
    info = {"tool_version": __version__, "oracle": ORACLE_NOTE}
    info.update(provenance or {})
    return [f"# {k}: {v}" for k, v in info.items()]


def write_report_csv(results, path, provenance: dict | None = None) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in _provenance_lines(provenance):
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in results:
            writer.writerow(r.row())
    return path


def write_fit_json(results, path, provenance: dict | None = None) -> Path:
    doc = {
        "provenance": {"tool_version": __version__, "oracle": ORACLE_NOTE, **(provenance or {})},
        "cases": [
            {"case": r.case, "flags": list(r.flags), "f_component_hz": r.f_component,
             "percent_error": r.percent_error, **r.fit.to_dict()}
            for r in results
        ],
    }
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    return path
