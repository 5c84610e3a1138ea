"""Command-line front end.

Exit codes: 0 success, 2 configuration/usage error, 3 solver or validity
error.  ``COSSERAT_DEFECTS_LOG_LEVEL`` sets the log level.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .component import assemble_component, export_component, modal_estimate
from .config import UM, ConfigError, load_config
from .defects import DefectProfile, profile_from_dict
from .verification import (
    VALIDITY_GAMMA,
    CaseSpec,
    compare_cases,
    format_fixed,
    write_fit_json,
    write_report_csv,
)

log = logging.getLogger("cosserat_defects")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3
SWEEP_PARAMS = ("depth", "extent", "position", "gamma")


class SolverError(RuntimeError):
    pass


def _profiles(rod, specs) -> tuple:
    try:
        return tuple(profile_from_dict(rod, d) for d in specs)
    except ValueError as exc:
        raise SolverError(str(exc)) from None


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(path.stem + suffix)


def _summary(component, fixed, tip_mass) -> dict:
    K = component.K_ideal
    diag = np.abs(np.diag(K))
    out = {
        "ideal_diagonal_max": float(diag.max()),
        "ideal_diagonal_min": float(diag.min()),
        "defect_delta_frobenius": float(np.linalg.norm(component.K_defect_delta)),
        "defect_delta_relative": float(np.linalg.norm(component.K_defect_delta) / np.linalg.norm(K)),
        "profiles_beyond_validity": [
            i for i, p in enumerate(component.profiles) if p.amplitude > VALIDITY_GAMMA
        ],
        "modal_estimates": {},
    }
    for method in ("condensed-eigen", "rayleigh"):
        est = modal_estimate(component, fixed, tip_mass, method=method)
        out["modal_estimates"][method] = {"frequency_hz": est.frequency}
    return out


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    profiles = _profiles(cfg.rod, cfg.defects)
    component = assemble_component(cfg.rod, profiles, name=Path(args.config).stem, tip_mass=cfg.tip_mass)
    try:
        summary = _summary(component, cfg.fixed, cfg.tip_mass)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise SolverError(str(exc)) from None
    out = Path(args.out)
    export_component(component, out, "json", provenance=cfg.provenance, summary=summary)
    log.info("wrote %s", out)
    return EXIT_OK


def _cases(cfg) -> list:
    if not cfg.cases:
        return [CaseSpec("beam", cfg.rod, _profiles(cfg.rod, cfg.defects), cfg.fixed, cfg.tip_mass, cfg.ladder)]
    return [
        CaseSpec(c.name, cfg.rod, _profiles(cfg.rod, c.defects), c.fixed, c.tip_mass, cfg.ladder)
        for c in cfg.cases
    ]


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    cases = _cases(cfg)
    try:
        results = compare_cases(cases, max_workers=cfg.workers)
    except ValueError as exc:
        raise SolverError(str(exc)) from None
    out = Path(args.out)
    write_report_csv(results, out, cfg.provenance)
    write_fit_json(results, _sibling(out, ".fits.json"), cfg.provenance)
    for r in results:
        if r.fit.delta <= 0:
            log.warning("case %s: non-positive delta %.4g; ladder may not be converging from above", r.case, r.fit.delta)
    log.info("wrote %s", out)
    return EXIT_OK


def _sweep_profile(cfg, base_spec: dict, param: str, value: float) -> DefectProfile:
    spec = dict(base_spec)
    if param == "gamma":
        if spec["kind"] == "jitter":
            spec["gamma"] = value
            return profile_from_dict(cfg.rod, spec)
        return profile_from_dict(cfg.rod, spec).with_gamma(value)
    if spec["kind"] == "jitter":
        raise ConfigError(f"--param {param} needs a nick or blob as the first defect")
    # the extent stays fixed while depth varies, otherwise it follows the default
    spec.setdefault("extent", spec["depth"])
    key = {"depth": "depth", "extent": "extent", "position": "s0"}[param]
    spec[key] = value * UM
    return profile_from_dict(cfg.rod, spec)


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if not cfg.defects:
        raise ConfigError("defects: a sweep needs at least one defect; the first one is varied")
    if args.steps < 1:
        raise ConfigError("--steps must be at least 1")
    if args.start == args.stop:
        values = np.array([args.start])
    else:
        values = np.linspace(args.start, args.stop, args.steps)
    rest = _profiles(cfg.rod, cfg.defects[1:])
    rows = []
    for v in values:
        try:
            p = _sweep_profile(cfg, cfg.defects[0], args.param, float(v))
        except ConfigError:
            raise
        except ValueError as exc:
            raise SolverError(f"{args.param}={v:g}: {exc}") from None
        comp = assemble_component(cfg.rod, (p,) + rest, tip_mass=cfg.tip_mass)
        f = modal_estimate(comp, cfg.fixed).frequency
        rows.append((format_fixed(float(v), 9), repr(f), repr(float(comp.K_defect_delta[8, 8]))))
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        fh.write(f"# tool_version: {__version__}\n# config_sha256: {cfg.sha256}\n")
        unit = "" if args.param == "gamma" else "_um"
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow((args.param + unit, "frequency_hz", "delta_k_axial"))
        writer.writerows(rows)
    return EXIT_OK


def cmd_export(args) -> int:
    cfg = load_config(args.config)
    profiles = _profiles(cfg.rod, cfg.defects)
    component = assemble_component(cfg.rod, profiles, name=Path(args.config).stem, tip_mass=cfg.tip_mass)
    export_component(component, args.out, args.format, provenance=cfg.provenance)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cosserat-defects", description="Cosserat rod components for defective MEMS beams.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="assemble the component and write JSON with a summary")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="compare component frequencies with the FEM oracle")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="vary one parameter of the first defect")
    p.add_argument("--config", required=True)
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="write the component stiffness")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("json", "matrix-text"), default="json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    level = getattr(logging, os.environ.get("COSSERAT_DEFECTS_LOG_LEVEL", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(level)
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
