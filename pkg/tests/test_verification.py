import csv

import numpy as np
import pytest

from cosserat_defects import CaseSpec, compare_cases, extrapolate, benchmark_cases
from cosserat_defects.verification import (
    ExtrapolationError,
    format_fixed,
    run_case,
    write_fit_json,
    write_report_csv,
)

SMALL_LADDER = (8, 16, 32)


def test_exact_line_recovered():
    fit = extrapolate([(n, 100 + 50 / n) for n in (4, 8, 16)])
    assert fit.f_infinity == pytest.approx(100, rel=1e-14)
    assert fit.delta == pytest.approx(50, rel=1e-13)
    assert fit.residual < 1e-15


def test_extrapolation_needs_two_counts():
    with pytest.raises(ExtrapolationError):
        extrapolate([(8, 1.0)])
    with pytest.raises(ExtrapolationError):
        extrapolate([(8, 1.0), (8, 1.1)])


def test_duplicates_collapse():
    fit = extrapolate([(4, 112.5), (4, 112.5), (8, 106.25), (16, 103.125)])
    assert len(fit.points) == 3
    assert fit.f_infinity == pytest.approx(100)


def test_residual_reported_for_curved_data():
    fit = extrapolate([(n, 1 + 1 / n**2) for n in (2, 4, 8, 16)])
    assert fit.residual > 0


def test_ideal_ladder_delta_positive(rod):
    fit = run_case(CaseSpec("I", rod, ladder=(8, 16, 32, 64, 128))).fit
    assert fit.delta > 0


def test_cases_keep_input_order(rod, shallow_nick):
    cases = [CaseSpec(f"c{i}", rod, (shallow_nick,) if i % 2 else (), ladder=SMALL_LADDER) for i in range(5)]
    threaded = compare_cases(cases, max_workers=3)
    serial = compare_cases(cases, max_workers=1)
    assert [r.case for r in threaded] == [c.name for c in cases]
    assert [r.row() for r in threaded] == [r.row() for r in serial]


def test_benchmark_cases_flags():
    cases = {c.name: c for c in benchmark_cases(ladder=SMALL_LADDER)}
    assert list(cases) == ["I", "II", "III", "IV", "V", "VI"]
    assert "beyond-validity" in cases["IV"].all_flags
    assert "beyond-validity" not in cases["V"].all_flags
    assert "assumed-geometry" in cases["II"].all_flags
    assert cases["IV"].profiles[0].gamma == pytest.approx(-0.5)
    assert cases["V"].profiles[0].s0 == pytest.approx(100e-6)


def test_fixed_point_format():
    assert format_fixed(366467.97450890386, 6) == "366468"
    assert format_fixed(78932.94, 6) == "78932.9"
    assert format_fixed(0.48537, 3) == "0.485"
    assert format_fixed(-1.25e-3, 3) == "-0.00125"


def test_report_files(tmp_path, rod):
    results = compare_cases([CaseSpec("I", rod, ladder=SMALL_LADDER)])
    out = write_report_csv(results, tmp_path / "r.csv", {"config_sha256": "abc"})
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# tool_version")
    body = [ln for ln in lines if not ln.startswith("#")]
    rows = list(csv.reader(body))
    assert rows[0] == ["case", "f_inf_hz", "f_component_hz", "percent_error", "flags"]
    assert rows[1][0] == "I"
    assert float(rows[1][1]) == pytest.approx(results[0].f_infinity, rel=1e-5)
    fits = write_fit_json(results, tmp_path / "r.fits.json")
    assert '"delta_hz_elements"' in fits.read_text()
