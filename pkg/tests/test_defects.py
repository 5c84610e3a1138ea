import numpy as np
import pytest
from scipy.integrate import quad

from cosserat_defects import (
    AmplitudeCapError,
    make_blob,
    make_jitter,
    make_nick,
    moment_functionals,
    sample_jitter_realization,
)
from cosserat_defects.defects import PiecewisePolynomialShape, RaisedCosineShape, profile_from_dict
from cosserat_defects.rod import InvalidGeometryError
from conftest import L


def test_nick_amplitude_and_support(rod):
    p = make_nick(rod, 100e-6, depth=1.5e-6)
    assert p.gamma == pytest.approx(-0.25)
    assert p.extent == pytest.approx(1.5e-6)
    assert p.shape.support == pytest.approx((99.25e-6, 100.75e-6))


def test_nick_and_blob_are_mirrors(shallow_nick, shallow_blob):
    assert shallow_blob.gamma == -shallow_nick.gamma
    for a, b in zip(shallow_nick.tensors.__dict__.values(), shallow_blob.tensors.__dict__.values()):
        np.testing.assert_array_equal(a, -b)


def test_per_unit_tensors_reproduce_removed_strip(rod, shallow_nick):
    # Gamma * per-unit tensors equals the exact strip removal
    delta = shallow_nick.tensors
    E = rod.material.youngs_modulus
    assert delta.K[2, 2] == pytest.approx(-E * 1.5e-6 * 15e-6)
    x_lo, x_hi = 1.5e-6, 3e-6
    assert delta.J[1, 1] == pytest.approx(-E * 15e-6 * (x_hi**3 - x_lo**3) / 3)
    assert delta.T[1, 2] == pytest.approx(-E * 15e-6 * (x_hi**2 - x_lo**2) / 2)


def test_amplitude_cap(rod):
    with pytest.raises(AmplitudeCapError):
        make_nick(rod, 75e-6, depth=3.5e-6)
    with pytest.raises(InvalidGeometryError):
        make_nick(rod, 75e-6, depth=6e-6)
    make_nick(rod, 75e-6, depth=3e-6)


@pytest.mark.parametrize("s0", [0.2e-6, 149.9e-6])
def test_support_must_fit(rod, s0):
    with pytest.raises(InvalidGeometryError):
        make_nick(rod, s0, depth=1e-6)


def test_sign_rules(rod, shallow_nick):
    with pytest.raises(ValueError):
        make_nick(rod, 50e-6, depth=-1e-6)
    flipped = shallow_nick.with_gamma(0.1)
    assert flipped.kind == "blob"


def test_indicator_functionals(rod):
    a, b = 40e-6, 55e-6
    f = moment_functionals(make_nick(rod, 0.5 * (a + b), b - a, depth=1e-6))
    s = np.array([0.0, 30e-6, 45e-6, 80e-6, L])
    np.testing.assert_allclose(f.tilde_one(s), np.clip(s, a, b) - a, atol=1e-20)
    np.testing.assert_allclose(f.tilde_s(s), (np.clip(s, a, b) ** 2 - a**2) / 2, atol=1e-26)
    assert f.bar_one == pytest.approx(b - a)
    assert f.bar_s == pytest.approx((b**2 - a**2) / 2)
    assert f.bar_s2 == pytest.approx((b**3 - a**3) / 3)


def test_raised_cosine_moments_match_quadrature():
    shape = RaisedCosineShape(20e-6, 50e-6)
    for k in range(3):
        for s in (10e-6, 33e-6, 60e-6):
            ref, _ = quad(lambda x: x**k * shape(x), 0.0, s, points=[20e-6, 50e-6], epsabs=0, epsrel=1e-13)
            assert shape.moment(k, s) == pytest.approx(ref, rel=1e-10, abs=1e-40)


def test_piecewise_shape_is_half_open():
    shape = PiecewisePolynomialShape.piecewise_constant([0.0, 1.0, 2.0], [3.0, -1.0])
    np.testing.assert_array_equal(shape(np.array([0.0, 0.5, 1.0, 1.5, 2.0])), [3.0, 3.0, -1.0, -1.0, 0.0])


@pytest.mark.parametrize("with_s2", [False, True])
def test_jitter_surrogate_reproduces_moments(rod, with_s2):
    b1, bs, bs2 = 3e-6, 4e-10, 5e-14
    p = make_jitter(rod, b1, bs, gamma=0.05, bar_s2=bs2 if with_s2 else None)
    f = p.functionals
    assert f.bar_one == pytest.approx(b1, rel=1e-12)
    assert f.bar_s == pytest.approx(bs, rel=1e-12)
    if with_s2:
        assert f.bar_s2 == pytest.approx(bs2, rel=1e-12)
    assert not p.geometric
    with pytest.raises(ValueError):
        p.section_delta(0, L)


def test_jitter_moments_must_be_realizable(rod):
    with pytest.raises(ValueError):
        make_jitter(rod, 2 * L, 0.0)


def test_jitter_realization_is_seeded(rod):
    a = sample_jitter_realization(rod, 7, 16, 0.1, gamma=0.2)
    b = sample_jitter_realization(rod, 7, 16, 0.1, gamma=0.2)
    c = sample_jitter_realization(rod, 8, 16, 0.1, gamma=0.2)
    s = np.linspace(0, L, 97)
    np.testing.assert_array_equal(a.shape(s), b.shape(s))
    assert not np.array_equal(a.shape(s), c.shape(s))
    assert a.meta["bar_one"] == pytest.approx(a.functionals.bar_one)
    assert np.max(np.abs(a.shape(s))) <= 0.1 * np.sqrt(3)


def test_section_delta_averages_overlap(rod, shallow_nick):
    a, b = shallow_nick.shape.support
    full = shallow_nick.section_delta(a, b)
    assert full.A == pytest.approx(-1.5e-6 * 15e-6)
    half = shallow_nick.section_delta(a, a + 2 * (b - a))
    assert half.A == pytest.approx(0.5 * full.A)
    assert shallow_nick.section_delta(0, a).A == 0.0


def test_profile_from_dict(rod):
    p = profile_from_dict(rod, {"kind": "blob", "s0": 30e-6, "depth": 1e-6, "extent": 4e-6})
    assert p.kind == "blob" and p.extent == 4e-6
    j = profile_from_dict(rod, {"kind": "jitter", "seed": 1, "n_segments": 8, "amplitude_rms": 0.1})
    assert j.meta["seed"] == 1
    with pytest.raises(ValueError):
        profile_from_dict(rod, {"kind": "crack"})
