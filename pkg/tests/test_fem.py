import numpy as np
import pytest
import scipy.sparse as sp

from cosserat_defects import build_mesh, lowest_frequency_fem, make_blob, make_nick
from cosserat_defects.component import _beam_block_mass
from cosserat_defects.fem import UnconstrainedModelError, element_mass_xz
from cosserat_defects.verification import BENCHMARK_TIP_MASS_KG
from conftest import L
from oracles import (
    euler_bernoulli_cantilever_frequency,
    rayleigh_tip_mass_frequency,
    timoshenko_cantilever_frequency,
)


def test_prismatic_sections_identical(rod):
    m = build_mesh(rod, (), 16)
    arrays = np.array([e.as_array() for e in m.element_moments])
    assert np.all(arrays == arrays[0])


def test_nick_spanning_one_element(rod):
    n = 50
    h = L / n
    p = make_nick(rod, 10.5 * h, h, depth=1.5e-6)
    m = build_mesh(rod, (p,), n)
    A0 = rod.moments.A
    dA = np.array([e.A for e in m.element_moments]) - A0
    assert dA[10] == pytest.approx(-1.5e-6 * 15e-6)
    # neighbours only see round-off slivers of the support
    assert np.sum(np.abs(dA) > 1e-9 * abs(dA[10])) == 1

    shifted = make_nick(rod, 11.0 * h, h, depth=1.5e-6)
    dA = np.array([e.A for e in build_mesh(rod, (shifted,), n).element_moments]) - A0
    np.testing.assert_allclose(dA[10:12], -0.5 * 1.5e-6 * 15e-6, rtol=1e-12)


def test_blob_adds_material(rod):
    p = make_blob(rod, 10e-6, depth=1.5e-6)
    m = build_mesh(rod, (p,), 100)
    assert max(e.A for e in m.element_moments) > rod.moments.A


def test_nested_meshes(rod):
    coarse = build_mesh(rod, (), 16).nodes
    fine = build_mesh(rod, (), 32).nodes
    np.testing.assert_array_equal(fine[::2], coarse)


def test_matrix_invariants(rod, shallow_nick):
    m = build_mesh(rod, (shallow_nick,), 12)
    for M in (m.K, m.M):
        assert abs(M - M.T).max() <= 1e-12 * abs(M).max()
    D = sp.diags(np.tile(np.r_[np.ones(3), np.full(3, 1 / L)], 13))
    k = np.linalg.eigvalsh((D @ m.K @ D).toarray())
    mm = np.linalg.eigvalsh((D @ m.M @ D).toarray())
    assert k.min() > -1e-9 * k.max()
    assert mm.min() > 0


def test_rigid_motion_has_no_energy(rod, shallow_nick):
    m = build_mesh(rod, (shallow_nick,), 20)
    nodes = m.nodes
    u = np.zeros(m.n_dofs)
    t = np.array([1e-9, 2e-9, -1e-9])
    theta = np.array([2e-5, -1e-5, 3e-5])
    for i, z in enumerate(nodes):
        u[6 * i:6 * i + 3] = t + np.cross(theta, [0.0, 0.0, z])
        u[6 * i + 3:6 * i + 6] = theta
    e_scale = m.elastic_energy(np.r_[np.zeros(m.n_dofs - 6), t, np.zeros(3)])
    assert abs(m.elastic_energy(u)) < 1e-12 * e_scale


def test_element_mass_matches_closed_form():
    rho, E, G = 2330.0, 169e9, 66e9
    A, I, l = 9e-11, 2.7e-22, 10e-6
    quad = element_mass_xz(rho * A, rho * I, E * I, G * A, l)
    closed = _beam_block_mass(rho * A * l, rho * I, l, 12 * E * I / (G * A * l**2))
    np.testing.assert_allclose(quad, closed, rtol=1e-12, atol=1e-14 * np.abs(closed).max())


def test_timoshenko_cantilever(rod):
    mat, mom = rod.material, rod.moments
    f_eb = euler_bernoulli_cantilever_frequency(mat.youngs_modulus, mat.density, mom.A, mom.A_11, L)
    assert f_eb == pytest.approx(366.9e3, rel=1e-3)
    f_t = timoshenko_cantilever_frequency(
        mat.youngs_modulus, mat.shear_modulus, mat.density, mom.A, mom.A_11, L, f_eb)
    assert f_t < f_eb
    f = lowest_frequency_fem(build_mesh(rod, (), 1024))
    assert f == pytest.approx(f_t, rel=1e-3)


def test_tip_mass_against_rayleigh(rod):
    mat, mom = rod.material, rod.moments
    ref = rayleigh_tip_mass_frequency(mat.youngs_modulus, mat.density, mom.A, mom.A_11, L, BENCHMARK_TIP_MASS_KG)
    assert ref == pytest.approx(79.0e3, rel=2e-3)
    f = lowest_frequency_fem(build_mesh(rod, (), 256), ("start",), BENCHMARK_TIP_MASS_KG)
    assert f == pytest.approx(ref, rel=0.01)


# With the tip mass the beam's own inertia matters little and the change per
# doubling drops to the ~1e-9 round-off floor of the eigensolver beyond 64.
@pytest.mark.parametrize("tip_mass,ladder", [
    (0.0, (8, 16, 32, 64, 128, 256)),
    (BENCHMARK_TIP_MASS_KG, (8, 16, 32, 64)),
])
def test_converges_from_above(rod, tip_mass, ladder):
    fs = [lowest_frequency_fem(build_mesh(rod, (), n), ("start",), tip_mass) for n in ladder]
    assert all(a > b for a, b in zip(fs, fs[1:]))
    steps = np.abs(np.diff(fs))
    # error shrinks at least linearly under doubling
    assert np.all(steps[1:] <= 0.5 * steps[:-1])


def test_nick_ladder_monotone_once_resolved(rod, shallow_nick):
    # a nick shorter than one element is smeared over it, so coarse meshes can wobble
    fs = [lowest_frequency_fem(build_mesh(rod, (shallow_nick,), n)) for n in (32, 64, 128, 256)]
    assert all(a > b for a, b in zip(fs, fs[1:]))


@pytest.mark.xfail(strict=True, reason="the oracle converges faster than 1/N, so a straight-line fit "
                                       "leaves a residual well above 2% of the ladder span")
def test_linear_fit_residual_within_two_percent_of_span(rod):
    from cosserat_defects import extrapolate
    ladder = (8, 16, 32, 64, 128, 256)
    fs = [lowest_frequency_fem(build_mesh(rod, (), n)) for n in ladder]
    fit = extrapolate(zip(ladder, fs))
    assert fit.residual * fit.f_infinity < 0.02 * (max(fs) - min(fs))


def test_boundary_variants(rod):
    f_cc = lowest_frequency_fem(build_mesh(rod, (), 32), ("start", "end"))
    f_cf = lowest_frequency_fem(build_mesh(rod, (), 32), ("start",))
    f_fc = lowest_frequency_fem(build_mesh(rod, (), 32), ("end",))
    assert f_cc > f_cf
    assert f_fc == pytest.approx(f_cf, rel=1e-9)
    with pytest.raises(UnconstrainedModelError):
        lowest_frequency_fem(build_mesh(rod, (), 8), ())


def test_mesh_limits(rod):
    with pytest.raises(ValueError):
        build_mesh(rod, (), 3)
