"""Reference solutions built without the package's solvers.

Each oracle here is derived from a different route (complementary energy,
transfer matrices, brute-force area integration) so agreement with the
library is evidence rather than a restatement.
"""

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq

E3_SKEW = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def section_stiffness(rod, moments):
    """6x6 [[K, T^T], [T, J]] written out from the moments directly."""
    E, G = rod.material.youngs_modulus, rod.material.shear_modulus
    m = moments
    S = np.zeros((6, 6))
    S[0, 0] = S[1, 1] = G * m.A
    S[2, 2] = E * m.A
    S[3, 3] = E * m.A_22
    S[4, 4] = E * m.A_11
    S[5, 5] = G * (m.A_11 + m.A_22)
    T = np.zeros((3, 3))
    T[0, 2] = -E * m.A_2
    T[1, 2] = E * m.A_1
    T[2, 0] = G * m.A_2
    T[2, 1] = -G * m.A_1
    S[3:, :3] = T
    S[:3, 3:] = T.T
    return S


def _stress_map(L, s):
    """[n; m](s) from the tip loads [n(L); m(L)] of a rod with no distributed load."""
    B = np.eye(6)
    B[3:, :3] = (L - s) * E3_SKEW
    return B


def cantilever_tip_stiffness_derivative(rod, per_unit_moments, a, b):
    """d/dGamma of the 6x6 tip stiffness when Gamma * per_unit is added on [a, b].

    Tip flexibility of a rod clamped at s = 0 by complementary energy,
    C = int B^T S^-1 B ds, so dC = -int B^T S0^-1 S1 S0^-1 B ds.
    """
    L = rod.length
    S0 = section_stiffness(rod, rod.moments)
    S1 = section_stiffness(rod, per_unit_moments)
    C0inv = np.linalg.inv(S0)
    x, w = np.polynomial.legendre.leggauss(4)

    def integral(lo, hi, mid):
        total = np.zeros((6, 6))
        for xi, wi in zip(x, w):
            s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xi
            B = _stress_map(L, s)
            total += 0.5 * (hi - lo) * wi * B.T @ mid @ B
        return total

    C = integral(0.0, L, C0inv)
    dC = -integral(a, b, C0inv @ S1 @ C0inv)
    K = np.linalg.inv(C)
    return -K @ dC @ K


def segmented_bar_axial_stiffness(EA, L, a, b, gamma):
    """Exact axial stiffness of a bar with EA(1 + gamma) on [a, b]."""
    return 1.0 / ((L - (b - a)) / EA + (b - a) / (EA * (1.0 + gamma)))


def timoshenko_cantilever_frequency(E, G, rho, A, I, L, guess):
    """Lowest clamped-free frequency of a uniform Timoshenko beam (shear factor 1).

    Non-dimensional state [w/L, theta, M L/EI, V L^2/EI] is propagated with the
    matrix exponential; the frequency zeroes the free-end moment/shear block.
    """
    s_shear = E * I / (G * A * L**2)

    def det(f):
        w2 = (2 * np.pi * f) ** 2
        Amat = np.array(
            [
                [0.0, 1.0, 0.0, s_shear],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, -w2 * rho * I * L**2 / (E * I), 0.0, -1.0],
                [-w2 * rho * A * L**4 / (E * I), 0.0, 0.0, 0.0],
            ]
        )
        Phi = expm(Amat)
        return np.linalg.det(Phi[2:, 2:])

    return brentq(det, 0.9 * guess, 1.001 * guess, xtol=1e-9, rtol=1e-14)


def euler_bernoulli_cantilever_frequency(E, rho, A, I, L):
    return 1.875104068711961**2 / (2 * np.pi) * np.sqrt(E * I / (rho * A * L**4))


def rayleigh_tip_mass_frequency(E, rho, A, I, L, M):
    return np.sqrt(3 * E * I / L**3 / (M + 33.0 / 140.0 * rho * A * L)) / (2 * np.pi)


def midpoint_moments(x_lo, x_hi, y_lo, y_hi, n=2000):
    """Area moments of an axis-aligned rectangle by an n x n midpoint rule."""
    xs = x_lo + (np.arange(n) + 0.5) * (x_hi - x_lo) / n
    ys = y_lo + (np.arange(n) + 0.5) * (y_hi - y_lo) / n
    dA = (x_hi - x_lo) * (y_hi - y_lo) / n**2
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return np.array([
        dA * X.size,
        dA * X.sum(),
        dA * Y.sum(),
        dA * (X**2).sum(),
        dA * (X * Y).sum(),
        dA * (Y**2).sum(),
    ])
