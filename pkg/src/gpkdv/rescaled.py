"""Rescaled energies and momenta of the slow variables.

E_k(Psi) = (eps^(2k+1)/18) * rescaled_energy_k(N, Theta) and likewise
p_k(Psi) = (eps^(2k+1)/18) * rescaled_momentum_k(N, Theta): these identities
are exact (not asymptotic), and the scaling-identity test suite compares both
sides through fully independent evaluation routes.  Every eps-order of every
remainder is carried.

Orders k <= 3 and all momenta follow the perfect-square organization of the
remainders; the k = 4 energy is evaluated in fully expanded graded form
(machine-derived from the explicit energy via the amplitude/phase rewrite and
certified against it), since the compact remainder organization transcribed
for that order did not survive the exact identity check.

``leading_only=True`` zeroes all eps-dependent terms (and freezes m at 1);
in that limit E_k +/- sqrt(2) P_k collapses onto the KdV functional E_{k-1}
of (N +/- Theta_x)/2, which the bridge tests exploit to isolate the O(eps^2)
gap.
"""

from __future__ import annotations

import math

import numpy as np

from gpkdv.fields import spectral_derivative
from gpkdv.slow import AMPLITUDE_SCALE, SlowState

SQRT2 = math.sqrt(2.0)


class _Workspace:
    """Derivative arrays shared by the k = 1..4 functionals."""

    def __init__(self, s: SlowState, orders: int, leading_only: bool):
        self.eps2 = 0.0 if leading_only else s.epsilon**2
        self.dx = s.N.grid.dx
        self.n = [s.N.samples]
        self.t = [s.theta_x.samples]  # t[j] = d^(j+1) Theta / dx^(j+1)
        fn, ft = s.N, s.theta_x
        for _ in range(orders):
            fn = spectral_derivative(fn, 1)
            ft = spectral_derivative(ft, 1)
            self.n.append(fn.samples)
            self.t.append(ft.samples)
        self.m = 1.0 - (self.eps2 / AMPLITUDE_SCALE) * self.n[0]

    def quad(self, integrand: np.ndarray) -> float:
        return float(self.dx * np.sum(integrand))


def rescaled_energy(s: SlowState, k: int, leading_only: bool = False) -> float:
    if k == 1:
        w = _Workspace(s, 1, leading_only)
        n, nx = w.n[0], w.n[1]
        tx = w.t[0]
        m, e2 = w.m, w.eps2
        main = w.quad(tx**2 + n**2)
        corr = w.quad(nx**2 / m - n * tx**2 / 3.0)
        return (main + (e2 / 2.0) * corr) / 8.0
    if k == 2:
        w = _Workspace(s, 2, leading_only)
        n, nx, nxx = w.n
        tx, txx = w.t[0], w.t[1]
        m, e2 = w.m, w.eps2
        main = w.quad(
            nx**2
            + m * (txx - (e2 / (6.0 * m)) * nx * tx) ** 2
            - n**3 / 6.0
            - (m / 2.0) * n * tx**2
        )
        square = w.quad(
            (nxx + (m / 6.0) * tx**2 + (e2 / (12.0 * m)) * nx**2) ** 2 / m
        )
        r2 = w.quad(n * nx**2 / m)
        return main / 8.0 + (e2 / 16.0) * square - (e2 / 32.0) * r2
    if k == 3:
        w = _Workspace(s, 3, leading_only)
        n, nx, nxx, n3 = w.n
        tx, txx, t3 = w.t[0], w.t[1], w.t[2]
        m, e2 = w.m, w.eps2
        e4 = e2 * e2
        main = w.quad(
            m
            * (
                t3
                - (e2 / 72.0) * tx**3
                - e2 * nx * txx / (4.0 * m)
                - e2 * nxx * tx / (4.0 * m)
                - e4 * nx**2 * tx / (48.0 * m**2)
            )
            ** 2
            + nxx**2
            - (5.0 / 6.0) * (2.0 * nx * tx * txx + n * txx**2 + n * nx**2)
            + (5.0 / 144.0) * (tx**4 + 6.0 * n**2 * tx**2 + n**4)
        )
        square = w.quad(
            (
                n3
                - (e2 / 24.0) * nx * tx**2
                + (m / 2.0) * tx * txx
                + (e2 / (4.0 * m)) * nx * nxx
                + (e4 / (48.0 * m**2)) * nx**3
            )
            ** 2
            / m
        )
        r3 = w.quad(
            (5.0 / 3.0) * n**2 * txx**2
            - 1.25 * nx**2 * tx**2
            - 5.0 * n * nxx * tx**2
            - (5.0 / 12.0) * n**3 * tx**2
            - (5.0 / 18.0) * n * tx**4
            - 5.0 * n * nxx**2 / m
            + 1.25 * n**2 * nx**2 / m
            + (e2 / 6.0)
            * (
                (5.0 / 24.0) * n**2 * tx**4
                - 2.5 * n * nx**2 * tx**2 / m
                - (25.0 / 24.0) * nx**4 / m**2
                - 5.0 * n * nx**2 * nxx / m**2
                - (5.0 * e2 / 24.0) * n * nx**4 / m**3
            )
        )
        return main / 8.0 + (e2 / 16.0) * square + (e2 / 96.0) * r3
    if k == 4:
        # Fully expanded graded form, machine-derived from the explicit
        # fourth-order energy by the amplitude/phase rewrite (the published
        # remainder organization of this order fails the exact scaling
        # identity; see the repository notes on formula certification).
        w = _Workspace(s, 4, leading_only)
        n, nx, nxx, n3, n4 = w.n
        tx, txx, t3, t4 = w.t[0], w.t[1], w.t[2], w.t[3]
        e2 = w.eps2
        minv = 1.0 / w.m
        o0 = (-7*n**5 - 70*n**3*tx**2 + 420*n**2*nx**2 + 420*n**2*txx**2 - 1008*n*nxx**2 - 840*n*nxx*tx**2 - 35*n*tx**4 - 1008*n*t3**2 - 420*nx**2*tx**2 - 2016*nxx*tx*t3 + 864*n3**2 - 168*tx**3*t3 - 84*tx**2*txx**2 + 864*t4**2) / 6912
        o2 = (-210*minv*n**3*nx**2 + 1260*minv*n**2*nxx**2 - 2520*minv*n*nx**2*nxx - 3024*minv*n*n3**2 - 1260*minv*nx**4 - 6048*minv*nx*nxx*n3 + 2592*minv*n4**2 + 70*n**4*tx**2 - 420*n**3*txx**2 - 840*n**2*nx*tx*txx + 1260*n**2*nxx*tx**2 + 105*n**2*tx**4 + 1008*n**2*t3**2 + 210*n*nx**2*tx**2 + 3024*n*nx*txx*t3 + 5040*n*nxx*tx*t3 - 3024*n*n3*tx*txx + 504*n*tx**3*t3 - 588*n*tx**2*txx**2 - 864*n*t4**2 - 504*nx**2*tx*t3 - 252*nx**2*txx**2 - 504*nx*n3*tx**2 + 168*nx*tx**3*txx - 3456*nx*t3*t4 + 2772*nxx**2*tx**2 + 336*nxx*tx**4 - 5184*nxx*txx*t4 - 3456*n3*tx*t4 + 3456*n4*tx*t3 + 2592*n4*txx**2 + 7*tx**6 - 864*tx**2*txx*t4 + 1152*tx**2*t3**2 + 1728*tx*txx**2*t3 + 648*txx**4) / 41472
        o4 = (1260*minv**2*n**2*nx**2*nxx - 315*minv**2*n*nx**4 - 9072*minv**2*n*nx*nxx*n3 - 1512*minv**2*nx**3*n3 - 9828*minv**2*nx**2*nxx**2 + 10368*minv**2*nx*n3*n4 + 7776*minv**2*nxx**2*n4 + 630*minv*n**2*nx**2*tx**2 + 1512*minv*n*nx**2*tx*t3 - 2268*minv*n*nx**2*txx**2 - 9072*minv*n*nx*nxx*tx*txx + 1512*minv*n*nx*n3*tx**2 - 2268*minv*n*nxx**2*tx**2 + 504*minv*nx**3*tx*txx + 2520*minv*nx**2*nxx*tx**2 - 2592*minv*nx**2*txx*t4 + 3456*minv*nx**2*t3**2 - 5184*minv*nx*nxx*tx*t4 + 10368*minv*nx*nxx*txx*t3 + 13824*minv*nx*n3*tx*t3 + 5184*minv*nx*n3*txx**2 - 5184*minv*nx*n4*tx*txx + 5184*minv*nxx**2*tx*t3 + 11664*minv*nxx**2*txx**2 + 10368*minv*nxx*n3*tx*txx - 2592*minv*nxx*n4*tx**2 + 3456*minv*n3**2*tx**2 - 70*n**3*tx**4 - 336*n**2*tx**3*t3 + 672*n**2*tx**2*txx**2 + 336*n*nx*tx**3*txx - 588*n*nxx*tx**4 - 21*n*tx**6 + 864*n*tx**2*txx*t4 - 1152*n*tx**2*t3**2 - 1728*n*tx*txx**2*t3 - 648*n*txx**4 + 147*nx**2*tx**4 + 288*nx*tx**3*t4 - 1728*nx*tx**2*txx*t3 - 2592*nx*tx*txx**3 - 1728*nxx*tx**3*t3 + 1296*nxx*tx**2*txx**2 + 1728*n3*tx**3*txx - 72*n4*tx**4 - 48*tx**5*t3 + 180*tx**4*txx**2) / 248832
        o6 = (630*minv**3*n**2*nx**4 - 9072*minv**3*n*nx**3*n3 - 13608*minv**3*n*nx**2*nxx**2 - 15120*minv**3*nx**4*nxx + 46656*minv**3*nx**2*nxx*n4 + 20736*minv**3*nx**2*n3**2 + 31104*minv**3*nx*nxx**2*n3 + 11664*minv**3*nxx**4 - 9072*minv**2*n*nx**3*tx*txx - 126*minv**2*nx**4*tx**2 - 5184*minv**2*nx**3*tx*t4 + 10368*minv**2*nx**3*txx*t3 + 51840*minv**2*nx**2*nxx*tx*t3 + 38880*minv**2*nx**2*nxx*txx**2 - 10368*minv**2*nx**2*n3*tx*txx - 2592*minv**2*nx**2*n4*tx**2 + 15552*minv**2*nx*nxx**2*tx*txx + 10368*minv**2*nx*nxx*n3*tx**2 - 7776*minv**2*nxx**3*tx**2 - 630*minv*n*nx**2*tx**4 - 2880*minv*nx**2*tx**3*t3 + 6480*minv*nx**2*tx**2*txx**2 + 8640*minv*nx*nxx*tx**3*txx - 1440*minv*nx*n3*tx**4 + 1080*minv*nxx**2*tx**4 + 28*n**2*tx**6 + 96*n*tx**5*t3 - 360*n*tx**4*txx**2 - 144*nx*tx**5*txx + 72*nxx*tx**6 + tx**8) / 2985984
        o8 = (-13608*minv**4*n*nx**4*nxx - 2646*minv**4*nx**6 + 19440*minv**4*nx**4*n4 + 93312*minv**4*nx**3*nxx*n3 + 69984*minv**4*nx**2*nxx**3 + 1134*minv**3*n*nx**4*tx**2 + 23328*minv**3*nx**4*tx*t3 + 13608*minv**3*nx**4*txx**2 - 15552*minv**3*nx**3*nxx*tx*txx + 5184*minv**3*nx**3*n3*tx**2 - 11664*minv**3*nx**2*nxx**2*tx**2 + 4320*minv**2*nx**3*tx**3*txx - 1080*minv**2*nx**2*nxx*tx**4 + 84*minv*nx**2*tx**6 - n*tx**8) / 17915904
        o10 = (-21*minv**5*n*nx**6 + 240*minv**5*nx**5*n3 + 828*minv**5*nx**4*nxx**2 - 72*minv**4*nx**5*tx*txx - 36*minv**4*nx**4*nxx*tx**2 - 5*minv**3*nx**4*tx**4) / 663552
        o12 = (90*minv**6*nx**6*nxx - minv**5*nx**6*tx**2) / 663552
        o14 = (25*minv**7*nx**8) / 5308416
        integrand = o0 + e2 * (
            o2 + e2 * (o4 + e2 * (o6 + e2 * (o8 + e2 * (o10 + e2 * (o12 + e2 * o14)))))
        )
        return w.quad(integrand)
    raise ValueError(f"order must be 1..4, got {k}")


def rescaled_momentum(s: SlowState, k: int, leading_only: bool = False) -> float:
    if k == 1:
        w = _Workspace(s, 0, leading_only)
        return w.quad(w.n[0] * w.t[0]) / (4.0 * SQRT2)
    if k == 2:
        w = _Workspace(s, 1, leading_only)
        n, nx = w.n
        tx, txx = w.t
        m, e2 = w.m, w.eps2
        main = w.quad(nx * txx - (m / 12.0) * tx**3 - 0.25 * n**2 * tx)
        r2 = w.quad(nx**2 * tx / m)
        return main / (4.0 * SQRT2) - (e2 / (32.0 * SQRT2)) * r2
    if k == 3:
        w = _Workspace(s, 2, leading_only)
        n, nx, nxx = w.n
        tx, txx, t3 = w.t
        m, e2 = w.m, w.eps2
        e4 = e2 * e2
        main = w.quad(
            nxx * t3
            - (5.0 / 12.0) * (tx * txx**2 + 2.0 * n * nx * txx + nx**2 * tx)
            + (5.0 / 72.0) * (m * n * tx**3 + n**3 * tx)
        )
        r3 = w.quad(
            (5.0 / 6.0) * n * tx * txx**2
            + (5.0 / 3.0) * nx * tx**2 * txx
            - (m / 72.0) * tx**5
            + 1.25 * n * nx**2 * tx / m
            - 5.0 * nx * nxx * txx / m
            - 2.5 * nxx**2 * tx / m
            - (5.0 * e2 / 72.0) * nx**2 * tx**3 / m
            - (5.0 * e2 / 18.0) * nx**3 * txx / m**2
            + (25.0 * e4 / 864.0) * nx**4 * tx / m**3
        )
        return main / (4.0 * SQRT2) + (e2 / (48.0 * SQRT2)) * r3
    if k == 4:
        w = _Workspace(s, 3, leading_only)
        n, nx, nxx, n3 = w.n
        tx, txx, t3, t4 = w.t
        m, e2 = w.m, w.eps2
        e4 = e2 * e2
        e6 = e4 * e2
        main = w.quad(
            n3 * t4
            - (7.0 / 12.0) * (2.0 * n * nxx * t3 + nxx**2 * tx + m * tx * t3**2)
            + (35.0 / 72.0)
            * (n**2 * nx * txx + n * nx**2 * tx + nx * tx**2 * txx + m * n * tx * txx**2)
            - (7.0 / 1728.0) * (tx**5 + 10.0 * m * n**2 * tx**3 + 5.0 * n**4 * tx)
        )
        r4 = w.quad(
            7.0
            * (
                (5.0 / 12.0) * n * nxx**2 * tx / m
                + (5.0 / 6.0) * n * nx * nxx * txx / m
                - (5.0 / 48.0) * n**2 * nx**2 * tx / m
                + 0.25 * nxx * tx * txx**2
                - (5.0 / 12.0) * n * nx * tx**2 * txx
                + 0.5 * nxx * tx**2 * t3
                - (25.0 / 144.0) * nx**2 * tx**3
                + n * tx**5 / 216.0
                - nx * txx**3 / 12.0
                - (5.0 / 72.0) * m * tx**3 * txx**2
                - (5.0 / 36.0) * nx**3 * txx / m
                + (5.0 / 72.0) * nx**2 * tx**3 / m
                - nx * n3 * t3 / m
                - 0.5 * n3**2 * tx / m
                + (5.0 / 18.0) * nx**3 * txx / m**2
            )
            + (e2 / 4.0)
            * (
                (245.0 / 432.0) * nx**4 * tx / m**2
                - (21.0 / 1296.0) * n**2 * tx**5
                - m * tx**7 / 1296.0
                - (35.0 / 36.0) * nxx**2 * tx**3 / m
                - (35.0 / 6.0) * nx * nxx * tx**2 * txx / m
                - (35.0 / 12.0) * nx**2 * tx * txx**2 / m
                + 3.5 * nx * nxx**2 * txx / m**2
                - 7.0 * nx**2 * nxx * t3 / m**2
                + 3.5 * nxx**3 * tx / m**2
                - (175.0 / 216.0) * nx**4 * tx / m**3
                - (7.0 / 108.0) * nxx * tx**5
            )
            + (e4 / 48.0)
            * (
                35.0 * nx**3 * nxx * txx / m**3
                - (7.0 / 72.0) * nx**2 * tx**5 / m
                - (25.0 / 6.0) * nx**3 * tx**2 * txx / m**2
                - (5.0 / 18.0) * nx**2 * nxx * tx**3 / m**2
                + 24.5 * nx**2 * nxx**2 * tx / m**3
            )
            + (e6 / 768.0)
            * (
                (5.0 / 3.0) * nx**4 * tx**3 / m**3
                + (252.0 / 5.0) * nx**5 * txx / m**4
                - (49.0 * e2 / 10.0) * nx**6 * tx / m**5
            )
        )
        return main / (4.0 * SQRT2) + (e2 / (48.0 * SQRT2)) * r4
    raise ValueError(f"order must be 1..4, got {k}")


def rescaled_invariants(s: SlowState, k: int, leading_only: bool = False):
    """(rescaled energy, rescaled momentum) of order k."""
    return (
        rescaled_energy(s, k, leading_only),
        rescaled_momentum(s, k, leading_only),
    )
