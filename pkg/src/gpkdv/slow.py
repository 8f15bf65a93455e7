"""The epsilon-rescaling layer between the cubic-flow and KdV descriptions.

Slow variables: x = eps*(X + sqrt(2) t), tau = eps^3 t / (2 sqrt(2)).  A field
Psi on the original grid maps to N = (6/eps^2) eta and
dTheta/dx = (6 sqrt(2)/eps^2) d(phase)/dX, both sampled in the frame moving
left at the sound speed and reinterpreted on the slow grid (length scaled by
eps, same points).  U = (N + Theta_x)/2 rides the KdV dynamics; V = (N -
Theta_x)/2 is the fast counter-propagating part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gpkdv.fields import (
    ComplexField,
    GridSpec,
    RealField,
    shift,
    spectral_derivative,
)
from gpkdv.gp import DEFAULT_RHO_MIN, SOUND_SPEED, madelung

AMPLITUDE_SCALE = 6.0  # eta = (eps^2/6) N
PHASE_SCALE = 6.0 * SOUND_SPEED  # phase = (eps/(6 sqrt 2)) Theta


def slow_time(t: float, epsilon: float) -> float:
    return epsilon**3 * t / (2.0 * SOUND_SPEED)


def original_time(tau: float, epsilon: float) -> float:
    return 2.0 * SOUND_SPEED * tau / epsilon**3


@dataclass(frozen=True)
class SlowState:
    """Rescaled pair (N, dTheta/dx) at slow time tau and scale epsilon."""

    epsilon: float
    tau: float
    N: RealField
    theta_x: RealField

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0,1), got {self.epsilon}")
        if self.N.grid != self.theta_x.grid:
            raise ValueError("N and theta_x must share a grid")
        m = self.m_samples()
        if m.min() < 0.25 or m.max() > 4.0:
            raise ValueError(
                f"amplitude factor out of range: m in [{m.min():.4g}, {m.max():.4g}], "
                "need [1/4, 4]"
            )

    def m_samples(self) -> np.ndarray:
        return 1.0 - (self.epsilon**2 / AMPLITUDE_SCALE) * self.N.samples

    @property
    def m(self) -> RealField:
        return RealField(self.N.grid, self.m_samples())

    @property
    def U(self) -> RealField:
        return RealField(self.N.grid, 0.5 * (self.N.samples + self.theta_x.samples))

    @property
    def V(self) -> RealField:
        return RealField(self.N.grid, 0.5 * (self.N.samples - self.theta_x.samples))


def slow_grid_of(grid: GridSpec, epsilon: float) -> GridSpec:
    return GridSpec(grid.length * epsilon, grid.n)


def to_slow(
    psi: ComplexField,
    epsilon: float,
    t: float = 0.0,
    rho_min: float = DEFAULT_RHO_MIN,
) -> SlowState:
    """Extract the slow state from Psi at original time t.

    Samples eta and the phase gradient, shifts into the frame moving left at
    sqrt(2), and rescales amplitudes and the axis; the phase gradient picks up
    one chain-rule factor eps on top of the 6 sqrt(2)/eps amplitude factor.
    """
    pair = madelung(psi, rho_min)
    a = SOUND_SPEED * t
    eta = shift(pair.eta, a)
    phix = shift(pair.phase_derivative, a)
    sg = slow_grid_of(psi.grid, epsilon)
    n = RealField(sg, (AMPLITUDE_SCALE / epsilon**2) * eta.samples)
    theta_x = RealField(sg, (PHASE_SCALE / epsilon**2) * phix.samples)
    return SlowState(epsilon=epsilon, tau=slow_time(t, epsilon), N=n, theta_x=theta_x)


def to_wave_frame(psi: ComplexField, epsilon: float) -> tuple[RealField, RealField]:
    """Rescaled pair (n, w) in the non-moving frame of the free-wave regime.

    n = (6/eps^2) eta and w = (12 sqrt(2)/eps^2) d(phase)/dX on the slow axis;
    at t = 0 these coincide with (N0, 2 dTheta0/dx).
    """
    pair = madelung(psi)
    sg = slow_grid_of(psi.grid, epsilon)
    n = RealField(sg, (AMPLITUDE_SCALE / epsilon**2) * pair.eta.samples)
    w = RealField(sg, (2.0 * PHASE_SCALE / epsilon**2) * pair.phase_derivative.samples)
    return n, w


@dataclass(frozen=True)
class SlowDerivative:
    """Centered finite-difference time derivative of a slow trajectory."""

    N_dot: RealField
    theta_x_dot: RealField
    dtau: float


def time_derivative(before: SlowState, after: SlowState) -> SlowDerivative:
    dtau = after.tau - before.tau
    if dtau <= 0:
        raise ValueError("snapshots must be time-ordered")
    return SlowDerivative(
        N_dot=RealField(before.N.grid, (after.N.samples - before.N.samples) / dtau),
        theta_x_dot=RealField(
            before.N.grid, (after.theta_x.samples - before.theta_x.samples) / dtau
        ),
        dtau=dtau,
    )


def _l2(field: RealField) -> float:
    return float(math.sqrt(field.grid.dx * np.sum(field.samples**2)))


def slow_system_residual(s: SlowState, s_dot: SlowDerivative) -> tuple[float, float]:
    """L^2 residuals of the two slow-variable evolution equations.

    The first equation couples dN/dtau to the phase; the second is evaluated
    in its x-differentiated form, since only the phase gradient is ever
    materialized.  Both vanish to O(dtau^2) + discretization error on a true
    trajectory.
    """
    eps2 = s.epsilon**2
    g = s.N.grid
    n, tx = s.N.samples, s.theta_x.samples
    m = s.m_samples()
    nx = spectral_derivative(s.N, 1).samples
    txx = spectral_derivative(s.theta_x, 1).samples
    r1 = nx - txx + (eps2 / 2.0) * (
        0.5 * s_dot.N_dot.samples + (n * txx + nx * tx) / 3.0
    )
    nxx_over_m = RealField(g, spectral_derivative(s.N, 2).samples / m)
    d_nxx_over_m = spectral_derivative(nxx_over_m, 1).samples
    nx_sq_over_m2 = RealField(g, nx**2 / m**2)
    d_nx_sq = spectral_derivative(nx_sq_over_m2, 1).samples
    r2 = txx - nx + (eps2 / 2.0) * (
        0.5 * s_dot.theta_x_dot.samples + d_nxx_over_m + tx * txx / 3.0
    ) + (eps2**2 / 24.0) * d_nx_sq
    return _l2(RealField(g, r1)), _l2(RealField(g, r2))


def counter_wave_remainder(s: SlowState) -> RealField:
    """The O(eps^2) remainder field R of the U/V evolution equations."""
    m = s.m_samples()
    n = s.N.samples
    nx = spectral_derivative(s.N, 1).samples
    nxx = spectral_derivative(s.N, 2).samples
    nxxx = spectral_derivative(s.N, 3).samples
    r = (
        n * nxxx / (6.0 * m)
        + nx * nxx / (3.0 * m**2)
        + (s.epsilon**2 / 36.0) * nx**3 / m**3
    )
    return RealField(s.N.grid, r)


def kdv_operator_rhs(s: SlowState) -> RealField:
    """Right-hand side of the U equation: what dU/dtau + U_xxx + U U_x equals.

    -V_xxx + (1/3)(UV)_x + (1/6)(V^2)_x - eps^2 R.
    """
    g = s.N.grid
    u, v = s.U.samples, s.V.samples
    vxxx = spectral_derivative(s.V, 3).samples
    uv_x = spectral_derivative(RealField(g, u * v), 1).samples
    v2_x = spectral_derivative(RealField(g, v * v), 1).samples
    r = counter_wave_remainder(s).samples
    return RealField(g, -vxxx + uv_x / 3.0 + v2_x / 6.0 - s.epsilon**2 * r)


def kdv_operator_applied(s: SlowState, u_dot: RealField) -> RealField:
    """dU/dtau + U_xxx + U U_x with the supplied time derivative."""
    g = s.N.grid
    u = s.U.samples
    uxxx = spectral_derivative(s.U, 3).samples
    ux = spectral_derivative(s.U, 1).samples
    return RealField(g, u_dot.samples + uxxx + u * ux)


@dataclass(frozen=True)
class ConsistencySample:
    tau: float
    residual_direct: float  # finite-difference dU/dtau route
    residual_equation: float  # right-hand-side route
    route_gap: float


def kdv_consistency_residual(trajectory: list[SlowState]) -> list[ConsistencySample]:
    """KdV-consistency residual of U along a slow trajectory, both routes.

    Uses centered differences in tau on interior snapshots; the two routes
    (finite-difference dU/dtau vs the evolution equation's right-hand side)
    must agree to discretization error.
    """
    out = []
    for before, s, after in zip(trajectory, trajectory[1:], trajectory[2:]):
        dtau = after.tau - before.tau
        u_dot = RealField(
            s.N.grid, (after.U.samples - before.U.samples) / dtau
        )
        lhs = kdv_operator_applied(s, u_dot)
        rhs = kdv_operator_rhs(s)
        gap = _l2(RealField(s.N.grid, lhs.samples - rhs.samples))
        out.append(
            ConsistencySample(
                tau=s.tau,
                residual_direct=_l2(lhs),
                residual_equation=_l2(rhs),
                route_gap=gap,
            )
        )
    return out


@dataclass(frozen=True)
class WaveDecomposition:
    """Right/left-going d'Alembert profiles of the free-wave dynamics."""

    Nplus: RealField
    Wplus: RealField
    Nminus: RealField
    Wminus: RealField

    def total_n(self) -> RealField:
        return RealField(self.Nplus.grid, self.Nplus.samples + self.Nminus.samples)

    def total_w(self) -> RealField:
        return RealField(self.Nplus.grid, self.Wplus.samples + self.Wminus.samples)


def dalembert_solve(n0: RealField, w0: RealField, t: float) -> WaveDecomposition:
    """Free-wave solution split into speed-sqrt(2) travelling profiles.

    For decaying profiles 2 N(+/-) = (-/+) W(+/-) = (2 N0 -/+ W0)/2; the plus
    family translates right, the minus family left, both at sqrt(2) in the
    wave time variable.
    """
    if n0.grid != w0.grid:
        raise ValueError("profiles must share a grid")
    n_plus0 = 0.25 * (2.0 * n0.samples - w0.samples)
    n_minus0 = 0.25 * (2.0 * n0.samples + w0.samples)
    g = n0.grid
    a = SOUND_SPEED * t
    n_plus = shift(RealField(g, n_plus0), a)
    n_minus = shift(RealField(g, n_minus0), -a)
    return WaveDecomposition(
        Nplus=n_plus,
        Wplus=RealField(g, -2.0 * n_plus.samples),
        Nminus=n_minus,
        Wminus=RealField(g, 2.0 * n_minus.samples),
    )


def wave_system_residual(n0: RealField, w0: RealField, t: float, dt: float = 1e-4):
    """Finite-difference residual of the free-wave system on the d'Alembert solution."""
    before = dalembert_solve(n0, w0, t - dt)
    after = dalembert_solve(n0, w0, t + dt)
    now = dalembert_solve(n0, w0, t)
    n_dot = (after.total_n().samples - before.total_n().samples) / (2 * dt)
    w_dot = (after.total_w().samples - before.total_w().samples) / (2 * dt)
    g = n0.grid
    w_x = spectral_derivative(now.total_w(), 1).samples
    n_x = spectral_derivative(now.total_n(), 1).samples
    r1 = SOUND_SPEED * n_dot - w_x
    r2 = w_dot - 2.0 * SOUND_SPEED * n_x
    return _l2(RealField(g, r1)), _l2(RealField(g, r2))
