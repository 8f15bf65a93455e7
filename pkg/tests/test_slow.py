import numpy as np
import pytest

from gpkdv.fields import GridSpec, RealField, grid_points
from gpkdv.gp import (
    GpState,
    SolitonSpec,
    dark_soliton,
    gp_evolve,
    slow_frame_speed,
    soliton_grid,
)
from gpkdv.slow import (
    SlowState,
    dalembert_solve,
    kdv_consistency_residual,
    original_time,
    slow_system_residual,
    slow_time,
    time_derivative,
    to_slow,
    wave_system_residual,
)

from conftest import smooth_real_noise


def make_slow_trajectory(eps, taus, n=512, dt=1e-3):
    c = np.sqrt(2 - eps**2)
    g = soliton_grid(c, 64.0 / eps, n)
    psi0 = dark_soliton(SolitonSpec(c), g)
    times = [original_time(tau, eps) for tau in taus]
    traj = gp_evolve(GpState(psi0), times[-1], dt, sample_times=times)
    return [to_slow(st.psi, eps, st.t) for st in traj]


def test_time_maps_are_inverse():
    assert original_time(slow_time(3.7, 0.3), 0.3) == pytest.approx(3.7, rel=1e-14)


def test_to_slow_constant(grid):
    from gpkdv.fields import ComplexField

    psi = ComplexField(grid, np.ones(grid.n))
    s = to_slow(psi, 0.4, t=2.0)
    assert np.max(np.abs(s.N.samples)) < 1e-12
    assert np.max(np.abs(s.theta_x.samples)) < 1e-12
    assert s.tau == pytest.approx(slow_time(2.0, 0.4))


def test_to_slow_soliton_profiles():
    eps = 0.5
    c = np.sqrt(2 - eps**2)
    g = soliton_grid(c, 64.0 / eps, 1024)
    s = to_slow(dark_soliton(SolitonSpec(c), g), eps, 0.0)
    x = grid_points(s.N.grid)
    nu = 3.0 / np.cosh(x / 2) ** 2
    theta_x = np.sqrt(1 - eps**2 / 2) * nu / (1 - eps**2 * nu / 6)
    assert np.max(np.abs(s.N.samples - nu)) <= 1e-8
    assert np.max(np.abs(s.theta_x.samples - theta_x)) <= 1e-8
    assert np.max(np.abs(s.U.samples + s.V.samples - s.N.samples)) < 1e-14
    assert np.max(np.abs(s.U.samples - s.V.samples - s.theta_x.samples)) < 1e-14


def test_frame_consistency_of_travelling_wave():
    # extracting at time t equals translating the tau=0 extraction by the
    # slow-frame speed times tau; tau kept small enough that the displaced
    # profile's tails still clear the box edges
    eps = 0.4
    c = np.sqrt(2 - eps**2)
    g = soliton_grid(c, 96.0 / eps, 1024)
    tau = 0.3
    t = original_time(tau, eps)
    moved = dark_soliton(SolitonSpec(c, center=-c * t), g)  # exact evolution
    s_t = to_slow(moved, eps, t)
    s_0 = to_slow(dark_soliton(SolitonSpec(c), g), eps, 0.0)
    from gpkdv.fields import shift

    expected = shift(s_0.N, slow_frame_speed(eps) * tau)
    assert np.max(np.abs(s_t.N.samples - expected.samples)) <= 1e-7


def test_slow_state_amplitude_guard():
    g = GridSpec(64.0, 256)
    big = RealField(g, np.full(g.n, 40.0))
    with pytest.raises(ValueError):
        SlowState(0.9, 0.0, big, RealField(g, np.zeros(g.n)))


def test_slow_system_residual_zero_state(grid):
    zero = RealField(grid, np.zeros(grid.n))
    s = SlowState(0.3, 0.0, zero, zero)
    sdot = time_derivative(s, SlowState(0.3, 0.1, zero, zero))
    r1, r2 = slow_system_residual(s, sdot)
    assert r1 == 0.0 and r2 == 0.0


def test_slow_system_residual_on_trajectory_refines():
    eps = 0.5
    residuals = {}
    for dtau in (2e-2, 1e-2):
        taus = [0.2 - dtau, 0.2, 0.2 + dtau]
        s_prev, s_mid, s_next = make_slow_trajectory(eps, taus)
        sdot = time_derivative(s_prev, s_next)
        r1, r2 = slow_system_residual(s_mid, sdot)
        residuals[dtau] = (r1, r2)
    assert residuals[1e-2][0] <= 1e-4
    assert residuals[1e-2][1] <= 1e-3
    # centered differences: O(dtau^2) refinement of the residual
    gain = residuals[2e-2][0] / residuals[1e-2][0]
    assert gain >= 2.0


def test_slow_system_residual_negative_control(grid):
    rng = np.random.default_rng(0)
    n0 = smooth_real_noise(grid, rng, amplitude=1.0)
    t0 = smooth_real_noise(grid, rng, amplitude=1.0)
    s = SlowState(0.5, 0.0, n0, t0)
    other = SlowState(
        0.5,
        0.05,
        smooth_real_noise(grid, np.random.default_rng(1), amplitude=1.0),
        smooth_real_noise(grid, np.random.default_rng(2), amplitude=1.0),
    )
    r1, r2 = slow_system_residual(s, time_derivative(s, other))
    assert r1 > 0.1  # an unrelated pair is nowhere near a solution


def test_consistency_residual_routes_agree():
    eps = 0.4
    taus = np.linspace(0.0, 0.3, 16)
    states = make_slow_trajectory(eps, taus)
    samples = kdv_consistency_residual(states)
    assert samples, "needs interior snapshots"
    for s in samples:
        assert s.route_gap <= 1e-3
        assert s.residual_direct == pytest.approx(s.residual_equation, abs=1e-3)
    # travelling wave: residual is O(eps^2)-small and flat
    res = [s.residual_direct for s in samples]
    assert max(res) <= 0.1
    assert max(res) / min(res) <= 1.5


def test_consistency_residual_zero_state(grid):
    zero = RealField(grid, np.zeros(grid.n))
    states = [SlowState(0.3, 0.1 * j, zero, zero) for j in range(3)]
    samples = kdv_consistency_residual(states)
    assert samples[0].residual_direct == 0.0


def test_dalembert_examples(grid):
    rng = np.random.default_rng(3)
    n0 = smooth_real_noise(grid, rng, amplitude=1.0)
    w0 = RealField(grid, 2.0 * n0.samples)  # purely left-going
    wave = dalembert_solve(n0, w0, 1.3)
    assert np.max(np.abs(wave.Nplus.samples)) < 1e-12

    generic_w = smooth_real_noise(grid, rng, amplitude=0.7)
    at0 = dalembert_solve(n0, generic_w, 0.0)
    assert np.max(np.abs(at0.total_n().samples - n0.samples)) < 1e-12
    assert np.max(np.abs(at0.total_w().samples - generic_w.samples)) < 1e-12

    r1, r2 = wave_system_residual(n0, generic_w, 0.9)
    assert r1 <= 1e-6 and r2 <= 1e-6  # finite-difference floor in time


def test_wave_decomposition_profile_identities(grid):
    rng = np.random.default_rng(4)
    n0 = smooth_real_noise(grid, rng, amplitude=1.0)
    w0 = smooth_real_noise(grid, rng, amplitude=1.0)
    wave = dalembert_solve(n0, w0, 0.0)
    assert np.max(np.abs(2 * wave.Nplus.samples + wave.Wplus.samples)) < 1e-13
    assert np.max(np.abs(2 * wave.Nminus.samples - wave.Wminus.samples)) < 1e-13
