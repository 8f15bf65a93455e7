import numpy as np
import pytest
from scipy.integrate import quad

from gpkdv.fields import GridSpec, RealField, grid_points
from gpkdv.kdv import (
    KdvState,
    fitted_coercivity_constant,
    kdv_coercivity_check,
    kdv_evolve,
    kdv_invariants,
    kdv_soliton,
    kdv_step,
    peak_location,
)


def sech_power_integral(p: int) -> float:
    value, err = quad(lambda u: 1.0 / np.cosh(u) ** p, -40, 40)
    assert err < 1e-9
    return value


def test_invariant_closed_forms():
    # oracles by quadrature: int nu^2 = 24, int (nu')^2 = 24/5, int nu^3 = 288/5
    i_nu2, _ = quad(lambda x: 9 / np.cosh(x / 2) ** 4, -60, 60)
    i_dnu2, _ = quad(lambda x: 9 / np.cosh(x / 2) ** 4 * np.tanh(x / 2) ** 2, -60, 60)
    i_nu3, _ = quad(lambda x: 27 / np.cosh(x / 2) ** 6, -60, 60)
    assert i_nu2 == pytest.approx(24.0, abs=1e-8)
    assert i_dnu2 == pytest.approx(24.0 / 5.0, abs=1e-8)
    assert i_nu3 == pytest.approx(288.0 / 5.0, abs=1e-8)

    g = GridSpec(64.0, 1024)
    e = kdv_invariants(kdv_soliton(g))
    assert e[0] == pytest.approx(0.5 * i_nu2, abs=1e-9)
    assert e[1] == pytest.approx(0.5 * i_dnu2 - i_nu3 / 6.0, abs=1e-9)
    assert e[0] == pytest.approx(12.0, abs=1e-9)
    assert e[1] == pytest.approx(-7.2, abs=1e-9)


def test_zero_and_constant_fixed_points():
    g = GridSpec(32.0, 256)
    zero = KdvState(RealField(g, np.zeros(g.n)))
    assert np.max(np.abs(kdv_step(zero, 1e-2).v.samples)) < 1e-15
    const = KdvState(RealField(g, np.full(g.n, 1.7)))
    stepped = kdv_step(const, 1e-2)
    assert np.max(np.abs(stepped.v.samples - 1.7)) < 1e-13
    assert kdv_invariants(zero.v) == (0.0, 0.0, 0.0, 0.0)


def test_soliton_travels_at_unit_speed():
    g = GridSpec(64.0, 1024)
    v0 = kdv_soliton(g, center=-10.0)
    tau = 8.0
    traj = kdv_evolve(KdvState(v0), tau, 1e-3, sample_taus=np.linspace(0, tau, 5))
    x_exact = grid_points(g)
    for st in traj:
        expected = 3.0 / np.cosh((x_exact + 10.0 - st.tau) / 2.0) ** 2
        l2 = np.sqrt(g.dx * np.sum((st.v.samples - expected) ** 2))
        assert l2 <= 1e-6
    peaks = [(st.tau, peak_location(st.v)) for st in traj]
    slope = np.polyfit([p[0] for p in peaks], [p[1] for p in peaks], 1)[0]
    assert abs(slope - 1.0) <= 2 * g.dx / tau


def test_invariant_drift_small():
    g = GridSpec(64.0, 1024)
    v0 = kdv_soliton(g)
    base = kdv_invariants(v0)
    final = kdv_evolve(KdvState(v0), 2.0, 1.5e-4)[-1]
    now = kdv_invariants(final.v)
    for a, b in zip(base, now):
        assert abs(a - b) / max(abs(a), 1e-12) <= 1e-8


def test_coercivity_family():
    g = GridSpec(64.0, 512)
    nu = kdv_soliton(g)
    family = [RealField(g, a * nu.samples) for a in np.linspace(0.1, 2.0, 8)]
    for k in (1, 2, 3):
        const = fitted_coercivity_constant(family, k)
        assert np.isfinite(const) and const > 0
        for v in family:
            rep = kdv_coercivity_check(v, k)
            assert rep.top_derivative_sq <= const * (
                rep.lower_norm_sq + rep.invariant_abs
            ) * (1 + 1e-12)


def test_coercivity_single_mode_closed_form():
    g = GridSpec(64.0, 512)
    x = grid_points(g)
    a, m = 0.5, 6
    kappa = 2 * np.pi * m / g.length
    v = RealField(g, a * np.sin(kappa * x))
    rep = kdv_coercivity_check(v, 1)
    # ||v'||^2 = a^2 kappa^2 L/2; int v^3 = 0 for a single mode
    assert rep.top_derivative_sq == pytest.approx(a**2 * kappa**2 * g.length / 2, rel=1e-12)
    assert rep.invariant_abs == pytest.approx(rep.top_derivative_sq / 2, rel=1e-10)
    assert rep.ratio < 1.0

    with pytest.raises(ValueError):
        kdv_coercivity_check(v, 4)
