import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from gpkdv.fields import (
    ComplexField,
    GridSpec,
    RealField,
    antiderivative,
    dealiased_product,
    grid_points,
    integrate,
    resample,
    shift,
    sobolev_norm,
    spectral_derivative,
    subsample,
    wavenumbers,
)

from conftest import kdv_soliton_samples, smooth_real_noise


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(-1.0, 64)
    with pytest.raises(ValueError):
        GridSpec(10.0, 100)  # not a power of two
    with pytest.raises(ValueError):
        GridSpec(10.0, 4)  # too small
    g = GridSpec(10.0, 64)
    assert g.dx == pytest.approx(10.0 / 64)


def test_real_field_rejects_twist_and_nan():
    g = GridSpec(10.0, 64, twist=0.5)
    with pytest.raises(ValueError):
        RealField(g, np.zeros(64))
    g0 = GridSpec(10.0, 64)
    bad = np.zeros(64)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        RealField(g0, bad)


def test_derivative_single_mode(grid):
    # f = sin(2 pi m x / L): exact derivative of a single Fourier mode
    x = grid_points(grid)
    m = 5
    k = 2 * np.pi * m / grid.length
    f = RealField(grid, np.sin(k * x))
    df = spectral_derivative(f, 1)
    assert np.max(np.abs(df.samples - k * np.cos(k * x))) <= 1e-12 * k


def test_derivative_constant_and_orders(grid):
    f = RealField(grid, np.full(grid.n, 2.5))
    for order in (1, 2, 5, 8):
        assert np.max(np.abs(spectral_derivative(f, order).samples)) < 1e-12
    with pytest.raises(ValueError):
        spectral_derivative(f, 9)
    with pytest.raises(ValueError):
        spectral_derivative(f, 0)


def test_derivative_soliton_profile(nu_grid):
    # closed-form derivative of 3 sech^2(x/2), cross-checked by dense finite
    # differences at a handful of points
    x = grid_points(nu_grid)
    nu = RealField(nu_grid, kdv_soliton_samples(nu_grid))
    exact = -3.0 / np.cosh(x / 2) ** 2 * np.tanh(x / 2)
    got = spectral_derivative(nu, 1)
    assert np.max(np.abs(got.samples - exact)) <= 1e-10
    h = 1e-5
    for x0 in (-3.0, 0.7, 4.2):
        fd = (3 / np.cosh((x0 + h) / 2) ** 2 - 3 / np.cosh((x0 - h) / 2) ** 2) / (2 * h)
        assert fd == pytest.approx(-3 / np.cosh(x0 / 2) ** 2 * np.tanh(x0 / 2), abs=1e-8)


def test_integrate_examples(nu_grid):
    # oracle: adaptive quadrature of the soliton profile over the line
    oracle, err = quad(lambda x: 3.0 / np.cosh(x / 2) ** 2, -50, 50)
    assert err < 1e-7
    nu = RealField(nu_grid, kdv_soliton_samples(nu_grid))
    assert integrate(nu) == pytest.approx(oracle, abs=1e-8)
    assert integrate(nu) == pytest.approx(12.0, abs=1e-10)

    one = RealField(nu_grid, np.ones(nu_grid.n))
    assert integrate(one) == pytest.approx(nu_grid.length, rel=1e-15)

    x = grid_points(nu_grid)
    full_period = RealField(nu_grid, np.sin(2 * np.pi * x / nu_grid.length))
    assert abs(integrate(full_period)) <= 1e-12


def test_sobolev_norm_examples(nu_grid):
    g = nu_grid
    const = RealField(g, np.full(g.n, -1.7))
    for s in range(5):
        assert sobolev_norm(const, s) == pytest.approx(1.7 * np.sqrt(g.length), rel=1e-14)

    x = grid_points(g)
    a, m = 0.3, 7
    k = 2 * np.pi * m / g.length
    mode = RealField(g, a * np.sin(k * x))
    assert sobolev_norm(mode, 1) == pytest.approx(
        a * np.sqrt(g.length / 2) * np.sqrt(1 + k**2), rel=1e-12
    )

    # oracle: int 9 sech^4(x/2) dx = 24 by quadrature
    oracle, _ = quad(lambda x: 9.0 / np.cosh(x / 2) ** 4, -60, 60)
    nu = RealField(g, kdv_soliton_samples(g))
    assert sobolev_norm(nu, 0) == pytest.approx(np.sqrt(oracle), abs=1e-8)
    assert sobolev_norm(nu, 0) == pytest.approx(np.sqrt(24.0), abs=1e-8)

    with pytest.raises(ValueError):
        sobolev_norm(nu, 5)


def test_parseval_h1_identity(grid):
    rng = np.random.default_rng(0)
    f = smooth_real_noise(grid, rng)
    lhs = sobolev_norm(f, 0) ** 2 + sobolev_norm(spectral_derivative(f, 1), 0) ** 2
    rhs = sobolev_norm(f, 1) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_shift_examples(nu_grid):
    nu = RealField(nu_grid, kdv_soliton_samples(nu_grid))
    assert np.max(np.abs(shift(nu, 0.0).samples - nu.samples)) < 1e-14
    # full-box shift is the identity on periodic fields
    assert np.max(np.abs(shift(nu, nu_grid.length).samples - nu.samples)) < 1e-12
    moved = shift(nu, 5.0)
    x = grid_points(nu_grid)
    peak = x[np.argmax(moved.samples)]
    assert abs(peak - 5.0) <= nu_grid.dx


def test_shift_twisted_full_period():
    alpha = 0.8
    g = GridSpec(32.0, 256, twist=alpha)
    x = grid_points(g)
    kappa = 2 * np.pi * 3 / g.length + alpha / g.length
    f = ComplexField(g, np.exp(1j * kappa * x))
    moved = shift(f, g.length)
    # f(x - L) = exp(-i alpha) f(x) by quasi-periodicity
    assert np.max(np.abs(moved.samples - np.exp(-1j * alpha) * f.samples)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(a=st.floats(-30, 30), seed=st.integers(0, 100))
def test_shift_roundtrip_property(a, seed):
    g = GridSpec(64.0, 256)
    f = smooth_real_noise(g, np.random.default_rng(seed))
    back = shift(shift(f, a), -a)
    assert np.max(np.abs(back.samples - f.samples)) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 100))
def test_derivative_integral_duality(seed):
    # integration by parts: <f', g> = -<f, g'> for smooth periodic fields
    g = GridSpec(64.0, 256)
    rng = np.random.default_rng(seed)
    f = smooth_real_noise(g, rng)
    h = smooth_real_noise(g, rng)
    lhs = integrate(RealField(g, spectral_derivative(f, 1).samples * h.samples))
    rhs = -integrate(RealField(g, f.samples * spectral_derivative(h, 1).samples))
    scale = max(abs(lhs), abs(rhs), 1e-12)
    assert abs(lhs - rhs) / scale <= 1e-10


def test_antiderivative_inverts_derivative(grid):
    rng = np.random.default_rng(1)
    f = smooth_real_noise(grid, rng)
    prim, mean_slope = antiderivative(f)
    back = spectral_derivative(prim, 1)
    assert abs(np.mean(prim.samples)) < 1e-12
    assert np.max(np.abs(back.samples + mean_slope - f.samples)) < 1e-10


def test_resample_subsample_roundtrip(grid):
    rng = np.random.default_rng(2)
    f = smooth_real_noise(grid, rng)
    fine = resample(f, 4)
    assert fine.grid.n == 4 * grid.n
    back = subsample(fine, 4)
    assert np.max(np.abs(back.samples - f.samples)) < 1e-12


def test_dealiased_product_matches_exact_modes(grid):
    # two single modes whose product is exactly representable
    x = grid_points(grid)
    k1 = 2 * np.pi * 10 / grid.length
    k2 = 2 * np.pi * 14 / grid.length
    f = RealField(grid, np.cos(k1 * x))
    h = RealField(grid, np.cos(k2 * x))
    exact = 0.5 * (np.cos((k1 + k2) * x) + np.cos((k1 - k2) * x))
    got = dealiased_product(f, h)
    assert np.max(np.abs(got.samples - exact)) < 1e-13


def test_twisted_wavenumbers_offset():
    g = GridSpec(16.0, 64, twist=0.6)
    k0 = wavenumbers(GridSpec(16.0, 64))
    k1 = wavenumbers(g)
    assert np.allclose(k1 - k0, 0.6 / 16.0)
