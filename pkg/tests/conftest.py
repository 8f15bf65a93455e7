import numpy as np
import pytest

from gpkdv.fields import ComplexField, GridSpec, RealField, grid_points


@pytest.fixture
def grid():
    return GridSpec(64.0, 512)


@pytest.fixture
def nu_grid():
    return GridSpec(100.0, 1024)


def kdv_soliton_samples(grid: GridSpec, center: float = 0.0) -> np.ndarray:
    x = grid_points(grid)
    return 3.0 / np.cosh((x - center) / 2.0) ** 2


def smooth_real_noise(grid: GridSpec, rng, amplitude=1.0, kmax=None) -> RealField:
    n = grid.n
    kmax = kmax or n // 8
    x = grid_points(grid)
    f = np.zeros(n)
    for j in range(1, kmax + 1):
        k = 2 * np.pi * j / grid.length
        cr, ci = rng.standard_normal(2)
        f += np.exp(-((j / (kmax / 6.0)) ** 2)) * (cr * np.cos(k * x) + ci * np.sin(k * x))
    return RealField(grid, amplitude * f / np.max(np.abs(f)))


def smooth_wave_field(grid: GridSpec, rng, amplitude=0.1, kmax=None) -> ComplexField:
    re = smooth_real_noise(grid, rng, amplitude, kmax)
    im = smooth_real_noise(grid, rng, amplitude, kmax)
    return ComplexField(grid, 1.0 + re.samples + 1j * im.samples)
