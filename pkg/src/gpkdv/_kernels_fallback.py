"""Pure-numpy implementations of the inner-loop kernels.

Reference semantics for the compiled extension; selected automatically when
the extension is unavailable (or forced via GPKDV_NO_EXT=1).
"""

import numpy as np

BACKEND = "numpy"


def rotate_by_density(psi: np.ndarray, coef: float) -> np.ndarray:
    """Return psi * exp(1j * coef * (|psi|^2 - 1))."""
    theta = coef * (psi.real**2 + psi.imag**2 - 1.0)
    return psi * (np.cos(theta) + 1j * np.sin(theta))


def abs2(psi: np.ndarray) -> np.ndarray:
    """Pointwise |psi|^2."""
    return psi.real**2 + psi.imag**2


def rk4_combine(v, a, b, c, d, e_half, e_full) -> np.ndarray:
    """Integrating-factor RK4 update in spectral space.

    v is the current spectrum, a..d the stage increments (dt folded in),
    e_half/e_full the half/full-step linear propagators.
    """
    return e_full * v + (e_full * a + 2.0 * e_half * (b + c) + d) / 6.0
