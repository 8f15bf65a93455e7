"""Backend selection for the inner-loop kernels.

Prefers the compiled extension; falls back to numpy transparently.  Set
GPKDV_NO_EXT=1 to force the fallback (used by the benchmark and the
cross-check tests).
"""

import os

if os.environ.get("GPKDV_NO_EXT"):
    from gpkdv._kernels_fallback import BACKEND, abs2, rk4_combine, rotate_by_density
else:
    try:
        from gpkdv._kernels import BACKEND, abs2, rk4_combine, rotate_by_density
    except ImportError:
        from gpkdv._kernels_fallback import BACKEND, abs2, rk4_combine, rotate_by_density

__all__ = ["BACKEND", "abs2", "rk4_combine", "rotate_by_density"]
