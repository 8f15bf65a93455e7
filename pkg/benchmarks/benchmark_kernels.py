"""Timings: compiled extension vs numpy fallback on the inner-loop kernels,
plus the end-to-end effect on full split-step / RK4 stepping.

Run:  python benchmarks/benchmark_kernels.py [--n 1024] [--steps 2000]
"""

import argparse
import importlib
import os
import time

import numpy as np


def time_call(fn, *args, repeats=200):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def kernel_table(n: int):
    from gpkdv import _kernels_fallback as fb

    rng = np.random.default_rng(0)
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    e_half = np.exp(1j * np.linspace(0, 3, n))
    e_full = e_half**2
    stages = [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(4)]

    rows = [("rotate_by_density", lambda mod: time_call(mod.rotate_by_density, psi, -0.2)),
            ("abs2", lambda mod: time_call(mod.abs2, psi)),
            ("rk4_combine", lambda mod: time_call(mod.rk4_combine, psi, *stages, e_half, e_full))]
    try:
        from gpkdv import _kernels as ext
    except ImportError:
        ext = None

    print(f"\npointwise kernels, n = {n} (best of 200, microseconds)")
    print(f"{'kernel':>20} {'numpy':>10} {'compiled':>10} {'speedup':>9}")
    for name, timer in rows:
        t_fb = timer(fb) * 1e6
        if ext is not None:
            t_ext = timer(ext) * 1e6
            print(f"{name:>20} {t_fb:10.2f} {t_ext:10.2f} {t_fb / t_ext:8.2f}x")
        else:
            print(f"{name:>20} {t_fb:10.2f} {'absent':>10}")


def stepping_table(n: int, steps: int):
    print(f"\nfull steps, n = {n}, {steps} steps per measurement")
    results = {}
    for backend, env in (("compiled", None), ("numpy", "1")):
        if env is None:
            os.environ.pop("GPKDV_NO_EXT", None)
        else:
            os.environ["GPKDV_NO_EXT"] = env
        import gpkdv.kernels

        importlib.reload(gpkdv.kernels)
        import gpkdv.gp
        import gpkdv.kdv

        importlib.reload(gpkdv.gp)
        importlib.reload(gpkdv.kdv)
        from gpkdv.fields import GridSpec
        from gpkdv.gp import GpState, SolitonSpec, dark_soliton, gp_evolve, soliton_grid
        from gpkdv.kdv import KdvState, kdv_evolve, kdv_soliton

        if gpkdv.kernels.BACKEND != ("cython" if backend == "compiled" else "numpy"):
            print(f"  ({backend} backend unavailable; skipping)")
            continue
        g = soliton_grid(1.0, 64.0, n)
        state = GpState(dark_soliton(SolitonSpec(1.0), g))
        start = time.perf_counter()
        gp_evolve(state, steps * 1e-3, 1e-3)
        gp_time = time.perf_counter() - start

        gk = GridSpec(64.0, n)
        kstate = KdvState(kdv_soliton(gk))
        start = time.perf_counter()
        kdv_evolve(kstate, steps * 1e-3, 1e-3)
        kdv_time = time.perf_counter() - start
        results[backend] = (gp_time, kdv_time)
        print(
            f"  {backend:>9}: split-step {gp_time / steps * 1e6:7.1f} us/step,"
            f" rk4 {kdv_time / steps * 1e6:7.1f} us/step"
        )
    if len(results) == 2:
        for idx, label in ((0, "split-step"), (1, "rk4")):
            ratio = results["numpy"][idx] / results["compiled"][idx]
            print(f"  end-to-end {label} speedup: {ratio:.2f}x")
    os.environ.pop("GPKDV_NO_EXT", None)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1024)
    parser.add_argument("--steps", type=int, default=2000)
    args = parser.parse_args()
    kernel_table(args.n)
    stepping_table(args.n, args.steps)


if __name__ == "__main__":
    main()
