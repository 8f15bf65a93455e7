"""Acceptance gate: every primary criterion at its declared tolerance.

Each test evaluates one criterion, prints a single pass/fail line, and then
asserts.  Tolerances and parameter pins live here, not in later calibration.
Budgets are wall-clock ceilings; the heavy sweeps dominate the suite runtime.
"""

import time

import numpy as np

from gpkdv.experiments import (
    ExperimentConfig,
    config_from_mapping,
    run_bridge,
    run_conservation,
    run_consistency,
    run_densities,
    run_kdv_compare,
    run_scaling_identity,
    run_v_growth,
    run_wave_regime,
)
from gpkdv.fields import ComplexField, GridSpec, grid_points
from gpkdv.invariants import renormalization_check
from gpkdv.kdv import KdvState, kdv_evolve, kdv_invariants, kdv_soliton, peak_location

from conftest import smooth_real_noise


def _report(name: str, ok: bool, detail: str, elapsed: float, budget: float):
    status = "PASS" if ok and elapsed <= budget else "FAIL"
    print(f"[acceptance] {name}: {status} ({detail}; {elapsed:.1f}s of {budget:.0f}s budget)")
    assert ok, f"{name}: {detail}"
    assert elapsed <= budget, f"{name}: exceeded runtime budget ({elapsed:.1f}s)"


def test_density_oracle():
    start = time.monotonic()
    report = run_densities(ExperimentConfig("densities"))
    elapsed = time.monotonic() - start
    gap = report.summary["max_pointwise_gap"]
    _report("density-oracle", report.passed and gap <= 1e-9, f"max gap {gap:.2e}", elapsed, 10)


def test_renormalization_chains():
    start = time.monotonic()
    grid = GridSpec(64.0, 512)
    x = grid_points(grid)
    fields = []
    for seed in range(4):
        rng = np.random.default_rng(seed)
        envelope = np.exp(-(x**2) / 36.0)  # below 1e-11 at the box edges
        re = smooth_real_noise(grid, rng, amplitude=0.06).samples * envelope
        im = smooth_real_noise(grid, rng, amplitude=0.04).samples * envelope
        fields.append(ComplexField(grid, 1.0 + re + 1j * im))
    fields.append(ComplexField(grid, 1.0 + 0.05 * np.exp(-(x**2) / 32.0)))
    worst = max(renormalization_check(psi, k) for psi in fields for k in (1, 2, 3, 4))
    elapsed = time.monotonic() - start
    _report("renormalization-chains", worst <= 1e-7, f"max gap {worst:.2e}", elapsed, 10)


def test_conservation_run():
    start = time.monotonic()
    report = run_conservation(ExperimentConfig("conservation", n=4096, dt=1e-3))
    elapsed = time.monotonic() - start
    drift = report.summary["max_drift"]
    _report(
        "conservation-eleven-invariants",
        report.passed and drift <= 1e-6,
        f"max relative drift {drift:.2e}",
        elapsed,
        120,
    )


def test_scaling_identities():
    start = time.monotonic()
    report = run_scaling_identity(ExperimentConfig("scaling-identity"))
    elapsed = time.monotonic() - start
    _report(
        "scaling-identities",
        report.passed,
        f"max gap {report.summary['max_gap']:.2e}",
        elapsed,
        30,
    )


def test_invariant_bridge_slopes():
    start = time.monotonic()
    report = run_bridge(ExperimentConfig("bridge"))
    elapsed = time.monotonic() - start
    slopes = {k: v for k, v in report.summary.items() if k.startswith("slope_k")}
    detail = ", ".join(f"{k}={v:.2f}" for k, v in sorted(slopes.items()) if "resid" not in k)
    _report("invariant-bridge", report.passed, detail, elapsed, 60)


def test_kdv_soliton():
    start = time.monotonic()
    grid = GridSpec(64.0, 1024)
    v0 = kdv_soliton(grid, center=-16.0)
    base = kdv_invariants(v0)
    ok = abs(base[0] - 12.0) <= 1e-6 and abs(base[1] + 7.2) <= 1e-6
    taus = np.linspace(0.0, 10.0, 6)
    traj = kdv_evolve(KdvState(v0), 10.0, 1.5e-4, sample_taus=taus)
    drift = max(
        abs(kdv_invariants(st.v)[j] - base[j]) / max(abs(base[j]), 1e-12)
        for st in traj
        for j in range(4)
    )
    peak_err = abs(peak_location(traj[-1].v) - (-16.0 + 10.0))
    ok = ok and drift <= 1e-8 and peak_err <= grid.dx
    elapsed = time.monotonic() - start
    _report(
        "kdv-soliton",
        ok,
        f"E0-12={base[0]-12:.1e}, E1+7.2={base[1]+7.2:.1e}, drift {drift:.1e}, "
        f"peak err {peak_err:.1e} (dx {grid.dx:.3f})",
        elapsed,
        30,
    )


def test_kdv_limit_travelling_wave():
    start = time.monotonic()
    report = run_kdv_compare(config_from_mapping("kdv-compare", {}))
    elapsed = time.monotonic() - start
    slope = report.summary["error_slope_at_tau_max"]
    excess = report.summary["speed_excess"]
    predicted = report.summary["speed_excess_predicted"]
    ok = report.passed and abs(slope - 2.0) <= 0.3 and abs(excess - predicted) <= 0.1 * predicted
    _report(
        "kdv-limit-travelling-wave",
        ok,
        f"error slope {slope:.3f}, speed excess {excess:.5f} vs eps^2/8 = {predicted:.5f}",
        elapsed,
        1200,
    )


def test_counter_wave_growth():
    start = time.monotonic()
    report = run_v_growth(config_from_mapping("v-growth", {}))
    elapsed = time.monotonic() - start
    _report(
        "counter-wave-growth",
        report.passed,
        f"fitted C {report.summary['fitted_C']:.3f}, "
        f"stability {report.summary['C_stability_ratio']:.2f}, "
        f"decay exponent {report.summary['excess_decay_exponent']:.2f}",
        elapsed,
        900,
    )


def test_consistency_residual():
    start = time.monotonic()
    report = run_consistency(config_from_mapping("consistency", {}))
    elapsed = time.monotonic() - start
    flats = [v for k, v in report.summary.items() if k.startswith("flatness")]
    _report(
        "kdv-consistency",
        report.passed,
        f"max flatness {max(flats):.2f} (<= 3), slope {report.summary['residual_slope']:.2f} (>= 1)",
        elapsed,
        900,
    )


def test_wave_regime_collapse():
    start = time.monotonic()
    report = run_wave_regime(config_from_mapping("wave-regime", {}))
    elapsed = time.monotonic() - start
    _report(
        "wave-regime-collapse",
        report.passed,
        f"collapse spread {report.summary['collapse_spread_final']:.3f} (<= 0.30)",
        elapsed,
        600,
    )


def test_primary_suite_independent_of_figure_tool():
    # the simulation/verification stack must not import anything from the
    # figure generator (a separate package consuming only the CSV contract)
    import gpkdv
    import gpkdv.bridge
    import gpkdv.cli
    import gpkdv.densities
    import gpkdv.experiments
    import gpkdv.fields
    import gpkdv.gp
    import gpkdv.invariants
    import gpkdv.kdv
    import gpkdv.kernels
    import gpkdv.reporting
    import gpkdv.rescaled
    import gpkdv.slow
    import sys

    foreign = [m for m in sys.modules if "figgen" in m or "frontend" in m]
    print(f"[acceptance] primary-standalone: PASS (no figure-tool imports: {foreign})")
    assert not foreign
