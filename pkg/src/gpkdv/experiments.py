"""The experiment harness: each runner checks one quantitative statement
about the long-wave regime at desk scale and emits machine-readable reports.

All runners are deterministic functions of their config (seeded noise,
order-deterministic aggregation).  Epsilon sweeps can run cells concurrently;
results are always collated in config order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from gpkdv.bridge import bridge_gap
from gpkdv.densities import N_DENSITIES, density_explicit, density_recursive
from gpkdv.fields import (
    GridSpec,
    RealField,
    grid_points,
    sobolev_norm,
    spectral_derivative,
)
from gpkdv.gp import (
    GpState,
    SolitonSpec,
    dark_soliton,
    gp_evolve,
    long_wave_data,
    soliton_grid,
    travelling_wave_slow_profiles,
)
from gpkdv.invariants import INVARIANT_IDS, drift_table, invariants
from gpkdv.kdv import KdvState, kdv_evolve, kdv_soliton, peak_location
from gpkdv.rescaled import rescaled_energy, rescaled_momentum
from gpkdv.reporting import ExperimentReport, decay_exponent, fit_loglog
from gpkdv.slow import (
    SlowState,
    dalembert_solve,
    kdv_consistency_residual,
    original_time,
    to_slow,
    to_wave_frame,
)

EXPERIMENTS = (
    "conservation",
    "densities",
    "scaling-identity",
    "bridge",
    "kdv-compare",
    "v-growth",
    "consistency",
    "wave-regime",
)

_DEFAULT_EPS = {
    "scaling-identity": (0.5, 0.3, 0.1),
    "bridge": (0.4, 0.3, 0.2, 0.1),
    "kdv-compare": (0.4, 0.3, 0.2, 0.15, 0.1),
    "v-growth": (0.4, 0.3, 0.2),
    "consistency": (0.4, 0.3, 0.2, 0.1),
    "wave-regime": (0.4, 0.3, 0.2),
}

# v-growth needs non-rigid data: exact travelling waves keep every norm frozen
_DEFAULT_DATA = {"v-growth": "left-moving"}

MAX_STEP_BUDGET = 20_000_000


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    epsilons: tuple[float, ...] = ()
    slow_length: float = 64.0
    n: int = 512
    tau_max: float = 1.0
    dt: float = 1e-3
    dtau: float = 1e-3
    seed: int = 0
    data: str = "soliton"  # soliton | left-moving
    threads: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS and self.experiment != "all":
            raise ValueError(f"unknown experiment {self.experiment!r}")
        eps = self.epsilons or _DEFAULT_EPS.get(self.experiment, ())
        if eps != tuple(sorted(eps, reverse=True)):
            raise ValueError("epsilon values must be strictly decreasing")
        if any(not 0.0 < e < 1.0 for e in eps):
            raise ValueError("epsilon values must lie in (0, 1)")
        object.__setattr__(self, "epsilons", tuple(eps))

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "epsilon": list(self.epsilons),
            "slow_length": self.slow_length,
            "n": self.n,
            "tau_max": self.tau_max,
            "dt": self.dt,
            "dtau": self.dtau,
            "seed": self.seed,
            "data": self.data,
            "threads": self.threads,
        }


def config_from_mapping(experiment: str, raw: dict[str, str]) -> ExperimentConfig:
    """Build a config from flat string key-value pairs (file or CLI)."""
    kw: dict = {"experiment": raw.get("experiment", experiment)}
    if "epsilon" in raw:
        kw["epsilons"] = tuple(float(v) for v in str(raw["epsilon"]).split(","))
    for key, cast in (
        ("slow_length", float),
        ("grid_length", float),
        ("n", int),
        ("grid_n", int),
        ("tau_max", float),
        ("dt", float),
        ("dtau", float),
        ("seed", int),
        ("threads", int),
    ):
        if key in raw and raw[key] != "":
            target = {"grid_length": "slow_length", "grid_n": "n"}.get(key, key)
            kw[target] = cast(raw[key])
    if "data" in raw:
        kw["data"] = str(raw["data"])
    else:
        kw["data"] = _DEFAULT_DATA.get(kw["experiment"], "soliton")
    return ExperimentConfig(**kw)


def band_limited_noise(
    grid: GridSpec,
    rng: np.random.Generator,
    amplitude: float,
    mode_fraction: int = 8,
    rolloff: bool = True,
) -> np.ndarray:
    """Random profile with modes <= n/mode_fraction, sup-normalized.

    With rolloff the spectrum decays smoothly inside the band; without it the
    band edge is sharp, which the density recursion's support tracking needs.
    """
    n = grid.n
    kmax = n // mode_fraction
    x = grid_points(grid)
    k = 2 * np.pi * np.arange(1, kmax + 1) / grid.length
    coef = rng.standard_normal(kmax) + 1j * rng.standard_normal(kmax)
    damp = (
        np.exp(-((np.arange(kmax) / (kmax / 6.0)) ** 2))
        if rolloff
        else np.ones(kmax)
    )
    f = np.zeros(n)
    for j in range(kmax):
        f += damp[j] * (coef[j].real * np.cos(k[j] * x) + coef[j].imag * np.sin(k[j] * x))
    return amplitude * f / np.max(np.abs(f))


def random_wave_field(
    grid: GridSpec,
    rng: np.random.Generator,
    amplitude: float = 0.1,
    mode_fraction: int = 8,
    rolloff: bool = True,
):
    """Psi = 1 + amplitude * (band-limited complex noise)."""
    from gpkdv.fields import ComplexField

    re = band_limited_noise(grid, rng, amplitude, mode_fraction, rolloff)
    im = band_limited_noise(grid, rng, amplitude, mode_fraction, rolloff)
    return ComplexField(grid, 1.0 + re + 1j * im)


def _l2(samples: np.ndarray, dx: float) -> float:
    return float(math.sqrt(dx * np.sum(samples**2)))


def _step_budget_guard(n_steps: int, epsilon: float):
    if n_steps > MAX_STEP_BUDGET:
        raise ValueError(
            f"epsilon={epsilon} needs {n_steps} steps, beyond the budget "
            f"{MAX_STEP_BUDGET}; refuse rather than truncate"
        )


def _gp_dt(cfg: ExperimentConfig, epsilon: float) -> float:
    """Step-size policy: weaker nonlinearity at small epsilon tolerates 2x dt."""
    return cfg.dt if epsilon >= 0.2 else 2.0 * cfg.dt


def _soliton_slow_data(cfg: ExperimentConfig, epsilon: float):
    sg = GridSpec(cfg.slow_length, cfg.n)
    if cfg.data == "left-moving":
        nu = kdv_soliton(sg)
        return nu, RealField(sg, nu.samples.copy())
    return travelling_wave_slow_profiles(epsilon, sg)


def _gp_initial_state(cfg: ExperimentConfig, epsilon: float):
    n0, t0 = _soliton_slow_data(cfg, epsilon)
    if cfg.data == "soliton":
        c = math.sqrt(2.0 - epsilon**2)
        grid = soliton_grid(c, cfg.slow_length / epsilon, cfg.n)
        psi = dark_soliton(SolitonSpec(c), grid)
    else:
        psi = long_wave_data(n0, t0, epsilon)
    return psi, n0, t0


def _map_cells(cfg: ExperimentConfig, worker, items):
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(worker, items))
    return [worker(item) for item in items]


# ---------------------------------------------------------------- conservation

CONSERVATION_TOL = 1e-6


def run_conservation(cfg: ExperimentConfig) -> ExperimentReport:
    """Drift of the eleven invariants along a dark-soliton run (c = 1)."""
    start = time.time()
    cfg = replace(cfg, n=cfg.n if cfg.n >= 2048 else 4096)
    c = 1.0
    grid = soliton_grid(c, cfg.slow_length, cfg.n)
    psi0 = dark_soliton(SolitonSpec(c), grid)
    t_max = 10.0
    samples = np.linspace(0.0, t_max, 11)
    traj = gp_evolve(GpState(psi0), t_max, cfg.dt, sample_times=samples)
    table = drift_table(traj)
    eps = math.sqrt(2.0 - c * c)
    rows = []
    verdicts = {}
    for name in INVARIANT_IDS:
        series = table[name]
        for state, value in zip(traj, series):
            rows.append((eps, state.t, value, name))
        verdicts[f"drift_{name}"] = bool(series.max() <= CONSERVATION_TOL)
    report = ExperimentReport("conservation", cfg.as_dict())
    report.add_table(
        "conservation_drift", ["epsilon", "tau", "value", "invariant"], rows
    )
    report.summary["max_drift"] = max(table[name].max() for name in INVARIANT_IDS)
    report.verdicts.update(verdicts)
    report.wall_seconds = time.time() - start
    return report


# ------------------------------------------------------------------- densities

DENSITY_TOL = 1e-9
DENSITY_SEEDS = 10


def run_densities(cfg: ExperimentConfig) -> ExperimentReport:
    """Closed expressions vs the recursion, pointwise, on seeded noise fields."""
    start = time.time()
    # the two routes agree algebraically; what limits the numerical match is
    # round-off compounding through eight derivative/convolution stages, so
    # the oracle runs on a long box (low wavenumbers) with a sharp band edge
    grid = GridSpec(4.0 * cfg.slow_length, min(cfg.n, 512))
    rows = []
    worst = 0.0
    for seed in range(DENSITY_SEEDS):
        rng = np.random.default_rng(cfg.seed + seed)
        psi = random_wave_field(grid, rng, amplitude=0.1, mode_fraction=16, rolloff=False)
        for n in range(1, N_DENSITIES + 1):
            a = density_explicit(psi, n).samples
            b = density_recursive(psi, n).samples
            scale = np.max(np.abs(a))
            diff = float(np.max(np.abs(a - b)) / scale)
            rows.append((0.0, float(seed), diff, n))
            worst = max(worst, diff)
    report = ExperimentReport("densities", cfg.as_dict())
    report.add_table("density_agreement", ["epsilon", "tau", "value", "order"], rows)
    report.summary["max_pointwise_gap"] = worst
    report.verdicts["recursion_matches_explicit"] = bool(worst <= DENSITY_TOL)
    report.wall_seconds = time.time() - start
    return report


# ------------------------------------------------------------ scaling identity

SCALING_SEEDS = 20


def run_scaling_identity(cfg: ExperimentConfig) -> ExperimentReport:
    """Both invariant ladders against their slow-variable rescalings."""
    start = time.time()
    sg = GridSpec(cfg.slow_length, cfg.n)
    rows = []
    worst = 0.0
    ok = True
    for epsilon in cfg.epsilons:
        states = []
        for seed in range(SCALING_SEEDS):
            rng = np.random.default_rng(cfg.seed + seed)
            n0 = RealField(sg, band_limited_noise(sg, rng, 1.0))
            t0 = RealField(sg, band_limited_noise(sg, rng, 1.0))
            states.append((float(seed), n0, t0))
        states.append((-1.0, *travelling_wave_slow_profiles(epsilon, sg)))
        for tag, n0, t0 in states:
            psi = long_wave_data(n0, t0, epsilon)
            s = SlowState(epsilon, 0.0, N=n0, theta_x=t0)
            iv = invariants(psi)
            for k in range(1, 5):
                scale = epsilon ** (2 * k + 1) / 18.0
                tol = 1e-7 * max(1.0, abs(iv.E[k - 1]))
                gap_e = abs(iv.E[k - 1] - scale * rescaled_energy(s, k))
                gap_p = abs(iv.p[k - 1] - scale * rescaled_momentum(s, k))
                rows.append((epsilon, tag, gap_e, k, "energy"))
                rows.append((epsilon, tag, gap_p, k, "momentum"))
                worst = max(worst, gap_e, gap_p)
                ok = ok and gap_e <= tol and gap_p <= tol
    report = ExperimentReport("scaling-identity", cfg.as_dict())
    report.add_table("scaling_gaps", ["epsilon", "tau", "value", "order", "kind"], rows)
    report.summary["max_gap"] = worst
    report.verdicts["identities_hold"] = bool(ok)
    report.wall_seconds = time.time() - start
    return report


# ----------------------------------------------------------------------- bridge

BRIDGE_SLOPE_WINDOW = {1: 0.3, 2: 0.4, 3: 0.4, 4: 0.4}


def run_bridge(cfg: ExperimentConfig) -> ExperimentReport:
    """Slope of the hierarchy-bridge gap vs epsilon (travelling-wave data)."""
    start = time.time()
    sg = GridSpec(cfg.slow_length, cfg.n)
    states = {
        epsilon: SlowState(epsilon, 0.0, *travelling_wave_slow_profiles(epsilon, sg))
        for epsilon in cfg.epsilons
    }
    rows = []
    report = ExperimentReport("bridge", cfg.as_dict())
    for k in range(1, 5):
        for sign in (1, -1):
            gaps = []
            for epsilon in cfg.epsilons:
                r = bridge_gap(states[epsilon], k, sign)
                gaps.append(r.gap)
                rows.append((epsilon, 0.0, r.gap, k, sign))
            slope, resid = fit_loglog(np.array(cfg.epsilons), np.array(gaps))
            key = f"k{k}_{'plus' if sign > 0 else 'minus'}"
            report.summary[f"slope_{key}"] = slope
            report.summary[f"slope_resid_{key}"] = resid
            report.verdicts[f"slope_{key}"] = bool(
                abs(slope - 2.0) <= BRIDGE_SLOPE_WINDOW[k]
            )
    report.add_table("bridge_gaps", ["epsilon", "tau", "value", "order", "sign"], rows)
    report.wall_seconds = time.time() - start
    return report


# ------------------------------------------------------------------ kdv-compare

KDV_COMPARE_SLOPE_WINDOW = 0.3
SPEED_CHECK_EPS = 0.3
SPEED_CHECK_TOL = 0.10
GRINZING_BOUND = 50.0


def _kdv_compare_cell(cfg: ExperimentConfig, epsilon: float, taus: np.ndarray):
    psi0, n0, t0 = _gp_initial_state(cfg, epsilon)
    norms = (
        sobolev_norm(n0, 3),
        epsilon * _l2(spectral_derivative(n0, 4).samples, n0.grid.dx),
        sobolev_norm(t0, 3),
    )
    total_norm = norms[0] + norms[1] + norms[2]
    if total_norm > GRINZING_BOUND:
        raise ValueError(
            f"initial data too large for the long-wave regime: "
            f"H3-type size {total_norm:.3g} exceeds {GRINZING_BOUND}"
        )
    dt = _gp_dt(cfg, epsilon)
    t_samples = [original_time(tau, epsilon) for tau in taus]
    _step_budget_guard(int(round(t_samples[-1] / dt)), epsilon)
    traj = gp_evolve(GpState(psi0), t_samples[-1], dt, sample_times=t_samples)
    slow_states = [to_slow(st.psi, epsilon, st.t) for st in traj]
    kdv_n = kdv_evolve(KdvState(n0), float(taus[-1]), cfg.dtau, sample_taus=taus)
    kdv_m = kdv_evolve(KdvState(t0), float(taus[-1]), cfg.dtau, sample_taus=taus)
    dx = n0.grid.dx
    cell_rows = []
    peaks = []
    # rows carry the requested tau so sweeps align across epsilon; the actual
    # snapped time differs from it by at most one step of the slow clock
    for tau, s, kn, km in zip(taus, slow_states, kdv_n, kdv_m):
        err_n = _l2(s.N.samples - kn.v.samples, dx)
        err_m = _l2(s.theta_x.samples - km.v.samples, dx)
        cell_rows.append((epsilon, tau, err_n, "err_N"))
        cell_rows.append((epsilon, tau, err_m, "err_M"))
        peaks.append((s.tau, peak_location(s.N)))
    final = slow_states[-1]
    x = grid_points(final.N.grid)
    snapshot = []
    for i in range(0, final.N.grid.n, 4):
        snapshot.append((epsilon, taus[-1], final.N.samples[i], "gp", x[i]))
        snapshot.append((epsilon, taus[-1], kdv_n[-1].v.samples[i], "kdv", x[i]))
    return cell_rows, peaks, total_norm, snapshot


def run_kdv_compare(cfg: ExperimentConfig) -> ExperimentReport:
    """GP in slow variables against the two KdV evolutions, with slope fits."""
    start = time.time()
    taus = np.linspace(0.0, cfg.tau_max, 9)
    results = _map_cells(
        cfg, lambda eps: _kdv_compare_cell(cfg, eps, taus), cfg.epsilons
    )
    report = ExperimentReport("kdv-compare", cfg.as_dict())
    rows = []
    snapshot_rows = []
    final_errors = []
    for epsilon, (cell_rows, peaks, total_norm, snapshot) in zip(cfg.epsilons, results):
        rows.extend(cell_rows)
        report.summary[f"h3_size_eps{epsilon:g}"] = total_norm
        final_errors.append(cell_rows[-2][2])  # err_N at tau_max
        if abs(epsilon - SPEED_CHECK_EPS) < 1e-12:
            snapshot_rows = snapshot
        if abs(epsilon - SPEED_CHECK_EPS) < 1e-12 and cfg.data == "soliton":
            tau_arr = np.array([p[0] for p in peaks])
            # unwrap periodic peak positions before the linear fit
            pos = np.array([p[1] for p in peaks])
            length = cfg.slow_length
            pos = pos[0] + np.cumsum(
                np.concatenate([[0.0], (np.diff(pos) + length / 2) % length - length / 2])
            )
            speed = float(np.polyfit(tau_arr, pos, 1)[0])
            excess = speed - 1.0
            predicted = epsilon**2 / 8.0
            report.summary["soliton_speed"] = speed
            report.summary["speed_excess"] = excess
            report.summary["speed_excess_predicted"] = predicted
            report.verdicts["speed_excess_quarter_epssq"] = bool(
                abs(excess - predicted) <= SPEED_CHECK_TOL * predicted
            )
    slope, resid = fit_loglog(np.array(cfg.epsilons), np.array(final_errors))
    report.add_table("kdv_compare_errors", ["epsilon", "tau", "value", "series"], rows)
    if snapshot_rows:
        report.add_table(
            "kdv_compare_snapshot",
            ["epsilon", "tau", "value", "series", "x"],
            snapshot_rows,
        )
    report.summary["error_slope_at_tau_max"] = slope
    report.summary["error_slope_resid"] = resid
    if cfg.data == "soliton":
        report.verdicts["error_slope"] = bool(
            abs(slope - 2.0) <= KDV_COMPARE_SLOPE_WINDOW
        )
    report.wall_seconds = time.time() - start
    return report


# --------------------------------------------------------------------- v-growth

VGROWTH_STABILITY_FACTOR = 3.0


def _v_growth_cell(cfg: ExperimentConfig, epsilon: float, taus: np.ndarray):
    psi0, n0, t0 = _gp_initial_state(cfg, epsilon)
    dt = _gp_dt(cfg, epsilon)
    t_samples = [original_time(tau, epsilon) for tau in taus]
    _step_budget_guard(int(round(t_samples[-1] / dt)), epsilon)
    traj = gp_evolve(GpState(psi0), t_samples[-1], dt, sample_times=t_samples)
    dx = n0.grid.dx
    rows = []
    v0_norm = None
    ratios = []
    for st in traj:
        s = to_slow(st.psi, epsilon, st.t)
        nu_norm = _l2(s.U.samples, dx)
        nv_norm = _l2(s.V.samples, dx)
        if v0_norm is None:
            v0_norm = nv_norm
        excess = max(nv_norm - v0_norm, 0.0)
        rows.append((epsilon, s.tau, nu_norm, "norm_U"))
        rows.append((epsilon, s.tau, nv_norm, "norm_V"))
        rows.append((epsilon, s.tau, excess, "excess_V"))
        ratios.append(excess / (epsilon**2 * (1.0 + s.tau)))
    return rows, max(ratios), max(r[2] for r in rows if r[3] == "excess_V")


def run_v_growth(cfg: ExperimentConfig) -> ExperimentReport:
    """Counter-wave growth: ||V(tau)|| excess against the eps^2 (1 + tau) law.

    Uses purely left-moving data by default (V0 = 0), for which the excess is
    the full counter-wave amplitude; exact travelling waves are rigid and give
    an identically-zero excess.
    """
    start = time.time()
    cfg = replace(cfg, tau_max=max(cfg.tau_max, 2.0))
    taus = np.linspace(0.0, cfg.tau_max, 17)
    results = _map_cells(cfg, lambda eps: _v_growth_cell(cfg, eps, taus), cfg.epsilons)
    report = ExperimentReport("v-growth", cfg.as_dict())
    rows = []
    constants = []
    max_excess = []
    for epsilon, (cell_rows, c_eps, excess) in zip(cfg.epsilons, results):
        rows.extend(cell_rows)
        constants.append(c_eps)
        max_excess.append(excess)
        report.summary[f"fitted_C_eps{epsilon:g}"] = c_eps
    report.add_table("v_growth", ["epsilon", "tau", "value", "series"], rows)
    c_all = max(constants)
    report.summary["fitted_C"] = c_all
    stable = max(constants) / max(min(constants), 1e-300)
    report.summary["C_stability_ratio"] = stable
    report.verdicts["single_C_across_eps"] = bool(stable <= VGROWTH_STABILITY_FACTOR)
    exponent = decay_exponent(
        (cfg.epsilons[0], cfg.epsilons[-1]), (max_excess[0], max_excess[-1])
    )
    report.summary["excess_decay_exponent"] = exponent
    report.verdicts["excess_scales_like_epssq"] = bool(1.6 <= exponent <= 2.4)
    report.wall_seconds = time.time() - start
    return report


# ------------------------------------------------------------------ consistency

CONSISTENCY_FLATNESS = 3.0


def _consistency_cell(cfg: ExperimentConfig, epsilon: float, taus: np.ndarray):
    psi0, _, _ = _gp_initial_state(cfg, epsilon)
    dt = _gp_dt(cfg, epsilon)
    t_samples = [original_time(tau, epsilon) for tau in taus]
    _step_budget_guard(int(round(t_samples[-1] / dt)), epsilon)
    traj = gp_evolve(GpState(psi0), t_samples[-1], dt, sample_times=t_samples)
    slow_states = [to_slow(st.psi, epsilon, st.t) for st in traj]
    return kdv_consistency_residual(slow_states)


def run_consistency(cfg: ExperimentConfig) -> ExperimentReport:
    """Time-flatness and epsilon-decay of the KdV-consistency residual of U."""
    start = time.time()
    cfg = replace(cfg, tau_max=max(cfg.tau_max, 2.0))
    taus = np.linspace(0.0, cfg.tau_max, 101)
    results = _map_cells(
        cfg, lambda eps: _consistency_cell(cfg, eps, taus), cfg.epsilons
    )
    report = ExperimentReport("consistency", cfg.as_dict())
    rows = []
    mean_residuals = []
    for epsilon, samples in zip(cfg.epsilons, results):
        res = np.array([s.residual_direct for s in samples])
        gaps = np.array([s.route_gap for s in samples])
        for s in samples:
            rows.append((epsilon, s.tau, s.residual_direct, "residual"))
            rows.append((epsilon, s.tau, s.route_gap, "route_gap"))
        flat = float(res.max() / max(res.min(), 1e-300))
        mean_residuals.append(float(res.mean()))
        report.summary[f"flatness_eps{epsilon:g}"] = flat
        report.summary[f"max_route_gap_eps{epsilon:g}"] = float(gaps.max())
        report.verdicts[f"flat_eps{epsilon:g}"] = bool(flat <= CONSISTENCY_FLATNESS)
    slope, resid = fit_loglog(np.array(cfg.epsilons), np.array(mean_residuals))
    report.add_table("consistency", ["epsilon", "tau", "value", "series"], rows)
    report.summary["residual_slope"] = slope
    report.verdicts["residual_slope_at_least_1"] = bool(slope >= 1.0)
    report.wall_seconds = time.time() - start
    return report


# ------------------------------------------------------------------ wave-regime

WAVE_COLLAPSE_SPREAD = 0.30


def _wave_regime_cell(cfg: ExperimentConfig, epsilon: float, scaled_times: np.ndarray):
    sg = GridSpec(cfg.slow_length, cfg.n)
    # narrow, small dip: the secular dispersive deviation (the eps^3 t law)
    # must dominate the bounded quadratic preparation wobble for the
    # curves to collapse at desk-scale epsilon
    x = grid_points(sg)
    n0 = RealField(sg, 0.75 / np.cosh(x) ** 2)
    t0 = RealField(sg, np.zeros(sg.n))
    psi0 = long_wave_data(n0, t0, epsilon)
    w0 = RealField(sg, 2.0 * t0.samples)
    dt = _gp_dt(cfg, epsilon)
    times = [c / epsilon**3 for c in scaled_times]
    _step_budget_guard(int(round(times[-1] / dt)), epsilon)
    traj = gp_evolve(GpState(psi0), times[-1], dt, sample_times=times)
    dx = sg.dx
    rows = []
    for st, c in zip(traj[1:], scaled_times[1:]):
        n_num, w_num = to_wave_frame(st.psi, epsilon)
        wave = dalembert_solve(n0, w0, epsilon * st.t)
        err = _l2(n_num.samples - wave.total_n().samples, dx) + _l2(
            w_num.samples - wave.total_w().samples, dx
        )
        rows.append((epsilon, c, err, "wave_error"))
    return rows


def run_wave_regime(cfg: ExperimentConfig) -> ExperimentReport:
    """Free-wave regime: error curves must collapse under the eps^3 t scaling."""
    start = time.time()
    scaled = np.linspace(0.0, 0.1, 6)
    results = _map_cells(
        cfg, lambda eps: _wave_regime_cell(cfg, eps, scaled), cfg.epsilons
    )
    report = ExperimentReport("wave-regime", cfg.as_dict())
    rows = [r for cell in results for r in cell]
    report.add_table("wave_regime", ["epsilon", "tau", "value", "series"], rows)
    by_c = {}
    for epsilon, cell in zip(cfg.epsilons, results):
        for _, c, err, _ in cell:
            by_c.setdefault(round(c, 12), []).append(err)
    spreads = {
        c: (max(v) - min(v)) / np.mean(v) for c, v in by_c.items() if len(v) > 1
    }
    final_c = max(spreads)
    report.summary["collapse_spread_final"] = spreads[final_c]
    for c, spread in sorted(spreads.items()):
        report.summary[f"collapse_spread_c{c:g}"] = spread
    report.verdicts["curves_collapse"] = bool(spreads[final_c] <= WAVE_COLLAPSE_SPREAD)
    report.wall_seconds = time.time() - start
    return report


_RUNNERS = {
    "conservation": run_conservation,
    "densities": run_densities,
    "scaling-identity": run_scaling_identity,
    "bridge": run_bridge,
    "kdv-compare": run_kdv_compare,
    "v-growth": run_v_growth,
    "consistency": run_consistency,
    "wave-regime": run_wave_regime,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return _RUNNERS[cfg.experiment](cfg)


def run_all(base: ExperimentConfig) -> list[ExperimentReport]:
    reports = []
    for name in EXPERIMENTS:
        cfg = config_from_mapping(name, {})
        cfg = replace(
            cfg,
            experiment=name,
            seed=base.seed,
            threads=base.threads,
        )
        reports.append(run_experiment(cfg))
    return reports
