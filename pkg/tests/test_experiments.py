import numpy as np
import pytest

from gpkdv.experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    config_from_mapping,
    run_bridge,
    run_densities,
    run_scaling_identity,
)
from gpkdv.reporting import (
    Table,
    config_hash,
    decay_exponent,
    fit_loglog,
    fmt,
    load_config_file,
    parse_config_text,
)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("unknown-experiment")
    with pytest.raises(ValueError):
        ExperimentConfig("bridge", epsilons=(0.1, 0.3))  # not decreasing
    with pytest.raises(ValueError):
        ExperimentConfig("bridge", epsilons=(1.2, 0.3))
    cfg = ExperimentConfig("bridge")
    assert cfg.epsilons == (0.4, 0.3, 0.2, 0.1)


def test_config_from_mapping_and_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "epsilon = 0.4, 0.2\n"
        "grid_n = 256\n"
        "grid_length = 48\n"
        "seed = 7\n",
        encoding="utf-8",
    )
    raw = load_config_file(path)
    cfg = config_from_mapping("bridge", raw)
    assert cfg.epsilons == (0.4, 0.2)
    assert cfg.n == 256
    assert cfg.slow_length == 48.0
    assert cfg.seed == 7

    with pytest.raises(ValueError):
        parse_config_text("this line has no equals sign")


def test_vgrowth_default_data():
    assert config_from_mapping("v-growth", {}).data == "left-moving"
    assert config_from_mapping("kdv-compare", {}).data == "soliton"


def test_step_budget_guard():
    from gpkdv.experiments import _step_budget_guard

    with pytest.raises(ValueError):
        _step_budget_guard(10**9, 0.01)


def test_fit_helpers():
    eps = np.array([0.4, 0.3, 0.2, 0.1])
    slope, resid = fit_loglog(eps, 2.0 * eps**2)
    assert slope == pytest.approx(2.0, abs=1e-12)
    assert resid < 1e-12
    with pytest.raises(ValueError):
        fit_loglog(eps[:3], np.ones(3))
    with pytest.raises(ValueError):
        fit_loglog(eps, np.array([1.0, 1.0, -1.0, 1.0]))
    assert decay_exponent((0.2, 0.1), (4e-3, 1e-3)) == pytest.approx(2.0)


def test_table_formatting_17_digits(tmp_path):
    t = Table("demo", ["epsilon", "tau", "value"], [(0.1, 0.0, 1 / 3)])
    text = t.to_csv()
    assert text.splitlines()[0] == "epsilon,tau,value"
    assert "0.33333333333333331" in text
    assert fmt(2) == "2"


def test_report_determinism_and_layout(tmp_path):
    cfg = ExperimentConfig("densities", seed=1)
    r1 = run_densities(cfg)
    r2 = run_densities(cfg)
    d1 = r1.write(tmp_path / "a")
    d2 = r2.write(tmp_path / "b")
    csv1 = (d1 / "density_agreement.csv").read_bytes()
    csv2 = (d2 / "density_agreement.csv").read_bytes()
    assert csv1 == csv2
    summary = (d1 / "summary.txt").read_text()
    assert "experiment = densities" in summary
    assert "config_hash = " in summary
    assert "verdict.overall = PASS" in summary
    assert config_hash(cfg.as_dict()) in summary


def test_densities_experiment_passes():
    report = run_densities(ExperimentConfig("densities"))
    assert report.passed
    assert report.summary["max_pointwise_gap"] <= 1e-9


def test_scaling_identity_small_grid():
    cfg = ExperimentConfig("scaling-identity", epsilons=(0.4, 0.2), n=256)
    report = run_scaling_identity(cfg)
    assert report.passed


def test_bridge_threads_match_serial():
    serial = run_bridge(ExperimentConfig("bridge", n=256))
    threaded = run_bridge(ExperimentConfig("bridge", n=256, threads=3))
    assert serial.passed and threaded.passed
    a = serial.tables[0].to_csv()
    b = threaded.tables[0].to_csv()
    assert a == b


def test_cli_round_trip(tmp_path, capsys):
    from gpkdv.cli import main

    code = main(["densities", "--out", str(tmp_path), "--seed", "0"])
    assert code == 0
    out = capsys.readouterr().out
    assert "densities: PASS" in out
    assert (tmp_path / "densities" / "summary.txt").exists()
    assert (tmp_path / "densities" / "density_agreement.csv").exists()


def test_experiment_list_is_complete():
    assert set(EXPERIMENTS) == {
        "conservation",
        "densities",
        "scaling-identity",
        "bridge",
        "kdv-compare",
        "v-growth",
        "consistency",
        "wave-regime",
    }
