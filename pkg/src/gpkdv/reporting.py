"""Experiment reports: CSV tables, key-value summaries, slope fits, configs.

Output contract: every table is a CSV with a header row starting
``epsilon,tau,value`` (extra columns allowed), numeric fields printed with 17
significant digits; each run also writes one ``summary.txt`` with dotted
key = value lines (config echo, verdicts, slopes, timings, config hash).
Identical config + seed produce bit-identical CSV bytes.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


@dataclass
class Table:
    name: str
    header: list[str]
    rows: list[tuple]

    def to_csv(self) -> str:
        lines = [",".join(self.header)]
        lines += [",".join(fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    tables: list[Table] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    wall_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def add_table(self, name: str, header: list[str], rows: list[tuple]):
        self.tables.append(Table(name, header, rows))

    def write(self, outdir: str | Path) -> Path:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        for table in self.tables:
            (out / f"{table.name}.csv").write_text(table.to_csv(), encoding="utf-8")
        lines = [f"experiment = {self.experiment}"]
        for key in sorted(self.config):
            lines.append(f"config.{key} = {_render_value(self.config[key])}")
        for key in sorted(self.summary):
            lines.append(f"summary.{key} = {_render_value(self.summary[key])}")
        for key in sorted(self.verdicts):
            lines.append(f"verdict.{key} = {'PASS' if self.verdicts[key] else 'FAIL'}")
        lines.append(f"verdict.overall = {'PASS' if self.passed else 'FAIL'}")
        lines.append(f"timing.wall_seconds = {self.wall_seconds:.3f}")
        lines.append(f"config_hash = {config_hash(self.config)}")
        (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        return out


def _render_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(fmt(x) for x in v)
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def config_hash(config: dict) -> str:
    canon = "\n".join(f"{k} = {_render_value(config[k])}" for k in sorted(config))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def fit_loglog(eps: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of log(value) vs log(eps); returns (slope, max residual).

    Requires at least 4 points and strictly positive values.
    """
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(eps) < 4:
        raise ValueError("slope fits require at least 4 points")
    if np.any(values <= 0):
        raise ValueError("slope fits require positive values")
    slope, intercept = np.polyfit(np.log(eps), np.log(values), 1)
    resid = np.log(values) - (slope * np.log(eps) + intercept)
    return float(slope), float(np.max(np.abs(resid)))


def decay_exponent(eps_pair: tuple[float, float], value_pair: tuple[float, float]) -> float:
    """Two-point decay exponent p with value ~ eps^p."""
    (e1, e2), (v1, v2) = eps_pair, value_pair
    return math.log(v1 / v2) / math.log(e1 / e2)


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; '#' comments; lists stay comma-joined strings."""
    out: dict[str, str] = {}
    for idx, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {idx}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_config_file(path: str | Path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))
