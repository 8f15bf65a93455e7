"""Renormalized energies and momenta of the defocusing cubic flow.

The energies E_1..E_4 and momenta P_2..P_4 are the constant-subtracted linear
combinations of the densities f_n, written out after integration by parts so
every integrand decays; p_1 = (1/2) int eta d(phase)/dx is the renormalized
momentum (defined under the small-energy lifting condition E < 2 sqrt(2)/3),
and p_2..p_4 are its linear combinations with P_k.

``renormalization_check`` certifies the integration-by-parts chains
numerically: it compares each functional against the corresponding density
combination (plus the constant that cancels the far-field value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gpkdv.densities import _derivatives, density_explicit
from gpkdv.fields import ComplexField, GridSpec, RealField, spectral_derivative
from gpkdv.gp import DEFAULT_RHO_MIN, GpState, VacuumError, madelung

ENERGY_SMALLNESS = 2.0 * math.sqrt(2.0) / 3.0
DRIFT_FLOOR = 1e-12

INVARIANT_IDS = ("E1", "E2", "E3", "E4", "P2", "P3", "P4", "p1", "p2", "p3", "p4")


def _quad(grid: GridSpec, samples: np.ndarray) -> float:
    return float(grid.dx * np.sum(samples))


def _eta_derivatives(psi: ComplexField, orders: int) -> list[np.ndarray]:
    rho2 = (psi.samples * np.conj(psi.samples)).real
    plain = GridSpec(psi.grid.length, psi.grid.n)
    eta = RealField(plain, 1.0 - rho2)
    out = [eta.samples]
    f = eta
    for _ in range(orders):
        f = spectral_derivative(f, 1)
        out.append(f.samples)
    return out


def _ip(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Real inner product <a, b> = Re(a conj(b))."""
    return (a * np.conj(b)).real


def _iip(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """<i a, b> = Re(i a conj(b))."""
    return -(a * np.conj(b)).imag


def energy(psi: ComplexField, k: int) -> float:
    """k-th order energy E_k, 1 <= k <= 4."""
    g = psi.grid
    d = _derivatives(psi, k)
    e = _eta_derivatives(psi, max(k - 1, 0))
    ab = [None] + [_ip(d[j], d[j]) for j in range(1, k + 1)]
    if k == 1:
        return _quad(g, 0.5 * ab[1] + 0.25 * e[0] ** 2)
    if k == 2:
        return _quad(
            g,
            0.5 * ab[2] - 1.5 * e[0] * ab[1] + 0.25 * e[1] ** 2 - 0.25 * e[0] ** 3,
        )
    if k == 3:
        return _quad(
            g,
            0.5 * ab[3]
            + 0.25 * e[2] ** 2
            + 1.25 * ab[1] ** 2
            + 2.5 * e[2] * ab[1]
            - 2.5 * e[0] * ab[2]
            - 1.25 * e[0] * e[1] ** 2
            + 3.75 * e[0] ** 2 * ab[1]
            + (5 / 16) * e[0] ** 4,
        )
    if k == 4:
        return _quad(
            g,
            0.5 * ab[4]
            + 0.25 * e[3] ** 2
            - 1.75 * e[0] * e[2] ** 2
            - 3.5 * e[0] * ab[3]
            + (35 / 8) * e[0] ** 2 * e[1] ** 2
            + 8.75 * e[0] ** 2 * ab[2]
            - 8.75 * e[1] ** 2 * ab[1]
            - 3.5 * ab[1] * ab[2]
            - 7.0 * e[2] * _ip(d[1], d[3])
            - 7.0 * ab[1] * _ip(d[1], d[3])
            - 17.5 * e[0] * e[2] * ab[1]
            - 8.75 * e[0] ** 3 * ab[1]
            - 8.75 * e[0] * ab[1] ** 2
            - (7 / 16) * e[0] ** 5,
        )
    raise ValueError(f"energy order must be 1..4, got {k}")


def momentum(psi: ComplexField, k: int) -> float:
    """k-th order momentum P_k, 2 <= k <= 4."""
    g = psi.grid
    d = _derivatives(psi, k)
    e = _eta_derivatives(psi, 2)
    if k == 2:
        return _quad(g, 0.5 * _iip(d[2], d[1]) - 0.75 * e[0] * _iip(d[1], d[0]))
    if k == 3:
        return _quad(
            g,
            0.5 * _iip(d[3], d[2])
            - 2.5 * e[0] * _iip(d[2], d[1])
            + 1.25 * (e[0] ** 2 + e[0]) * _iip(d[1], d[0]),
        )
    if k == 4:
        ab1 = _ip(d[1], d[1])
        return _quad(
            g,
            0.5 * _iip(d[4], d[3])
            - 3.5 * e[0] * _iip(d[3], d[2])
            + 3.5 * e[2] * _iip(d[2], d[1])
            + 1.75 * ab1 * _iip(d[2], d[1])
            + 8.75 * e[0] ** 2 * _iip(d[2], d[1])
            - (35 / 16) * (e[0] ** 3 + e[0] ** 2 + e[0]) * _iip(d[1], d[0]),
        )
    raise ValueError(f"momentum order must be 2..4, got {k}")


def renormalized_momentum(psi: ComplexField, rho_min: float = DEFAULT_RHO_MIN) -> float:
    """p_1 = (1/2) int eta d(phase)/dx via the Madelung decomposition."""
    pair = madelung(psi, rho_min)
    return _quad(pair.eta.grid, 0.5 * pair.eta.samples * pair.phase_derivative.samples)


def box_mass(psi: ComplexField) -> float:
    """(1/2) int (|Psi|^2 - 1) over the box; finite-box value only."""
    rho2 = (psi.samples * np.conj(psi.samples)).real
    return _quad(psi.grid, 0.5 * (rho2 - 1.0))


_P_COMBINATION = {2: -1.5, 3: 2.5, 4: -35.0 / 8.0}


@dataclass(frozen=True)
class InvariantVector:
    """All invariants of one state: E_1..E_4, P_2..P_4, p_1..p_4, box mass.

    The p entries require the small-energy lifting condition; when it fails
    (valid_p False) they are None.  mass is the finite-box surrogate of a
    quantity that is not well-defined in the energy space; treat accordingly.
    """

    E: tuple[float, float, float, float]
    P: tuple[float, float, float]
    p: tuple[float, float, float, float] | None
    mass: float
    valid_p: bool

    def get(self, name: str) -> float | None:
        if name.startswith("E"):
            return self.E[int(name[1]) - 1]
        if name.startswith("P"):
            return self.P[int(name[1]) - 2]
        if name.startswith("p"):
            return None if self.p is None else self.p[int(name[1]) - 1]
        if name == "mass":
            return self.mass
        raise KeyError(name)


def invariants(psi: ComplexField, rho_min: float = DEFAULT_RHO_MIN) -> InvariantVector:
    e = tuple(energy(psi, k) for k in range(1, 5))
    big_p = tuple(momentum(psi, k) for k in range(2, 5))
    valid_p = e[0] < ENERGY_SMALLNESS
    p = None
    if valid_p:
        try:
            p1 = renormalized_momentum(psi, rho_min)
        except VacuumError:
            valid_p = False
        else:
            p = (
                p1,
                big_p[0] + _P_COMBINATION[2] * p1,
                big_p[1] + _P_COMBINATION[3] * p1,
                big_p[2] + _P_COMBINATION[4] * p1,
            )
    return InvariantVector(E=e, P=big_p, p=p, mass=box_mass(psi), valid_p=valid_p)


class DecayError(ValueError):
    """Raised when a functional requiring far-field decay is fed non-decaying data."""


def _require_decay(psi: ComplexField, tol: float = 1e-10):
    edge = max(abs(psi.samples[0] - 1.0), abs(psi.samples[-1] - 1.0))
    if psi.grid.twist != 0.0 or edge > tol:
        raise DecayError(
            f"field must equal 1 at the box edges (twist 0); edge deviation {edge:.3g}"
        )


# density combinations behind each functional: (sign, {n: coefficient}, constant)
_ENERGY_COMBOS = {
    1: (1.0, {3: 1.0, 1: 1.0}, 0.25),
    2: (-1.0, {5: 1.0, 3: 3.0, 1: 1.5}, 0.25),
    3: (1.0, {7: 1.0, 5: 5.0, 3: 7.5, 1: 2.5}, 5.0 / 16.0),
    4: (-1.0, {9: 1.0, 7: 7.0, 5: 17.5, 3: 17.5, 1: 35.0 / 8.0}, 7.0 / 16.0),
}
_MOMENTUM_COMBOS = {
    2: (1.0, {4: 1.0, 2: 1.5}),
    3: (-1.0, {6: 1.0, 4: 5.0, 2: 5.0}),
    4: (1.0, {8: 1.0, 6: 7.0, 4: 17.5, 2: 105.0 / 8.0}),
}


def renormalization_check(psi: ComplexField, k: int) -> float:
    """Gap between E_k / P_k (or p_1) and their density combinations.

    Returns the largest discrepancy among the order-k identities; up to
    quadrature error it must vanish on decaying fields, which certifies the
    integration-by-parts chains behind the renormalized functionals.
    """
    if not 1 <= k <= 4:
        raise ValueError(f"k must be 1..4, got {k}")
    _require_decay(psi)
    g = psi.grid
    sign, combo, const = _ENERGY_COMBOS[k]
    total = 0j
    for n, coeff in combo.items():
        total += coeff * np.sum(density_explicit(psi, n).samples)
    total = sign * (g.dx * total + const * g.length)
    gaps = [abs(energy(psi, k) - total.real), abs(total.imag)]
    if k == 1:
        f2 = np.sum(density_explicit(psi, 2).samples) * g.dx
        p1_combo = -1j * f2
        gaps.append(abs(renormalized_momentum(psi) - p1_combo.real))
        gaps.append(abs(p1_combo.imag))
    else:
        sign_p, combo_p = _MOMENTUM_COMBOS[k]
        total_p = 0j
        for n, coeff in combo_p.items():
            total_p += coeff * np.sum(density_explicit(psi, n).samples)
        total_p = sign_p * 1j * g.dx * total_p
        gaps.append(abs(momentum(psi, k) - total_p.real))
        gaps.append(abs(total_p.imag))
    return float(max(gaps))


def drift(trajectory: list[GpState], which: str) -> np.ndarray:
    """Relative drift |I(t) - I(0)| / max(|I(0)|, floor) along a trajectory."""
    if which not in INVARIANT_IDS and which != "mass":
        raise KeyError(f"unknown invariant id {which!r}")
    values = np.array(
        [invariants(state.psi).get(which) for state in trajectory], dtype=np.float64
    )
    ref = max(abs(values[0]), DRIFT_FLOOR)
    return np.abs(values - values[0]) / ref


def drift_table(trajectory: list[GpState], names=INVARIANT_IDS) -> dict[str, np.ndarray]:
    """Relative-drift series for several invariants, one invariant pass per state."""
    vectors = [invariants(state.psi) for state in trajectory]
    out = {}
    for name in names:
        vals = np.array([v.get(name) for v in vectors], dtype=np.float64)
        ref = max(abs(vals[0]), DRIFT_FLOOR)
        out[name] = np.abs(vals - vals[0]) / ref
    return out
