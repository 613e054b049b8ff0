"""Noise models and sweeps that exercise the quantitative robustness bounds.

The deficit epsilon is always computed from the achieved violation, never
from the noise parameter: the bounds are statements about the observed
value. Bound checks carry a small absolute guard (1e-9) against floating
noise at the ideal point; the inequalities themselves have generous
constants.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import NotAViolation, ShapeMismatch, TempcertError
from .inequality import QUANTUM_BOUND, eval_IT
from .scenario import (
    PAULI_I,
    PAULI_Y,
    DensityMatrix,
    Observable,
    Scenario,
    atomic_write_text,
    purify_scenario,
    random_hermitian,
)
from .seqcorr import correlations
from .certify import certify

#: Deficits beyond this make every bound vacuous; refuse to "check" them.
EPSILON_CEILING = 2.0

#: Absolute guard added to the satisfied side of each bound check.
CHECK_GUARD = 1e-9

#: Tilt generators, one documented Pauli string per slot: first-factor slots
#: (1, 3, 5) rotate under Y(x)1, second-factor slots (2, 4, 6) under 1(x)Y.
#: Defined for dimension-4 scenarios.
TILT_GENERATORS = {
    1: np.kron(PAULI_Y, PAULI_I),
    2: np.kron(PAULI_I, PAULI_Y),
    3: np.kron(PAULI_Y, PAULI_I),
    4: np.kron(PAULI_I, PAULI_Y),
    5: np.kron(PAULI_Y, PAULI_I),
    6: np.kron(PAULI_I, PAULI_Y),
}


@dataclass(frozen=True)
class Depolarizing:
    """rho -> (1 - p) rho + p 1/d."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing p must be in [0, 1], got {self.p}")


@dataclass(frozen=True)
class ObservableTilt:
    """Conjugate one observable by exp(-1j angle H) with the slot's fixed
    generator from TILT_GENERATORS."""

    slot: int
    angle: float

    def __post_init__(self):
        if self.slot not in TILT_GENERATORS:
            raise ValueError(f"tilt slot must be in 1..6, got {self.slot}")


@dataclass(frozen=True)
class UnitaryJitter:
    """Conjugate all six observables by independent small random unitaries
    exp(-1j strength H_k), H_k seeded Gaussian Hermitian."""

    strength: float
    rng_seed: int = 0


NoiseModel = Depolarizing | ObservableTilt | UnitaryJitter


def apply_noise(s: Scenario, n: NoiseModel) -> Scenario:
    if isinstance(n, Depolarizing):
        if n.p == 0.0:
            return s
        rho = (1 - n.p) * s.density() + n.p * np.eye(s.dim) / s.dim
        return s.with_state(DensityMatrix(linalg.hermitize(rho)))
    if isinstance(n, ObservableTilt):
        if n.angle == 0.0:
            return s
        if s.dim != 4:
            raise ShapeMismatch(
                f"tilt generators are two-qubit Pauli strings; scenario dim is {s.dim}"
            )
        u = linalg.expi_hermitian(TILT_GENERATORS[n.slot], n.angle)
        m = u @ s.observable(n.slot).matrix @ u.conj().T
        return s.with_observable(n.slot, Observable(linalg.hermitize(m)))
    if isinstance(n, UnitaryJitter):
        if n.strength == 0.0:
            return s
        rng = np.random.Generator(np.random.PCG64(n.rng_seed))
        new = []
        for o in s.observables:
            h = random_hermitian(s.dim, rng)
            h = h / linalg.op_norm(h)
            u = linalg.expi_hermitian(h, n.strength)
            new.append(Observable(linalg.hermitize(u @ o.matrix @ u.conj().T)))
        return Scenario(s.state, new)
    raise TypeError(f"unknown noise model {n!r}")


@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.holds = bool(self.holds)


def _state_norm_checks(mats, psi, eps: float):
    """The norm-bound families ||(A_i - A_j A_k) psi|| <= 4 sqrt(eps) etc."""
    root = np.sqrt(max(eps, 0.0))
    checks = []
    for trip in ((1, 2, 3), (4, 5, 6)):
        for i, j, k in itertools.permutations(trip):
            lhs = linalg.vec_norm((mats[i - 1] - mats[j - 1] @ mats[k - 1]) @ psi)
            checks.append(BoundCheck(
                f"norm(A{i}-A{j}A{k})<=4sqrt(eps)", lhs, 4 * root,
                lhs <= 4 * root + CHECK_GUARD,
            ))
    for i, j, sign, label in ((1, 4, -1, "A1-A4"), (2, 5, -1, "A2-A5"), (3, 6, +1, "A3+A6")):
        lhs = linalg.vec_norm((mats[i - 1] + sign * mats[j - 1]) @ psi)
        checks.append(BoundCheck(
            f"norm({label})<=2sqrt(eps)", lhs, 2 * root, lhs <= 2 * root + CHECK_GUARD,
        ))
    for i, j in ((1, 5), (1, 6), (2, 4), (2, 6), (3, 4), (3, 5)):
        lhs = linalg.vec_norm(linalg.acomm(mats[i - 1], mats[j - 1]) @ psi)
        checks.append(BoundCheck(
            f"norm({{A{i},A{j}}})<=14sqrt(eps)", lhs, 14 * root,
            lhs <= 14 * root + CHECK_GUARD,
        ))
    return checks


def check_robustness_bounds(s: Scenario):
    """Verify every robustness bound at the scenario's achieved deficit.

    The scenario is purified if its state is mixed. Returns a list of
    BoundCheck records: correlator floors (triples >= 1 - 2 eps, pairs
    >= 1 - eps with the sign on the 3-6 pair), the state-norm families at
    4 sqrt(eps) and 2 sqrt(eps), and the anticommutator family at
    14 sqrt(eps). Raises NotAViolation when eps > 2.
    """
    s = purify_scenario(s)
    corr = correlations(s, "analytic")
    eps = QUANTUM_BOUND - eval_IT(corr).value
    if eps > EPSILON_CEILING:
        raise NotAViolation(f"deficit {eps:.3f} exceeds {EPSILON_CEILING}; bounds are vacuous")
    eps = max(eps, 0.0)

    checks = []
    for name in ("triple_123", "triple_213", "triple_456", "triple_546"):
        v = getattr(corr, name)
        checks.append(BoundCheck(f"{name}>=1-2eps", v, 1 - 2 * eps,
                                 v >= 1 - 2 * eps - CHECK_GUARD))
    for name, sign in (("pair_14", 1), ("pair_25", 1), ("pair_36", -1)):
        v = sign * getattr(corr, name)
        label = f"{'-' if sign < 0 else ''}{name}>=1-eps"
        checks.append(BoundCheck(label, v, 1 - eps, v >= 1 - eps - CHECK_GUARD))

    checks.extend(_state_norm_checks(s.matrices(), s.state.amplitudes, eps))
    return checks


@dataclass
class SweepRow:
    param: float
    epsilon: float = float("nan")
    value: float = float("nan")
    fidelity: float = float("nan")
    max_operator_distance: float = float("nan")
    bound_checks: list = field(default_factory=list)
    failed: bool = False
    error: str | None = None

    @property
    def bounds_all_hold(self) -> bool:
        return bool(self.bound_checks) and all(c.holds for c in self.bound_checks)


def sweep(base: Scenario, family, grid) -> list:
    """Evaluate a one-parameter noise family over a grid.

    `family` maps a grid parameter to a NoiseModel. Each row applies the
    noise, recomputes the deficit from the achieved violation, runs the full
    certification and the bound suite. Per-row errors mark the row failed
    and the sweep continues. Rows come back sorted by parameter.
    """
    grid = sorted(grid)
    if not grid:
        raise ValueError("grid must be nonempty")
    rows = []
    for param in grid:
        row = SweepRow(param=float(param))
        try:
            noisy = apply_noise(base, family(param))
            row.value = eval_IT(correlations(purify_scenario(noisy), "analytic")).value
            row.epsilon = QUANTUM_BOUND - row.value
            report = certify(noisy)
            row.fidelity = report.fidelity
            row.max_operator_distance = report.max_operator_distance
            row.bound_checks = check_robustness_bounds(noisy)
        except TempcertError as exc:
            row.failed = True
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


SWEEP_CSV_HEADER = "param,epsilon,I_T,fidelity,max_op_distance,bounds_all_hold"


def sweep_csv(rows) -> str:
    """Render sweep rows as CSV (fixed header, newline-terminated rows)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER.split(","))
    for r in rows:
        writer.writerow([
            repr(float(r.param)), repr(float(r.epsilon)), repr(float(r.value)),
            repr(float(r.fidelity)), repr(float(r.max_operator_distance)),
            str(r.bounds_all_hold).lower(),
        ])
    return buf.getvalue()


def save_sweep_csv(rows, path) -> None:
    atomic_write_text(path, sweep_csv(rows))


def sweep_report(rows) -> dict:
    """Sidecar document with full bound detail per row."""
    return {
        "rows": [
            {
                "param": r.param,
                "epsilon": r.epsilon,
                "I_T": r.value,
                "fidelity": r.fidelity,
                "max_op_distance": r.max_operator_distance,
                "failed": r.failed,
                "error": r.error,
                "bounds": [
                    {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds}
                    for c in r.bound_checks
                ],
            }
            for r in rows
        ]
    }


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log10(y) against log10(x).

    Only the middle two decades of the x range enter the fit, which keeps
    machine-precision floors and large-parameter breakdown out of the
    estimate. Pairs with a non-positive coordinate are dropped.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    mask = (xs > 0) & (ys > 0)
    if mask.sum() < 2:
        raise ValueError("need at least two positive points for a slope fit")
    lx, ly = np.log10(xs[mask]), np.log10(ys[mask])
    lo, hi = lx.min(), lx.max()
    if hi - lo > 2.0:
        mid = (lo + hi) / 2
        window = (lx >= mid - 1.0) & (lx <= mid + 1.0)
        if window.sum() >= 2:
            lx, ly = lx[window], ly[window]
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)
