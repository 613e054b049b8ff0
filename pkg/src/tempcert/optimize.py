"""Seesaw maximization of the temporal expression.

The expression is linear in the state and in each observable separately, so
both half-steps have exact maximizers: the state update takes the top
eigenvector of the expression's operator form, and each observable update
takes the eigen-sign of its Hermitian coefficient operator. Every half-step
is an exact argmax, which makes the per-sweep values monotone.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DegenerateCoefficientWarning, ShapeMismatch
from .inequality import QUANTUM_BOUND
from .scenario import (
    Observable,
    PureState,
    Scenario,
    random_involution,
    random_pure_state,
)

#: Coefficient-operator eigenvalues below this have no preferred sign.
DEGENERATE_EIGENVALUE = 1e-12


@dataclass
class SeesawConfig:
    dim: int
    max_sweeps: int = 200
    tol: float = 1e-13
    seeds: int = 20
    rng_seed: int = 0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if self.max_sweeps < 1:
            raise ValueError(f"max_sweeps must be >= 1, got {self.max_sweeps}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.seeds < 1:
            raise ValueError(f"seeds must be >= 1, got {self.seeds}")


@dataclass
class SeesawTrace:
    values: list = field(default_factory=list)
    scenario: Scenario | None = None
    converged: bool = False
    seed_index: int = 0
    degenerate_steps: int = 0

    @property
    def best_value(self) -> float:
        return self.values[-1] if self.values else float("-inf")


def _acomm(a, b):
    return a @ b + b @ a


def _bell_from_matrices(mats) -> np.ndarray:
    a1, a2, a3, a4, a5, a6 = mats
    b = (
        _acomm(a1, _acomm(a2, a3))
        + _acomm(a2, _acomm(a1, a3))
        + _acomm(a4, _acomm(a5, a6))
        + _acomm(a5, _acomm(a4, a6))
    ) / 8 + (_acomm(a1, a4) + _acomm(a2, a5) - _acomm(a3, a6)) / 2
    return (b + b.conj().T) / 2


def bell_operator(s: Scenario) -> np.ndarray:
    """Hermitian operator B with tr(rho B) equal to the temporal value.

    B = ({A1,{A2,A3}} + {A2,{A1,A3}} + {A4,{A5,A6}} + {A5,{A4,A6}})/8
        + ({A1,A4} + {A2,A5} - {A3,A6})/2
    """
    mats = s.matrices()
    d = s.dim
    for m in mats:
        if m.shape != (d, d):
            raise ShapeMismatch(f"observable shape {m.shape} does not match {d}")
    return _bell_from_matrices(mats)


def expression_value(s: Scenario) -> float:
    """tr(rho B); equals the correlator assembly to machine precision."""
    return float(np.trace(s.density() @ bell_operator(s)).real)


def optimal_state(observables) -> PureState:
    """Exact state half-step: top eigenvector of the operator form.

    The expression is linear in rho, so the maximum over all states is
    attained at the top eigenvector; the achieved value is the top
    eigenvalue.
    """
    mats = [o.matrix if isinstance(o, Observable) else linalg.as_matrix(o)
            for o in observables]
    if len(mats) != 6:
        raise ShapeMismatch(f"need 6 observables, got {len(mats)}")
    b = _bell_from_matrices(mats)
    _, v = linalg.eig_hermitian(b)
    return PureState(v[:, 0])


def coefficient_operator(s: Scenario, slot: int) -> np.ndarray:
    """Hermitian G with value = Re tr(A_slot G) + const, other slots fixed.

    Each of the seven terms contains a given slot at most once, so the
    expression is linear in that slot's observable. The adjoint identities
    tr(rho {A, K}) = tr(A {K, rho}) and
    tr(rho {K, {A, L}}) = tr(A {L, {K, rho}}) give G directly.
    """
    if not 1 <= slot <= 6:
        raise ShapeMismatch(f"slot must be in 1..6, got {slot}")
    a1, a2, a3, a4, a5, a6 = s.matrices()
    rho = s.density()

    def n(x, y):  # {x, {y, rho}}
        return _acomm(x, _acomm(y, rho))

    def w(x, y):  # {{x, y}, rho}
        return _acomm(_acomm(x, y), rho)

    if slot == 1:
        g = (w(a2, a3) + n(a3, a2)) / 8 + _acomm(a4, rho) / 2
    elif slot == 2:
        g = (n(a3, a1) + w(a1, a3)) / 8 + _acomm(a5, rho) / 2
    elif slot == 3:
        g = (n(a2, a1) + n(a1, a2)) / 8 - _acomm(a6, rho) / 2
    elif slot == 4:
        g = (w(a5, a6) + n(a6, a5)) / 8 + _acomm(a1, rho) / 2
    elif slot == 5:
        g = (n(a6, a4) + w(a4, a6)) / 8 + _acomm(a2, rho) / 2
    else:
        g = (n(a5, a4) + n(a4, a5)) / 8 - _acomm(a3, rho) / 2
    return (g + g.conj().T) / 2


def optimal_observable(s: Scenario, slot: int) -> Observable:
    """Exact observable half-step: eigen-sign of the coefficient operator.

    Over Hermitian involutions, Re tr(A G) is maximized by
    A = sum_k sign(lambda_k(G)) v_k v_k†. Eigenvalues of magnitude at most
    1e-12 get sign +1 (deterministic tie-break) and raise a
    DegenerateCoefficientWarning.
    """
    g = coefficient_operator(s, slot)
    w, v = linalg.eig_hermitian(g)
    signs = np.sign(w)
    degenerate = np.abs(w) <= DEGENERATE_EIGENVALUE
    if np.any(degenerate):
        signs[degenerate] = 1.0
        warnings.warn(
            f"slot {slot}: {int(degenerate.sum())} coefficient eigenvalue(s) "
            "below 1e-12, sign tie-broken to +1",
            DegenerateCoefficientWarning,
            stacklevel=2,
        )
    a = (v * signs) @ v.conj().T
    return Observable(linalg.hermitize(a))


def _seesaw_single(dim: int, max_sweeps: int, tol: float, rng: np.random.Generator,
                   seed_index: int) -> SeesawTrace:
    state = random_pure_state(dim, rng)
    observables = [random_involution(dim, rng) for _ in range(6)]
    s = Scenario(state, observables)

    trace = SeesawTrace(seed_index=seed_index)
    previous = expression_value(s)
    for _ in range(max_sweeps):
        s = s.with_state(optimal_state(s.observables))
        for slot in range(1, 7):
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", DegenerateCoefficientWarning)
                s = s.with_observable(slot, optimal_observable(s, slot))
            trace.degenerate_steps += sum(
                1 for c in caught if issubclass(c.category, DegenerateCoefficientWarning)
            )
        value = expression_value(s)
        trace.values.append(value)
        if value - previous < tol:
            trace.converged = True
            break
        previous = value
    trace.scenario = s
    return trace


def seesaw(config: SeesawConfig):
    """Multi-start seesaw. Returns (best trace, all traces).

    Each seed gets its own PCG64 stream derived from config.rng_seed via
    SeedSequence.spawn, so individual seeds are reproducible and could run
    concurrently. Best is the highest final value, ties broken by lowest
    seed index.
    """
    children = np.random.SeedSequence(config.rng_seed).spawn(config.seeds)
    traces = []
    for k, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        traces.append(_seesaw_single(config.dim, config.max_sweeps, config.tol, rng, k))
    best = max(traces, key=lambda t: (t.best_value, -t.seed_index))
    if best.best_value > QUANTUM_BOUND + 1e-9:
        raise AssertionError(
            f"seesaw exceeded the quantum bound: {best.best_value!r}"
        )
    return best, traces
