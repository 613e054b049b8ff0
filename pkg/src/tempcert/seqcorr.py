"""Sequential correlators, computed three independent ways.

Closed-form anticommutator expressions, exact outcome-probability sums over
the Lüders update chain, and seeded Monte-Carlo sampling. The routes serve
as oracles for one another: for exact involutions the first two agree to
machine precision, and sampled estimates converge to both.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import NonInvolution, NumericalNoiseWarning, ShapeMismatch
from .scenario import (
    DensityMatrix,
    Observable,
    PureState,
    Scenario,
    project_involution,
)

#: Imaginary residue above this after taking a trace hints at non-Hermitian
#: corruption and triggers a NumericalNoiseWarning.
IMAG_RESIDUE_TOL = 1e-10

#: The seven terms entering the temporal expression, as 1-based slot tuples.
#: Triples list the first-measured observable first.
TERM_SLOTS = {
    "triple_123": (1, 2, 3),
    "triple_213": (2, 1, 3),
    "triple_456": (4, 5, 6),
    "triple_546": (5, 4, 6),
    "pair_14": (1, 4),
    "pair_25": (2, 5),
    "pair_36": (3, 6),
}

CORRELATOR_FIELDS = tuple(TERM_SLOTS)


def _density_of(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.density()
    if isinstance(rho, PureState):
        return rho.density()
    return linalg.as_matrix(rho)


def _matrix_of(obs) -> np.ndarray:
    if isinstance(obs, Observable):
        return obs.matrix
    return linalg.as_matrix(obs)


def _check_dims(rho: np.ndarray, mats) -> None:
    d = rho.shape[0]
    if rho.shape != (d, d):
        raise ShapeMismatch(f"density matrix has shape {rho.shape}")
    for m in mats:
        if m.shape != (d, d):
            raise ShapeMismatch(f"observable shape {m.shape} does not match dimension {d}")


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_RESIDUE_TOL:
        warnings.warn(
            f"{what}: imaginary residue {z.imag:.3e} after trace",
            NumericalNoiseWarning,
            stacklevel=3,
        )
    return float(z.real)


@dataclass
class CorrelationSet:
    """The seven sequential correlators entering the temporal expression.

    `source` records how the numbers were produced; `stderr` carries one
    standard error per entry for sampled sets.
    """

    triple_123: float
    triple_213: float
    triple_456: float
    triple_546: float
    pair_14: float
    pair_25: float
    pair_36: float
    source: str = "analytic"
    stderr: dict | None = None

    def __post_init__(self):
        for name in CORRELATOR_FIELDS:
            v = getattr(self, name)
            if abs(v) > 1.0 + 1e-12:
                raise ValueError(f"{name} = {v!r} lies outside [-1, 1]")

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in CORRELATOR_FIELDS}


@dataclass
class OutcomeDistribution:
    """Joint distribution over +-1 outcome tuples of a measurement sequence."""

    sequence: tuple
    probabilities: dict = field(default_factory=dict)

    def __post_init__(self):
        total = 0.0
        for outcome, p in self.probabilities.items():
            if p < -1e-12:
                raise ValueError(f"negative probability {p!r} for outcome {outcome}")
            total += p
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    def correlator(self) -> float:
        """Expectation of the product of outcomes."""
        return float(sum(np.prod(o) * p for o, p in self.probabilities.items()))


def pair_corr(rho, a, b) -> float:
    """Two-step sequential correlator: Re tr(rho {a, b}) / 2.

    The first argument of the anticommutator is the first-measured
    observable; the expression is symmetric, so order does not matter here.
    """
    r = _density_of(rho)
    ma, mb = _matrix_of(a), _matrix_of(b)
    _check_dims(r, (ma, mb))
    return _real(np.trace(r @ linalg.acomm(ma, mb)) / 2, "pair_corr")


def triple_corr(rho, a, b, c) -> float:
    """Three-step sequential correlator: Re tr(rho {a, {b, c}}) / 4.

    Order-sensitive: `a` is the outermost, first-measured observable.
    """
    r = _density_of(rho)
    ma, mb, mc = _matrix_of(a), _matrix_of(b), _matrix_of(c)
    _check_dims(r, (ma, mb, mc))
    return _real(np.trace(r @ linalg.acomm(ma, linalg.acomm(mb, mc))) / 4, "triple_corr")


def _involution_matrices(seq) -> list:
    """Exact involutions for projector construction, via sign rounding."""
    mats = []
    for obs in seq:
        if isinstance(obs, Observable):
            if obs.involution_residual > 1e-8:
                raise NonInvolution(
                    f"involution residual {obs.involution_residual:.3e} too large "
                    "for projective sampling"
                )
            if obs.involution_residual == 0.0:
                mats.append(obs.matrix)
                continue
            mats.append(project_involution(obs.matrix).matrix)
        else:
            mats.append(project_involution(linalg.as_matrix(obs)).matrix)
    return mats


def exact_sequence_distribution(rho, seq, labels=None) -> OutcomeDistribution:
    """Exact Lüders outcome distribution for a sequence of 2 or 3 observables.

    P(a_1, ..., a_n) = tr(Pi_{a_n} ... Pi_{a_1} rho Pi_{a_1} ... Pi_{a_n})
    with projectors Pi_{+-} = (1 +- A)/2 built from each observable's
    involution rounding.
    """
    seq = list(seq)
    if len(seq) not in (2, 3):
        raise ShapeMismatch(f"sequence length must be 2 or 3, got {len(seq)}")
    r = _density_of(rho)
    mats = _involution_matrices(seq)
    _check_dims(r, mats)
    eye = np.eye(r.shape[0])
    projectors = [((eye + m) / 2, (eye - m) / 2) for m in mats]
    probs = {}
    for outcomes in itertools.product((1, -1), repeat=len(seq)):
        chain = eye
        for (plus, minus), a in zip(projectors, outcomes):
            chain = (plus if a == 1 else minus) @ chain
        p = _real(np.trace(chain @ r @ chain.conj().T), "exact_sequence_distribution")
        probs[outcomes] = max(p, 0.0) if p > -1e-12 else p
    if labels is None:
        labels = tuple(range(1, len(seq) + 1))
    return OutcomeDistribution(tuple(labels), probs)


def sample_sequences(rho, seq, shots: int, rng_seed, labels=None):
    """Seeded Monte-Carlo sampling of a measurement sequence.

    Walks the Lüders chain branch by branch: each step draws the outcome from
    the conditional probability tr(Pi sigma)/tr(sigma) and updates the branch
    state sigma -> Pi sigma Pi. Shots are then distributed over the branch
    tree with a single multinomial draw, which reproduces the per-shot
    process exactly and is deterministic given `rng_seed`.

    The random stream is numpy's PCG64; `rng_seed` may be an integer or a
    numpy SeedSequence.

    Returns
    -------
    (empirical, estimate, stderr)
        Empirical OutcomeDistribution, the mean of the outcome products, and
        its standard error (sample standard deviation / sqrt(shots)).
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    seq = list(seq)
    if len(seq) not in (2, 3):
        raise ShapeMismatch(f"sequence length must be 2 or 3, got {len(seq)}")
    r = _density_of(rho)
    mats = _involution_matrices(seq)
    _check_dims(r, mats)
    eye = np.eye(r.shape[0])

    # Conditional-chain branch walk; this is an independent code path from
    # the direct per-outcome formula in exact_sequence_distribution.
    branches = [((), r, 1.0)]
    for m in mats:
        plus, minus = (eye + m) / 2, (eye - m) / 2
        grown = []
        for outcomes, sigma, p in branches:
            for a, proj in ((1, plus), (-1, minus)):
                post = proj @ sigma @ proj
                q = _real(np.trace(post), "sample_sequences")
                q = max(q, 0.0)
                if q <= 0.0:
                    continue
                grown.append((outcomes + (a,), post / q, p * q))
        branches = grown

    outcome_list = [b[0] for b in branches]
    p = np.array([b[2] for b in branches])
    p = np.clip(p, 0.0, None)
    p /= p.sum()

    rng = np.random.Generator(np.random.PCG64(rng_seed))
    counts = rng.multinomial(shots, p)

    values = np.array([np.prod(o) for o in outcome_list], dtype=float)
    estimate = float(counts @ values) / shots
    if shots > 1:
        var = float(counts @ (values - estimate) ** 2) / (shots - 1)
        stderr = (var / shots) ** 0.5
    else:
        stderr = 0.0

    if labels is None:
        labels = tuple(range(1, len(seq) + 1))
    empirical = OutcomeDistribution(
        tuple(labels),
        {o: c / shots for o, c in zip(outcome_list, counts)},
    )
    return empirical, estimate, stderr


def correlations(s: Scenario, mode: str = "analytic", shots: int | None = None,
                 rng_seed=None) -> CorrelationSet:
    """All seven correlators of a scenario in the requested mode.

    mode is one of "analytic", "exact-sum", or "sampled"; the latter needs
    `shots` and `rng_seed`. Per-term sampling seeds are derived from
    `rng_seed` with SeedSequence.spawn, so results are reproducible and
    independent of evaluation order.
    """
    rho = s.density()
    values = {}
    stderr = None
    if mode == "analytic":
        for name, slots in TERM_SLOTS.items():
            obs = [s.observable(k) for k in slots]
            if len(slots) == 2:
                values[name] = pair_corr(rho, *obs)
            else:
                values[name] = triple_corr(rho, *obs)
    elif mode == "exact-sum":
        for name, slots in TERM_SLOTS.items():
            dist = exact_sequence_distribution(rho, [s.observable(k) for k in slots], slots)
            values[name] = dist.correlator()
    elif mode == "sampled":
        if shots is None or rng_seed is None:
            raise ValueError("sampled mode needs shots and rng_seed")
        stderr = {}
        children = np.random.SeedSequence(rng_seed).spawn(len(TERM_SLOTS))
        for child, (name, slots) in zip(children, TERM_SLOTS.items()):
            _, est, se = sample_sequences(
                rho, [s.observable(k) for k in slots], shots, child, slots
            )
            values[name] = est
            stderr[name] = se
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CorrelationSet(source=mode, stderr=stderr, **values)
